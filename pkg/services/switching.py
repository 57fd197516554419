"""
Forward and backward switchings on sequences.

A forward switching takes a green simple loop f (vertex v doubled), an
ordered pair (e1, e2) of distinct green proper edges, a vertex y* of e1 and a
vertex z* of e2. It swaps y* with the left copy of v in f and z* with the
right copy, producing

    e1' = e1 + v - y*,  e2' = e2 + v - z*,  e3' = f + y* + z* - v - v.

It is admissible when y* is not in e2, z* is not in e1 and the result is
again a sequence with no bad loops, no red loops and no multiple edges, with
one loop fewer. A backward switching (v, e1, e2, e3, p_y, p_z) undoes a
forward one: the entries at positions p_y and p_z of e3 trade places with the
copies of v in e1 and e2.
"""
import logging
from collections import Counter
from math import comb
from typing import Iterator, List, Optional, Tuple

import numpy as np

from config import settings
from exceptions import ContractViolation, GuardExceeded, RejectBudgetExceeded
from models import BackSwitching, EdgeClassification, EdgeKind, Switching
from services.metrics import switching_proposals, switchings_applied
from services.sequences import Sequence, classify_edges, compute_phi

logger = logging.getLogger(__name__)


class SwitchContext:
    """Edge rows, multiset index and incidence lists of one sequence."""

    def __init__(self, seq: Sequence, cls: Optional[EdgeClassification] = None):
        self.seq = seq
        self.p = seq.params
        self.k = seq.params.k
        self.cls = cls or classify_edges(seq)
        self.rows: List[List[int]] = seq.edges().tolist()
        self.keys = [tuple(sorted(r)) for r in self.rows]
        self.index = Counter(self.keys)
        self.green_proper: List[int] = list(self.cls.green_proper_indices)
        self.green_proper_set = set(self.green_proper)
        self.sets = {i: frozenset(self.rows[i]) for i in self.green_proper}
        red = self.p.red_edges
        self.green_loops = [
            i for i in self.cls.loop_indices
            if i >= red and self.cls.kinds[i] == EdgeKind.SIMPLE_LOOP
        ]
        self.green_loop_set = set(self.green_loops)
        self.lam = self.cls.lam
        # Both directions require the current sequence to lie in G_lambda.
        self.in_G = (
            not self.cls.bad_loop_indices
            and not self.cls.has_multiple_edges
            and not self.cls.red_loop_indices
            and self.p.lambda_within_L(self.lam)
        )
        self._loop_info = {}

    def incidence(self) -> List[List[int]]:
        """Green proper edges at each vertex."""
        at = [[] for _ in range(self.p.n)]
        for i in self.green_proper:
            for v in self.rows[i]:
                at[v].append(i)
        return at

    def loop_info(self, f: int) -> Tuple[int, int, int, frozenset]:
        """(v, left position, right position, remaining vertices) of a simple loop."""
        info = self._loop_info.get(f)
        if info is None:
            row = self.rows[f]
            counts = Counter(row)
            v = next(x for x, c in counts.items() if c == 2)
            left = row.index(v)
            right = row.index(v, left + 1)
            info = (v, left, right, frozenset(x for x in row if x != v))
            self._loop_info[f] = info
        return info

    def _free(self, key: Tuple[int, ...], *replaced: int) -> bool:
        """No edge other than `replaced` has this multiset."""
        count = self.index.get(key, 0)
        for j in replaced:
            if self.keys[j] == key:
                count -= 1
        return count == 0

    def forward_ok(self, f: int, e1: int, e2: int, y_pos: int, z_pos: int) -> bool:
        if not self.in_G or e1 == e2:
            return False
        if f not in self.green_loop_set:
            return False
        if e1 not in self.green_proper_set or e2 not in self.green_proper_set:
            return False
        if not (0 <= y_pos < self.k and 0 <= z_pos < self.k):
            return False
        v, _, _, tail = self.loop_info(f)
        s1, s2 = self.sets[e1], self.sets[e2]
        y = self.rows[e1][y_pos]
        z = self.rows[e2][z_pos]
        # v in e1 or e2 leaves v in the third new edge; no backward switching undoes that.
        if y in s2 or z in s1 or v in s1 or v in s2:
            return False
        if y in tail or z in tail:
            return False
        k1 = tuple(sorted((s1 - {y}) | {v}))
        k2 = tuple(sorted((s2 - {z}) | {v}))
        if k1 == k2:
            return False
        k3 = tuple(sorted(tail | {y, z}))
        return (
            self._free(k1, f, e1, e2)
            and self._free(k2, f, e1, e2)
            and self._free(k3, f, e1, e2)
        )

    def backward_ok(self, v: int, e1: int, e2: int, e3: int, p_y: int, p_z: int) -> bool:
        if not self.in_G or not self.p.lambda_within_L(self.lam + 1):
            return False
        if e1 == e2 or e3 == e1 or e3 == e2 or p_y == p_z:
            return False
        gp = self.green_proper_set
        if e1 not in gp or e2 not in gp or e3 not in gp:
            return False
        if not (0 <= p_y < self.k and 0 <= p_z < self.k):
            return False
        s1, s2, s3 = self.sets[e1], self.sets[e2], self.sets[e3]
        if v not in s1 or v not in s2 or v in s3:
            return False
        y = self.rows[e3][p_y]
        z = self.rows[e3][p_z]
        if y in s1 or y in s2 or z in s1 or z in s2:
            return False
        k1 = tuple(sorted((s1 - {v}) | {y}))
        k2 = tuple(sorted((s2 - {v}) | {z}))
        if k1 == k2:
            return False
        k3 = tuple(sorted(list(s3 - {y, z}) + [v, v]))
        return (
            self._free(k1, e1, e2, e3)
            and self._free(k2, e1, e2, e3)
            and self._free(k3, e1, e2, e3)
        )

    def forward_work(self) -> int:
        g = len(self.green_proper)
        return len(self.green_loops) * g * g * self.k * self.k

    def backward_work(self) -> int:
        at = self.incidence()
        return len(self.green_proper) * self.k * self.k * sum(len(a) ** 2 for a in at)


def _check_guard(what: str, work: int, ceiling: Optional[int]) -> None:
    if ceiling is not None and work > ceiling:
        logger.warning(f"[SWITCH_GUARD] {what}: work={work} ceiling={ceiling}")
        raise GuardExceeded(what, work, ceiling)


def _iter_forward(ctx: SwitchContext) -> Iterator[Switching]:
    if not ctx.in_G:
        return
    k = ctx.k
    gp = ctx.green_proper
    for f in ctx.green_loops:
        v, _, _, _ = ctx.loop_info(f)
        for e1 in gp:
            if v in ctx.sets[e1]:
                continue
            for e2 in gp:
                if e2 == e1 or v in ctx.sets[e2]:
                    continue
                for y_pos in range(k):
                    for z_pos in range(k):
                        if ctx.forward_ok(f, e1, e2, y_pos, z_pos):
                            yield Switching(loop_edge=f, e1=e1, e2=e2, y_pos=y_pos, z_pos=z_pos)


def _iter_backward(ctx: SwitchContext) -> Iterator[BackSwitching]:
    """All admissible ordered backward tuples (both members of each mirror pair)."""
    if not ctx.in_G or not ctx.p.lambda_within_L(ctx.lam + 1):
        return
    k = ctx.k
    at = ctx.incidence()
    for e3 in ctx.green_proper:
        s3 = ctx.sets[e3]
        for v in range(ctx.p.n):
            edges_v = at[v]
            if len(edges_v) < 2 or v in s3:
                continue
            for e1 in edges_v:
                for e2 in edges_v:
                    if e1 == e2:
                        continue
                    for p_y in range(k):
                        for p_z in range(k):
                            if p_y != p_z and ctx.backward_ok(v, e1, e2, e3, p_y, p_z):
                                yield BackSwitching(v=v, e1=e1, e2=e2, e3=e3, p_y=p_y, p_z=p_z)


def is_admissible_forward(seq: Sequence, sw: Switching) -> bool:
    return SwitchContext(seq).forward_ok(sw.loop_edge, sw.e1, sw.e2, sw.y_pos, sw.z_pos)


def is_admissible_backward(seq: Sequence, bsw: BackSwitching) -> bool:
    return SwitchContext(seq).backward_ok(bsw.v, bsw.e1, bsw.e2, bsw.e3, bsw.p_y, bsw.p_z)


def count_forward_detail(seq: Sequence, ceiling: Optional[int] = None) -> List[Switching]:
    ctx = SwitchContext(seq)
    _check_guard("forward count", ctx.forward_work(), ceiling)
    return list(_iter_forward(ctx))


def count_forward(seq: Sequence, ceiling: Optional[int] = None) -> int:
    """F(seq): exact number of admissible forward switchings."""
    ctx = SwitchContext(seq)
    _check_guard("forward count", ctx.forward_work(), ceiling)
    return sum(1 for _ in _iter_forward(ctx))


def count_backward_detail(seq: Sequence, ceiling: Optional[int] = None) -> List[BackSwitching]:
    ctx = SwitchContext(seq)
    _check_guard("backward count", ctx.backward_work(), ceiling)
    return list(_iter_backward(ctx))


def count_backward(seq: Sequence, ceiling: Optional[int] = None) -> int:
    """
    B(seq): admissible backward switchings up to mirroring.

    A tuple and its mirror (v, e2, e1, e3, p_z, p_y) perform the same swaps,
    so the ordered count is halved.
    """
    ctx = SwitchContext(seq)
    _check_guard("backward count", ctx.backward_work(), ceiling)
    ordered = sum(1 for _ in _iter_backward(ctx))
    if ordered % 2:
        logger.error(f"[SWITCH_MIRROR] odd ordered backward count {ordered} for {seq!r}")
        raise ContractViolation(f"ordered backward count {ordered} is odd")
    return ordered // 2


def forward_upper_bound(seq: Sequence, cls: Optional[EdgeClassification] = None) -> int:
    """k^2 * lambda * g^2 with g the number of green proper edges."""
    cls = cls or classify_edges(seq)
    k = seq.params.k
    return k * k * cls.lam * len(cls.green_proper_indices) ** 2


def backward_upper_bound(seq: Sequence, phi: Optional[int] = None) -> int:
    """C(k, 2) * phi * (M - red edges)."""
    if phi is None:
        phi = compute_phi(seq)
    return comb(seq.params.k, 2) * phi * seq.params.green_edges


def _swap_forward(entries: np.ndarray, k: int, sw: Switching, left: int, right: int) -> None:
    a = k * sw.loop_edge + left
    b = k * sw.loop_edge + right
    p1 = k * sw.e1 + sw.y_pos
    p2 = k * sw.e2 + sw.z_pos
    entries[a], entries[p1] = entries[p1], entries[a]
    entries[b], entries[p2] = entries[p2], entries[b]


def apply_forward(seq: Sequence, sw: Switching) -> Sequence:
    ctx = SwitchContext(seq)
    if not ctx.forward_ok(sw.loop_edge, sw.e1, sw.e2, sw.y_pos, sw.z_pos):
        raise ContractViolation(f"inadmissible forward switching {sw.model_dump()}")
    _, left, right, _ = ctx.loop_info(sw.loop_edge)
    out = seq.copy()
    _swap_forward(out.entries, ctx.k, sw, left, right)
    return out


def induced_backward(seq: Sequence, sw: Switching) -> BackSwitching:
    """The backward switching that undoes `sw` applied to `seq`."""
    ctx = SwitchContext(seq)
    if sw.loop_edge not in ctx.green_loop_set:
        raise ContractViolation(f"edge {sw.loop_edge} is not a green simple loop")
    v, left, right, _ = ctx.loop_info(sw.loop_edge)
    return BackSwitching(v=v, e1=sw.e1, e2=sw.e2, e3=sw.loop_edge, p_y=left, p_z=right)


def apply_backward(seq: Sequence, bsw: BackSwitching) -> Sequence:
    ctx = SwitchContext(seq)
    if not ctx.backward_ok(bsw.v, bsw.e1, bsw.e2, bsw.e3, bsw.p_y, bsw.p_z):
        raise ContractViolation(f"inadmissible backward switching {bsw.model_dump()}")
    k = ctx.k
    out = seq.copy()
    entries = out.entries
    q1 = k * bsw.e1 + ctx.rows[bsw.e1].index(bsw.v)
    q2 = k * bsw.e2 + ctx.rows[bsw.e2].index(bsw.v)
    a = k * bsw.e3 + bsw.p_y
    b = k * bsw.e3 + bsw.p_z
    entries[a], entries[q1] = entries[q1], entries[a]
    entries[b], entries[q2] = entries[q2], entries[b]
    return out


def _sample(ctx: SwitchContext, rng: np.random.Generator, max_rejects: int) -> Switching:
    if ctx.cls.red_loop_indices:
        raise ContractViolation("forward switchings require a sequence without red loops")
    loops = ctx.green_loops
    if not loops:
        raise ContractViolation("no loop to switch away")
    if ctx.forward_work() <= settings.switch_enumeration_ceiling:
        admissible = list(_iter_forward(ctx))
        if not admissible:
            logger.debug(f"[SWITCH_NONE] lambda={ctx.lam} green_proper={len(ctx.green_proper)}")
            raise RejectBudgetExceeded(max_rejects)
        switching_proposals.labels(outcome="accepted").inc()
        return admissible[int(rng.integers(len(admissible)))]
    gp = ctx.green_proper
    g = len(gp)
    k = ctx.k
    rejected = 0
    if g >= 2:
        while rejected < max_rejects:
            f = loops[int(rng.integers(len(loops)))]
            i = int(rng.integers(g))
            j = int(rng.integers(g - 1))
            if j >= i:
                j += 1
            y_pos, z_pos = (int(x) for x in rng.integers(k, size=2))
            if ctx.forward_ok(f, gp[i], gp[j], y_pos, z_pos):
                switching_proposals.labels(outcome="accepted").inc()
                switching_proposals.labels(outcome="rejected").inc(rejected)
                return Switching(loop_edge=f, e1=gp[i], e2=gp[j], y_pos=y_pos, z_pos=z_pos)
            rejected += 1
    switching_proposals.labels(outcome="rejected").inc(rejected)
    logger.warning(f"[SWITCH_REJECT_BUDGET] budget={max_rejects} lambda={ctx.lam} green_proper={g}")
    raise RejectBudgetExceeded(max_rejects)


def sample_forward(seq: Sequence, rng: np.random.Generator,
                   max_rejects: Optional[int] = None) -> Switching:
    """
    Uniform admissible forward switching by rejection.

    Proposals are uniform over (loop, ordered pair of distinct green proper
    edges, y_pos, z_pos), a superset of the admissible set.
    """
    budget = settings.max_rejects if max_rejects is None else max_rejects
    return _sample(SwitchContext(seq), rng, budget)


def eliminate_loops(seq: Sequence, rng: np.random.Generator,
                    max_rejects: Optional[int] = None) -> Tuple[Sequence, List[Switching]]:
    """Apply lambda(seq) uniform forward switchings; the result has no loops."""
    budget = settings.max_rejects if max_rejects is None else max_rejects
    current = seq.copy()
    trace: List[Switching] = []
    ctx = SwitchContext(current)
    for _ in range(ctx.lam):
        sw = _sample(ctx, rng, budget)
        _, left, right, _ = ctx.loop_info(sw.loop_edge)
        _swap_forward(current.entries, ctx.k, sw, left, right)
        trace.append(sw)
        switchings_applied.inc()
        ctx = SwitchContext(current)
    logger.debug(f"[SWITCH_DONE] applied {len(trace)} switchings")
    return current, trace


def bijection_defects(seq: Sequence) -> int:
    """
    Local check of the forward/backward correspondence at one sequence.

    Counts forward switchings whose induced backward switching is not
    admissible at the image or does not restore seq, plus admissible backward
    tuples (p_y < p_z) whose image does not admit the matching forward move.
    """
    defects = 0
    for sw in count_forward_detail(seq):
        bsw = induced_backward(seq, sw)
        image = apply_forward(seq, sw)
        if not is_admissible_backward(image, bsw) or apply_backward(image, bsw) != seq:
            defects += 1
    for bsw in count_backward_detail(seq):
        if bsw.p_y > bsw.p_z:
            continue
        pre = apply_backward(seq, bsw)
        row = pre.edge(bsw.e1).tolist()
        y_pos = row.index(int(seq.entries[seq.params.k * bsw.e3 + bsw.p_y]))
        row2 = pre.edge(bsw.e2).tolist()
        z_pos = row2.index(int(seq.entries[seq.params.k * bsw.e3 + bsw.p_z]))
        sw = Switching(loop_edge=bsw.e3, e1=bsw.e1, e2=bsw.e2, y_pos=y_pos, z_pos=z_pos)
        if not is_admissible_forward(pre, sw) or apply_forward(pre, sw) != seq:
            defects += 1
    return defects

"""Sequence model: a length-nd vertex sequence read as M consecutive k-edges."""
import logging
from collections import Counter
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import numpy as np

from exceptions import ContractViolation, SequenceFormatError
from models import EdgeClassification, EdgeKind, MembershipReport, Params, SimpleGraph
from services.params import derive_params

logger = logging.getLogger(__name__)

EdgeKey = Tuple[int, ...]


class Sequence:
    """
    Vertex sequence of length nd with 0-based vertex ids.

    Edge i occupies positions [k*i, k*i + k). Edges with i < params.red_edges
    are red, the rest green.
    """

    __slots__ = ("entries", "params")

    def __init__(self, entries, params: Params):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] != params.nd:
            raise SequenceFormatError(
                f"sequence length {arr.size} does not match n*d={params.nd}"
            )
        if arr.size and (arr.min() < 0 or arr.max() >= params.n):
            raise SequenceFormatError(f"vertex ids must lie in [1, {params.n}]")
        self.entries = arr
        self.params = params

    @classmethod
    def from_vertices(cls, vertices: Iterable[int], params: Params) -> "Sequence":
        """Build from 1-based vertex ids."""
        return cls(np.asarray(list(vertices), dtype=np.int64) - 1, params)

    @classmethod
    def from_text(cls, text: str, red_edges: Optional[int] = None) -> "Sequence":
        lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
        if len(lines) != 2:
            raise SequenceFormatError("expected a 'seq k n d' header and one line of vertex ids")
        header = lines[0].split()
        if len(header) != 4 or header[0] != "seq":
            raise SequenceFormatError(f"bad sequence header: {lines[0]!r}")
        try:
            k, n, d = (int(x) for x in header[1:])
            values = [int(x) for x in lines[1].split()]
        except ValueError as e:
            raise SequenceFormatError(f"non-integer token in sequence file: {e}")
        params = derive_params(n, d, k, red_edges=red_edges)
        return cls.from_vertices(values, params)

    def to_text(self) -> str:
        p = self.params
        body = " ".join(str(v + 1) for v in self.entries.tolist())
        return f"seq {p.k} {p.n} {p.d}\n{body}\n"

    def copy(self) -> "Sequence":
        return Sequence(self.entries.copy(), self.params)

    def __len__(self) -> int:
        return int(self.entries.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sequence):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def __repr__(self) -> str:
        p = self.params
        return f"Sequence(k={p.k}, n={p.n}, d={p.d}, entries={(self.entries + 1).tolist()})"

    def key(self) -> Tuple[int, ...]:
        return tuple(self.entries.tolist())

    def edges(self) -> np.ndarray:
        """(M, k) view of the entries."""
        return self.entries.reshape(self.params.M, self.params.k)

    def edge(self, i: int) -> np.ndarray:
        k = self.params.k
        return self.entries[k * i:k * i + k]

    def edge_key(self, i: int) -> EdgeKey:
        return tuple(sorted(self.edge(i).tolist()))

    def edge_keys(self) -> List[EdgeKey]:
        return [tuple(row) for row in np.sort(self.edges(), axis=1).tolist()]

    def red_edge_keys(self) -> List[EdgeKey]:
        return self.edge_keys()[:self.params.red_edges]

    def degrees(self) -> np.ndarray:
        return np.bincount(self.entries, minlength=self.params.n)

    def green_degrees(self) -> np.ndarray:
        return np.bincount(self.entries[self.params.red_prefix_len:], minlength=self.params.n)


def classify_edges(seq: Sequence) -> EdgeClassification:
    """Census of proper edges, loop types and duplicate edges of a sequence."""
    p = seq.params
    rows = np.sort(seq.edges(), axis=1)
    eq = rows[:, 1:] == rows[:, :-1]
    doubled = eq.sum(axis=1)
    # A vertex of multiplicity >= 3 shows up as two adjacent equal pairs.
    triple = (eq[:, 1:] & eq[:, :-1]).any(axis=1) if p.k >= 3 else np.zeros(p.M, dtype=bool)

    kinds: List[EdgeKind] = []
    for i in range(p.M):
        if doubled[i] == 0:
            kinds.append(EdgeKind.PROPER)
        elif triple[i]:
            kinds.append(EdgeKind.BAD_LOOP_MULT3)
        elif doubled[i] == 1:
            kinds.append(EdgeKind.SIMPLE_LOOP)
        else:
            kinds.append(EdgeKind.BAD_LOOP_TWO_DOUBLES)

    _, inverse, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
    inverse = np.asarray(inverse).reshape(-1)
    groups = {}
    for i, label in enumerate(inverse.tolist()):
        if counts[label] > 1:
            groups.setdefault(label, []).append(i)
    duplicate_groups = sorted(groups.values(), key=lambda g: g[0])

    loop_indices = [i for i in range(p.M) if doubled[i] > 0]
    return EdgeClassification(
        kinds=kinds,
        lam=len(loop_indices),
        duplicate_groups=duplicate_groups,
        red_loop_indices=[i for i in loop_indices if i < p.red_edges],
        green_proper_indices=[
            i for i in range(p.red_edges, p.M) if kinds[i] == EdgeKind.PROPER
        ],
        loop_indices=loop_indices,
    )


def compute_phi(seq: Sequence) -> int:
    """Sum of g(g-1) over green degrees g, loop occurrences included."""
    g = seq.green_degrees().astype(object)
    return int(sum(x * (x - 1) for x in g))


def green_proper_degrees(seq: Sequence, cls: Optional[EdgeClassification] = None) -> np.ndarray:
    cls = cls or classify_edges(seq)
    deg = np.zeros(seq.params.n, dtype=np.int64)
    for i in cls.green_proper_indices:
        deg[seq.edge(i)] += 1
    return deg


def green_proper_degree_sum(seq: Sequence, cls: Optional[EdgeClassification] = None) -> int:
    """Sum of g'(g'-1) where g' counts green proper edges at a vertex."""
    deg = green_proper_degrees(seq, cls)
    return int(sum(int(x) * (int(x) - 1) for x in deg))


def expected_phi(p: Params) -> Fraction:
    """Exact mean of compute_phi over the uniform regular sequence."""
    nd = p.nd
    green = nd - p.red_prefix_len
    return Fraction(p.n * p.d * (p.d - 1) * green * (green - 1), nd * (nd - 1))


def membership(seq: Sequence, expected: Optional[Fraction] = None,
               cls: Optional[EdgeClassification] = None) -> MembershipReport:
    """
    Family memberships of a sequence.

    in_E: no bad loops, no multiple edges, and loop count within L.
    in_G_l: in_E and no red loops.
    in_tilde_S: |phi - expected| <= n^(3/4) d, tested on fourth powers.
    """
    p = seq.params
    cls = cls or classify_edges(seq)
    if expected is None:
        expected = expected_phi(p)
    phi = compute_phi(seq)

    witness: Optional[int] = None
    reason: Optional[str] = None
    bad = cls.bad_loop_indices
    if bad:
        witness, reason = bad[0], cls.kinds[bad[0]].value
    elif cls.duplicate_groups:
        witness, reason = cls.duplicate_groups[0][1], "multiple_edge"
    elif not p.lambda_within_L(cls.lam):
        reason = "lambda_exceeds_L"
    in_E = reason is None

    in_G_l = in_E and not cls.red_loop_indices
    if in_E and not in_G_l:
        witness, reason = cls.red_loop_indices[0], "red_loop"

    in_tilde_S = p.phi_concentrated(phi, expected)
    if reason is None and not in_tilde_S:
        reason = "phi_not_concentrated"

    return MembershipReport(
        in_E=in_E,
        loop_level=cls.lam,
        in_G_l=in_G_l,
        phi=phi,
        in_tilde_S=in_tilde_S,
        witness=witness,
        reason=reason,
    )


def edge_multiset(seq: Sequence) -> Counter:
    return Counter(seq.edge_keys())


def to_graph(seq: Sequence) -> SimpleGraph:
    """The k-graph H(seq); the sequence must be simple."""
    cls = classify_edges(seq)
    if cls.lam or cls.has_multiple_edges:
        raise ContractViolation(
            f"sequence is not simple: lambda={cls.lam}, duplicate_groups={cls.duplicate_groups}"
        )
    return SimpleGraph.from_edges(seq.params.n, seq.params.k, seq.edge_keys())

"""Exact ground truth for small instances."""
import logging
from itertools import combinations, permutations, product
from math import factorial
from typing import Callable, Iterable, Iterator, List, Optional, Set, Tuple

import numpy as np

from config import settings
from exceptions import GuardExceeded
from models import Edge, EnumerationResult, Params, SimpleGraph
from services.metrics import oracle_nodes
from services.sequences import Sequence, compute_phi, expected_phi

logger = logging.getLogger(__name__)


class _NodeBudget:
    def __init__(self, what: str, ceiling: int):
        self.what = what
        self.ceiling = ceiling
        self.visited = 0

    def tick(self) -> None:
        self.visited += 1
        if self.visited > self.ceiling:
            logger.warning(f"[ORACLE_GUARD] {self.what}: visited={self.visited} ceiling={self.ceiling}")
            raise GuardExceeded(self.what, self.visited, self.ceiling)


def _regular_search(n: int, k: int, residual: List[int], forbidden: Set[Edge],
                    budget: _NodeBudget) -> Iterator[List[Edge]]:
    """
    Edge lists completing `residual` to zero, in lexicographic order.

    Each new edge contains the lowest vertex with positive residual and is
    lexicographically larger than the previous one, so every completion is
    produced once, as its sorted edge list.
    """
    chosen: List[Edge] = []

    def extend(last: Optional[Edge]) -> Iterator[List[Edge]]:
        budget.tick()
        v = next((u for u in range(n) if residual[u] > 0), None)
        if v is None:
            yield list(chosen)
            return
        others = [w for w in range(v + 1, n) if residual[w] > 0]
        if len(others) < k - 1:
            return
        for rest in combinations(others, k - 1):
            edge = (v,) + rest
            if last is not None and edge <= last:
                continue
            if edge in forbidden:
                continue
            for u in edge:
                residual[u] -= 1
            chosen.append(edge)
            yield from extend(edge)
            chosen.pop()
            for u in edge:
                residual[u] += 1

    if sum(residual) % k == 0 and min(residual, default=0) >= 0:
        yield from extend(None)


def enumerate_regular(n: int, d: int, k: int, node_ceiling: Optional[int] = None,
                      visitor: Optional[Callable[[SimpleGraph], None]] = None) -> EnumerationResult:
    """
    All d-regular k-graphs on labelled vertices, in canonical order.

    Raises:
        GuardExceeded: the search visits more than node_ceiling nodes
    """
    ceiling = settings.enumeration_node_ceiling if node_ceiling is None else node_ceiling
    budget = _NodeBudget("regular enumeration", ceiling)
    logger.info(f"[ORACLE_ENUM_START] n={n} d={d} k={k} ceiling={ceiling}")
    instances = []
    if (n * d) % k == 0:
        for edges in _regular_search(n, k, [d] * n, set(), budget):
            g = SimpleGraph.from_edges(n, k, edges)
            instances.append(g)
            if visitor is not None:
                visitor(g)
    oracle_nodes.labels(kind="regular").inc(budget.visited)
    logger.info(f"[ORACLE_ENUM_DONE] n={n} d={d} k={k} count={len(instances)} nodes={budget.visited}")
    return EnumerationResult(n=n, d=d, k=k, instances=instances, nodes_visited=budget.visited)


def first_completion(n: int, d: int, k: int, fixed_edges: Iterable[Edge],
                     node_ceiling: Optional[int] = None) -> Optional[SimpleGraph]:
    """Lexicographically first d-regular k-graph containing `fixed_edges`, if any."""
    fixed = {tuple(sorted(e)) for e in fixed_edges}
    residual = [d] * n
    for edge in fixed:
        for v in edge:
            residual[v] -= 1
    if min(residual) < 0:
        return None
    ceiling = settings.enumeration_node_ceiling if node_ceiling is None else node_ceiling
    budget = _NodeBudget("regular completion", ceiling)
    found = next(_regular_search(n, k, residual, fixed, budget), None)
    oracle_nodes.labels(kind="completion").inc(budget.visited)
    if found is None:
        return None
    return SimpleGraph.from_edges(n, k, list(fixed) + found)


def sequence_space_size(p: Params) -> int:
    return factorial(p.nd) // factorial(p.d) ** p.n


def multiset_permutations(items: List[int]) -> Iterator[List[int]]:
    """
    Every distinct permutation of a multiset, each exactly once.

    Loopless prefix-shift generation over a singly linked list held in two
    arrays (value, next).
    """
    if not items:
        yield []
        return
    values = sorted(items, reverse=True)
    size = len(values)
    nxt = list(range(1, size)) + [-1]

    def visit(head: int) -> List[int]:
        out = []
        node = head
        while node != -1:
            out.append(values[node])
            node = nxt[node]
        return out

    if size == 1:
        yield visit(0)
        return
    h, i, j = 0, size - 2, size - 1
    yield visit(h)
    while nxt[j] != -1 or values[j] < values[h]:
        if nxt[j] != -1 and values[i] >= values[nxt[j]]:
            s = j
        else:
            s = i
        t = nxt[s]
        nxt[s] = nxt[t]
        nxt[t] = h
        if values[t] < values[h]:
            i = t
        j = nxt[i]
        h = t
        yield visit(h)


def iter_sequences(p: Params, ceiling: Optional[int] = None) -> Iterator[Sequence]:
    limit = settings.sequence_space_ceiling if ceiling is None else ceiling
    size = sequence_space_size(p)
    if size > limit:
        logger.warning(f"[ORACLE_GUARD] sequence space {size} exceeds {limit}")
        raise GuardExceeded("sequence enumeration", size, limit)
    multiset = [v for v in range(p.n) for _ in range(p.d)]
    for perm in multiset_permutations(multiset):
        yield Sequence(perm, p)


def enumerate_sequences(p: Params, visitor: Callable[[Sequence], None],
                        ceiling: Optional[int] = None) -> int:
    """Visit every sequence with all vertex counts equal to d; returns the number visited."""
    count = 0
    for seq in iter_sequences(p, ceiling):
        visitor(seq)
        count += 1
    oracle_nodes.labels(kind="sequence").inc(count)
    return count


def count_preimages(h: SimpleGraph, p: Params, filtered: bool = False,
                    ceiling: Optional[int] = None) -> int:
    """
    Number of sequences whose multigraph is h.

    Unfiltered, this is M!(k!)^M for simple h. Filtered, only sequences
    whose phi is concentrated around its mean are counted.
    """
    if h.n != p.n or h.k != p.k or len(h.edges) != p.M or not h.is_regular(p.d):
        raise ValueError(f"graph does not match instance n={p.n} d={p.d} k={p.k}")
    limit = settings.preimage_ceiling if ceiling is None else ceiling
    size = factorial(p.M) * factorial(p.k) ** p.M
    if size > limit:
        raise GuardExceeded("preimage enumeration", size, limit)

    expected = expected_phi(p)
    edges = h.canonical()
    seen: Set[Tuple[int, ...]] = set()
    count = 0
    for order in permutations(edges):
        keep = True
        if filtered:
            phi = compute_phi(Sequence([v for e in order for v in e], p))
            keep = p.phi_concentrated(phi, expected)
        for inner in product(*(permutations(e) for e in order)):
            entries = tuple(v for e in inner for v in e)
            if entries in seen:
                continue
            seen.add(entries)
            if keep:
                count += 1
    return count


def validate_loose_cycle(h: SimpleGraph, cycle: List[Edge]) -> bool:
    """
    Independent check of a loose Hamilton cycle certificate.

    Each entry lists an edge's vertices in cycle order; the last vertex of an
    edge is the first vertex of the next, cyclically.
    """
    k, n = h.k, h.n
    if k < 3 or n % (k - 1) or len(cycle) != n // (k - 1) or len(cycle) < 3:
        return False
    order: List[int] = []
    for i, edge in enumerate(cycle):
        if len(edge) != k or tuple(sorted(edge)) not in h.edges:
            return False
        if edge[-1] != cycle[(i + 1) % len(cycle)][0]:
            return False
        order.extend(edge[:-1])
    if sorted(order) != list(range(n)):
        return False
    for i in range(len(cycle)):
        a, b = set(cycle[i]), set(cycle[(i + 1) % len(cycle)])
        if len(a & b) != 1:
            return False
    return True


def find_loose_hamilton(h: SimpleGraph, node_ceiling: Optional[int] = None) -> Optional[List[Edge]]:
    """
    A loose Hamilton cycle of h by exact backtracking, or None.

    The cycle is grown from an edge through vertex 0, always extending from
    the current end vertex with an edge that meets the covered vertices only
    there; the last edge must close back to the start vertex.
    """
    k, n = h.k, h.n
    if k < 3 or n % (k - 1) or n // (k - 1) < 3:
        return None
    length = n // (k - 1)
    ceiling = settings.enumeration_node_ceiling if node_ceiling is None else node_ceiling
    budget = _NodeBudget("loose hamilton search", ceiling)
    at = [[] for _ in range(n)]
    for edge in sorted(h.edges):
        for v in edge:
            at[v].append(edge)

    path: List[Edge] = []
    covered: Set[int] = set()

    def grow(start: int, end: int) -> bool:
        budget.tick()
        if len(path) == length - 1:
            missing = set(range(n)) - covered
            closing = tuple(sorted(missing | {end, start}))
            if len(missing) == k - 2 and closing in h.edges:
                path.append((end,) + tuple(sorted(missing)) + (start,))
                return True
            return False
        # Prefer edges whose new vertices have few remaining options.
        candidates = []
        for edge in at[end]:
            fresh = [u for u in edge if u != end]
            if any(u in covered for u in fresh):
                continue
            candidates.append((sum(len(at[u]) for u in fresh), edge, fresh))
        candidates.sort()
        for _, edge, fresh in candidates:
            for nxt_end in fresh:
                interior = tuple(sorted(u for u in fresh if u != nxt_end))
                path.append((end,) + interior + (nxt_end,))
                covered.update(fresh)
                if grow(start, nxt_end):
                    return True
                covered.difference_update(fresh)
                path.pop()
        return False

    for first in at[0]:
        for start in first:
            for end in first:
                if start == end:
                    continue
                interior = tuple(sorted(u for u in first if u not in (start, end)))
                path[:] = [(start,) + interior + (end,)]
                covered.clear()
                covered.update(first)
                if grow(start, end):
                    oracle_nodes.labels(kind="hamilton").inc(budget.visited)
                    return list(path)
    oracle_nodes.labels(kind="hamilton").inc(budget.visited)
    return None


def plant_loose_cycle(n: int, k: int, rng: np.random.Generator,
                      extra_edges: int = 0) -> Tuple[SimpleGraph, List[Edge]]:
    """Random labelled loose Hamilton cycle, optionally with extra random edges."""
    if n % (k - 1) or n // (k - 1) < 3:
        raise ValueError(f"no loose Hamilton cycle on n={n} vertices with k={k}")
    perm = [int(v) for v in rng.permutation(n)]
    length = n // (k - 1)
    cycle = []
    for i in range(length):
        cycle.append(tuple(perm[(i * (k - 1) + j) % n] for j in range(k)))
    edges = {tuple(sorted(e)) for e in cycle}
    while len(edges) < length + extra_edges:
        edges.add(tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False))))
    return SimpleGraph.from_edges(n, k, edges), cycle

"""Joint construction of the i.i.d. sequence X and the regular sequence Y."""
import logging
from math import comb
from typing import List, Optional, Tuple

import numpy as np

from models import CoupledRun, Edge, Params, SimpleGraph
from services.generators import ResidualTree
from services.sequences import Sequence, classify_edges

logger = logging.getLogger(__name__)


def coupled_generate(p: Params, rng: np.random.Generator) -> CoupledRun:
    """
    Generate X and Y on one probability space.

    All randomness is drawn up front in a fixed order: X, the selector bits I,
    then one integer U_t per step from [0, n(nd - t)). While the red prefix is
    being revealed and 2n(d - max_deg) >= nd - t, Y_{t+1} = X_{t+1} when
    I_{t+1} = 1 and otherwise Z_{t+1}, drawn with weights
    2n(d - deg_t(v)) - (nd - t) using U_t. Every other step draws Y_{t+1}
    from the step distribution using U_t // n, which is uniform on [0, nd - t).

    condition_held_through is the last 0-based step before the first failure
    of the condition, or horizon - 1 when it never fails.
    """
    n, d, nd = p.n, p.d, p.nd
    horizon = p.red_prefix_len

    x = rng.integers(0, n, size=nd)
    bits = rng.integers(0, 2, size=nd, dtype=np.int8)
    draws = rng.integers(0, n * (nd - np.arange(nd, dtype=np.int64)))

    tree = ResidualTree([d] * n)
    deg = [0] * n
    max_deg = 0
    y = np.empty(nd, dtype=np.int64)
    held_through = horizon - 1
    xs = x.tolist()
    bs = bits.tolist()
    us = draws.tolist()

    for t in range(nd):
        remaining = nd - t
        u = us[t]
        if t < horizon and 2 * n * (d - max_deg) >= remaining:
            if bs[t]:
                v = xs[t]
            else:
                v = tree.find_affine(u, 2 * n, remaining)
        else:
            if t < horizon and held_through == horizon - 1:
                held_through = t - 1
            v = tree.find(u // n)
        tree.add(v, -1)
        deg[v] += 1
        if deg[v] > max_deg:
            max_deg = deg[v]
        y[t] = v

    k = p.k
    red_bits = bits[:horizon].reshape(p.red_edges, k) if p.red_edges else np.zeros((0, k))
    W = [int(i) for i in np.flatnonzero(red_bits.all(axis=1))]

    X = Sequence(x, p)
    Y = Sequence(y, p)
    x_cls = classify_edges(X)
    event_A = (
        not x_cls.has_multiple_edges
        and p.lambda_within_L(x_cls.lam)
        and p.at_least_L(len(W) - p.m)
    )
    event_B = held_through == horizon - 1

    logger.debug(
        f"[COUPLING_DONE] n={n} d={d} k={k} |W|={len(W)} lambda_x={x_cls.lam} "
        f"event_A={event_A} event_B={event_B} held_through={held_through}"
    )
    return CoupledRun(
        X=X,
        Y=Y,
        I=bits,
        W=W,
        event_A=event_A,
        event_B=event_B,
        condition_held_through=held_through,
        lambda_x=x_cls.lam,
        x_has_multiple_edges=x_cls.has_multiple_edges,
    )


def unrank_combination(rank: int, n: int, k: int) -> Edge:
    """The rank-th k-subset of range(n) in lexicographic order."""
    out = []
    v = 0
    for slots in range(k, 0, -1):
        while True:
            block = comb(n - v - 1, slots - 1)
            if rank < block:
                break
            rank -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


def uniform_simple_graph(n: int, k: int, m: int, rng: np.random.Generator) -> SimpleGraph:
    """Uniform m-subset of the proper k-sets on n vertices (Floyd's sampling)."""
    total = comb(n, k)
    if m > total:
        raise ValueError(f"cannot choose {m} distinct edges out of {total}")
    chosen = set()
    for j in range(total - m, total):
        t = int(rng.integers(0, j + 1))
        chosen.add(j if t in chosen else t)
    return SimpleGraph.from_edges(n, k, [unrank_combination(r, n, k) for r in chosen])


def extract_hnm(run: CoupledRun, p: Params, rng: np.random.Generator) -> SimpleGraph:
    """
    H(n,m) from a coupled run.

    Under event A, the first m proper X-edges indexed by W. Otherwise an
    independent uniform m-edge k-graph.
    """
    if p.m == 0:
        return SimpleGraph(n=p.n, k=p.k, edges=frozenset())
    if run.event_A:
        edges: List[Edge] = []
        for i in run.W:
            key = run.X.edge_key(i)
            if len(set(key)) == p.k:
                edges.append(key)
                if len(edges) == p.m:
                    return SimpleGraph.from_edges(p.n, p.k, edges)
        logger.error(f"[COUPLING_EXTRACT] event A holds but only {len(edges)} proper W-edges found")
    return uniform_simple_graph(p.n, p.k, p.m, rng)


def check_embedding(g: SimpleGraph, seq: Sequence) -> Tuple[bool, Optional[Edge]]:
    """Whether every edge of g occurs among the red edges of seq; else the first missing edge."""
    red = set(seq.red_edge_keys())
    for edge in sorted(g.edges):
        if edge not in red:
            return False, edge
    return True, None

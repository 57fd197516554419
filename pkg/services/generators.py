"""Generators for the i.i.d. sequence X and the uniform regular sequence Y."""
import logging
import zlib
from fractions import Fraction
from typing import List, Sequence as Seq

import numpy as np

from exceptions import ContractViolation
from models import Params
from services.sequences import Sequence

logger = logging.getLogger(__name__)


def trial_rng(master_seed: int, trial_index: int = 0, tag: str = "") -> np.random.Generator:
    """
    Reproducible stream for one trial.

    The stream depends only on (master_seed, tag, trial_index), so trials can
    run in any order or process and still draw the same numbers.
    """
    if master_seed < 0 or trial_index < 0:
        raise ValueError("seed and trial index must be non-negative")
    ss = np.random.SeedSequence(
        entropy=[master_seed, zlib.crc32(tag.encode("utf-8"))],
        spawn_key=(trial_index,),
    )
    return np.random.Generator(np.random.Philox(ss))


class GenState:
    """Revealed prefix statistics: t, deg_t(v) and the running max degree."""

    __slots__ = ("t", "deg", "max_deg")

    def __init__(self, n: int):
        self.t = 0
        self.deg = np.zeros(n, dtype=np.int64)
        self.max_deg = 0

    @classmethod
    def from_prefix(cls, prefix: Seq[int], n: int) -> "GenState":
        state = cls(n)
        for v in prefix:
            state.advance(int(v))
        return state

    def advance(self, v: int) -> None:
        self.deg[v] += 1
        self.t += 1
        if self.deg[v] > self.max_deg:
            self.max_deg = int(self.deg[v])


class ResidualTree:
    """
    Fenwick tree over non-negative integer weights.

    Supports O(log n) point updates, weighted draws by a uniform integer, and
    draws from the affine reweighting a*w_v - b used by the coupling.
    """

    def __init__(self, weights: Seq[int]):
        self.size = len(weights)
        tree = [0] * (self.size + 1)
        for i, w in enumerate(weights, start=1):
            tree[i] += int(w)
            parent = i + (i & -i)
            if parent <= self.size:
                tree[parent] += tree[i]
        self._tree = tree
        self.total = sum(int(w) for w in weights)
        top = 1
        while top * 2 <= self.size:
            top *= 2
        self._top = top

    def add(self, index: int, delta: int) -> None:
        self.total += delta
        i = index + 1
        tree = self._tree
        while i <= self.size:
            tree[i] += delta
            i += i & -i

    def prefix(self, count: int) -> int:
        """Sum of the first `count` weights."""
        s = 0
        i = count
        while i > 0:
            s += self._tree[i]
            i -= i & -i
        return s

    def weight(self, index: int) -> int:
        return self.prefix(index + 1) - self.prefix(index)

    def find(self, u: int) -> int:
        """Index v with prefix(v) <= u < prefix(v + 1), for 0 <= u < total."""
        return self.find_affine(u, 1, 0)

    def find_affine(self, u: int, a: int, b: int) -> int:
        """
        Weighted draw for weights a*w_v - b, which must all be non-negative.

        u must lie in [0, a*total - b*size).
        """
        pos = 0
        step = self._top
        tree = self._tree
        size = self.size
        while step:
            nxt = pos + step
            if nxt <= size:
                block = a * tree[nxt] - b * step
                if block <= u:
                    u -= block
                    pos = nxt
            step >>= 1
        return pos


def sample_iid(p: Params, rng: np.random.Generator) -> Sequence:
    """X: nd independent uniform vertices."""
    return Sequence(rng.integers(0, p.n, size=p.nd), p)


def sample_regular(p: Params, rng: np.random.Generator) -> Sequence:
    """Y: uniform over sequences in which every vertex occurs exactly d times."""
    return Sequence(rng.permutation(np.repeat(np.arange(p.n, dtype=np.int64), p.d)), p)


def step_distribution(state: GenState, p: Params) -> List[Fraction]:
    """P(Y_{t+1} = v | prefix) = (d - deg_t(v)) / (nd - t), exactly."""
    if state.t >= p.nd:
        raise ContractViolation(f"no step left to draw: t={state.t}, nd={p.nd}")
    remaining = p.nd - state.t
    probs = [Fraction(p.d - int(x), remaining) for x in state.deg]
    if sum(probs) != 1:
        raise ContractViolation(f"step distribution does not sum to 1 at t={state.t}")
    return probs


def sample_sequential(p: Params, rng: np.random.Generator) -> Sequence:
    """Y drawn position by position from the step distribution."""
    nd = p.nd
    tree = ResidualTree([p.d] * p.n)
    out = np.empty(nd, dtype=np.int64)
    draws = rng.integers(0, nd - np.arange(nd, dtype=np.int64))
    for t, u in enumerate(draws.tolist()):
        v = tree.find(u)
        tree.add(v, -1)
        out[t] = v
    return Sequence(out, p)

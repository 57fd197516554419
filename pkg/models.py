"""Pydantic data models shared by the hyperswitch services."""
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from exceptions import SequenceFormatError

SCHEMA_VERSION = "1.0"

Edge = Tuple[int, ...]


class Params(BaseModel):
    """Instance constants for (n, d, k); built by services.params.derive_params."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int
    n: int
    d: int
    M: int
    r: int
    c: Fraction
    m: int
    L: float
    red_edges: int
    red_prefix_len: int

    @field_serializer("c")
    def _serialize_c(self, c: Fraction) -> str:
        return f"{c.numerator}/{c.denominator}"

    @property
    def nd(self) -> int:
        return self.n * self.d

    @property
    def green_edges(self) -> int:
        return self.M - self.red_edges

    @property
    def L_fourth_power(self) -> int:
        return self.n * self.d * self.d

    def lambda_within_L(self, loops: int) -> bool:
        """Exact test of loops <= L = n^(1/4) d^(1/2)."""
        return loops ** 4 <= self.L_fourth_power

    def at_least_L(self, value: int) -> bool:
        """Exact test of value >= L."""
        return value >= 0 and value ** 4 >= self.L_fourth_power

    def phi_concentrated(self, phi: int, expected: Fraction) -> bool:
        """Exact test of |phi - expected| <= n^(3/4) d."""
        diff = Fraction(phi) - expected
        return diff ** 4 <= self.n ** 3 * self.d ** 4

    def report(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "n": self.n,
            "d": self.d,
            "M": self.M,
            "r": self.r,
            "c": self._serialize_c(self.c),
            "m": self.m,
            "L_fourth_power": self.L_fourth_power,
            "red_edges": self.red_edges,
            "red_prefix_len": self.red_prefix_len,
        }


class EdgeKind(str, Enum):
    PROPER = "proper"
    SIMPLE_LOOP = "simple_loop"
    BAD_LOOP_MULT3 = "bad_loop_mult3"
    BAD_LOOP_TWO_DOUBLES = "bad_loop_two_doubles"


class EdgeClassification(BaseModel):
    kinds: List[EdgeKind]
    lam: int = Field(serialization_alias="lambda")
    duplicate_groups: List[List[int]]
    red_loop_indices: List[int]
    green_proper_indices: List[int]
    loop_indices: List[int]

    @property
    def bad_loop_indices(self) -> List[int]:
        return [
            i for i, kind in enumerate(self.kinds)
            if kind in (EdgeKind.BAD_LOOP_MULT3, EdgeKind.BAD_LOOP_TWO_DOUBLES)
        ]

    @property
    def has_multiple_edges(self) -> bool:
        return bool(self.duplicate_groups)


class MembershipReport(BaseModel):
    in_E: bool
    loop_level: int
    in_G_l: bool
    phi: int
    in_tilde_S: bool
    witness: Optional[int] = None
    reason: Optional[str] = None


class SimpleGraph(BaseModel):
    """A k-graph on vertices 0..n-1; edges are sorted k-tuples of distinct vertices."""

    model_config = ConfigDict(frozen=True)

    n: int
    k: int
    edges: frozenset

    @model_validator(mode="after")
    def _check_edges(self) -> "SimpleGraph":
        for edge in self.edges:
            if len(edge) != self.k or len(set(edge)) != self.k:
                raise ValueError(f"edge {edge} is not a proper {self.k}-set")
            if tuple(sorted(edge)) != tuple(edge):
                raise ValueError(f"edge {edge} is not sorted")
            if edge[0] < 0 or edge[-1] >= self.n:
                raise ValueError(f"edge {edge} out of range for n={self.n}")
        return self

    @field_serializer("edges")
    def _serialize_edges(self, edges: frozenset) -> List[List[int]]:
        return [[v + 1 for v in edge] for edge in sorted(edges)]

    @classmethod
    def from_edges(cls, n: int, k: int, edges) -> "SimpleGraph":
        return cls(n=n, k=k, edges=frozenset(tuple(sorted(int(v) for v in e)) for e in edges))

    def canonical(self) -> Tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for edge in self.edges:
            for v in edge:
                deg[v] += 1
        return deg

    def is_regular(self, d: int) -> bool:
        return all(x == d for x in self.degrees())

    @classmethod
    def from_text(cls, text: str) -> "SimpleGraph":
        """Parse one `khg k n M` block with 1-based vertex ids."""
        lines = [line.split() for line in text.strip().splitlines() if line.strip()]
        if not lines or len(lines[0]) != 4 or lines[0][0] != "khg":
            raise SequenceFormatError("expected a 'khg k n M' header")
        try:
            k, n, count = (int(x) for x in lines[0][1:])
            edges = [tuple(sorted(int(v) - 1 for v in row)) for row in lines[1:]]
        except ValueError as e:
            raise SequenceFormatError(f"non-integer token in edge list: {e}")
        if len(edges) != count:
            raise SequenceFormatError(f"header declares {count} edges, found {len(edges)}")
        if len(set(edges)) != count:
            raise SequenceFormatError("edge list contains a repeated edge")
        try:
            return cls(n=n, k=k, edges=frozenset(edges))
        except ValueError as e:
            raise SequenceFormatError(str(e))

    def to_text(self) -> str:
        lines = [f"khg {self.k} {self.n} {len(self.edges)}"]
        lines += [" ".join(str(v + 1) for v in edge) for edge in sorted(self.edges)]
        return "\n".join(lines) + "\n"


class CoupledRun(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    X: Any
    Y: Any
    I: np.ndarray
    W: List[int]
    event_A: bool
    event_B: bool
    condition_held_through: int
    lambda_x: int
    x_has_multiple_edges: bool

    @property
    def w_size(self) -> int:
        return len(self.W)


class SwapPair(BaseModel):
    red_loop_index: int
    green_target_index: int


class SwapRecord(BaseModel):
    pairs: List[SwapPair] = Field(default_factory=list)


class Switching(BaseModel):
    model_config = ConfigDict(frozen=True)

    loop_edge: int
    e1: int
    e2: int
    y_pos: int
    z_pos: int


class BackSwitching(BaseModel):
    model_config = ConfigDict(frozen=True)

    v: int
    e1: int
    e2: int
    e3: int
    p_y: int
    p_z: int

    def mirror(self) -> "BackSwitching":
        return BackSwitching(v=self.v, e1=self.e2, e2=self.e1, e3=self.e3, p_y=self.p_z, p_z=self.p_y)


class PipelineStatus(str, Enum):
    OK = "ok"
    REJECTED_E = "rejected_E"
    REJECTED_TILDE_S = "rejected_tildeS"
    ABORTED_REJECTS = "aborted_rejects"


class PipelineResult(BaseModel):
    schema_version: str = SCHEMA_VERSION
    params: Dict[str, Any]
    status: PipelineStatus
    hnm: SimpleGraph
    tilde_h: Optional[SimpleGraph] = None
    event_A: bool
    event_B: bool
    embedded: bool
    swap_record: SwapRecord = Field(default_factory=SwapRecord)
    switchings: List[Switching] = Field(default_factory=list)
    lambda_y: int = 0
    phi: Optional[int] = None
    master_seed: int
    trial_index: int
    passes: int = 1
    rejections: Dict[str, int] = Field(default_factory=dict)


class ChiSquareReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    label: str
    classes: int
    sample_size: int
    statistic: float
    dof: int
    p_value: float
    seed: int
    total_variation: float
    significance: float
    passed: bool
    rejections: Dict[str, int] = Field(default_factory=dict)


class TrialReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    params: Dict[str, Any]
    trials: int
    seed: int
    counts: Dict[str, int]
    lambda_histogram: Dict[int, int] = Field(default_factory=dict)
    rejection_total: int = 0
    verdicts: Dict[str, bool] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_counts(self) -> "TrialReport":
        for name, value in self.counts.items():
            if value < 0 or value > self.trials:
                raise ValueError(f"count {name}={value} outside [0, {self.trials}]")
        return self


class EnumerationResult(BaseModel):
    n: int
    d: int
    k: int
    instances: List[SimpleGraph]
    nodes_visited: int = 0

    @property
    def count(self) -> int:
        return len(self.instances)

    def index(self) -> Dict[Tuple[Edge, ...], int]:
        return {g.canonical(): i for i, g in enumerate(self.instances)}


class RunConfig(BaseModel):
    command: str
    n: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    mode: str = "single"
    out: Optional[str] = None
    format: str = "json"
    jobs: int = 1
    node_ceiling: Optional[int] = None

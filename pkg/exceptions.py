"""Error hierarchy for hyperswitch."""


class HyperswitchError(Exception):
    """Base class for all errors raised by this package."""


class ParamsValidationError(HyperswitchError, ValueError):
    """Instance parameters (n, d, k) are invalid."""


class DivisibilityError(ParamsValidationError):
    def __init__(self, n: int, d: int, k: int):
        super().__init__(f"k must divide n*d: {k} does not divide {n}*{d}={n * d}")
        self.n, self.d, self.k = n, d, k


class TooFewVerticesError(ParamsValidationError):
    def __init__(self, n: int, k: int):
        super().__init__(f"need n >= k, got n={n}, k={k}")
        self.n, self.k = n, k


class EdgeSizeError(ParamsValidationError):
    def __init__(self, k: int):
        super().__init__(f"edge size k must be at least 3, got k={k}")
        self.k = k


class DegreeError(ParamsValidationError):
    def __init__(self, d: int):
        super().__init__(f"degree d must be at least 1, got d={d}")
        self.d = d


class SequenceFormatError(HyperswitchError, ValueError):
    """A sequence or edge-list file/array does not match its declared header."""


class ContractViolation(HyperswitchError):
    """An operation was called outside its precondition (e.g. inadmissible switching)."""


class InsufficientGreenEdgesError(HyperswitchError):
    def __init__(self, red_loops: int, green_proper: int):
        super().__init__(
            f"cannot swap {red_loops} red loops: only {green_proper} green proper edges"
        )
        self.red_loops, self.green_proper = red_loops, green_proper


class RejectBudgetExceeded(HyperswitchError):
    def __init__(self, budget: int):
        super().__init__(f"forward switching rejection budget of {budget} proposals exhausted")
        self.budget = budget


class GuardExceeded(HyperswitchError):
    """An exhaustive search would exceed its configured ceiling."""

    def __init__(self, what: str, estimate: int, ceiling: int):
        super().__init__(f"{what}: size {estimate} exceeds ceiling {ceiling}")
        self.what, self.estimate, self.ceiling = what, estimate, ceiling


class ChiSquareValidityError(HyperswitchError):
    """Sample too small for a chi-square p-value (need N >= 10 * classes)."""


class UnknownInstanceError(HyperswitchError):
    """A sampler produced a graph outside the enumerated space."""

"""Instance constants for the coupling construction."""
import logging
import math
from fractions import Fraction
from typing import Optional

from exceptions import DegreeError, DivisibilityError, EdgeSizeError, TooFewVerticesError
from models import Params

logger = logging.getLogger(__name__)


def derive_params(n: int, d: int, k: int, red_edges: Optional[int] = None) -> Params:
    """
    Derive every constant of an (n, d, k) instance.

    Args:
        n: Vertex count
        d: Degree
        k: Edge size (k >= 3)
        red_edges: Override for the number of red edges. Defaults to r*m;
            small exact checks use it to get a non-empty red prefix.

    Returns:
        Params with M, r, c, m, L, red_edges and red_prefix_len

    Raises:
        EdgeSizeError, TooFewVerticesError, DegreeError, DivisibilityError
    """
    if k < 3:
        raise EdgeSizeError(k)
    if n < k:
        raise TooFewVerticesError(n, k)
    if d < 1:
        raise DegreeError(d)
    if (n * d) % k != 0:
        raise DivisibilityError(n, d, k)

    M = n * d // k
    r = 2 ** k + 1
    c = Fraction(1, 2 * r + 1)
    m = math.floor(c * M)

    if red_edges is None:
        red_edges = r * m
    elif not 0 <= red_edges <= M:
        raise ValueError(f"red_edges must lie in [0, {M}], got {red_edges}")

    params = Params(
        k=k,
        n=n,
        d=d,
        M=M,
        r=r,
        c=c,
        m=m,
        L=n ** 0.25 * d ** 0.5,
        red_edges=red_edges,
        red_prefix_len=k * red_edges,
    )
    logger.debug(f"[PARAMS] n={n} d={d} k={k} M={M} m={m} red_edges={red_edges}")
    return params

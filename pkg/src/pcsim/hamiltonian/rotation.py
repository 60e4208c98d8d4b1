import math
from typing import Tuple

from ..core.models import SpaceConfig, SparseOperator
from ..hilbert import ladder_op

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def rotated_mode_ops(space: SpaceConfig) -> Tuple[SparseOperator, SparseOperator]:
    """
    Операторы уничтожения мод, повёрнутых на ``π/4`` в плоскости X-Y.

    Returns:
        Tuple[SparseOperator, SparseOperator]: ``Â = (â + b̂)/√2`` и
        ``B̂ = (−â + b̂)/√2``

    Example:
        >>> A, B = rotated_mode_ops(SpaceConfig(5))
    """
    a = ladder_op(space, "a", "lower")
    b = ladder_op(space, "b", "lower")
    return (a + b) * INV_SQRT2, (b - a) * INV_SQRT2

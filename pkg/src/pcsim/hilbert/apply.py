import numpy as np
from scipy import sparse

from ..core.models import DensityOperator, SpaceConfig, SparseOperator, StateVector
from ..exceptions import space_mismatch


def right_multiply(dense: np.ndarray, op: sparse.spmatrix) -> np.ndarray:
    """Произведение ``dense @ op`` с разреженным правым множителем."""
    return np.asarray((op.T @ dense.T).T)


def overflow_weight(op: SparseOperator, amplitudes: np.ndarray) -> float:
    """Квадрат нормы амплитуды, которую оператор уносит за отсечку."""
    if op.overflow is None:
        return 0.0
    dropped = op.overflow @ amplitudes
    return float(np.vdot(dropped, dropped).real)


def apply_to_state(op: SparseOperator, psi: StateVector) -> StateVector:
    """
    Точное разреженное произведение оператора на вектор состояния.

    Args:
        op (SparseOperator): Оператор
        psi (StateVector): Вектор состояния того же пространства

    Returns:
        StateVector: Новый (ненормированный) вектор; ``leak`` увеличен на
        квадрат нормы амплитуды, отброшенной на границе отсечки

    Raises:
        DimensionError: Если пространства не совпадают

    Example:
        >>> raised = apply_to_state(ladder_op(space, "a", "raise"), psi)
        >>> raised.leak
    """
    if op.space != psi.space:
        raise space_mismatch(op.space, psi.space)
    return StateVector(
        op.matrix @ psi.amplitudes, psi.space, psi.leak + overflow_weight(op, psi.amplitudes)
    )


def apply_to_density(
    op_left: SparseOperator, rho: DensityOperator, op_right: SparseOperator
) -> DensityOperator:
    """Возвращает ``op_left · ρ · op_right`` без нормировки."""
    for op in (op_left, op_right):
        if op.space != rho.space:
            raise space_mismatch(op.space, rho.space)
    left = np.asarray(op_left.matrix @ rho.matrix)
    return DensityOperator(right_multiply(left, op_right.matrix), rho.space)


def embed_state(psi: StateVector, space: SpaceConfig) -> StateVector:
    """
    Переносит амплитуды в пространство с другой отсечкой.

    Амплитуды за новой отсечкой отбрасываются, их вес добавляется в ``leak``.
    """
    s, n, m = psi.space.grid
    inside = (n <= space.cutoff_n) & (m <= space.cutoff_n)
    target = np.zeros(space.dim, dtype=np.complex128)
    target[s[inside] * space.block + n[inside] * space.mode_dim + m[inside]] = psi.amplitudes[inside]
    dropped = psi.amplitudes[~inside]
    return StateVector(target, space, psi.leak + float(np.vdot(dropped, dropped).real))

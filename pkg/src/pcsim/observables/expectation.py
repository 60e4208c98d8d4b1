from typing import Tuple

import numpy as np

from ..core.models import DensityOperator, SparseOperator, StateVector
from ..exceptions import NumericalError, space_mismatch
from ..hilbert import atom_op, charge_op

IMAGINARY_RESIDUE = 1e-12


def expect(op: SparseOperator, x: StateVector | DensityOperator) -> complex:
    """Среднее ``⟨ψ|O|ψ⟩`` или ``Tr(Oρ)``."""
    if op.space != x.space:
        raise space_mismatch(op.space, x.space)
    if isinstance(x, StateVector):
        return complex(np.vdot(x.amplitudes, op.matrix @ x.amplitudes))
    coo = op.matrix.tocoo()
    return complex(np.sum(coo.data * x.matrix[coo.col, coo.row]))


def _populations(x: StateVector | DensityOperator) -> np.ndarray:
    if isinstance(x, StateVector):
        return np.abs(x.amplitudes) ** 2
    return np.real(np.diag(x.matrix))


def inversion(x: StateVector | DensityOperator) -> float:
    """
    Инверсия ``⟨σ̂_z⟩`` в диапазоне ``[-1, 1]``.

    Example:
        >>> inversion(fock_state(space, "e", 0, 0))
        1.0
    """
    return float(expect(atom_op(x.space, "sigma_z"), x).real)


def excited_population(x: StateVector | DensityOperator) -> float:
    """Населённость возбуждённого уровня ``⟨σ̂₊σ̂₋⟩``."""
    s, _, _ = x.space.grid
    return float(_populations(x)[s == 1].sum())


def fluorescence_rate(x: StateVector | DensityOperator, gamma: float) -> float:
    """Скорость испускания фотонов ``Γ⟨σ̂₊σ̂₋⟩``; в тёмном состоянии равна нулю."""
    return gamma * excited_population(x)


def polarization(x: StateVector | DensityOperator) -> Tuple[float, float]:
    """
    Поляризация атома.

    Returns:
        Tuple[float, float]: ``re = ⟨σ̂₋ + σ̂₊⟩`` и ``im = i⟨σ̂₋ − σ̂₊⟩``

    Raises:
        NumericalError: Если мнимый остаток больше ``1e-12``

    Example:
        >>> polarization(plus_state)
        (1.0, 0.0)
    """
    lowering = expect(atom_op(x.space, "sigma_minus"), x)
    raising = expect(atom_op(x.space, "sigma_plus"), x)
    real_part = lowering + raising
    imag_part = 1j * (lowering - raising)
    residue = max(abs(real_part.imag), abs(imag_part.imag))
    if residue > IMAGINARY_RESIDUE:
        raise NumericalError(f"Мнимый остаток поляризации {residue:.3e}: вход не эрмитов")
    return float(real_part.real), float(imag_part.real)


def bloch_vector(x: StateVector | DensityOperator) -> Tuple[float, float, float]:
    """Вектор Блоха атома ``(re, im, inversion)``."""
    real_part, imag_part = polarization(x)
    return real_part, imag_part, inversion(x)


def charge_stats(x: StateVector | DensityOperator) -> Tuple[float, float]:
    """
    Среднее и дисперсия заряда ``Q̂``.

    Для собственного состояния ``Q̂`` дисперсия равна нулю точно.
    """
    weights = _populations(x)
    charges = np.real(charge_op(x.space).matrix.diagonal())
    total = weights.sum()
    mean = float(np.sum(weights * charges) / total)
    variance = float(np.sum(weights * (charges - mean) ** 2) / total)
    return mean, variance

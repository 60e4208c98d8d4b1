from typing import Tuple

import numpy as np

from ..core.models import DensityOperator, StateVector
from ..exceptions import space_mismatch
from .models import MotionalDistribution


def _same_space(left, right):
    if left.space != right.space:
        raise space_mismatch(left.space, right.space)


def fidelity_state(psi: StateVector, phi: StateVector) -> float:
    """Перекрытие ``|⟨ψ|φ⟩|²`` двух нормированных состояний."""
    _same_space(psi, phi)
    overlap = np.vdot(psi.amplitudes, phi.amplitudes)
    return float(min(1.0, abs(overlap) ** 2))


def fidelity_density(rho: DensityOperator, psi: StateVector) -> float:
    """
    Верность ``⟨ψ|ρ|ψ⟩`` смешанного состояния относительно чистого.

    Используется для проверки того, что стационарное состояние равно
    ``|g⟩|ψ⟩⟨ψ|⟨g|`` с PCS в качестве ``|ψ⟩``.
    """
    _same_space(rho, psi)
    value = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes).real
    return float(np.clip(value, 0.0, 1.0))


def purity(rho: DensityOperator) -> float:
    """
    Чистота ``Tr ρ²``.

    Для эрмитовой ``ρ`` равна сумме квадратов модулей элементов, поэтому
    ``ρ²`` не строится.
    """
    return float(np.sum(rho.matrix.real**2 + rho.matrix.imag**2))


def motional_marginal(x: StateVector | DensityOperator) -> MotionalDistribution:
    """
    Распределение ``P(n, m)``: след по атому от населённостей.

    Example:
        >>> motional_marginal(fock_state(space, "e", 7, 6))[7, 6]
        1.0
    """
    size = x.space.mode_dim
    if isinstance(x, StateVector):
        weights = np.abs(x.amplitudes) ** 2
    else:
        weights = np.real(np.diag(x.matrix))
    return MotionalDistribution(weights.reshape(2, size, size).sum(axis=0))


def mode_populations(x: StateVector | DensityOperator) -> Tuple[float, float]:
    """Средние числа квантов ``(⟨â†â⟩, ⟨b̂†b̂⟩)``."""
    return motional_marginal(x).mode_means()

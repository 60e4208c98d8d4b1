import math

import numpy as np

from ..core.models import AtomLevel, SpaceConfig, StateVector
from ..exceptions import TruncationError, out_of_range
from ..hilbert import flat_index
from .bessel import bessel_i
from .models import PcsLabel

PCS_TAIL_TOLERANCE = 1e-10


def fock_state(space: SpaceConfig, s, n: int, m: int) -> StateVector:
    """
    Базисное состояние ``|s⟩ ⊗ |n, m⟩_F``.

    Example:
        >>> psi0 = fock_state(SpaceConfig(20), "e", 7, 6)
    """
    psi = StateVector.zeros(space)
    psi.amplitudes[flat_index(space, s, n, m)] = 1.0
    return psi


def pcs_norm_squared(label: PcsLabel) -> float:
    """Квадрат нормировки ``N_q² = |ξ|^q / I_q(2|ξ|)``."""
    modulus = abs(label.xi)
    if modulus == 0.0:
        return float(math.factorial(label.q))
    return modulus**label.q / bessel_i(label.q, 2.0 * modulus)


def pcs_coefficients(label: PcsLabel, count: int) -> np.ndarray:
    """Коэффициенты ``N_q ξ^l / √(l!(l+q)!)`` для ``l = 0 .. count-1``."""
    coefficients = np.empty(count, dtype=np.complex128)
    value = complex(math.sqrt(pcs_norm_squared(label) / math.factorial(label.q)))
    for l in range(count):
        coefficients[l] = value
        value *= label.xi / math.sqrt((l + 1) * (l + 1 + label.q))
    return coefficients


def pcs_tail(label: PcsLabel, cutoff_n: int) -> float:
    """Вес нормированного PCS за отсечкой ``cutoff_n``."""
    if label.q > cutoff_n:
        return 1.0
    kept = pcs_coefficients(label, cutoff_n - label.q + 1)
    return max(0.0, 1.0 - float(np.vdot(kept, kept).real))


def pcs_state(space: SpaceConfig, label: PcsLabel, atom="g") -> StateVector:
    """
    Парное когерентное состояние ``|atom⟩ ⊗ |ξ, q⟩_PCS``.

    Амплитуда на ``(atom, l+q, l)`` равна ``N_q ξ^l / √(l!(l+q)!)``;
    после усечения вектор перенормируется.

    Args:
        space (SpaceConfig): Пространство, ``cutoff_n >= q``
        label (PcsLabel): Параметры ``(ξ, q)``
        atom: Уровень атома (в стационарном состоянии это ``g``)

    Returns:
        StateVector: Нормированное состояние

    Raises:
        IndexBoundsError: Если ``q`` больше отсечки
        TruncationError: Если отброшенный хвост больше ``1e-10``

    Example:
        >>> target = pcs_state(SpaceConfig(20), PcsLabel(2.0, 1))
    """
    if label.q > space.cutoff_n:
        raise out_of_range("q", label.q, 0, space.cutoff_n)
    level = AtomLevel.parse(atom)
    coefficients = pcs_coefficients(label, space.cutoff_n - label.q + 1)
    tail = max(0.0, 1.0 - float(np.vdot(coefficients, coefficients).real))
    if tail >= PCS_TAIL_TOLERANCE:
        raise TruncationError(
            f"Отсечка N={space.cutoff_n} недостаточна для PCS({label.tag}): хвост {tail:.3e}"
        )
    psi = StateVector.zeros(space)
    l = np.arange(len(coefficients))
    psi.amplitudes[space.index(level, 0, 0) + (l + label.q) * space.mode_dim + l] = coefficients
    return psi.normalize()

import cmath
import logging
import math
from dataclasses import replace
from functools import reduce

import numpy as np

from ..core.models import SpaceConfig, SparseOperator
from ..exceptions import ParameterError
from ..hilbert import atom_op, build_padded, identity_op, ladder_op, pair_annihilation
from .models import DriveParams, EffectiveParams
from .rotation import rotated_mode_ops

logger = logging.getLogger(__name__)

SERIES_TOLERANCE = 1e-12
PHASE_TOLERANCE = 1e-12


def _hermitian(coupling: SparseOperator) -> SparseOperator:
    """``X + X†`` с выставленным флагом эрмитовости."""
    total = coupling + coupling.adjoint()
    return SparseOperator(total.matrix, total.space, True, total.overflow, total.margin)


def _power(op: SparseOperator, k: int) -> SparseOperator:
    return reduce(lambda left, right: left @ right, [op] * k, identity_op(op.space))


def build_effective_hamiltonian(space: SpaceConfig, p: EffectiveParams) -> SparseOperator:
    """
    Эффективный гамильтониан ``H′ = α[âb̂ − ξ]σ̂₊ + h.c.``.

    Матричные элементы: ``⟨e,n−1,m−1|H|g,n,m⟩ = α√(nm)`` и
    ``⟨e,n,m|H|g,n,m⟩ = −αξ``. Состояние ``|g⟩ ⊗ PCS(ξ, q)`` тёмное.

    Args:
        space (SpaceConfig): Усечённое пространство
        p (EffectiveParams): Параметры ``α`` и ``ξ``

    Returns:
        SparseOperator: Эрмитов оператор с блоком переполнения для ``â†b̂†σ̂₋``

    Example:
        >>> H = build_effective_hamiltonian(SpaceConfig(20), EffectiveParams(0.2, 2.0))
    """

    def build(big: SpaceConfig) -> SparseOperator:
        drive = pair_annihilation(big) - identity_op(big) * p.xi
        return _hermitian((drive @ atom_op(big, "sigma_plus")) * p.alpha)

    return build_padded(space, 1, build)


def build_full_hamiltonian(space: SpaceConfig, d: DriveParams) -> SparseOperator:
    """
    Полный гамильтониан нелинейной модели Джейнса-Каммингса с рядом
    Лэмба-Дике до порядка ``j_max``.

    Боковые поля действуют вдоль повёрнутых мод ``Â``, ``B̂``, несущая:
    вдоль оси X (мода ``â``). Оператор собирается на пространстве с запасом
    ``j_max + 2`` и усекается, поэтому нормальное упорядочение
    ``Â^j (Â†)^{j+2}`` не искажается отсечкой.

    Args:
        space (SpaceConfig): Усечённое пространство
        d (DriveParams): Частоты Раби, фазы, ``η`` и ``j_max``

    Returns:
        SparseOperator: Эрмитов оператор
    """
    if d.dropped_term() >= SERIES_TOLERANCE:
        logger.warning(
            "Первый отброшенный член ряда Лэмба-Дике %.2e >= %.0e (eta=%g, j_max=%d)",
            d.dropped_term(),
            SERIES_TOLERANCE,
            d.eta,
            d.j_max,
        )
    prefactor = math.exp(-(d.eta**2) / 2)
    side1 = d.omega1 * cmath.exp(1j * d.phi1)
    side2 = d.omega2 * cmath.exp(1j * d.phi2)
    carrier = d.omega0 * cmath.exp(1j * d.phi0)

    def build(big: SpaceConfig) -> SparseOperator:
        A, B = rotated_mode_ops(big)
        a = ladder_op(big, "a", "lower")
        A_dag, B_dag, a_dag = A.adjoint(), B.adjoint(), a.adjoint()
        motional = SparseOperator.zero(big)
        for j in range(d.j_max + 1):
            sideband = (1j * d.eta) ** (2 * j + 2) / (math.factorial(j) * math.factorial(j + 2))
            motional = motional + (
                _power(A, j) @ _power(A_dag, j + 2) * side1 + _power(B, j) @ _power(B_dag, j + 2) * side2
            ) * sideband
            if carrier != 0:
                weight = (1j * d.eta) ** (2 * j) / math.factorial(j) ** 2
                motional = motional + _power(a, j) @ _power(a_dag, j) * (carrier * weight)
        return _hermitian((motional @ atom_op(big, "sigma_minus")) * prefactor)

    return build_padded(space, d.j_max + 2, build)


def _same_phase(value: float, target: float) -> bool:
    return abs(cmath.exp(1j * value) - cmath.exp(1j * target)) < PHASE_TOLERANCE


def reduction_check(space: SpaceConfig, d: DriveParams) -> float:
    """
    Сравнивает полный гамильтониан при ``j_max = 0`` с эффективным.

    Ведущий порядок ряда даёт ``−(αâ†b̂† − const)σ̂₋ + h.c.``, то есть
    ``−H′``; эффективный гамильтониан хранится ровно в виде
    ``α[âb̂ − ξ]σ̂₊ + h.c.`` с ``α > 0``, поэтому знак компенсируется здесь
    и только здесь.

    Args:
        space (SpaceConfig): Усечённое пространство
        d (DriveParams): Параметры с ``φ₁ = 0``, ``φ₂ = π``, ``Ω₁ = Ω₂``

    Returns:
        float: Максимальная поэлементная разность модулей

    Raises:
        ParameterError: Если нарушено условие на фазы или частоты Раби
    """
    if not (_same_phase(d.phi1, 0.0) and _same_phase(d.phi2, math.pi)):
        raise ParameterError(f"Нужны phi1=0 и phi2=pi, получено phi1={d.phi1}, phi2={d.phi2}")
    if not math.isclose(d.omega1, d.omega2, rel_tol=1e-12, abs_tol=0.0):
        raise ParameterError(f"Нужна omega1 == omega2, получено {d.omega1} и {d.omega2}")
    full = build_full_hamiltonian(space, replace(d, j_max=0))
    effective = build_effective_hamiltonian(space, EffectiveParams.from_drive(d))
    diff = (full.matrix + effective.matrix).tocoo()
    return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0

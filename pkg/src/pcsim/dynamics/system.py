import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..core.models import DensityOperator, SpaceConfig, SparseOperator, StateVector
from ..exceptions import IndexBoundsError, IntegrationError, ParameterError, TruncationError, space_mismatch
from ..hamiltonian import build_effective_hamiltonian, build_full_hamiltonian
from ..hilbert import Sector, atom_op, conserves_charge, full_sector, sector_of
from ..observables import Probe
from ..states import PcsLabel, pcs_state
from .models import SimParams

logger = logging.getLogger(__name__)

STABILITY_LIMIT = 0.1


def resolve_hamiltonian(space: SpaceConfig, p: SimParams) -> SparseOperator:
    """Гамильтониан выбранной модели на пространстве ``space``."""
    if p.model == "effective":
        return build_effective_hamiltonian(space, p.effective)
    return build_full_hamiltonian(space, p.effective)


def stability_bound(space: SpaceConfig, p: SimParams, hamiltonian: SparseOperator | None = None) -> float:
    """
    Оценка спектрального радиуса генератора для проверки устойчивости.

    Для эффективной модели ``max(Γ, α(N+1))``; для полной модели и явно
    заданного гамильтониана ``max(Γ, max_i Σ_j |H_ij|)`` (круги Гершгорина).

    Args:
        space (SpaceConfig): Пространство
        p (SimParams): Параметры прогона
        hamiltonian (SparseOperator | None): Явный гамильтониан

    Returns:
        float: Оценка сверху
    """
    if hamiltonian is None and p.model == "effective":
        return max(p.gamma, p.effective.alpha * (space.cutoff_n + 1))
    H = hamiltonian if hamiltonian is not None else resolve_hamiltonian(space, p)
    if H.matrix.nnz == 0:
        return p.gamma
    rows = np.asarray(abs(H.matrix).sum(axis=1)).ravel()
    return max(p.gamma, float(rows.max()))


def check_stability(space: SpaceConfig, p: SimParams, hamiltonian: SparseOperator | None = None):
    """
    Raises:
        IntegrationError: Если ``dt · bound >= 0.1``
    """
    bound = stability_bound(space, p, hamiltonian)
    if p.dt * bound >= STABILITY_LIMIT:
        raise IntegrationError(
            f"Шаг dt={p.dt} слишком велик: dt·{bound:.4g} = {p.dt * bound:.4g} >= {STABILITY_LIMIT}"
        )


def pcs_target(space: SpaceConfig, xi: complex, q: int | None) -> StateVector | None:
    """Целевое состояние ``|g⟩ ⊗ PCS(ξ, q)`` или ``None``, если его нельзя построить."""
    if q is None or q < 0:
        return None
    try:
        return pcs_state(space, PcsLabel(xi, q), atom="g")
    except (TruncationError, IndexBoundsError) as exc:
        logger.debug("Целевой PCS не построен: %s", exc)
        return None


@dataclass(frozen=True, eq=False)
class System:
    """
    Операторы задачи, суженные на рабочий сектор.

    Attributes:
        sector (Sector): Рабочий сектор (сектор заряда или всё пространство)
        hamiltonian (sparse.csr_matrix): ``H`` на секторе
        lowering (sparse.csr_matrix): ``σ̂₋`` на секторе
        excited (np.ndarray): Диагональ ``σ̂₊σ̂₋`` на секторе
        overflow (sparse.csr_matrix | None): Ненулевые строки блока переполнения ``H``
        gamma (float): Скорость распада
        probe (Probe): Наблюдаемые на секторе
    """

    sector: Sector
    hamiltonian: sparse.csr_matrix
    lowering: sparse.csr_matrix
    excited: np.ndarray
    overflow: sparse.csr_matrix | None
    gamma: float
    probe: Probe

    @property
    def dim(self) -> int:
        return self.sector.dim

    def restrict_vector(self, amplitudes: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(amplitudes[self.sector.indices])

    def restrict_matrix(self, matrix: np.ndarray) -> np.ndarray:
        idx = self.sector.indices
        return np.ascontiguousarray(matrix[np.ix_(idx, idx)])

    def populations(self, populations: np.ndarray) -> np.ndarray:
        """Переносит населённости сектора в форму ``(2, N+1, N+1)``."""
        space = self.sector.space
        full = np.zeros(space.dim)
        full[self.sector.indices] = populations
        return full.reshape(2, space.mode_dim, space.mode_dim)


def prepare_system(
    x: StateVector | DensityOperator,
    p: SimParams,
    hamiltonian: SparseOperator | None = None,
    target: StateVector | None = None,
) -> System:
    """
    Строит операторы и выбирает рабочий сектор.

    Если ``H`` и ``σ̂₋`` сохраняют заряд, а начальное состояние целиком лежит
    в одном секторе, интегрирование идёт только в этом секторе; иначе во
    всём пространстве. Целевой PCS по умолчанию ``|g⟩ ⊗ PCS(ξ, q)`` с ``q``
    начального состояния.

    Raises:
        DimensionError: Если явный гамильтониан задан на другом пространстве
        IntegrationError: Если нарушено условие устойчивости
    """
    space = x.space
    if hamiltonian is not None and hamiltonian.space != space:
        raise space_mismatch(hamiltonian.space, space)
    check_stability(space, p, hamiltonian)
    H = hamiltonian if hamiltonian is not None else resolve_hamiltonian(space, p)
    lowering = atom_op(space, "sigma_minus")
    charged = sector_of(x)
    if charged is not None and conserves_charge([H, lowering]):
        sector = charged
    else:
        sector = full_sector(space)
    logger.debug("Рабочий сектор: dim=%d из %d", sector.dim, space.dim)
    if target is None and charged is not None:
        target = pcs_target(space, p.xi, charged.q)
    elif target is not None and target.space != space:
        raise space_mismatch(target.space, space)
    overflow = None
    if H.overflow is not None:
        block = sector.restrict_rows(H.overflow)
        keep = np.unique(block.tocoo().row)
        overflow = block[keep] if len(keep) else None
    low = sector.restrict(lowering)
    excited = np.real((low.conj().T @ low).diagonal())
    return System(sector, sector.restrict(H), low, excited, overflow, p.gamma, Probe(sector, target))


def require_normalized(x: StateVector | DensityOperator, tol: float = 1e-9):
    """
    Raises:
        ParameterError: Если норма (след) отличается от 1 больше чем на ``tol``
    """
    value = x.norm() ** 2 if isinstance(x, StateVector) else x.trace()
    if abs(value - 1.0) > tol:
        raise ParameterError(f"Начальное состояние не нормировано: {value:.12g}")

import logging
from typing import Dict, List, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from ..core.abstract import BasePropagator
from ..core.models import DensityOperator, SparseOperator, StateVector
from ..exceptions import IntegrationError, NumericalError, ParameterError, TruncationError, space_mismatch
from ..hilbert import Sector, atom_op, full_sector, right_multiply
from ..observables import SnapshotRequest
from ..states import MotionalDistribution
from .models import ObservableSeries, SimParams
from .system import System, prepare_system

logger = logging.getLogger(__name__)

TRACE_DRIFT = 1e-6
TRACE_TOLERANCE = 1e-6


class MasterEquationPropagator(BasePropagator):
    """
    Интегратор уравнения Линдблада с одним каналом распада ``σ̂₋``.

    ``dρ/dt = −i[H, ρ] + Γ(σ̂₋ρσ̂₊ − ½{σ̂₊σ̂₋, ρ})``

    Attributes:
        hamiltonian (sparse.csr_matrix): Эрмитов ``H``
        lowering (sparse.csr_matrix): Оператор скачка ``σ̂₋``
        gamma (float): Скорость распада
    """

    def __init__(
        self,
        hamiltonian: sparse.csr_matrix,
        lowering: sparse.csr_matrix,
        gamma: float,
        dt: float,
        overflow: sparse.csr_matrix | None = None,
    ):
        super().__init__(dt)
        self.hamiltonian = hamiltonian
        self.lowering = lowering
        self.gamma = gamma
        self._raising = lowering.conj().T.tocsr()
        self._excited = np.real((self._raising @ lowering).diagonal())
        self._overflow = None if overflow is None else overflow.tocsr()
        self._overflow_coo = None if overflow is None else overflow.tocoo()

    @classmethod
    def from_system(cls, system: System, dt: float) -> "MasterEquationPropagator":
        return cls(system.hamiltonian, system.lowering, system.gamma, dt, system.overflow)

    def derivative(self, rho: np.ndarray) -> np.ndarray:
        # Hρ − ρH = X − X† для эрмитовых H и ρ
        x = np.asarray(self.hamiltonian @ rho)
        drho = -1j * (x - x.conj().T)
        if self.gamma:
            jump = right_multiply(np.asarray(self.lowering @ rho), self._raising)
            anti = self._excited[:, None] * rho + rho * self._excited[None, :]
            drho += self.gamma * (jump - 0.5 * anti)
        return drho

    def overflow_rate(self, rho: np.ndarray) -> float:
        """``Tr(OρO†)`` для блока переполнения ``O`` гамильтониана."""
        if self._overflow is None:
            return 0.0
        block = self._overflow_coo
        x = np.asarray(self._overflow @ rho)
        return float(np.real(np.sum(x[block.row, block.col] * np.conj(block.data))))

    def advance(self, rho: np.ndarray) -> np.ndarray:
        """
        Шаг с контролем следа, перенормировкой и симметризацией.

        Raises:
            NumericalError: Если появились нечисловые элементы
            IntegrationError: Если след до перенормировки ушёл больше чем на ``1e-6``
        """
        new = self.rk4_step(rho)
        if not np.all(np.isfinite(new)):
            raise NumericalError("В матрице плотности появились nan/inf")
        trace = float(np.real(np.trace(new)))
        drift = abs(trace - float(np.real(np.trace(rho))))
        if drift > TRACE_DRIFT:
            raise IntegrationError(f"Дрейф следа за шаг {drift:.3e} > {TRACE_DRIFT:.0e}")
        new = 0.5 * (new + new.conj().T)
        new /= trace
        return new


def lindblad_rhs(rho: DensityOperator, H: SparseOperator, gamma: float) -> DensityOperator:
    """
    Правая часть уравнения Линдблада в полном пространстве.

    Args:
        rho (DensityOperator): Эрмитова матрица плотности
        H (SparseOperator): Эрмитов гамильтониан
        gamma (float): Скорость распада ``Γ >= 0``

    Returns:
        DensityOperator: Производная ``dρ/dt`` (след нулевой, матрица эрмитова)

    Raises:
        DimensionError: Если пространства не совпадают

    Example:
        >>> rho = DensityOperator.from_state(fock_state(space, "e", 0, 0))
        >>> lindblad_rhs(rho, SparseOperator.zero(space), 10.0)
    """
    if H.space != rho.space:
        raise space_mismatch(H.space, rho.space)
    if gamma < 0:
        raise ParameterError(f"gamma должна быть >= 0, получено {gamma}")
    lowering = atom_op(rho.space, "sigma_minus").matrix
    propagator = MasterEquationPropagator(H.matrix, lowering, gamma, 1.0)
    return DensityOperator(propagator.derivative(rho.matrix), rho.space)


def snapshot_plan(snapshots: SnapshotRequest | None, p: SimParams) -> Dict[int, List[str]]:
    """Номер шага → подписи снимков, которые на нём снимаются."""
    if snapshots is None:
        return {}
    snapshots.validate(p.t_final)
    plan: Dict[int, List[str]] = {}
    for step, label in zip(snapshots.steps(p.dt), snapshots.labels):
        plan.setdefault(min(step, p.n_steps), []).append(label)
    return plan


def marginal(system: System, populations: np.ndarray) -> MotionalDistribution:
    return MotionalDistribution(system.populations(populations).sum(axis=0))


def integrate_master_equation(
    rho0: DensityOperator,
    p: SimParams,
    hamiltonian: SparseOperator | None = None,
    snapshots: SnapshotRequest | None = None,
    target: StateVector | None = None,
) -> Tuple[DensityOperator, ObservableSeries]:
    """
    Детерминированное интегрирование уравнения Линдблада.

    Классическая схема 4-го порядка с фиксированным шагом ``p.dt``. После
    каждого шага след перенормируется, а матрица симметризуется
    ``(ρ + ρ†)/2``. Наблюдаемые записываются каждые ``p.output_every``
    шагов и на последнем шаге.

    Args:
        rho0 (DensityOperator): Начальная матрица плотности со следом 1
        p (SimParams): Параметры прогона
        hamiltonian (SparseOperator | None): Явный гамильтониан вместо модели из ``p``
        snapshots (SnapshotRequest | None): Моменты снимков ``P(n, m)``
        target (StateVector | None): Целевое состояние для ``fidelity_pcs``

    Returns:
        Tuple[DensityOperator, ObservableSeries]: ``ρ(t_final)`` и ряд наблюдаемых

    Raises:
        IntegrationError: Нарушение устойчивости или дрейф следа
        TruncationError: Утечка за отсечку превысила ``p.leak_tol``
        NumericalError: Нечисловые элементы

    Example:
        >>> rho, series = integrate_master_equation(rho0, SimParams(t_final=10.0))
        >>> series.final("purity")
    """
    if abs(rho0.trace() - 1.0) > TRACE_TOLERANCE:
        raise ParameterError(f"След начальной матрицы плотности {rho0.trace():.12g} != 1")
    system = prepare_system(rho0, p, hamiltonian, target)
    propagator = MasterEquationPropagator.from_system(system, p.dt)
    plan = snapshot_plan(snapshots, p)
    samples = set(p.sample_steps)
    logger.info("Уравнение Линдблада: %d шагов, dim=%d", p.n_steps, system.dim)

    rho = system.restrict_matrix(rho0.matrix)
    times, rows, snaps = [], [], {}
    leak = 0.0
    for step in range(p.n_steps + 1):
        if step in samples:
            row = system.probe.density_row(rho)
            row["leak"] = leak
            times.append(step * p.dt)
            rows.append(row)
        for label in plan.get(step, ()):
            snaps[label] = marginal(system, np.real(np.diag(rho)))
        if step == p.n_steps:
            break
        leak += p.dt**2 * propagator.overflow_rate(rho)
        if leak > p.leak_tol:
            raise TruncationError(
                f"Утечка за отсечку {leak:.3e} > {p.leak_tol:.0e} на t={step * p.dt:g}; увеличьте cutoff_n"
            )
        rho = propagator.advance(rho)

    logger.info("Уравнение Линдблада завершено: чистота %.6f", rows[-1]["purity"])
    final = DensityOperator(system.sector.expand_matrix(rho), rho0.space)
    return final, ObservableSeries.from_rows(times, rows, snaps)


def detect_steady_state(rho: DensityOperator, H: SparseOperator, gamma: float, tol: float = 1e-4) -> bool:
    """
    Проверка стационарности: ``‖dρ/dt‖_max < tol`` и ``‖[H, ρ]‖_max < tol``.

    Второе условие достаточно для тёмного состояния: при нём диссипатор
    обязан обращаться в ноль сам.
    """
    drho = lindblad_rhs(rho, H, gamma).matrix
    comm = np.asarray(H.matrix @ rho.matrix) - right_multiply(rho.matrix, H.matrix)
    return bool(np.max(np.abs(drho)) < tol and np.max(np.abs(comm)) < tol)


def solve_steady_state(H: SparseOperator, gamma: float, sector: Sector | None = None) -> DensityOperator:
    """
    Стационарное состояние прямым решением ``𝓛 vec(ρ) = 0`` на секторе.

    Первое уравнение системы заменяется условием ``Tr ρ = 1``. Векторизация
    по столбцам: ``vec(AρB) = (Bᵀ ⊗ A) vec(ρ)``.

    Args:
        H (SparseOperator): Гамильтониан
        gamma (float): Скорость распада, ``> 0``
        sector (Sector | None): Сектор заряда; по умолчанию всё пространство

    Returns:
        DensityOperator: Стационарная матрица плотности в полном пространстве

    Raises:
        ParameterError: Если ``gamma <= 0`` (стационарное состояние не единственно)
        NumericalError: Если система вырождена
    """
    if not gamma > 0:
        raise ParameterError(f"Для прямого решения нужна gamma > 0, получено {gamma}")
    space = H.space
    sector = full_sector(space) if sector is None else sector
    if sector.space != space:
        raise space_mismatch(sector.space, space)
    d = sector.dim
    h = sector.restrict(H)
    low = sector.restrict(atom_op(space, "sigma_minus"))
    excited = low.conj().T @ low
    eye = sparse.identity(d, dtype=np.complex128, format="csr")
    liouvillian = -1j * (sparse.kron(eye, h) - sparse.kron(h.T, eye)) + gamma * (
        sparse.kron(low.conj(), low) - 0.5 * sparse.kron(eye, excited) - 0.5 * sparse.kron(excited.T, eye)
    )
    diagonal = np.arange(d) * (d + 1)
    trace_row = sparse.csr_matrix((np.ones(d), (np.zeros(d, dtype=int), diagonal)), shape=(1, d * d))
    system = sparse.vstack([trace_row, liouvillian.tocsr()[1:]]).tocsc()
    rhs = np.zeros(d * d, dtype=np.complex128)
    rhs[0] = 1.0
    vec = spsolve(system, rhs)
    if not np.all(np.isfinite(vec)):
        raise NumericalError("Лиувиллиан вырожден: стационарное состояние не единственно")
    rho = vec.reshape((d, d), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.real(np.trace(rho))
    return DensityOperator(sector.expand_matrix(rho), space)

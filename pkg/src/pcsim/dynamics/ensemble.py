import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from ..core.models import DensityOperator, SparseOperator, StateVector
from ..exceptions import ParameterError, TrajectoryError
from ..observables import SnapshotRequest
from .master import marginal, snapshot_plan
from .models import SERIES_FIELDS, EnsembleResult, ObservableSeries, SimParams
from .system import prepare_system, require_normalized
from .trajectory import QuantumJumpPropagator, trajectory_rng

logger = logging.getLogger(__name__)

BATCH_SIZE = 25
PURITY_LIMIT = 50_000_000
THREADS_ENV = "PCS_SIM_THREADS"
PURITY = SERIES_FIELDS.index("purity")


def worker_count(requested: int | None = None) -> int:
    """
    Число процессов: ``requested`` или число ядер, ограниченное ``PCS_SIM_THREADS``.

    Raises:
        ParameterError: Если переменная окружения не целое число >= 1
    """
    count = requested or os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise ParameterError(f"{THREADS_ENV}={raw!r} не целое число") from None
        if cap < 1:
            raise ParameterError(f"{THREADS_ENV} должно быть >= 1, получено {cap}")
        count = min(count, cap)
    return max(1, count)


@dataclass(frozen=True, eq=False)
class BatchTask:
    """Пакет траекторий ``[start, stop)``; передаётся в процесс-исполнитель целиком."""

    propagator: QuantumJumpPropagator
    psi0: np.ndarray
    params: SimParams
    plan: Dict[int, List[str]]
    start: int
    stop: int
    keep_density: bool


@dataclass
class BatchSums:
    """Частичные суммы пакета, сложенные в порядке номеров траекторий."""

    count: int = 0
    times: List[float] = field(default_factory=list)
    first: np.ndarray | None = None
    second: np.ndarray | None = None
    densities: np.ndarray | None = None
    final: np.ndarray | None = None
    snapshots: Dict[str, np.ndarray] = field(default_factory=dict)
    jump_counts: List[int] = field(default_factory=list)

    def merge(self, other: "BatchSums") -> "BatchSums":
        if self.count == 0:
            return other
        self.count += other.count
        self.first = self.first + other.first
        self.second = self.second + other.second
        if self.densities is not None:
            self.densities = self.densities + other.densities
        self.final = self.final + other.final
        for label, pops in other.snapshots.items():
            self.snapshots[label] = self.snapshots[label] + pops
        self.jump_counts.extend(other.jump_counts)
        return self


def run_batch(task: BatchTask) -> BatchSums:
    """
    Прогоняет пакет траекторий.

    Raises:
        TrajectoryError: С номером первой упавшей траектории
    """
    out = BatchSums()
    p = task.params
    for index in range(task.start, task.stop):
        try:
            rng, _ = trajectory_rng(p.master_seed, index)
            run = task.propagator.run(task.psi0, rng, p, task.plan, keep_vectors=task.keep_density)
        except Exception as exc:
            raise TrajectoryError(index, exc) from exc
        values = np.array([[row[name] for name in SERIES_FIELDS] for row in run.rows])
        final = np.outer(run.final, run.final.conj())
        part = BatchSums(
            count=1,
            times=run.times,
            first=values,
            second=values**2,
            final=final,
            snapshots=dict(run.snapshots),
            jump_counts=[len(run.jump_times)],
        )
        if task.keep_density:
            vectors = np.array(run.vectors)
            part.densities = vectors[:, :, None] * vectors.conj()[:, None, :]
        out = out.merge(part)
    return out


def mc_ensemble(
    psi0: StateVector,
    p: SimParams,
    hamiltonian: SparseOperator | None = None,
    snapshots: SnapshotRequest | None = None,
    workers: int | None = None,
) -> EnsembleResult:
    """
    Ансамбль из ``p.n_traj`` траекторий.

    Траектории разбиты на пакеты фиксированного размера, не зависящего от
    числа процессов. Пакеты считаются параллельно и складываются строго в
    порядке номеров, поэтому результат побитно воспроизводим при тех же
    ``(master_seed, n_traj, dt)`` и любом числе процессов.

    Args:
        psi0 (StateVector): Нормированное начальное состояние
        p (SimParams): Параметры прогона
        hamiltonian (SparseOperator | None): Явный гамильтониан
        snapshots (SnapshotRequest | None): Моменты снимков ``P(n, m)``
        workers (int | None): Желаемое число процессов

    Returns:
        EnsembleResult: Оценка ``ρ(t_final)``, средние и их стандартные ошибки

    Raises:
        TrajectoryError: Если упала хотя бы одна траектория

    Example:
        >>> result = mc_ensemble(fock_state(space, "e", 2, 1), SimParams(n_traj=500))
        >>> result.mean.sz, result.stderr.sz
    """
    require_normalized(psi0)
    system = prepare_system(psi0, p, hamiltonian)
    propagator = QuantumJumpPropagator(system, p.dt)
    plan = snapshot_plan(snapshots, p)
    keep_density = system.dim**2 * len(p.sample_steps) <= PURITY_LIMIT
    if not keep_density:
        logger.warning(
            "Чистота ансамбля не считается: dim=%d, отсчётов %d", system.dim, len(p.sample_steps)
        )
    start_vec = system.restrict_vector(psi0.amplitudes)
    tasks = [
        BatchTask(propagator, start_vec, p, plan, start, min(start + BATCH_SIZE, p.n_traj), keep_density)
        for start in range(0, p.n_traj, BATCH_SIZE)
    ]
    count = min(worker_count(workers), len(tasks))
    logger.info("Ансамбль: %d траекторий, %d пакетов, %d процессов", p.n_traj, len(tasks), count)

    if count == 1:
        parts = map(run_batch, tasks)
        total = _reduce(parts, len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=count) as pool:
            total = _reduce(pool.map(run_batch, tasks), len(tasks))

    n = total.count
    mean = total.first / n
    if n > 1:
        variance = np.clip((total.second - n * mean**2) / (n - 1), 0.0, None)
        stderr = np.sqrt(variance / n)
    else:
        stderr = np.zeros_like(mean)
    if total.densities is not None:
        rho = total.densities / n
        mean[:, PURITY] = np.sum(rho.real**2 + rho.imag**2, axis=(1, 2))
    stderr[:, PURITY] = np.nan
    snaps = {label: marginal(system, pops / n) for label, pops in total.snapshots.items()}
    density = DensityOperator(system.sector.expand_matrix(total.final / n), psi0.space)
    return EnsembleResult(
        density,
        ObservableSeries.from_matrix(total.times, mean, snaps),
        ObservableSeries.from_matrix(total.times, stderr),
        np.array(total.jump_counts),
        p.master_seed,
    )


def _reduce(parts, expected: int) -> BatchSums:
    total = BatchSums()
    for done, part in enumerate(parts, start=1):
        total = total.merge(part)
        logger.debug("Пакет %d/%d сложен (%d траекторий)", done, expected, total.count)
    return total

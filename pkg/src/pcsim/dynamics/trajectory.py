import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from scipy import sparse

from ..core.abstract import BasePropagator
from ..core.models import SparseOperator, StateVector
from ..exceptions import NumericalError, TruncationError
from ..observables import SnapshotRequest
from .master import marginal, snapshot_plan
from .models import ObservableSeries, SimParams, TrajectoryResult
from .system import System, prepare_system, require_normalized

logger = logging.getLogger(__name__)

JUMP_PRECISION = 1e-3


def seed_sequence(master_seed: int, traj_index: int) -> np.random.SeedSequence:
    """Поток траектории ``traj_index``; не зависит от порядка запуска."""
    return np.random.SeedSequence(master_seed, spawn_key=(traj_index,))


def trajectory_rng(master_seed: int, traj_index: int) -> Tuple[np.random.Generator, int]:
    """
    Генератор со счётчиком (Philox), ключом которого служит пара
    ``(master_seed, traj_index)``.

    Returns:
        Tuple[np.random.Generator, int]: Генератор и 64-битное зерно потока
    """
    seq = seed_sequence(master_seed, traj_index)
    seed_used = int(seq.generate_state(1, dtype=np.uint64)[0])
    return np.random.Generator(np.random.Philox(seq)), seed_used


def trajectory_seeds(master_seed: int, n_traj: int) -> List[int]:
    """64-битные зёрна потоков траекторий ``0 .. n_traj - 1`` по порядку."""
    return [trajectory_rng(master_seed, index)[1] for index in range(n_traj)]


@dataclass
class TrajectoryRun:
    """Сырые данные одной траектории в координатах рабочего сектора."""

    times: List[float] = field(default_factory=list)
    rows: List[Dict[str, float]] = field(default_factory=list)
    vectors: List[np.ndarray] = field(default_factory=list)
    snapshots: Dict[str, np.ndarray] = field(default_factory=dict)
    jump_times: List[float] = field(default_factory=list)
    final: np.ndarray | None = None
    leak: float = 0.0


class QuantumJumpPropagator(BasePropagator):
    """
    Квантовые скачки с неэрмитовым ``H_eff = H − i(Γ/2)σ̂₊σ̂₋``.

    Между скачками вектор не нормируется: квадрат нормы сравнивается с
    заранее вытянутым порогом ``r``. Момент пересечения уточняется
    бисекцией внутри шага до ``1e-3·dt``, затем применяется ``σ̂₋``,
    вектор нормируется и вытягивается новый порог.

    Attributes:
        system (System): Операторы на рабочем секторе
    """

    def __init__(self, system: System, dt: float):
        super().__init__(dt)
        self.system = system
        decay = sparse.diags(0.5j * system.gamma * system.excited, format="csr")
        self._effective = (system.hamiltonian - decay).tocsr()
        self._lowering = system.lowering
        self._overflow = system.overflow

    def derivative(self, psi: np.ndarray) -> np.ndarray:
        return -1j * (self._effective @ psi)

    def overflow_rate(self, psi: np.ndarray) -> float:
        if self._overflow is None:
            return 0.0
        dropped = self._overflow @ psi
        return float(np.vdot(dropped, dropped).real / np.vdot(psi, psi).real)

    @staticmethod
    def _norm2(psi: np.ndarray) -> float:
        return float(np.vdot(psi, psi).real)

    def _locate(self, psi: np.ndarray, span: float, threshold: float) -> float:
        lo, hi = 0.0, span
        while hi - lo > JUMP_PRECISION * self.dt:
            mid = 0.5 * (lo + hi)
            if self._norm2(self.rk4_step(psi, mid)) > threshold:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def _step(self, psi: np.ndarray, t: float, threshold: float, rng, jumps: List[float]):
        remaining = self.dt
        while True:
            trial = self.rk4_step(psi, remaining)
            if not np.all(np.isfinite(trial)):
                raise NumericalError(f"Нечисловые амплитуды траектории на t={t:g}")
            if self._norm2(trial) > threshold:
                return trial, threshold
            tau = self._locate(psi, remaining, threshold)
            jumped = self._lowering @ self.rk4_step(psi, tau)
            norm = np.sqrt(self._norm2(jumped))
            if norm == 0.0:
                raise NumericalError(f"Скачок из состояния без возбуждения на t={t + tau:g}")
            psi = jumped / norm
            t += tau
            remaining -= tau
            jumps.append(t)
            threshold = rng.random()

    def run(
        self,
        psi0: np.ndarray,
        rng: np.random.Generator,
        p: SimParams,
        plan: Dict[int, List[str]],
        keep_vectors: bool = False,
    ) -> TrajectoryRun:
        """
        Прогоняет одну траекторию.

        Args:
            psi0 (np.ndarray): Нормированный вектор на рабочем секторе
            rng (np.random.Generator): Поток случайных чисел траектории
            p (SimParams): Параметры прогона
            plan (Dict[int, List[str]]): Шаги снимков ``P(n, m)``
            keep_vectors (bool): Сохранять ли нормированные векторы отсчётов

        Returns:
            TrajectoryRun: Отсчёты, скачки и конечный вектор

        Raises:
            TruncationError: Утечка за отсечку превысила ``p.leak_tol``
            NumericalError: Нечисловые амплитуды
        """
        out = TrajectoryRun()
        samples = set(p.sample_steps)
        psi = psi0.copy()
        threshold = rng.random()
        for step in range(p.n_steps + 1):
            if step in samples or step in plan:
                unit = psi / np.sqrt(self._norm2(psi))
                if step in samples:
                    row = self.system.probe.state_row(unit)
                    row["leak"] = out.leak
                    out.times.append(step * p.dt)
                    out.rows.append(row)
                    if keep_vectors:
                        out.vectors.append(unit)
                for label in plan.get(step, ()):
                    out.snapshots[label] = np.abs(unit) ** 2
            if step == p.n_steps:
                break
            out.leak += p.dt**2 * self.overflow_rate(psi)
            if out.leak > p.leak_tol:
                raise TruncationError(
                    f"Утечка траектории {out.leak:.3e} > {p.leak_tol:.0e} на t={step * p.dt:g}"
                )
            psi, threshold = self._step(psi, step * p.dt, threshold, rng, out.jump_times)
        out.final = psi / np.sqrt(self._norm2(psi))
        return out

    def simulate(
        self,
        psi0: StateVector,
        p: SimParams,
        traj_index: int = 0,
        snapshots: SnapshotRequest | None = None,
    ) -> TrajectoryResult:
        """Траектория ``traj_index`` в полном пространстве состояний."""
        rng, seed_used = trajectory_rng(p.master_seed, traj_index)
        run = self.run(self.system.restrict_vector(psi0.amplitudes), rng, p, snapshot_plan(snapshots, p))
        for row in run.rows:
            row["purity"] = row["fidelity_pcs"] = float("nan")
        snaps = {label: marginal(self.system, pops) for label, pops in run.snapshots.items()}
        final = StateVector(self.system.sector.expand_vector(run.final), psi0.space, psi0.leak + run.leak)
        series = ObservableSeries.from_rows(run.times, run.rows, snaps)
        return TrajectoryResult(final, np.array(run.jump_times), series, seed_used)


def mc_trajectory(
    psi0: StateVector,
    p: SimParams,
    traj_index: int = 0,
    hamiltonian: SparseOperator | None = None,
    snapshots: SnapshotRequest | None = None,
) -> TrajectoryResult:
    """
    Одна траектория метода квантовых скачков.

    Args:
        psi0 (StateVector): Нормированное начальное состояние
        p (SimParams): Параметры прогона (зерно берётся из ``p.master_seed``)
        traj_index (int): Номер траектории в ансамбле
        hamiltonian (SparseOperator | None): Явный гамильтониан
        snapshots (SnapshotRequest | None): Моменты снимков ``P(n, m)``

    Returns:
        TrajectoryResult: Конечное состояние, моменты скачков и ряд наблюдаемых;
        столбцы ``purity`` и ``fidelity_pcs`` пустые

    Raises:
        ParameterError: Если ``psi0`` не нормирован
        TruncationError: Утечка за отсечку
        NumericalError: Нечисловые амплитуды

    Example:
        >>> result = mc_trajectory(fock_state(space, "e", 0, 0), p, traj_index=3)
        >>> result.jump_times
    """
    require_normalized(psi0)
    system = prepare_system(psi0, p, hamiltonian)
    return QuantumJumpPropagator(system, p.dt).simulate(psi0, p, traj_index, snapshots)

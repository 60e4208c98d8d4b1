from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple

import numpy as np

from ..core.models import DensityOperator, StateVector
from ..exceptions import ParameterError
from ..hamiltonian import DriveParams, EffectiveParams
from ..states import MotionalDistribution

SERIES_FIELDS = ("sz", "pol_re", "pol_im", "trace", "purity", "q_mean", "leak", "fidelity_pcs")
MODELS = ("effective", "full")
SEED_LIMIT = 2**64


@dataclass(frozen=True)
class SimParams:
    """
    Параметры прогона по времени.

    Значения по умолчанию соответствуют основному сценарию релаксации:
    ``α = 0.2``, ``ξ = 2``, ``Γ = 10``, ``Γt = 4000``. К ``Γt = 2000``
    чистота уже ``0.9997``, но критерий стационарности с порогом ``1e-4``
    выполняется только позже.

    Attributes:
        effective (EffectiveParams | DriveParams): Параметры гамильтониана
        gamma (float): Скорость спонтанного распада ``Γ >= 0``
        dt (float): Шаг интегратора
        t_final (float): Конечное время
        n_traj (int): Число траекторий Монте-Карло
        master_seed (int): Главное зерно ГСЧ, 64 бита
        output_every (int): Шагов между записанными отсчётами
        model (str): ``"effective"`` или ``"full"``
        leak_tol (float): Порог накопленной утечки за отсечку
        steady_tol (float): Порог критерия стационарности
    """

    effective: EffectiveParams | DriveParams = field(default_factory=EffectiveParams)
    gamma: float = 10.0
    dt: float = 0.005
    t_final: float = 400.0
    n_traj: int = 1000
    master_seed: int = 0
    output_every: int = 100
    model: str = "effective"
    leak_tol: float = 1e-6
    steady_tol: float = 1e-4

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParameterError(f"model должна быть одной из {MODELS}, получено {self.model!r}")
        expected = EffectiveParams if self.model == "effective" else DriveParams
        if not isinstance(self.effective, expected):
            raise ParameterError(
                f"Модель '{self.model}' требует {expected.__name__}, получено {type(self.effective).__name__}"
            )
        if not self.gamma >= 0:
            raise ParameterError(f"gamma должна быть >= 0, получено {self.gamma}")
        if not self.dt > 0:
            raise ParameterError(f"dt должен быть > 0, получено {self.dt}")
        if not self.t_final > 0:
            raise ParameterError(f"t_final должно быть > 0, получено {self.t_final}")
        for name in ("n_traj", "output_every"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ParameterError(f"{name} должно быть целым >= 1, получено {value!r}")
        if isinstance(self.master_seed, bool) or not isinstance(self.master_seed, int):
            raise ParameterError(f"master_seed должно быть целым, получено {self.master_seed!r}")
        if not 0 <= self.master_seed < SEED_LIMIT:
            raise ParameterError(f"master_seed вне диапазона [0, 2^64): {self.master_seed}")
        if not self.leak_tol > 0 or not self.steady_tol > 0:
            raise ParameterError("leak_tol и steady_tol должны быть > 0")

    @property
    def n_steps(self) -> int:
        """Число шагов; ``t_final`` округляется до целого числа шагов."""
        return max(1, int(round(self.t_final / self.dt)))

    @property
    def sample_steps(self) -> Tuple[int, ...]:
        """Номера шагов с записью наблюдаемых; последний шаг записывается всегда."""
        steps = list(range(0, self.n_steps + 1, self.output_every))
        if steps[-1] != self.n_steps:
            steps.append(self.n_steps)
        return tuple(steps)

    @property
    def xi(self) -> complex:
        """``ξ`` эффективной модели, для полной модели пересчитанный из полей."""
        if isinstance(self.effective, EffectiveParams):
            return self.effective.xi
        return EffectiveParams.from_drive(self.effective).xi


@dataclass
class ObservableSeries:
    """
    Временной ряд наблюдаемых.

    Все массивы одной длины, ``times`` строго возрастает. Отсутствующая
    величина (например чистота для одной траектории) хранится как ``nan``.

    Attributes:
        times (np.ndarray): Моменты записи
        sz (np.ndarray): ``⟨σ̂_z⟩``
        pol_re (np.ndarray): ``⟨σ̂₋ + σ̂₊⟩``
        pol_im (np.ndarray): ``i⟨σ̂₋ − σ̂₊⟩``
        trace (np.ndarray): След матрицы плотности
        purity (np.ndarray): ``Tr ρ²``
        q_mean (np.ndarray): ``⟨Q̂⟩``
        leak (np.ndarray): Накопленная утечка за отсечку
        fidelity_pcs (np.ndarray): Верность с целевым ``|g⟩ ⊗ PCS``
        snapshots (Dict[str, MotionalDistribution]): Снимки ``P(n, m)``
    """

    times: np.ndarray
    sz: np.ndarray
    pol_re: np.ndarray
    pol_im: np.ndarray
    trace: np.ndarray
    purity: np.ndarray
    q_mean: np.ndarray
    leak: np.ndarray
    fidelity_pcs: np.ndarray
    snapshots: Dict[str, MotionalDistribution] = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        for name in SERIES_FIELDS:
            values = np.asarray(getattr(self, name), dtype=float)
            if values.shape != self.times.shape:
                raise ParameterError(f"Длина ряда '{name}' {values.shape} не совпадает с {self.times.shape}")
            setattr(self, name, values)
        if np.any(np.diff(self.times) <= 0):
            raise ParameterError("Моменты записи должны строго возрастать")

    @classmethod
    def from_matrix(cls, times, matrix: np.ndarray, snapshots=None) -> "ObservableSeries":
        """Собирает ряд из матрицы ``отсчёты × SERIES_FIELDS``."""
        matrix = np.asarray(matrix, dtype=float).reshape(len(times), len(SERIES_FIELDS))
        columns = {name: matrix[:, i] for i, name in enumerate(SERIES_FIELDS)}
        return cls(times, snapshots=dict(snapshots or {}), **columns)

    @classmethod
    def from_rows(cls, times, rows: List[Dict[str, float]], snapshots=None) -> "ObservableSeries":
        matrix = np.array([[row[name] for name in SERIES_FIELDS] for row in rows], dtype=float)
        return cls.from_matrix(times, matrix, snapshots)

    def as_matrix(self) -> np.ndarray:
        return np.column_stack([getattr(self, name) for name in SERIES_FIELDS])

    def __len__(self):
        return len(self.times)

    def final(self, name: str) -> float:
        return float(getattr(self, name)[-1])

    def rows(self) -> Iterator[Tuple[float, Dict[str, float]]]:
        for i, t in enumerate(self.times):
            yield float(t), {name: float(getattr(self, name)[i]) for name in SERIES_FIELDS}


@dataclass
class TrajectoryResult:
    """
    Результат одной квантовой траектории.

    Attributes:
        final_state (StateVector): Нормированное состояние в ``t_final``
        jump_times (np.ndarray): Моменты скачков, строго возрастают, все ``< t_final``
        series (ObservableSeries): Ряд по нормированному состоянию
        seed_used (int): 64-битное зерно потока траектории
    """

    final_state: StateVector
    jump_times: np.ndarray
    series: ObservableSeries
    seed_used: int

    def __post_init__(self):
        self.jump_times = np.asarray(self.jump_times, dtype=float)
        if np.any(np.diff(self.jump_times) <= 0):
            raise ParameterError("Моменты скачков должны строго возрастать")

    @property
    def jump_count(self) -> int:
        return len(self.jump_times)


@dataclass
class EnsembleResult:
    """
    Результат ансамбля траекторий.

    Attributes:
        density (DensityOperator): Среднее ``|ψ⟩⟨ψ|`` в ``t_final``
        mean (ObservableSeries): Средние по ансамблю
        stderr (ObservableSeries): Стандартные ошибки средних
        jump_counts (np.ndarray): Число скачков каждой траектории по порядку
        master_seed (int): Главное зерно
    """

    density: DensityOperator
    mean: ObservableSeries
    stderr: ObservableSeries
    jump_counts: np.ndarray
    master_seed: int

    @property
    def n_traj(self) -> int:
        return len(self.jump_counts)

    def jump_stats(self) -> Dict[str, float]:
        counts = self.jump_counts
        return {
            "mean": float(np.mean(counts)),
            "min": int(np.min(counts)),
            "max": int(np.max(counts)),
            "total": int(np.sum(counts)),
        }

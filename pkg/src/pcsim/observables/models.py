from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..exceptions import ParameterError


@dataclass(frozen=True)
class SnapshotRequest:
    """
    Моменты времени, в которые сохраняется распределение ``P(n, m)``.

    Attributes:
        times (Tuple[float, ...]): Строго возрастающие моменты времени
        labels (Tuple[str, ...]): Подписи файлов ``pnm_<label>.csv``

    Example:
        >>> SnapshotRequest.from_gamma_t([0, 125, 500, 2000], gamma=10.0)
    """

    times: Tuple[float, ...] = ()
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        labels = tuple(self.labels) or tuple(f"t{t:g}" for t in times)
        if len(labels) != len(times):
            raise ParameterError("Число подписей снимков не совпадает с числом моментов")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ParameterError(f"Моменты снимков должны строго возрастать: {times}")
        if times and times[0] < 0:
            raise ParameterError(f"Моменты снимков не могут быть отрицательными: {times}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_gamma_t(cls, gamma_t, gamma: float) -> "SnapshotRequest":
        if gamma <= 0:
            raise ParameterError("Снимки в единицах Γt требуют gamma > 0")
        values = [float(v) for v in gamma_t]
        return cls(tuple(v / gamma for v in values), tuple(f"gt{v:g}" for v in values))

    def validate(self, t_final: float):
        if self.times and self.times[-1] > t_final * (1 + 1e-12):
            raise ParameterError(f"Снимок t={self.times[-1]} позже t_final={t_final}")

    def steps(self, dt: float) -> Tuple[int, ...]:
        """Номера шагов интегратора, ближайшие к запрошенным моментам."""
        return tuple(int(round(t / dt)) for t in self.times)

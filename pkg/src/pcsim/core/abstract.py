import json
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Iterable, List

import numpy as np

SERIES_HEADER = ("t", "sz", "pol_re", "pol_im", "trace", "purity", "q_mean", "leak", "fidelity_pcs")
SNAPSHOT_HEADER = ("n", "m", "p")


class BasePropagator(ABC):
    """
    Абстрактный базовый класс для пошаговых интеграторов.

    Реализует классическую схему Рунге-Кутты 4-го порядка с фиксированным
    шагом поверх правой части, которую задают дочерние классы. Одна и та
    же схема используется для матрицы плотности и для вектора состояния
    траектории.

    Attributes:
        dt (float): Шаг интегрирования

    Methods:
        derivative: Абстрактная правая часть ``dy/dt``
        overflow_rate: Абстрактная скорость утечки за отсечку
        rk4_step: Один шаг схемы 4-го порядка
    """

    def __init__(self, dt: float):
        self.dt = dt

    @abstractmethod
    def derivative(self, y: np.ndarray) -> np.ndarray:
        """
        Правая часть уравнения движения.

        Args:
            y (np.ndarray): Текущее состояние (вектор или матрица)

        Returns:
            np.ndarray: Производная той же формы
        """
        ...

    @abstractmethod
    def overflow_rate(self, y: np.ndarray) -> float:
        """
        Квадрат нормы производной, уходящей за отсечку базиса.

        Умноженный на ``dt²`` даёт вклад шага в накопленную утечку.
        """
        ...

    def rk4_step(self, y: np.ndarray, h: float | None = None) -> np.ndarray:
        """
        Один шаг классической схемы Рунге-Кутты.

        Args:
            y (np.ndarray): Состояние в начале шага
            h (float | None): Длина шага, по умолчанию ``dt``

        Returns:
            np.ndarray: Новое состояние; ``y`` не изменяется
        """
        h = self.dt if h is None else h
        k1 = self.derivative(y)
        k2 = self.derivative(y + 0.5 * h * k1)
        k3 = self.derivative(y + 0.5 * h * k2)
        k4 = self.derivative(y + h * k3)
        return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class BaseResultWriter(ABC):
    """
    Абстрактный базовый класс для записи результатов прогона.

    Форматирование (CSV и JSON) общее, дочерние классы отвечают только
    за сам ввод-вывод: синхронный или асинхронный.

    Attributes:
        out_dir (Path): Каталог для результатов
    """

    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)

    @staticmethod
    def format_float(value: float | None) -> str:
        """Кратчайшее точное представление; ``nan`` и ``None`` дают пустое поле."""
        if value is None:
            return ""
        value = float(value)
        if math.isnan(value):
            return ""
        return repr(value)

    def series_text(self, series) -> str:
        lines = [",".join(SERIES_HEADER)]
        for t, row in series.rows():
            values = [t] + [row[name] for name in SERIES_HEADER[1:]]
            lines.append(",".join(self.format_float(v) for v in values))
        return "\n".join(lines) + "\n"

    def snapshot_text(self, rows: Iterable) -> str:
        lines = [",".join(SNAPSHOT_HEADER)]
        lines.extend(f"{n},{m},{self.format_float(p)}" for n, m, p in rows)
        return "\n".join(lines) + "\n"

    @staticmethod
    def summary_text(summary: Dict[str, Any]) -> str:
        return json.dumps(_plain(summary), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @abstractmethod
    def write_series(self, series, name: str = "series.csv") -> Path:
        """Записывает ряд наблюдаемых в CSV."""
        ...

    @abstractmethod
    def write_snapshots(self, snapshots) -> List[Path]:
        """Записывает распределения ``P(n, m)`` в файлы ``pnm_<label>.csv``."""
        ...

    @abstractmethod
    def write_summary(self, summary: Dict[str, Any]) -> Path:
        """Записывает ``summary.json``."""
        ...


def _plain(value):
    # json не знает numpy-типов и nan
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        return [_plain(value.real), _plain(value.imag)]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) or math.isinf(value) else value
    return value

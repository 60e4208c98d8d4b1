from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from ..exceptions import ParameterError

NEGATIVE_NOISE = 1e-12


@dataclass(frozen=True)
class PcsLabel:
    """
    Метка парного когерентного состояния ``|ξ, q⟩``.

    Attributes:
        xi (complex): Собственное значение оператора ``âb̂``
        q (int): Заряд, собственное значение ``Q̂``; ``q >= 0``

    Notes:
        Отрицательный заряд сводится к положительному перестановкой мод
        ``a ↔ b``: ``|ξ, −q⟩`` совпадает с ``|ξ, q⟩`` с переставленными
        числами заполнения. Конструктор принимает только ``q >= 0``.

    Example:
        >>> PcsLabel(2.0, 1)
    """

    xi: complex
    q: int

    def __post_init__(self):
        object.__setattr__(self, "xi", complex(self.xi))
        if isinstance(self.q, bool) or not isinstance(self.q, (int, np.integer)):
            raise ParameterError(f"q должен быть целым, получено {self.q!r}")
        if self.q < 0:
            raise ParameterError(
                f"q должен быть >= 0, получено {self.q}; для q < 0 поменяйте моды a и b местами"
            )
        object.__setattr__(self, "q", int(self.q))

    @property
    def tag(self) -> str:
        return f"xi={self.xi.real:g}{self.xi.imag:+g}j,q={self.q}"


@dataclass
class MotionalDistribution:
    """
    Распределение чисел заполнения ``P(n, m)`` двух колебательных мод.

    Attributes:
        probabilities (np.ndarray): Вещественная матрица ``(N+1) × (N+1)``
    """

    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ParameterError(f"Ожидается квадратная матрица, получено {p.shape}")
        if p.size and p.min() < -NEGATIVE_NOISE:
            raise ParameterError(f"Отрицательная вероятность: {p.min()}")
        self.probabilities = np.clip(p, 0.0, None)

    def total(self) -> float:
        return float(self.probabilities.sum())

    def __getitem__(self, key: Tuple[int, int]) -> float:
        return float(self.probabilities[key])

    def rows(self) -> Iterator[Tuple[int, int, float]]:
        """Строки ``(n, m, p)`` для всех ненулевых элементов."""
        for n, m in zip(*np.nonzero(self.probabilities)):
            yield int(n), int(m), float(self.probabilities[n, m])

    def off_support(self, q: int) -> float:
        """Вероятность вне диагонали ``n − m = q``."""
        size = self.probabilities.shape[0]
        n, m = np.indices((size, size))
        return float(self.probabilities[(n - m) != q].sum())

    def mode_means(self) -> Tuple[float, float]:
        size = self.probabilities.shape[0]
        levels = np.arange(size)
        return (
            float(self.probabilities.sum(axis=1) @ levels),
            float(self.probabilities.sum(axis=0) @ levels),
        )

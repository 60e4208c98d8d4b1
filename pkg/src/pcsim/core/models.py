from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import List, Tuple

import numpy as np
from scipy import sparse

from ..exceptions import DimensionError, ParameterError, out_of_range, space_mismatch


class AtomLevel(IntEnum):
    """Уровень двухуровневого иона: основной ``g`` и возбуждённый ``e``."""

    G = 0
    E = 1

    @classmethod
    def parse(cls, value: "AtomLevel | str | int") -> "AtomLevel":
        """Принимает ``AtomLevel``, строку ``'g'``/``'e'`` или 0/1.

        Raises:
            IndexBoundsError: Если значение не является уровнем атома
        """
        if isinstance(value, AtomLevel):
            return value
        if isinstance(value, str) and value.lower() in ("g", "e"):
            return cls.G if value.lower() == "g" else cls.E
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool) and value in (0, 1):
            return cls(int(value))
        raise out_of_range("s", value, "g", "e")

    @property
    def label(self) -> str:
        return "g" if self is AtomLevel.G else "e"


@dataclass(frozen=True)
class SpaceConfig:
    """Усечённое пространство: две колебательные моды и двухуровневый атом.

    Базис упорядочен так: сначала уровень атома, затем ``n_a``, затем
    ``n_b``. Индекс ``(s, n, m)`` равен ``s·(N+1)² + n·(N+1) + m``.

    Attributes:
        cutoff_n (int): Максимальное число квантов в каждой моде (включительно)
        atom_dim (int): Размерность атома, всегда 2

    Examples:
        >>> space = SpaceConfig(20)
        >>> space.dim
        882
        >>> space.index(AtomLevel.E, 0, 0)
        441
    """

    cutoff_n: int
    atom_dim: int = 2

    def __post_init__(self):
        if isinstance(self.cutoff_n, bool) or not isinstance(self.cutoff_n, (int, np.integer)):
            raise ParameterError(f"cutoff_n должен быть целым, получено {self.cutoff_n!r}")
        if self.cutoff_n < 1:
            raise ParameterError(f"cutoff_n должен быть >= 1, получено {self.cutoff_n}")
        if self.atom_dim != 2:
            raise ParameterError("Поддерживается только двухуровневый атом (atom_dim=2)")

    @property
    def mode_dim(self) -> int:
        return self.cutoff_n + 1

    @property
    def block(self) -> int:
        """Размер блока одного уровня атома, ``(N+1)²``."""
        return self.mode_dim**2

    @property
    def dim(self) -> int:
        return self.atom_dim * self.block

    def index(self, s: int, n: int, m: int) -> int:
        return int(s) * self.block + n * self.mode_dim + m

    def unindex(self, index: int) -> Tuple[AtomLevel, int, int]:
        s, rest = divmod(int(index), self.block)
        n, m = divmod(rest, self.mode_dim)
        return AtomLevel(s), n, m

    @cached_property
    def grid(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Массивы ``(s, n, m)`` для всех индексов базиса по порядку."""
        idx = np.arange(self.dim)
        s, rest = np.divmod(idx, self.block)
        n, m = np.divmod(rest, self.mode_dim)
        return s, n, m

    def padded(self, margin: int) -> "SpaceConfig":
        return SpaceConfig(self.cutoff_n + margin)

    def inner_indices(self, big: "SpaceConfig") -> np.ndarray:
        """Индексы состояний этого пространства внутри большего ``big``."""
        s, n, m = self.grid
        return s * big.block + n * big.mode_dim + m

    def __str__(self):
        return f"SpaceConfig(N={self.cutoff_n}, dim={self.dim})"


@dataclass
class StateVector:
    """Вектор состояния над базисом ``(s, n_a, n_b)``.

    Attributes:
        amplitudes (np.ndarray): Комплексные амплитуды длины ``space.dim``
        space (SpaceConfig): Пространство, которому принадлежит вектор
        leak (float): Накопленный квадрат амплитуды, отброшенной на границе
            отсечки; не убывает на протяжении расчёта

    Notes:
        Объект изменяемый и имеет одного владельца; между потоками его можно
        передавать, но не изменять одновременно.
    """

    amplitudes: np.ndarray
    space: SpaceConfig
    leak: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.space.dim,):
            raise DimensionError(
                f"Длина вектора {self.amplitudes.shape} не совпадает с dim={self.space.dim}"
            )
        if self.leak < 0:
            raise ParameterError(f"leak не может быть отрицательным: {self.leak}")

    @classmethod
    def zeros(cls, space: SpaceConfig) -> "StateVector":
        return cls(np.zeros(space.dim, dtype=np.complex128), space)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "StateVector":
        """Нормирует вектор на месте и возвращает его же.

        Raises:
            ParameterError: Если вектор нулевой
        """
        norm = self.norm()
        if norm == 0.0:
            raise ParameterError("Нельзя нормировать нулевой вектор")
        self.amplitudes /= norm
        return self

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.space, self.leak)

    def amplitude(self, s, n: int, m: int) -> complex:
        return complex(self.amplitudes[self.space.index(AtomLevel.parse(s), n, m)])

    def require_space(self, other: "StateVector | DensityOperator | SparseOperator"):
        if other.space != self.space:
            raise space_mismatch(self.space, other.space)


@dataclass
class DensityOperator:
    """Эрмитова матрица плотности над тем же плоским базисом.

    Attributes:
        matrix (np.ndarray): Комплексная матрица ``dim × dim``
        space (SpaceConfig): Пространство состояний
    """

    matrix: np.ndarray
    space: SpaceConfig

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise DimensionError(
                f"Форма матрицы {self.matrix.shape} не совпадает с dim={self.space.dim}"
            )

    @classmethod
    def from_state(cls, psi: StateVector) -> "DensityOperator":
        """Строит проектор ``|ψ⟩⟨ψ|``."""
        return cls(np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.space)

    @classmethod
    def mixture(cls, states: List[StateVector], weights=None) -> "DensityOperator":
        if not states:
            raise ParameterError("Смесь должна содержать хотя бы одно состояние")
        weights = np.full(len(states), 1.0 / len(states)) if weights is None else weights
        space = states[0].space
        matrix = np.zeros((space.dim, space.dim), dtype=np.complex128)
        for weight, psi in zip(weights, states):
            states[0].require_space(psi)
            matrix += weight * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return cls(matrix, space)

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        """Наименьшее собственное значение (проверка по запросу, не на каждом шаге)."""
        hermitian = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(hermitian)[0])

    def normalize(self) -> "DensityOperator":
        trace = self.trace()
        if trace == 0.0:
            raise ParameterError("Нельзя нормировать матрицу с нулевым следом")
        self.matrix /= trace
        return self

    def copy(self) -> "DensityOperator":
        return DensityOperator(self.matrix.copy(), self.space)


def _reindex_rows(block: sparse.csr_matrix, space: SpaceConfig, old: int, new: int) -> sparse.csr_matrix:
    """Переносит строки блока переполнения из ``padded(old)`` в ``padded(new)``."""
    if old == new:
        return block
    src, dst = space.padded(old), space.padded(new)
    s, n, m = src.grid
    rows = s * dst.block + n * dst.mode_dim + m
    coo = block.tocoo()
    return sparse.csr_matrix(
        (coo.data, (rows[coo.row], coo.col)), shape=(dst.dim, block.shape[1])
    )


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Неизменяемый разреженный линейный оператор над плоским базисом.

    Хранится в CSR-формате. Необязательный блок ``overflow`` содержит
    строки неусечённого оператора, попадающие за отсечку: его строки
    индексируются базисом ``space.padded(margin)``, столбцы базисом
    ``space``. По нему считается утечка ``‖overflow·ψ‖²``.

    Attributes:
        matrix (sparse.csr_matrix): Матрица ``dim × dim``
        space (SpaceConfig): Пространство состояний
        hermitian (bool): Флаг эрмитовости, выставляется построителем
        overflow (sparse.csr_matrix | None): Отброшенные на границе строки
        margin (int): Запас по отсечке, которым индексирован ``overflow``

    Examples:
        >>> a = ladder_op(space, "a", "lower")
        >>> n_a = a.adjoint() @ a
    """

    matrix: sparse.csr_matrix
    space: SpaceConfig
    hermitian: bool = False
    overflow: sparse.csr_matrix | None = None
    margin: int = 0
    _entries: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        matrix = sparse.csr_matrix(self.matrix, dtype=np.complex128)
        matrix.sum_duplicates()
        if matrix.shape != (self.space.dim, self.space.dim):
            raise DimensionError(
                f"Форма оператора {matrix.shape} не совпадает с dim={self.space.dim}"
            )
        object.__setattr__(self, "matrix", matrix)
        if self.overflow is not None:
            overflow = sparse.csr_matrix(self.overflow, dtype=np.complex128)
            overflow.eliminate_zeros()
            if overflow.nnz == 0:
                overflow, margin = None, 0
            else:
                margin = self.margin
            object.__setattr__(self, "overflow", overflow)
            object.__setattr__(self, "margin", margin)

    @classmethod
    def from_entries(cls, entries, space: SpaceConfig, hermitian: bool = False) -> "SparseOperator":
        """Строит оператор из списка ``(row, col, value)`` без повторов.

        Raises:
            DimensionError: Если пара ``(row, col)`` встречается дважды
            IndexBoundsError: Если индекс выходит за ``dim``
        """
        entries = list(entries)
        if not entries:
            return cls.zero(space)
        rows, cols, values = (np.asarray(x) for x in zip(*entries))
        if rows.min() < 0 or cols.min() < 0 or max(rows.max(), cols.max()) >= space.dim:
            raise out_of_range("index", (int(rows.max()), int(cols.max())), 0, space.dim - 1)
        if len(set(zip(rows.tolist(), cols.tolist()))) != len(entries):
            raise DimensionError("Повторяющиеся пары (row, col) в описании оператора")
        matrix = sparse.coo_matrix((values.astype(np.complex128), (rows, cols)), shape=(space.dim, space.dim))
        return cls(matrix.tocsr(), space, hermitian)

    @classmethod
    def zero(cls, space: SpaceConfig) -> "SparseOperator":
        return cls(sparse.csr_matrix((space.dim, space.dim), dtype=np.complex128), space, True)

    @property
    def entries(self) -> List[Tuple[int, int, complex]]:
        """Ненулевые элементы в виде ``(row, col, value)``."""
        if self._entries is None:
            coo = self.matrix.tocoo()
            object.__setattr__(
                self,
                "_entries",
                [(int(r), int(c), complex(v)) for r, c, v in zip(coo.row, coo.col, coo.data) if v != 0],
            )
        return self._entries

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.matrix.conj().T.tocsr(), self.space, self.hermitian)

    def hermiticity_error(self) -> float:
        diff = self.matrix - self.matrix.conj().T
        return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix.data))) if self.matrix.nnz else 0.0

    def commutator(self, other: "SparseOperator") -> "SparseOperator":
        return self @ other - other @ self

    def _check(self, other: "SparseOperator"):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        if other.space != self.space:
            raise space_mismatch(self.space, other.space)
        return None

    def _merged_overflow(self, other: "SparseOperator", sign: float):
        if self.overflow is None and other.overflow is None:
            return None, 0
        margin = max(self.margin, other.margin)
        rows = self.space.padded(margin).dim
        total = sparse.csr_matrix((rows, self.space.dim), dtype=np.complex128)
        if self.overflow is not None:
            total = total + _reindex_rows(self.overflow, self.space, self.margin, margin)
        if other.overflow is not None:
            total = total + sign * _reindex_rows(other.overflow, self.space, other.margin, margin)
        return total, margin

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        if (bad := self._check(other)) is not None:
            return bad
        overflow, margin = self._merged_overflow(other, 1.0)
        return SparseOperator(
            self.matrix + other.matrix, self.space, self.hermitian and other.hermitian, overflow, margin
        )

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        if (bad := self._check(other)) is not None:
            return bad
        overflow, margin = self._merged_overflow(other, -1.0)
        return SparseOperator(
            self.matrix - other.matrix, self.space, self.hermitian and other.hermitian, overflow, margin
        )

    def __neg__(self) -> "SparseOperator":
        return self * -1.0

    def __mul__(self, scalar) -> "SparseOperator":
        if not np.isscalar(scalar):
            return NotImplemented
        hermitian = self.hermitian and np.imag(scalar) == 0
        overflow = None if self.overflow is None else self.overflow * scalar
        return SparseOperator(self.matrix * scalar, self.space, bool(hermitian), overflow, self.margin)

    __rmul__ = __mul__

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        # переполнение произведения учитывает только последний (левый) множитель
        if (bad := self._check(other)) is not None:
            return bad
        overflow = None if self.overflow is None else self.overflow @ other.matrix
        return SparseOperator(self.matrix @ other.matrix, self.space, False, overflow, self.margin)

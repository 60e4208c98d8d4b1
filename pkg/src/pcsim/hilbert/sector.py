from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import sparse

from ..core.models import DensityOperator, SpaceConfig, SparseOperator, StateVector

SUPPORT_EPS = 1e-300
COUPLING_EPS = 1e-14


@dataclass(frozen=True, eq=False)
class Sector:
    """Подпространство с фиксированным зарядом ``q = n − m``.

    Attributes:
        space (SpaceConfig): Полное пространство
        q (int): Заряд сектора
        indices (np.ndarray): Плоские индексы базисных состояний сектора
    """

    space: SpaceConfig
    q: int
    indices: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.indices)

    def restrict(self, op: SparseOperator | sparse.spmatrix) -> sparse.csr_matrix:
        matrix = op.matrix if isinstance(op, SparseOperator) else op
        return sparse.csr_matrix(matrix)[self.indices, :][:, self.indices]

    def restrict_rows(self, block: sparse.spmatrix) -> sparse.csr_matrix:
        """Сужает только столбцы (для блока переполнения)."""
        return sparse.csr_matrix(block)[:, self.indices]

    def expand_vector(self, amplitudes: np.ndarray) -> np.ndarray:
        full = np.zeros(self.space.dim, dtype=np.complex128)
        full[self.indices] = amplitudes
        return full

    def expand_matrix(self, matrix: np.ndarray) -> np.ndarray:
        full = np.zeros((self.space.dim, self.space.dim), dtype=np.complex128)
        full[np.ix_(self.indices, self.indices)] = matrix
        return full


def charge_sector(space: SpaceConfig, q: int) -> Sector:
    """Сектор заряда ``q`` (оба уровня атома)."""
    _, n, m = space.grid
    return Sector(space, int(q), np.flatnonzero(n - m == q))


def full_sector(space: SpaceConfig) -> Sector:
    """Всё пространство целиком, оформленное как сектор."""
    return Sector(space, 0, np.arange(space.dim))


def conserves_charge(ops: Iterable[SparseOperator]) -> bool:
    """Истина, если ни один оператор не связывает состояния с разным зарядом."""
    for op in ops:
        _, n, m = op.space.grid
        charge = n - m
        coo = op.matrix.tocoo()
        # остатки округления от взаимно гасящихся слагаемых не считаются связью
        mask = np.abs(coo.data) > COUPLING_EPS * max(1.0, op.max_abs())
        if np.any(charge[coo.row[mask]] != charge[coo.col[mask]]):
            return False
    return True


def sector_of(x: StateVector | DensityOperator) -> Sector | None:
    """
    Сектор, в котором целиком лежит состояние, или ``None``.

    Returns:
        Sector | None: Сектор определённого заряда, если носитель состояния
        принадлежит одному значению ``n − m``
    """
    _, n, m = x.space.grid
    if isinstance(x, StateVector):
        weight = np.abs(x.amplitudes) ** 2
    else:
        weight = np.abs(np.diag(x.matrix))
    charges = np.unique((n - m)[weight > SUPPORT_EPS])
    if len(charges) != 1:
        return None
    sector = charge_sector(x.space, int(charges[0]))
    if isinstance(x, DensityOperator):
        outside = np.ones(x.space.dim, dtype=bool)
        outside[sector.indices] = False
        if np.any(np.abs(x.matrix[outside, :]) > SUPPORT_EPS):
            return None
    return sector

from typing import Dict

import numpy as np

from ..core.models import StateVector
from ..hilbert import Sector, atom_op, charge_op


class Probe:
    """
    Набор наблюдаемых, суженных на рабочий сектор интегратора.

    Считает одну строку ряда (инверсия, поляризация, след, чистота,
    ``⟨Q̂⟩``, верность с целевым PCS) прямо по суженным массивам, без
    обратного вложения в полное пространство на каждом отсчёте.

    Attributes:
        sector (Sector): Рабочий сектор
        target (np.ndarray | None): Целевое состояние, суженное на сектор
    """

    def __init__(self, sector: Sector, target: StateVector | None = None):
        self.sector = sector
        space = sector.space
        self._sz = np.real(atom_op(space, "sigma_z").matrix.diagonal())[sector.indices]
        self._q = np.real(charge_op(space).matrix.diagonal())[sector.indices]
        lowering = sector.restrict(atom_op(space, "sigma_minus")).tocoo()
        self._rows, self._cols, self._vals = lowering.row, lowering.col, lowering.data
        self.target = None if target is None else target.amplitudes[sector.indices]

    def _lowering_state(self, vec: np.ndarray) -> complex:
        return complex(np.sum(np.conj(vec[self._rows]) * self._vals * vec[self._cols]))

    def _lowering_density(self, mat: np.ndarray) -> complex:
        return complex(np.sum(self._vals * mat[self._cols, self._rows]))

    def _row(self, populations: np.ndarray, lowering: complex) -> Dict[str, float]:
        return {
            "sz": float(populations @ self._sz),
            "pol_re": 2.0 * lowering.real,
            "pol_im": -2.0 * lowering.imag,
            "q_mean": float(populations @ self._q),
        }

    def state_row(self, vec: np.ndarray) -> Dict[str, float]:
        """Строка наблюдаемых для нормированного суженного вектора."""
        row = self._row(np.abs(vec) ** 2, self._lowering_state(vec))
        row["trace"] = float(np.vdot(vec, vec).real)
        row["purity"] = float("nan")
        row["fidelity_pcs"] = (
            float("nan") if self.target is None else float(abs(np.vdot(self.target, vec)) ** 2)
        )
        return row

    def density_row(self, mat: np.ndarray) -> Dict[str, float]:
        """Строка наблюдаемых для суженной матрицы плотности."""
        row = self._row(np.real(np.diag(mat)), self._lowering_density(mat))
        row["trace"] = float(np.real(np.trace(mat)))
        row["purity"] = float(np.sum(mat.real**2 + mat.imag**2))
        row["fidelity_pcs"] = (
            float("nan")
            if self.target is None
            else float(np.vdot(self.target, mat @ self.target).real)
        )
        return row

"""
Hilbert Space Package

Усечённое пространство «две колебательные моды ⊗ двухуровневый ион»:
плоская индексация базиса, построение разреженных операторов и их
применение к векторам состояния и матрицам плотности.

Доступные функции:
    - flat_index / unflat_index: Индексация базиса ``(s, n_a, n_b)``
    - ladder_op, atom_op, pair_annihilation, charge_op: Операторы
    - apply_to_state, apply_to_density: Применение операторов
    - charge_sector, sector_of: Секторы сохраняющегося заряда

Пример использования:
    >>> from pcsim.hilbert import SpaceConfig, ladder_op, apply_to_state
    >>> space = SpaceConfig(20)
    >>> a = ladder_op(space, "a", "lower")
    >>> result = apply_to_state(a, psi)
"""

__all__ = [
    "AtomLevel",
    "SpaceConfig",
    "StateVector",
    "DensityOperator",
    "SparseOperator",
    "flat_index",
    "unflat_index",
    "ladder_op",
    "atom_op",
    "pair_annihilation",
    "charge_op",
    "number_op",
    "identity_op",
    "build_padded",
    "truncate",
    "apply_to_state",
    "apply_to_density",
    "embed_state",
    "overflow_weight",
    "right_multiply",
    "Sector",
    "charge_sector",
    "full_sector",
    "conserves_charge",
    "sector_of",
]

from ..core.models import AtomLevel, SpaceConfig, StateVector, DensityOperator, SparseOperator
from .space import flat_index, unflat_index
from .operators import (
    ladder_op,
    atom_op,
    pair_annihilation,
    charge_op,
    number_op,
    identity_op,
    build_padded,
    truncate,
)
from .apply import apply_to_state, apply_to_density, embed_state, overflow_weight, right_multiply
from .sector import Sector, charge_sector, full_sector, conserves_charge, sector_of

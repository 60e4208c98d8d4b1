"""
Hamiltonian Package

Гамильтонианы иона в двумерной ловушке, возбуждаемого тремя лазерами:
эффективный ``α[âb̂ − ξ]σ̂₊ + h.c.`` и полный ряд Лэмба-Дике с модами,
повёрнутыми на ``π/4``.

Доступные функции:
    - rotated_mode_ops: Повёрнутые моды ``Â``, ``B̂``
    - build_effective_hamiltonian: Эффективный гамильтониан
    - build_full_hamiltonian: Полный гамильтониан до порядка ``j_max``
    - reduction_check: Проверка сведения полного к эффективному

Пример использования:
    >>> from pcsim.hamiltonian import EffectiveParams, build_effective_hamiltonian
    >>> H = build_effective_hamiltonian(space, EffectiveParams(alpha=0.2, xi=2.0))
"""

__all__ = [
    "DriveParams",
    "EffectiveParams",
    "rotated_mode_ops",
    "build_effective_hamiltonian",
    "build_full_hamiltonian",
    "reduction_check",
]

from .models import DriveParams, EffectiveParams
from .rotation import rotated_mode_ops
from .builders import build_effective_hamiltonian, build_full_hamiltonian, reduction_check

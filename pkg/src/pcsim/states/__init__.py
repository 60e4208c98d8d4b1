"""
States Package

Состояния колебательного движения иона: фоковские и парные когерентные
состояния (PCS), нормировка через модифицированную функцию Бесселя и
метрики сравнения состояний.

Доступные функции:
    - bessel_i: Функция Бесселя ``I_q(x)`` прямым рядом
    - fock_state, pcs_state: Построение состояний
    - fidelity_state, fidelity_density, purity: Метрики
    - motional_marginal: Распределение ``P(n, m)``

Пример использования:
    >>> from pcsim.states import PcsLabel, pcs_state, purity
    >>> target = pcs_state(SpaceConfig(20), PcsLabel(2.0, 1), atom="g")
"""

__all__ = [
    "PcsLabel",
    "MotionalDistribution",
    "bessel_i",
    "fock_state",
    "pcs_state",
    "pcs_tail",
    "pcs_norm_squared",
    "pcs_coefficients",
    "fidelity_state",
    "fidelity_density",
    "purity",
    "motional_marginal",
    "mode_populations",
]

from .models import PcsLabel, MotionalDistribution
from .bessel import bessel_i
from .builders import fock_state, pcs_state, pcs_tail, pcs_norm_squared, pcs_coefficients
from .metrics import fidelity_state, fidelity_density, purity, motional_marginal, mode_populations

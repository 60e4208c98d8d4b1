"""
CLI Package

Разбор конфигурации, запуск сценариев и запись результатов.

Сценарии:
    - relax_me: Релаксация по уравнению Линдблада
    - relax_mc: Релаксация ансамблем квантовых траекторий
    - quench: Выключение несущей после выхода на стационар
    - pcs_build: Построение PCS и его распределения ``P(n, m)``
    - reduction_check: Сравнение полного и эффективного гамильтонианов

Пример использования:
    $ pcs-sim relax_me --config relax.toml --out out/
"""

__all__ = [
    "RunConfig",
    "InitialState",
    "parse_config",
    "load_document",
    "run_scenario",
    "arun_scenario",
    "compute_scenario",
    "build_parser",
    "main",
]

from .config import RunConfig, InitialState, parse_config, load_document
from .runner import run_scenario, arun_scenario, compute_scenario
from .main import build_parser, main

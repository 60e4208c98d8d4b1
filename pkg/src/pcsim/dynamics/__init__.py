"""
Dynamics Package

Эволюция во времени: детерминированное уравнение Линдблада, метод
квантовых скачков (одна траектория и воспроизводимый ансамбль),
проверка и прямой поиск стационарного состояния, выключение несущей.

Доступные функции:
    - integrate_master_equation: Интегрирование уравнения Линдблада
    - mc_trajectory, mc_ensemble: Метод квантовых скачков
    - detect_steady_state, solve_steady_state: Стационарное состояние
    - quench_carrier: Эволюция после выключения несущей

Пример использования:
    >>> from pcsim.dynamics import SimParams, integrate_master_equation
    >>> rho, series = integrate_master_equation(rho0, SimParams(t_final=200.0))
    >>> series.final("purity")
"""

__all__ = [
    "SimParams",
    "ObservableSeries",
    "TrajectoryResult",
    "EnsembleResult",
    "MasterEquationPropagator",
    "QuantumJumpPropagator",
    "System",
    "prepare_system",
    "resolve_hamiltonian",
    "stability_bound",
    "check_stability",
    "pcs_target",
    "lindblad_rhs",
    "integrate_master_equation",
    "detect_steady_state",
    "solve_steady_state",
    "trajectory_rng",
    "trajectory_seeds",
    "mc_trajectory",
    "mc_ensemble",
    "worker_count",
    "quench_carrier",
    "quenched_params",
]

from .models import SimParams, ObservableSeries, TrajectoryResult, EnsembleResult
from .system import System, prepare_system, resolve_hamiltonian, stability_bound, check_stability, pcs_target
from .master import (
    MasterEquationPropagator,
    lindblad_rhs,
    integrate_master_equation,
    detect_steady_state,
    solve_steady_state,
)
from .trajectory import QuantumJumpPropagator, trajectory_rng, trajectory_seeds, mc_trajectory
from .ensemble import mc_ensemble, worker_count
from .quench import quench_carrier, quenched_params

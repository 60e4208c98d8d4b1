__version__ = "0.1.0"

__all__ = [
    "SpaceConfig",
    "StateVector",
    "DensityOperator",
    "SparseOperator",
    "PcsLabel",
    "pcs_state",
    "fock_state",
    "EffectiveParams",
    "DriveParams",
    "SimParams",
    "integrate_master_equation",
    "mc_trajectory",
    "mc_ensemble",
    "quench_carrier",
]

from .core.models import SpaceConfig, StateVector, DensityOperator, SparseOperator
from .states import PcsLabel, pcs_state, fock_state
from .hamiltonian import EffectiveParams, DriveParams
from .dynamics import SimParams, integrate_master_equation, mc_trajectory, mc_ensemble, quench_carrier

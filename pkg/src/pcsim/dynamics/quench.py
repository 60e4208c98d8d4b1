import logging
from dataclasses import replace

from ..core.models import DensityOperator, StateVector
from ..hamiltonian import EffectiveParams
from ..hilbert import sector_of
from ..observables import SnapshotRequest
from .master import integrate_master_equation
from .models import ObservableSeries, SimParams
from .system import pcs_target, prepare_system, require_normalized
from .trajectory import QuantumJumpPropagator

logger = logging.getLogger(__name__)


def quenched_params(p: SimParams) -> SimParams:
    """Те же параметры с выключенной несущей: ``ξ = 0`` или ``Ω₀ = 0``."""
    if isinstance(p.effective, EffectiveParams):
        return replace(p, effective=p.effective.quenched())
    return replace(p, effective=replace(p.effective, omega0=0.0))


def quench_carrier(
    steady: DensityOperator | StateVector,
    p: SimParams,
    snapshots: SnapshotRequest | None = None,
) -> ObservableSeries:
    """
    Продолжает эволюцию после внезапного выключения несущей.

    Чистое состояние при ``Γ = 0`` ведётся как одна траектория без
    скачков; в остальных случаях интегрируется уравнение Линдблада.
    ``fidelity_pcs`` считается относительно PCS до выключения.

    Args:
        steady (DensityOperator | StateVector): (Почти) стационарное состояние
        p (SimParams): Параметры до выключения
        snapshots (SnapshotRequest | None): Моменты снимков ``P(n, m)``

    Returns:
        ObservableSeries: Ряд после выключения; ``t = 0`` соответствует моменту выключения

    Example:
        >>> series = quench_carrier(rho_steady, SimParams(t_final=100.0))
        >>> series.sz
    """
    after = quenched_params(p)
    charged = sector_of(steady)
    target = pcs_target(steady.space, p.xi, None if charged is None else charged.q)
    logger.info("Выключение несущей: t_final=%g, gamma=%g", after.t_final, after.gamma)
    if isinstance(steady, StateVector) and after.gamma == 0:
        require_normalized(steady)
        system = prepare_system(steady, after, target=target)
        return QuantumJumpPropagator(system, after.dt).simulate(steady, after, 0, snapshots).series
    rho = DensityOperator.from_state(steady) if isinstance(steady, StateVector) else steady
    _, series = integrate_master_equation(rho, after, snapshots=snapshots, target=target)
    return series

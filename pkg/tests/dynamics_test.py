import math

import numpy as np
import pytest

from pcsim.core.models import DensityOperator, SpaceConfig, SparseOperator, StateVector
from pcsim.dynamics import (
    SimParams,
    detect_steady_state,
    integrate_master_equation,
    lindblad_rhs,
    prepare_system,
    solve_steady_state,
    stability_bound,
)
from pcsim.exceptions import DimensionError, IntegrationError, ParameterError, TruncationError
from pcsim.hamiltonian import EffectiveParams, build_effective_hamiltonian
from pcsim.hilbert import atom_op, charge_sector
from pcsim.observables import SnapshotRequest, inversion
from pcsim.states import PcsLabel, fidelity_density, fock_state, pcs_state, purity

rng = np.random.default_rng(42)


def random_density(space: SpaceConfig, count: int = 3) -> DensityOperator:
    states = [
        StateVector(rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim), space).normalize()
        for _ in range(count)
    ]
    return DensityOperator.mixture(states, rng.dirichlet(np.ones(count)))


def pure(psi: StateVector) -> DensityOperator:
    return DensityOperator.from_state(psi)


def test_rhs_vacuum_ground_is_stationary():
    space = SpaceConfig(3)
    H = build_effective_hamiltonian(space, EffectiveParams(0.2, 0.0))
    drho = lindblad_rhs(pure(fock_state(space, "g", 0, 0)), H, 10.0)
    assert np.max(np.abs(drho.matrix)) < 1e-15


def test_rhs_decay_rate():
    space = SpaceConfig(2)
    drho = lindblad_rhs(pure(fock_state(space, "e", 0, 0)), SparseOperator.zero(space), 10.0)
    assert inversion(drho) == pytest.approx(-20.0)
    assert drho.trace() == pytest.approx(0.0, abs=1e-15)


def test_rhs_is_hermitian_and_traceless():
    space = SpaceConfig(2)
    H = build_effective_hamiltonian(space, EffectiveParams(0.2, 1.0 - 0.5j))
    drho = lindblad_rhs(random_density(space), H, 10.0)
    assert drho.hermiticity_error() < 1e-13
    assert abs(np.trace(drho.matrix)) < 1e-13


def test_rhs_dark_state(wide_space):
    H = build_effective_hamiltonian(wide_space, EffectiveParams(0.2, 2.0))
    drho = lindblad_rhs(pure(pcs_state(wide_space, PcsLabel(2.0, 1))), H, 10.0)
    assert np.max(np.abs(drho.matrix)) < 1e-8


def test_rhs_validation():
    space = SpaceConfig(2)
    with pytest.raises(DimensionError):
        lindblad_rhs(pure(fock_state(space, "g", 0, 0)), SparseOperator.zero(SpaceConfig(3)), 1.0)
    with pytest.raises(ParameterError):
        lindblad_rhs(pure(fock_state(space, "g", 0, 0)), SparseOperator.zero(space), -1.0)


def test_spontaneous_decay():
    space = SpaceConfig(1)
    p = SimParams(EffectiveParams(0.2, 0.0), gamma=10.0, dt=0.005, t_final=0.1, output_every=2)
    request = SnapshotRequest((0.0, 0.05))
    rho, series = integrate_master_equation(
        pure(fock_state(space, "e", 0, 0)), p, hamiltonian=SparseOperator.zero(space), snapshots=request
    )
    expected = 2.0 * np.exp(-10.0 * series.times) - 1.0
    assert len(series) == 11
    assert series.times[-1] == pytest.approx(0.1)
    assert np.max(np.abs(series.sz - expected)) < 1e-6
    assert inversion(rho) == pytest.approx(2.0 * math.exp(-1.0) - 1.0, abs=1e-6)
    assert set(series.snapshots) == {"t0", "t0.05"}
    assert series.snapshots["t0.05"][0, 0] == pytest.approx(1.0)
    # цель PCS(0, 0) совпадает с |g,0,0⟩
    assert np.allclose(series.fidelity_pcs, (1.0 - series.sz) / 2.0, rtol=0, atol=1e-12)


def test_no_dynamics_without_drive_or_decay():
    space = SpaceConfig(2)
    rho0 = random_density(space)
    p = SimParams(EffectiveParams(0.2, 0.0), gamma=0.0, dt=0.01, t_final=1.0, output_every=10)
    rho, series = integrate_master_equation(rho0, p, hamiltonian=SparseOperator.zero(space))
    assert np.max(np.abs(rho.matrix - rho0.matrix)) < 1e-12
    assert np.all(series.leak == 0.0)


def test_conserved_quantities():
    space = SpaceConfig(8)
    p = SimParams(EffectiveParams(0.2, 1.0), gamma=10.0, dt=0.005, t_final=5.0, output_every=50, leak_tol=1e-3)
    rho, series = integrate_master_equation(pure(fock_state(space, "e", 2, 1)), p)
    assert np.max(np.abs(series.q_mean - 1.0)) < 1e-9
    assert np.max(np.abs(series.trace - 1.0)) < 1e-9
    assert np.all(series.purity <= 1.0 + 1e-9)
    # при вещественных H и начальном состоянии поляризация чисто мнимая
    assert np.max(np.abs(series.pol_re)) < 1e-10
    assert np.all((series.fidelity_pcs >= -1e-12) & (series.fidelity_pcs <= 1.0 + 1e-12))
    assert np.all(np.diff(series.leak) >= 0.0)
    assert rho.hermiticity_error() < 1e-12
    assert rho.min_eigenvalue() > -1e-9


def test_step_refinement():
    space = SpaceConfig(6)
    finals = []
    for dt in (0.004, 0.002):
        p = SimParams(EffectiveParams(0.2, 1.0), gamma=10.0, dt=dt, t_final=2.0, output_every=100, leak_tol=1e-3)
        _, series = integrate_master_equation(pure(fock_state(space, "e", 2, 1)), p)
        finals.append(series.final("sz"))
    assert abs(finals[0] - finals[1]) < 1e-6


def test_stability_guard():
    space = SpaceConfig(3)
    p = SimParams(EffectiveParams(0.2, 1.0), gamma=10.0, dt=0.05, t_final=1.0)
    assert stability_bound(space, p) == 10.0
    with pytest.raises(IntegrationError):
        integrate_master_equation(pure(fock_state(space, "e", 1, 0)), p)


def test_leak_guard():
    space = SpaceConfig(2)
    p = SimParams(EffectiveParams(0.2, 2.0), gamma=10.0, dt=0.005, t_final=1.0, leak_tol=1e-12)
    with pytest.raises(TruncationError):
        integrate_master_equation(pure(fock_state(space, "e", 2, 1)), p)


def test_initial_trace_required():
    space = SpaceConfig(2)
    rho = pure(fock_state(space, "g", 0, 0))
    rho.matrix *= 2.0
    with pytest.raises(ParameterError):
        integrate_master_equation(rho, SimParams(t_final=0.1))


def test_charge_sector_is_used(wide_space):
    p = SimParams()
    system = prepare_system(pure(fock_state(wide_space, "e", 7, 6)), p)
    assert system.dim == 40
    mixed = StateVector(
        (fock_state(wide_space, "e", 1, 0).amplitudes + fock_state(wide_space, "e", 0, 0).amplitudes)
        / math.sqrt(2),
        wide_space,
    )
    assert prepare_system(mixed, p).dim == wide_space.dim


def test_detect_steady_state(wide_space):
    H = build_effective_hamiltonian(wide_space, EffectiveParams(0.2, 2.0))
    dark = pure(pcs_state(wide_space, PcsLabel(2.0, 1)))
    assert detect_steady_state(dark, H, 10.0, tol=1e-6)
    assert not detect_steady_state(pure(fock_state(wide_space, "e", 0, 0)), H, 10.0)
    # стационарно относительно распада, но не тёмное
    ground = pure(fock_state(wide_space, "g", 3, 2))
    assert not detect_steady_state(ground, H, 10.0)


def test_solve_steady_state():
    space = SpaceConfig(14)
    H = build_effective_hamiltonian(space, EffectiveParams(0.2, 2.0))
    rho = solve_steady_state(H, 10.0, charge_sector(space, 1))
    target = pcs_state(space, PcsLabel(2.0, 1))
    assert rho.trace() == pytest.approx(1.0)
    assert fidelity_density(rho, target) >= 0.99
    assert purity(rho) >= 0.99
    assert inversion(rho) == pytest.approx(-1.0, abs=1e-3)


def test_solve_steady_state_needs_decay():
    space = SpaceConfig(2)
    with pytest.raises(ParameterError):
        solve_steady_state(SparseOperator.zero(space), 0.0)
    with pytest.raises(DimensionError):
        solve_steady_state(SparseOperator.zero(space), 1.0, charge_sector(SpaceConfig(3), 0))


def test_lowering_in_system_matches_atom_op():
    space = SpaceConfig(2)
    system = prepare_system(random_density(space), SimParams(EffectiveParams(0.2, 1.0), t_final=1.0))
    assert system.dim == space.dim
    expected = atom_op(space, "sigma_minus").to_dense()
    assert np.array_equal(system.lowering.toarray(), expected)

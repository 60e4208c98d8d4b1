import math
import pickle
from dataclasses import replace

import numpy as np
import pytest
from scipy import stats

from pcsim.core.models import DensityOperator, SpaceConfig, SparseOperator
from pcsim.dynamics import (
    QuantumJumpPropagator,
    SimParams,
    integrate_master_equation,
    mc_ensemble,
    mc_trajectory,
    prepare_system,
    quench_carrier,
    quenched_params,
    trajectory_rng,
    worker_count,
)
from pcsim.exceptions import ParameterError, TrajectoryError, TruncationError
from pcsim.hamiltonian import DriveParams, EffectiveParams
from pcsim.observables import SnapshotRequest
from pcsim.states import PcsLabel, fock_state, pcs_state

relaxing = SimParams(EffectiveParams(0.2, 1.0), gamma=10.0, dt=0.005, t_final=1.0, output_every=40, leak_tol=1e-3)


def test_trajectory_rng_streams():
    first, seed_a = trajectory_rng(7, 0)
    again, seed_b = trajectory_rng(7, 0)
    other, seed_c = trajectory_rng(7, 1)
    assert seed_a == seed_b != seed_c
    assert 0 <= seed_a < 2**64
    draws = first.random(5)
    assert np.array_equal(draws, again.random(5))
    assert not np.array_equal(draws, other.random(5))


def test_unitary_trajectory_matches_master_equation():
    space = SpaceConfig(4)
    p = SimParams(EffectiveParams(0.2, 1.0), gamma=0.0, dt=0.01, t_final=2.0, output_every=20, leak_tol=1e-3)
    psi0 = fock_state(space, "e", 1, 0)
    result = mc_trajectory(psi0, p)
    _, series = integrate_master_equation(DensityOperator.from_state(psi0), p)
    assert result.jump_count == 0
    assert result.final_state.norm() == pytest.approx(1.0)
    assert np.max(np.abs(result.series.sz - series.sz)) < 1e-9
    assert np.max(np.abs(result.series.q_mean - 1.0)) < 1e-12
    assert np.all(np.isnan(result.series.purity))
    assert np.all(np.isnan(result.series.fidelity_pcs))


def test_dark_vacuum_never_jumps():
    space = SpaceConfig(3)
    p = SimParams(EffectiveParams(0.2, 0.0), gamma=10.0, dt=0.005, t_final=1.0, output_every=20)
    result = mc_trajectory(fock_state(space, "g", 0, 0), p, traj_index=5)
    assert result.jump_count == 0
    assert np.all(result.series.sz == -1.0)


def test_trajectory_is_reproducible():
    space = SpaceConfig(5)
    psi0 = fock_state(space, "e", 2, 1)
    first = mc_trajectory(psi0, relaxing, traj_index=3)
    again = mc_trajectory(psi0, relaxing, traj_index=3)
    other = mc_trajectory(psi0, relaxing, traj_index=4)
    assert np.array_equal(first.jump_times, again.jump_times)
    assert np.array_equal(first.series.sz, again.series.sz)
    assert first.seed_used == again.seed_used != other.seed_used
    assert np.all(first.jump_times < relaxing.t_final)
    assert np.all(np.diff(first.jump_times) > 0)


def test_trajectory_snapshots():
    space = SpaceConfig(5)
    request = SnapshotRequest((0.0, 0.5), ("start", "half"))
    result = mc_trajectory(fock_state(space, "e", 2, 1), relaxing, snapshots=request)
    assert result.series.snapshots["start"][2, 1] == pytest.approx(1.0)
    assert result.series.snapshots["half"].total() == pytest.approx(1.0)
    assert result.series.snapshots["half"].off_support(1) == pytest.approx(0.0, abs=1e-12)


def test_trajectory_requires_normalized_state():
    space = SpaceConfig(2)
    psi = fock_state(space, "e", 0, 0)
    psi.amplitudes *= 2.0
    with pytest.raises(ParameterError):
        mc_trajectory(psi, relaxing)


@pytest.mark.slow
def test_jump_times_are_exponential():
    space = SpaceConfig(1)
    gamma = 10.0
    p = SimParams(EffectiveParams(0.2, 0.0), gamma=gamma, dt=0.009, t_final=1.5, output_every=1000)
    psi0 = fock_state(space, "e", 0, 0)
    system = prepare_system(psi0, p, hamiltonian=SparseOperator.zero(space))
    propagator = QuantumJumpPropagator(system, p.dt)
    start = system.restrict_vector(psi0.amplitudes)
    times = []
    for index in range(10_000):
        rng, _ = trajectory_rng(11, index)
        run = propagator.run(start, rng, p, {})
        assert len(run.jump_times) == 1
        times.append(run.jump_times[0])
    statistic = stats.kstest(times, "expon", args=(0.0, 1.0 / gamma)).statistic
    assert statistic < 0.02


def test_single_trajectory_ensemble():
    space = SpaceConfig(5)
    psi0 = fock_state(space, "e", 2, 1)
    p = SimParams(EffectiveParams(0.2, 1.0), gamma=10.0, dt=0.005, t_final=1.0, n_traj=1, output_every=40,
                  leak_tol=1e-3)
    result = mc_ensemble(psi0, p)
    single = mc_trajectory(psi0, p, traj_index=0)
    assert result.n_traj == 1
    assert np.array_equal(result.mean.sz, single.series.sz)
    assert np.all(result.stderr.sz == 0.0)
    assert np.all(np.isnan(result.stderr.purity))
    assert np.allclose(result.mean.purity, 1.0, rtol=0, atol=1e-12)
    assert result.jump_stats()["total"] == single.jump_count


def test_ensemble_matches_master_equation():
    space = SpaceConfig(6)
    psi0 = fock_state(space, "e", 2, 1)
    p = SimParams(EffectiveParams(0.2, 1.0), gamma=10.0, dt=0.005, t_final=1.0, n_traj=500, output_every=40,
                  leak_tol=1e-3)
    result = mc_ensemble(psi0, p)
    _, exact = integrate_master_equation(DensityOperator.from_state(psi0), p)
    assert np.array_equal(result.mean.times, exact.times)
    for name in ("sz", "pol_im"):
        mean, stderr, reference = (getattr(s, name) for s in (result.mean, result.stderr, exact))
        assert np.all(np.abs(mean - reference) <= 3.0 * stderr + 1e-12), name
    assert np.max(np.abs(result.mean.q_mean - 1.0)) < 1e-12
    assert result.density.trace() == pytest.approx(1.0)


def test_ensemble_density_converges():
    space = SpaceConfig(4)
    psi0 = fock_state(space, "e", 1, 0)
    base = SimParams(EffectiveParams(0.2, 1.0), gamma=10.0, dt=0.005, t_final=0.5, output_every=100,
                     leak_tol=1e-3)
    exact, _ = integrate_master_equation(DensityOperator.from_state(psi0), base)
    for n_traj, bound in ((100, 0.3), (400, 0.15)):
        result = mc_ensemble(psi0, replace(base, n_traj=n_traj))
        assert np.max(np.abs(result.density.matrix - exact.matrix)) < bound


def test_ensemble_is_reproducible_across_workers(monkeypatch):
    monkeypatch.delenv("PCS_SIM_THREADS")
    space = SpaceConfig(3)
    psi0 = fock_state(space, "e", 1, 0)
    p = SimParams(EffectiveParams(0.2, 1.0), gamma=10.0, dt=0.005, t_final=0.5, n_traj=60, output_every=20,
                  master_seed=2024, leak_tol=1e-3)
    serial = mc_ensemble(psi0, p, workers=1)
    parallel = mc_ensemble(psi0, p, workers=3)
    np.testing.assert_array_equal(serial.mean.as_matrix(), parallel.mean.as_matrix())
    np.testing.assert_array_equal(serial.stderr.as_matrix(), parallel.stderr.as_matrix())
    np.testing.assert_array_equal(serial.density.matrix, parallel.density.matrix)
    np.testing.assert_array_equal(serial.jump_counts, parallel.jump_counts)


def test_failed_trajectory_is_reported():
    space = SpaceConfig(2)
    p = SimParams(EffectiveParams(0.2, 2.0), gamma=10.0, dt=0.005, t_final=0.5, n_traj=5, leak_tol=1e-12)
    with pytest.raises(TrajectoryError) as info:
        mc_ensemble(fock_state(space, "e", 2, 1), p)
    assert info.value.index == 0
    assert isinstance(info.value.cause, TruncationError)
    assert info.value.category == "truncation"
    assert info.value.exit_code == 5
    restored = pickle.loads(pickle.dumps(info.value))
    assert restored.index == 0
    assert restored.exit_code == 5


def test_trajectory_error_keeps_own_code_for_other_causes():
    error = TrajectoryError(3, RuntimeError("boom"))
    assert error.category == "trajectory"
    assert error.exit_code == 8


def test_worker_count(monkeypatch):
    monkeypatch.setenv("PCS_SIM_THREADS", "2")
    assert worker_count(8) == 2
    assert worker_count(1) == 1
    monkeypatch.setenv("PCS_SIM_THREADS", "many")
    with pytest.raises(ParameterError):
        worker_count()
    monkeypatch.setenv("PCS_SIM_THREADS", "0")
    with pytest.raises(ParameterError):
        worker_count()


def test_quenched_params():
    assert quenched_params(SimParams()).effective.xi == 0.0
    full = SimParams(DriveParams(omega0=0.005), model="full")
    assert quenched_params(full).effective.omega0 == 0.0
    assert quenched_params(full).effective.eta == 0.05


def test_quench_keeps_vacuum_dark():
    space = SpaceConfig(3)
    rho = DensityOperator.from_state(fock_state(space, "g", 0, 0))
    series = quench_carrier(rho, SimParams(gamma=10.0, dt=0.005, t_final=1.0, output_every=20))
    assert np.allclose(series.sz, -1.0, rtol=0, atol=1e-15)


def test_quench_revivals_are_periodic(wide_space):
    alpha = 0.2
    period = math.pi / alpha
    p = SimParams(EffectiveParams(alpha, 2.0), gamma=0.0, dt=period / 1600, t_final=2 * period, output_every=1)
    series = quench_carrier(pcs_state(wide_space, PcsLabel(2.0, 0)), p)
    assert len(series) == 3201
    assert series.sz[0] == pytest.approx(-1.0)
    first, second = series.sz[:1601], series.sz[1600:]
    assert np.max(np.abs(first - second)) < 1e-6
    assert np.corrcoef(first, second)[0, 1] > 0.99
    assert np.std(first) > 0.05


def test_quench_decay_damps_oscillations(wide_space):
    alpha = 0.2
    period = math.pi / alpha
    steady = pcs_state(wide_space, PcsLabel(2.0, 0))
    free = SimParams(EffectiveParams(alpha, 2.0), gamma=0.0, dt=period / 1600, t_final=period, output_every=10)
    damped = replace(free, gamma=10.0)
    free_sz = quench_carrier(steady, free).sz
    damped_series = quench_carrier(steady, damped)
    assert np.std(damped_series.sz[len(damped_series) // 2:]) < np.std(free_sz[len(free_sz) // 2:])
    assert np.max(np.abs(damped_series.q_mean)) < 1e-9

import math

import numpy as np
import pytest

from pcsim.exceptions import DimensionError, IndexBoundsError
from pcsim.hilbert import (
    AtomLevel,
    DensityOperator,
    SpaceConfig,
    SparseOperator,
    StateVector,
    apply_to_density,
    apply_to_state,
    atom_op,
    charge_op,
    charge_sector,
    conserves_charge,
    embed_state,
    flat_index,
    identity_op,
    ladder_op,
    number_op,
    pair_annihilation,
    sector_of,
    unflat_index,
)
from pcsim.states import fock_state

rng = np.random.default_rng(20240611)


def random_state(space: SpaceConfig) -> StateVector:
    amps = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    return StateVector(amps, space).normalize()


def dense_gap(left: SparseOperator, right: SparseOperator) -> float:
    return float(np.max(np.abs(left.to_dense() - right.to_dense())))


@pytest.mark.parametrize(
    "cutoff, s, n, m, index",
    [
        (20, "g", 0, 0, 0),
        (20, "e", 0, 0, 441),
        (20, "g", 20, 20, 440),
        (1, "e", 1, 1, 7),
        (3, AtomLevel.E, 2, 1, 16 + 9),
    ],
)
def test_flat_index(cutoff, s, n, m, index):
    assert flat_index(SpaceConfig(cutoff), s, n, m) == index


@pytest.mark.parametrize("cutoff", [1, 2, 5, 8])
def test_flat_index_is_bijection(cutoff):
    space = SpaceConfig(cutoff)
    assert space.dim == 2 * (cutoff + 1) ** 2
    seen = set()
    for s in (AtomLevel.G, AtomLevel.E):
        for n in range(cutoff + 1):
            for m in range(cutoff + 1):
                index = flat_index(space, s, n, m)
                assert unflat_index(space, index) == (s, n, m)
                seen.add(index)
    assert seen == set(range(space.dim))


@pytest.mark.parametrize(
    "s, n, m",
    [("g", 21, 0), ("e", 0, -1), ("x", 0, 0), (2, 0, 0)],
)
def test_flat_index_out_of_range(wide_space, s, n, m):
    with pytest.raises(IndexBoundsError):
        flat_index(wide_space, s, n, m)


def test_unflat_index_out_of_range(small_space):
    with pytest.raises(IndexBoundsError):
        unflat_index(small_space, small_space.dim)


def test_lower_a():
    space = SpaceConfig(4)
    result = apply_to_state(ladder_op(space, "a", "lower"), fock_state(space, "g", 3, 2))
    assert result.amplitude("g", 2, 2) == pytest.approx(math.sqrt(3))
    assert result.norm() == pytest.approx(math.sqrt(3))
    assert result.leak == 0.0


def test_lower_vacuum_is_zero(small_space):
    result = apply_to_state(ladder_op(small_space, "a", "lower"), fock_state(small_space, "g", 0, 3))
    assert result.norm() == 0.0


@pytest.mark.parametrize("mode, n, m", [("a", 5, 2), ("b", 1, 5)])
def test_raise_at_cutoff_records_leak(small_space, mode, n, m):
    psi = fock_state(small_space, "g", n, m)
    psi.amplitudes *= 0.5
    result = apply_to_state(ladder_op(small_space, mode, "raise"), psi)
    assert result.norm() == 0.0
    assert result.leak == pytest.approx((small_space.cutoff_n + 1) * 0.25)


@pytest.mark.parametrize("mode", ["a", "b"])
def test_raise_is_adjoint_of_lower(small_space, mode):
    lower = ladder_op(small_space, mode, "lower")
    raise_ = ladder_op(small_space, mode, "raise")
    assert np.max(np.abs((raise_.matrix - lower.adjoint().matrix).toarray())) == 0.0


def test_atom_operators(small_space):
    sp, sm, sz = (atom_op(small_space, w) for w in ("sigma_plus", "sigma_minus", "sigma_z"))
    assert dense_gap(sp.commutator(sm), sz) == 0.0
    assert dense_gap(sz.commutator(sp), sp * 2.0) == 0.0
    assert dense_gap(sz.commutator(sm), sm * -2.0) == 0.0
    anti = (sp @ sm + sm @ sp).matrix - identity_op(small_space).matrix
    assert np.max(np.abs(anti.toarray())) == 0.0

    lowered = apply_to_state(sm, fock_state(small_space, "e", 4, 3))
    assert lowered.amplitude("g", 4, 3) == 1.0
    assert apply_to_state(sm, fock_state(small_space, "g", 4, 3)).norm() == 0.0


def test_pair_annihilation(small_space):
    ab = pair_annihilation(small_space)
    assert apply_to_state(ab, fock_state(small_space, "g", 2, 2)).amplitude("g", 1, 1) == pytest.approx(2.0)
    assert apply_to_state(ab, fock_state(small_space, "g", 3, 0)).norm() == 0.0
    assert apply_to_state(ab, fock_state(small_space, "g", 0, 4)).norm() == 0.0
    element = ab.matrix[flat_index(small_space, "g", 1, 0), flat_index(small_space, "g", 2, 1)]
    assert element == pytest.approx(math.sqrt(2))


def test_charge_operator(wide_space):
    q = charge_op(wide_space)
    assert apply_to_state(q, fock_state(wide_space, "g", 7, 6)).amplitude("g", 7, 6) == 1.0
    assert apply_to_state(q, fock_state(wide_space, "e", 4, 4)).norm() == 0.0
    commutator = pair_annihilation(wide_space).commutator(q).matrix
    assert np.max(np.abs(commutator.toarray())) == 0.0


def test_number_operators(small_space):
    total = (number_op(small_space, "a") - number_op(small_space, "b")).matrix
    assert np.max(np.abs((total - charge_op(small_space).matrix).toarray())) == 0.0


def test_apply_matches_dense_oracle(small_space):
    op = ladder_op(small_space, "a", "raise") @ pair_annihilation(small_space) + atom_op(small_space, "sigma_plus") * 0.3j
    psi = random_state(small_space)
    result = apply_to_state(op, psi)
    assert np.max(np.abs(result.amplitudes - op.to_dense() @ psi.amplitudes)) < 1e-13


def test_apply_identity_and_zero(small_space):
    psi = random_state(small_space)
    assert np.array_equal(apply_to_state(identity_op(small_space), psi).amplitudes, psi.amplitudes)
    assert apply_to_state(SparseOperator.zero(small_space), psi).norm() == 0.0


def test_apply_space_mismatch():
    with pytest.raises(DimensionError):
        apply_to_state(identity_op(SpaceConfig(2)), fock_state(SpaceConfig(3), "g", 0, 0))


def test_apply_to_density(small_space):
    excited = DensityOperator.from_state(fock_state(small_space, "e", 0, 0))
    lowered = apply_to_density(atom_op(small_space, "sigma_minus"), excited, atom_op(small_space, "sigma_plus"))
    expected = DensityOperator.from_state(fock_state(small_space, "g", 0, 0))
    assert np.array_equal(lowered.matrix, expected.matrix)

    rho = DensityOperator.mixture([random_state(small_space), random_state(small_space)])
    same = apply_to_density(identity_op(small_space), rho, identity_op(small_space))
    assert np.allclose(same.matrix, rho.matrix, atol=0, rtol=0)

    sp, sm = atom_op(small_space, "sigma_plus"), atom_op(small_space, "sigma_minus")
    s, _, _ = small_space.grid
    projected = apply_to_density(sp @ sm, rho, identity_op(small_space))
    assert projected.trace() == pytest.approx(np.real(np.diag(rho.matrix))[s == 1].sum(), abs=1e-14)


def test_from_entries_rejects_duplicates(small_space):
    with pytest.raises(DimensionError):
        SparseOperator.from_entries([(0, 1, 1.0), (0, 1, 2.0)], small_space)
    with pytest.raises(IndexBoundsError):
        SparseOperator.from_entries([(0, small_space.dim, 1.0)], small_space)


def test_charge_sectors(wide_space):
    assert charge_sector(wide_space, 1).dim == 40
    assert charge_sector(wide_space, 0).dim == 42
    assert sector_of(fock_state(wide_space, "e", 7, 6)).q == 1
    mixed = StateVector(
        fock_state(wide_space, "g", 1, 0).amplitudes + fock_state(wide_space, "g", 0, 1).amplitudes, wide_space
    )
    assert sector_of(mixed) is None
    assert conserves_charge([pair_annihilation(wide_space), atom_op(wide_space, "sigma_minus")])
    assert not conserves_charge([ladder_op(wide_space, "a", "lower")])


def test_embed_state_drops_outer_amplitudes():
    big, small = SpaceConfig(6), SpaceConfig(3)
    psi = StateVector(
        (fock_state(big, "g", 1, 1).amplitudes + fock_state(big, "e", 5, 0).amplitudes) / math.sqrt(2), big
    )
    embedded = embed_state(psi, small)
    assert embedded.amplitude("g", 1, 1) == pytest.approx(1 / math.sqrt(2))
    assert embedded.leak == pytest.approx(0.5)

import cmath
import logging
import math
from dataclasses import replace

import numpy as np
import pytest

from pcsim.core.models import SpaceConfig
from pcsim.exceptions import ParameterError
from pcsim.hamiltonian import (
    DriveParams,
    EffectiveParams,
    build_effective_hamiltonian,
    build_full_hamiltonian,
    reduction_check,
    rotated_mode_ops,
)
from pcsim.hilbert import apply_to_state, charge_op, conserves_charge, flat_index, ladder_op
from pcsim.states import PcsLabel, fock_state, pcs_state

sideband_drive = DriveParams(omega0=0.0, omega1=1.0, omega2=1.0, phi1=0.0, phi2=math.pi, eta=0.05, j_max=0)
weak_drive = DriveParams(omega0=0.005, omega1=1.0, omega2=1.0, phi0=0.0, phi1=0.0, phi2=math.pi, eta=0.05)


def element(H, space, bra, ket) -> complex:
    return H.matrix[flat_index(space, *bra), flat_index(space, *ket)]


@pytest.mark.parametrize("xi", [2.0, 0.5 - 1.5j, 0.0])
def test_effective_elements(xi):
    space = SpaceConfig(6)
    H = build_effective_hamiltonian(space, EffectiveParams(0.2, xi))
    assert H.hermitian
    assert H.hermiticity_error() == 0.0
    assert element(H, space, ("e", 0, 0), ("g", 1, 1)) == pytest.approx(0.2)
    assert element(H, space, ("e", 2, 1), ("g", 3, 2)) == pytest.approx(0.2 * math.sqrt(6))
    assert element(H, space, ("e", 3, 4), ("g", 3, 4)) == pytest.approx(-0.2 * complex(xi))
    assert element(H, space, ("g", 3, 4), ("e", 3, 4)) == pytest.approx(-0.2 * complex(xi).conjugate())
    assert conserves_charge([H])
    assert np.max(np.abs(H.commutator(charge_op(space)).to_dense())) == 0.0


def test_effective_overflow_at_cutoff():
    space = SpaceConfig(3)
    H = build_effective_hamiltonian(space, EffectiveParams(0.2, 1.0))
    result = apply_to_state(H, fock_state(space, "e", 3, 2))
    assert result.leak == pytest.approx(0.2**2 * 4 * 3)
    assert apply_to_state(H, fock_state(space, "e", 1, 1)).leak == 0.0


def test_dark_state(wide_space):
    H = build_effective_hamiltonian(wide_space, EffectiveParams(0.2, 2.0))
    for q in (0, 1, 3):
        psi = pcs_state(wide_space, PcsLabel(2.0, q))
        assert apply_to_state(H, psi).norm() < 1e-8


def test_from_drive():
    p = EffectiveParams.from_drive(weak_drive)
    assert p.alpha == pytest.approx(0.05**2 * math.exp(-0.05**2 / 2))
    assert p.xi == pytest.approx(2.0)
    shifted = EffectiveParams.from_drive(DriveParams(omega0=0.005, phi0=0.5, eta=0.05))
    assert shifted.xi == pytest.approx(2.0 * cmath.exp(-0.5j))


@pytest.mark.parametrize(
    "kwargs",
    [{"eta": 0.0}, {"eta": 1.0}, {"j_max": -1}, {"omega0": -1.0}, {"j_max": 1.5}],
)
def test_drive_params_validation(kwargs):
    with pytest.raises(ParameterError):
        DriveParams(**kwargs)


def test_effective_params_validation():
    with pytest.raises(ParameterError):
        EffectiveParams(alpha=0.0)
    assert EffectiveParams(0.2, 2.0).quenched().xi == 0.0


def test_rotated_modes():
    space = SpaceConfig(4)
    A, B = rotated_mode_ops(space)
    a, b = ladder_op(space, "a", "lower"), ladder_op(space, "b", "lower")
    back = ((A - B) * (1 / math.sqrt(2))).to_dense()
    assert np.max(np.abs(back - a.to_dense())) < 1e-15
    forward = ((A + B) * (1 / math.sqrt(2))).to_dense()
    assert np.max(np.abs(forward - b.to_dense())) < 1e-15


def test_full_sideband_sign():
    space = SpaceConfig(5)
    H = build_full_hamiltonian(space, sideband_drive)
    eta2 = sideband_drive.eta**2
    expected = -math.exp(-eta2 / 2) * eta2
    assert element(H, space, ("g", 1, 1), ("e", 0, 0)) == pytest.approx(expected, rel=1e-12)
    assert element(H, space, ("g", 3, 2), ("e", 2, 1)) == pytest.approx(expected * math.sqrt(6), rel=1e-12)
    # слагаемые â†² от двух боковых полей взаимно гасятся
    assert abs(element(H, space, ("g", 2, 0), ("e", 0, 0))) < 1e-15
    assert H.hermiticity_error() == 0.0
    assert conserves_charge([H])


def test_full_carrier_only():
    space = SpaceConfig(4)
    drive = DriveParams(omega0=0.3, omega1=0.0, omega2=0.0, phi0=0.7, eta=0.1, j_max=1)
    H = build_full_hamiltonian(space, drive)
    carrier = math.exp(-0.01 / 2) * 0.3 * cmath.exp(0.7j)
    assert element(H, space, ("g", 2, 1), ("e", 2, 1)) == pytest.approx(carrier * (1 - 0.01 * 3), rel=1e-12)
    assert element(H, space, ("e", 0, 3), ("g", 0, 3)) == pytest.approx(
        (carrier * (1 - 0.01)).conjugate(), rel=1e-12
    )
    assert element(H, space, ("g", 1, 1), ("e", 0, 0)) == 0


def test_reduction_check():
    space = SpaceConfig(6)
    difference = reduction_check(space, weak_drive)
    scale = build_full_hamiltonian(space, weak_drive).max_abs()
    assert difference < 1e-12 * scale


@pytest.mark.parametrize(
    "drive",
    [
        DriveParams(omega0=0.005, phi2=math.pi / 2),
        DriveParams(omega0=0.005, phi1=0.3),
        DriveParams(omega0=0.005, omega1=1.0, omega2=0.5),
    ],
)
def test_reduction_check_requires_balanced_sidebands(drive):
    with pytest.raises(ParameterError):
        reduction_check(SpaceConfig(3), drive)


def test_series_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="pcsim.hamiltonian.builders"):
        build_full_hamiltonian(SpaceConfig(2), DriveParams(eta=0.05, j_max=0))
    assert any("Лэмба-Дике" in record.getMessage() for record in caplog.records)

    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="pcsim.hamiltonian.builders"):
        build_full_hamiltonian(SpaceConfig(2), DriveParams(eta=0.05, j_max=3))
    assert not caplog.records


def test_series_converges():
    space = SpaceConfig(3)
    drive = DriveParams(omega0=0.01, eta=0.2)
    H1, H2, H3 = (build_full_hamiltonian(space, replace(drive, j_max=j)) for j in (1, 2, 3))
    d12 = np.max(np.abs(H2.to_dense() - H1.to_dense()))
    d23 = np.max(np.abs(H3.to_dense() - H2.to_dense()))
    assert d23 < d12
    assert d23 < 1e-4 * H3.max_abs()

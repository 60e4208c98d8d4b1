"""
Observables Package

Измеряемые величины: инверсия, поляризация, статистика заряда,
населённость возбуждённого уровня и скорость флуоресценции.

Пример использования:
    >>> from pcsim.observables import inversion, polarization
    >>> sz = inversion(rho)
    >>> re, im = polarization(rho)
"""

__all__ = [
    "SnapshotRequest",
    "Probe",
    "expect",
    "inversion",
    "polarization",
    "bloch_vector",
    "charge_stats",
    "excited_population",
    "fluorescence_rate",
]

from .models import SnapshotRequest
from .probe import Probe
from .expectation import (
    expect,
    inversion,
    polarization,
    bloch_vector,
    charge_stats,
    excited_population,
    fluorescence_rate,
)

"""
Physical constants and energy-unit conversion.
Energies are handled internally in units of the ensemble scale k and only
converted to J or eV at I/O boundaries.
"""

from enum import Enum

from scipy import constants

HBAR = constants.hbar
ELECTRON_VOLT = constants.electron_volt
BOHR_MAGNETON = constants.physical_constants["Bohr magneton"][0]
NUCLEAR_MAGNETON = constants.physical_constants["nuclear magneton"][0]
ELECTRON_G_FACTOR = abs(constants.physical_constants["electron g factor"][0])

# 87Rb ground state
RB87_NUCLEAR_SPIN = 1.5
RB87_HYPERFINE_SPLITTING = 2.0 * constants.pi * 6.834682610904e9  # rad/s
RB87_NUCLEAR_MOMENT = 2.751818 * NUCLEAR_MAGNETON  # J/T
RB87_GYROMAGNETIC_RATIO = 2.0 * constants.pi * 6.99583e9  # rad/s/T, F=2 manifold


class EnergyUnit(Enum):
    """Units in which energies are reported"""
    JOULE = "J"
    ELECTRON_VOLT = "eV"


def joules_to_ev(energy: float) -> float:
    return energy / ELECTRON_VOLT


def ev_to_joules(energy: float) -> float:
    return energy * ELECTRON_VOLT


def convert_energy(energy: float, unit: EnergyUnit) -> float:
    """Convert an energy in J to the requested reporting unit"""
    if unit is EnergyUnit.ELECTRON_VOLT:
        return joules_to_ev(energy)
    return energy

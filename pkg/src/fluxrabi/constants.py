"""Physical constants and unit conversion helpers.

Energies are handled throughout as ordinary frequencies in GHz (the energy
divided by the Planck constant).  Circuit element values use pH for
inductances, pF for the oscillator capacitance, fF for the junction
capacitance, nA for currents, uV for voltages, and external flux in units of
the flux quantum Phi0 = h/(2e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import scipy.constants


@dataclass(frozen=True)
class PhysicalConstants:
    """Planck constant, elementary charge, and the quantities derived from them."""

    h: float = scipy.constants.h
    e: float = scipy.constants.e
    hbar: float = scipy.constants.h / (2.0 * math.pi)
    Phi0: float = scipy.constants.h / (2.0 * scipy.constants.e)

    def __post_init__(self) -> None:
        if not math.isclose(self.hbar, self.h / (2.0 * math.pi), rel_tol=1e-15):
            raise ValueError("hbar must equal h / (2 pi)")
        if not math.isclose(self.Phi0, self.h / (2.0 * self.e), rel_tol=1e-15):
            raise ValueError("Phi0 must equal h / (2 e)")


CONSTANTS = PhysicalConstants()

PACKAGE_VERSION = "0.1.0"

# SI scale factors for the internal unit system.
GHZ = 1e9
PH = 1e-12
PF = 1e-12
FF = 1e-15
NA = 1e-9
UV = 1e-6


def charging_energy_ghz(c_farad: float) -> float:
    """Charging energy e^2 / (2 C) of a capacitance in Farad, as GHz."""
    return CONSTANTS.e**2 / (2.0 * c_farad * CONSTANTS.h * GHZ)


def inductive_energy_ghz(l_henry: float) -> float:
    """Inductive energy [Phi0/(2 pi)]^2 / L of an inductance in Henry, as GHz."""
    phi_j = CONSTANTS.Phi0 / (2.0 * math.pi)
    return phi_j**2 / (l_henry * CONSTANTS.h * GHZ)


def josephson_inductance_ph(ej_ghz: float) -> float:
    """Junction inductance [Phi0/(2 pi)]^2 / EJ for EJ in GHz, as pH."""
    phi_j = CONSTANTS.Phi0 / (2.0 * math.pi)
    return phi_j**2 / (ej_ghz * GHZ * CONSTANTS.h) / PH


def current_flux_to_ghz(current_na: float, flux_phi0: float) -> float:
    """Energy of a current (nA) threading a flux (Phi0 units), as GHz."""
    energy = (current_na * NA) * (flux_phi0 * CONSTANTS.Phi0)
    return energy / (CONSTANTS.h * GHZ)


def bias_to_ghz(ip_na: float, phix_phi0: float) -> float:
    """Qubit energy bias 2 Ip (Phix - Phi0/2) in GHz for Ip in nA."""
    return 2.0 * current_flux_to_ghz(ip_na, phix_phi0 - 0.5)

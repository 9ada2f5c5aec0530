"""Shared fixtures: reference circuits and cached expensive solves.

The module-level lru_cache helpers are shared by every test module in the
session, so the deep-strong-coupling fits and the big eigensolves run at
most once no matter which tests request them.
"""

import dataclasses
from functools import lru_cache

import numpy as np
import pytest

from fluxrabi.circuit import effective_inductances, energy_scales, y_delta
from fluxrabi.config import reference_config
from fluxrabi.coupled import build_coupled_eigenbasis, qubit_node_energies
from fluxrabi.fitting import TransitionData, fit_rabi, fit_transition_pairs
from fluxrabi.qubit import characterize_qubit
from fluxrabi.rabi import map_circuit_to_rabi, map_circuit_to_rabi_charge

# Bias grid the spectrum fits run on.
FIT_GRID = np.linspace(0.494, 0.506, 41)


@dataclasses.dataclass(frozen=True)
class CircuitParts:
    """A reference circuit with its derived network quantities."""

    raw: object
    star: object
    eff: object
    scales: object


@lru_cache(maxsize=None)
def circuit_parts(lc, phix=0.5):
    """Reference circuit (fixed branch sums 800 / 2050 pH) at one Lc."""
    raw = dataclasses.replace(reference_config(lc=lc).circuit, phix=phix)
    star = y_delta(raw)
    eff = effective_inductances(star, raw)
    scales = energy_scales(raw, eff)
    return CircuitParts(raw=raw, star=star, eff=eff, scales=scales)


@lru_cache(maxsize=None)
def mapped_params(lc, gauge):
    """First-principles model parameters of one gauge at one Lc."""
    p = circuit_parts(lc)
    ecj, ej, elfq = qubit_node_energies(gauge, p.raw, p.eff, p.scales)
    fit = characterize_qubit(ecj, ej, elfq)
    if gauge == "flux":
        return map_circuit_to_rabi(p.raw, p.eff, p.scales, fit)
    return map_circuit_to_rabi_charge(p.raw, p.eff, p.scales, fit)


@lru_cache(maxsize=None)
def coupled_fit_levels(lc):
    """Lowest 8 coupled flux-gauge levels over FIT_GRID, truncation (8, 60)."""
    p = circuit_parts(lc)
    rows = []
    for phix in FIT_GRID:
        raw = dataclasses.replace(p.raw, phix=float(phix))
        spec = build_coupled_eigenbasis("flux", raw, p.eff, p.scales,
                                        n_qubit=8, n_fock=60, verify=False)
        rows.append(spec.energies[:8])
    return np.array(rows)


@lru_cache(maxsize=None)
def fit_data(lc, max_level):
    pairs = fit_transition_pairs(max_level)
    energies = coupled_fit_levels(lc)
    table = np.column_stack([energies[:, j] - energies[:, i]
                             for i, j in pairs])
    return TransitionData.from_pair_table(FIT_GRID, table, pairs)


@lru_cache(maxsize=None)
def fit_result(lc, variant, max_level=3):
    """Spectrum fit of one model variant to the exact flux-gauge data."""
    return fit_rabi(fit_data(lc, max_level), mapped_params(lc, variant))


@pytest.fixture(scope="session")
def parts20():
    return circuit_parts(20.0)


@pytest.fixture(scope="session")
def parts350():
    return circuit_parts(350.0)


@pytest.fixture(scope="session")
def mapped():
    return mapped_params


@pytest.fixture(scope="session")
def fits():
    return fit_result

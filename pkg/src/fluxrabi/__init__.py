"""Flux qubit coupled to an LC oscillator: spectra, gauges, and model fits.

The library quantizes a three-inductor coupling network joining a
single-junction flux qubit to an LC oscillator, solves the exact coupled
spectrum in both the flux and charge gauges, maps the circuit onto
two-level oscillator models, and quantifies how well those models track
the exact levels.
"""

from .circuit import (
    EffectiveInductances,
    EnergyScales,
    RawCircuit,
    StarInductances,
    charge_gauge_capacitance_pf,
    charge_gauge_frequency_ghz,
    effective_inductances,
    energy_scales,
    y_delta,
)
from .config import ConfigError, NumericsConfig, RunConfig, load_config, reference_config
from .constants import CONSTANTS, PACKAGE_VERSION
from .coupled import (
    CoupledSpectrum,
    Observables,
    build_coupled_eigenbasis,
    build_coupled_planewave,
    observables,
    transitions,
)
from .fitting import (RabiFitResult, TransitionData, fit_rabi,
                      fit_transition_pairs, ground_residual_mhz2,
                      model_pair_table, model_transition_table)
from .perturbation import (
    ProductCoupling,
    ShiftTable,
    circuit_coupling,
    dispersive_shift,
    first_order_shift,
    second_order_table,
)
from .planewave import (
    BasisRangeWarning,
    EigensolveError,
    PlaneWaveBasis,
    SubsystemSpectrum,
    diagonalize_flux_qubit,
    diagonalize_oscillator,
)
from .qubit import (
    QubitMatrixElements,
    TwoLevelFit,
    TwoLevelFitError,
    characterize_qubit,
    fit_two_level,
    matrix_elements,
)
from .rabi import (
    RabiParams,
    RabiSpectrum,
    diagonalize_rabi,
    map_circuit_to_rabi,
    map_circuit_to_rabi_charge,
    rabi_hamiltonian,
)
from .tasks import TASKS, run

__version__ = PACKAGE_VERSION

__all__ = [
    "BasisRangeWarning",
    "CONSTANTS",
    "ConfigError",
    "CoupledSpectrum",
    "EffectiveInductances",
    "EigensolveError",
    "EnergyScales",
    "NumericsConfig",
    "Observables",
    "PACKAGE_VERSION",
    "PlaneWaveBasis",
    "ProductCoupling",
    "QubitMatrixElements",
    "RabiFitResult",
    "RabiParams",
    "RabiSpectrum",
    "RawCircuit",
    "RunConfig",
    "ShiftTable",
    "StarInductances",
    "SubsystemSpectrum",
    "TASKS",
    "TransitionData",
    "TwoLevelFit",
    "TwoLevelFitError",
    "build_coupled_eigenbasis",
    "build_coupled_planewave",
    "characterize_qubit",
    "charge_gauge_capacitance_pf",
    "charge_gauge_frequency_ghz",
    "circuit_coupling",
    "diagonalize_flux_qubit",
    "diagonalize_oscillator",
    "diagonalize_rabi",
    "dispersive_shift",
    "effective_inductances",
    "energy_scales",
    "first_order_shift",
    "fit_rabi",
    "fit_transition_pairs",
    "fit_two_level",
    "ground_residual_mhz2",
    "load_config",
    "map_circuit_to_rabi",
    "map_circuit_to_rabi_charge",
    "matrix_elements",
    "model_pair_table",
    "model_transition_table",
    "observables",
    "rabi_hamiltonian",
    "reference_config",
    "run",
    "second_order_table",
    "transitions",
    "y_delta",
]

"""Exact diagonalization and fermionic concurrence of the extended Hubbard dimer."""
from .dimer import ground_concurrence, solve_dimer, thermal_concurrence, threshold_temperature
from .entanglement import (SpinSectorRDM, concurrences, entanglement_of_formation, eq5_concurrence,
                           two_site_rdm, wootters_concurrence, xform_concurrence)
from .fock import Spin, enumerate_sector
from .model import ModelParams, build_hamiltonian, dimer_params
from .pipeline import EnsembleChoice, evaluate_analytic, evaluate_ed
from .spectra import EnsembleSpec, expectation, solve, thermal_weights
from .sweep import Axis, SweepConfig, figure_preset, run_sweep

__version__ = "0.1.0"

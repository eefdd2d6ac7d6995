"""Single-point evaluation of every observable, by exact diagonalization or by the dimer formulas."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import dimer
from .dimer import ThresholdResult, bisect_threshold
from .entanglement import PairCorrelators, concurrences, entanglement_of_formation
from .errors import DomainError
from .fock import sectors_with_particles
from .model import ModelParams
from .spectra import EnsembleSpec, Spectrum, check_temperature, particle_sectors, solve, thermal_weights

OBSERVABLES = ("c_wootters", "c_eq5", "e_f", "z", "u_minus", "energy", "t_th")

CANONICAL_SPACE = "canonical"
GRAND_SPACE = "grand"


@dataclass(frozen=True)
class EnsembleChoice:
    """Ensemble descriptor independent of lattice size.

    ``T=None`` selects the ground-state mixture.  ``filling`` is the particle
    number of the canonical state space (``None`` means half filling, N = L).
    """

    state_space: str = CANONICAL_SPACE
    T: Optional[float] = None
    filling: Optional[int] = None

    def __post_init__(self):
        if self.state_space not in (CANONICAL_SPACE, GRAND_SPACE):
            raise DomainError(f"unknown state space {self.state_space!r}")
        if self.T is not None:
            check_temperature(self.T)

    @property
    def is_ground(self) -> bool:
        return self.T is None

    def with_T(self, T: Optional[float]) -> "EnsembleChoice":
        return EnsembleChoice(self.state_space, T, self.filling)

    def sector_keys(self, L: int) -> Optional[tuple]:
        if self.state_space == GRAND_SPACE:
            return None
        return particle_sectors(L, L if self.filling is None else self.filling)

    def to_spec(self, L: int) -> EnsembleSpec:
        keys = self.sector_keys(L)
        if self.T is None:
            return EnsembleSpec.ground(keys)
        if keys is None:
            return EnsembleSpec.grand(self.T)
        return EnsembleSpec.canonical(self.T, keys)

    def token(self) -> str:
        if self.T is None:
            return "ground" if self.state_space == CANONICAL_SPACE else "ground:grand"
        return f"{self.state_space}:{self.T!r}"

    @classmethod
    def parse(cls, token: str, filling: Optional[int] = None) -> "EnsembleChoice":
        """``ground``, ``ground:grand``, ``canonical:T`` or ``grand:T`` (T = 0 means ground)."""
        kind, _, arg = token.partition(":")
        if kind == "ground":
            if arg not in ("", CANONICAL_SPACE, GRAND_SPACE):
                raise DomainError(f"bad ensemble token {token!r}")
            return cls(arg or CANONICAL_SPACE, None, filling)
        if kind in (CANONICAL_SPACE, GRAND_SPACE) and arg:
            T = float(arg)
            return cls(kind, None if T == 0.0 else T, filling)
        raise DomainError(f"bad ensemble token {token!r}")


def _spectrum(params: ModelParams, choice: EnsembleChoice) -> Spectrum:
    keys = choice.sector_keys(params.L)
    if keys is None:
        return solve(params)
    n = params.L if choice.filling is None else choice.filling
    return solve(params, sectors_with_particles(params.L, n))


def threshold_from_correlators(corr: PairCorrelators) -> Optional[ThresholdResult]:
    """Root in T of ``|<c†_j c_l>| - <n_j n_l>`` over the state space held by ``corr``.

    Returns ``None`` if the concurrence already vanishes at the lowest
    temperature probed (no threshold exists).
    """
    E = corr.energies - corr.energies.min()

    def f(T: float) -> float:
        b = np.exp(-E / T)
        return (abs(b @ corr.z) - b @ corr.n_jl) / b.sum()

    if not f(dimer.T_START) > 0:
        return None
    return bisect_threshold(f)


def threshold_temperature_ed(params: ModelParams, choice: EnsembleChoice = EnsembleChoice(),
                             j: int = 0, l: int = 1) -> Optional[ThresholdResult]:
    return threshold_from_correlators(PairCorrelators(_spectrum(params, choice), j, l))


def evaluate_ed(params: ModelParams, choice: EnsembleChoice, observables: Sequence[str] = OBSERVABLES,
                j: int = 0, l: int = 1) -> dict:
    spectrum = _spectrum(params, choice)
    corr = PairCorrelators(spectrum, j, l)
    out = {}
    needs_state = set(observables) - {"t_th"}
    if needs_state:
        weights = thermal_weights(spectrum, choice.to_spec(params.L))
        rdm = corr.rdm(weights).check()
        res = concurrences(rdm)
        out.update(c_wootters=res.c_wootters, c_eq5=res.c_eq5, e_f=res.e_f, z=rdm.z,
                   u_minus=rdm.u_minus, energy=float(weights.p @ spectrum.energies))
    if "t_th" in observables:
        th = threshold_from_correlators(corr)
        out["t_th"] = math.nan if th is None else th.t_th
    return {k: out[k] for k in observables}


def evaluate_analytic(U: float, V: float, choice: EnsembleChoice,
                      observables: Sequence[str] = OBSERVABLES) -> dict:
    """Dimer formulas; defined only for the zero-field, two-electron canonical ensemble."""
    if choice.state_space != CANONICAL_SPACE or choice.filling not in (None, 2):
        raise DomainError("analytic route covers the canonical two-electron dimer only")
    out = {}
    if choice.T is None:
        sol = dimer.solve_dimer(U, V)
        c = abs(sol.sin2theta)
        out.update(z=0.5 * sol.sin2theta, u_minus=0.0, energy=sol.E1)
    else:
        corr = dimer.thermal_correlators(U, V, choice.T)
        c = dimer.thermal_concurrence(U, V, choice.T)
        out.update(z=corr["z"], u_minus=corr["u_minus"], energy=corr["energy"])
    c = min(c, 1.0)
    out.update(c_wootters=c, c_eq5=c, e_f=entanglement_of_formation(c))
    if "t_th" in observables:
        th = dimer.threshold_temperature(U, V)
        out["t_th"] = math.nan if th is None else th.t_th
    return {k: out[k] for k in observables}

"""Sector-wise exact diagonalization and ensemble averages.

A :class:`Spectrum` is a list of per-sector eigen-decompositions.  Everything
downstream works on flat arrays aligned with ``Spectrum.energies``: Boltzmann
weights from :func:`thermal_weights` and per-eigenstate diagonal matrix
elements from :func:`state_expectations`, so any ensemble average is a dot
product of the two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, NumericError
from .fock import Sector, all_sectors, apply_annihilate, apply_create, enumerate_sector, mode_index
from .model import HamiltonianMatrix, ModelParams, build_hamiltonian

DEGENERACY_TOL = 1e-9
MIN_TEMPERATURE = 1e-6
RESIDUAL_TOL = 1e-10

GROUND = "ground"
CANONICAL = "canonical"
GRAND = "grand_canonical"


# --- operators -------------------------------------------------------------

CREATE, ANNIHILATE, NUMBER = "+", "-", "n"


@dataclass(frozen=True)
class OperatorSpec:
    """Sum of scalar-weighted products of mode operators.

    Each term is ``(coeff, factors)``; factors are ``(kind, mode)`` pairs
    written left to right, so the rightmost factor acts first.
    """

    terms: tuple

    def __add__(self, other: "OperatorSpec") -> "OperatorSpec":
        return OperatorSpec(self.terms + other.terms)

    def __mul__(self, other):
        if isinstance(other, OperatorSpec):
            return OperatorSpec(tuple(
                (c1 * c2, f1 + f2) for c1, f1 in self.terms for c2, f2 in other.terms
            ))
        return OperatorSpec(tuple((c * float(other), f) for c, f in self.terms))

    __rmul__ = __mul__

    def modes(self) -> set[int]:
        return {m for _, factors in self.terms for _, m in factors}


def _single(kind: str, site: int, spin: int) -> OperatorSpec:
    return OperatorSpec(((1.0, ((kind, mode_index(site, spin)),)),))


def create(site: int, spin: int) -> OperatorSpec:
    return _single(CREATE, site, spin)


def annihilate(site: int, spin: int) -> OperatorSpec:
    return _single(ANNIHILATE, site, spin)


def number(site: int, spin: int) -> OperatorSpec:
    return _single(NUMBER, site, spin)


def hopping(j: int, l: int, spin: int) -> OperatorSpec:
    """``c†_{j,spin} c_{l,spin}``."""
    return create(j, spin) * annihilate(l, spin)


def _apply_factors(state: int, factors) -> Optional[tuple[int, int]]:
    sign = 1
    for kind, m in reversed(factors):
        if kind == NUMBER:
            if not (state >> m) & 1:
                return None
            continue
        res = apply_create(state, m) if kind == CREATE else apply_annihilate(state, m)
        if res is None:
            return None
        state, s = res
        sign *= s
    return state, sign


def _check_conserving(op: OperatorSpec) -> None:
    for _, factors in op.terms:
        net = [0, 0]
        for kind, m in factors:
            if kind != NUMBER:
                net[m & 1] += 1 if kind == CREATE else -1
        if net != [0, 0]:
            raise DomainError("operator changes (N_up, N_down); only sector-conserving operators are supported")


@lru_cache(maxsize=4096)
def operator_matrix(op: OperatorSpec, sector: Sector) -> np.ndarray:
    _check_conserving(op)
    if op.modes() and max(op.modes()) >= 2 * sector.L:
        raise DomainError("operator references a site outside the lattice")
    dim = sector.dim
    M = np.zeros((dim, dim))
    for col, s in enumerate(sector.states):
        for coeff, factors in op.terms:
            res = _apply_factors(s, factors)
            if res is not None:
                M[sector.index_of[res[0]], col] += coeff * res[1]
    return M


# --- spectra ---------------------------------------------------------------

@dataclass(frozen=True)
class SectorSpectrum:
    sector: Sector
    energies: np.ndarray = field(repr=False)
    vectors: np.ndarray = field(repr=False)   # columns are eigenvectors


def diagonalize(H: HamiltonianMatrix) -> SectorSpectrum:
    A = H.matrix
    try:
        w, v = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed on sector {H.sector.key}: {exc}") from exc
    residual = float(np.linalg.norm(A @ v - v * w))
    scale = float(np.linalg.norm(A))
    if residual > RESIDUAL_TOL * scale:
        raise NumericError(f"eigen-residual {residual:.3e} too large on sector {H.sector.key}", residual)
    return SectorSpectrum(H.sector, w, v)


@dataclass(frozen=True)
class Spectrum:
    L: int
    blocks: tuple

    @property
    def energies(self) -> np.ndarray:
        return np.concatenate([b.energies for b in self.blocks])

    @property
    def keys(self) -> list[tuple[int, int]]:
        return [b.sector.key for b in self.blocks]

    def block(self, key) -> SectorSpectrum:
        for b in self.blocks:
            if b.sector.key == tuple(key):
                return b
        raise KeyError(key)


def solve(params: ModelParams, sectors: Optional[Iterable[Sector]] = None) -> Spectrum:
    """Diagonalize ``params`` on the given sectors (default: every sector)."""
    sectors = all_sectors(params.L) if sectors is None else list(sectors)
    return Spectrum(params.L, tuple(diagonalize(build_hamiltonian(params, s)) for s in sectors))


# --- ensembles -------------------------------------------------------------

def check_temperature(T) -> None:
    if T is None or not T > 0:
        raise DomainError(f"thermal ensembles need T > 0, got {T}")
    if T < MIN_TEMPERATURE:
        raise DomainError(f"T={T} below {MIN_TEMPERATURE}; use the ground ensemble")


@dataclass(frozen=True)
class EnsembleSpec:
    """Statistical weighting rule.

    ``sectors`` restricts the state space (``None`` means every sector of the
    lattice).  ``ground`` is the T -> 0+ limit: a uniform mixture over all
    states within ``DEGENERACY_TOL`` of the lowest energy.
    """

    kind: str
    T: Optional[float] = None
    sectors: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in (GROUND, CANONICAL, GRAND):
            raise DomainError(f"unknown ensemble kind {self.kind!r}")
        if self.kind != GROUND:
            check_temperature(self.T)
        if self.kind == CANONICAL and not self.sectors:
            raise DomainError("canonical ensemble needs a sector list")
        if self.kind == GRAND and self.sectors is not None:
            raise DomainError("grand-canonical ensemble runs over all sectors")
        if self.sectors is not None:
            object.__setattr__(self, "sectors", tuple(tuple(k) for k in self.sectors))

    @classmethod
    def ground(cls, sectors: Optional[Sequence] = None) -> "EnsembleSpec":
        return cls(GROUND, None, None if sectors is None else tuple(sectors))

    @classmethod
    def canonical(cls, T: float, sectors: Sequence) -> "EnsembleSpec":
        return cls(CANONICAL, T, tuple(sectors))

    @classmethod
    def grand(cls, T: float) -> "EnsembleSpec":
        return cls(GRAND, T)


def particle_sectors(L: int, n: int) -> tuple:
    """Sector keys with ``n_up + n_down == n``."""
    return tuple((nu, n - nu) for nu in range(L + 1) if 0 <= n - nu <= L)


@dataclass(frozen=True)
class Weights:
    """Normalized weights aligned with ``Spectrum.energies``.

    ``log_z`` is the log of the partition function for thermal kinds and the
    log of the ground degeneracy for the ground kind.
    """

    p: np.ndarray = field(repr=False)
    log_z: float
    e_min: float

    @property
    def Z(self) -> float:
        return math.exp(self.log_z)


def _membership(spectrum: Spectrum, ens: EnsembleSpec) -> np.ndarray:
    keys = spectrum.keys
    if ens.sectors is None:
        if len(set(keys)) != (spectrum.L + 1) ** 2:
            raise DomainError("ensemble needs every sector but the spectrum is partial")
        wanted = set(keys)
    else:
        wanted = set(ens.sectors)
        missing = wanted - set(keys)
        if missing:
            raise DomainError(f"spectrum lacks sectors {sorted(missing)}")
    return np.concatenate([np.full(b.energies.size, b.sector.key in wanted) for b in spectrum.blocks])


def thermal_weights(spectrum: Spectrum, ens: EnsembleSpec) -> Weights:
    E = spectrum.energies
    inside = _membership(spectrum, ens)
    e_min = float(E[inside].min())
    if ens.kind == GROUND:
        mask = inside & (E - e_min <= DEGENERACY_TOL)
        p = mask / mask.sum()
        return Weights(p, math.log(mask.sum()), e_min)
    boltz = np.zeros_like(E)
    boltz[inside] = np.exp(-(E[inside] - e_min) / ens.T)
    z_shifted = boltz.sum()
    return Weights(boltz / z_shifted, math.log(z_shifted) - e_min / ens.T, e_min)


@lru_cache(maxsize=1024)
def _stacked_matrices(ops: tuple, sector: Sector) -> np.ndarray:
    return np.stack([operator_matrix(op, sector) for op in ops])


def state_expectations_many(ops: Sequence[OperatorSpec], spectrum: Spectrum) -> np.ndarray:
    """``<n|op_k|n>`` as an array of shape ``(len(ops), n_states)``."""
    ops = tuple(ops)
    out = []
    for b in spectrum.blocks:
        M = _stacked_matrices(ops, b.sector)
        out.append(np.einsum("ij,kij->kj", b.vectors, M @ b.vectors))
    return np.concatenate(out, axis=1)


def state_expectations(op: OperatorSpec, spectrum: Spectrum) -> np.ndarray:
    """``<n|op|n>`` for every eigenstate, aligned with ``spectrum.energies``."""
    return state_expectations_many((op,), spectrum)[0]


def expectation(op: OperatorSpec, spectrum: Spectrum, ens) -> float:
    """Ensemble average of ``op``; ``ens`` is an :class:`EnsembleSpec` or precomputed :class:`Weights`."""
    w = ens if isinstance(ens, Weights) else thermal_weights(spectrum, ens)
    return float(w.p @ state_expectations(op, spectrum))

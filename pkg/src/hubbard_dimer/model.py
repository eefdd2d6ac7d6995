"""Extended Hubbard Hamiltonian in fixed ``(n_up, n_down)`` sectors.

    H = -t sum_{sigma, bonds} (c†_{a,sigma} c_{b,sigma} + h.c.)
        + U sum_j n_{j,up} n_{j,down} + V sum_bonds n_a n_b
        + sum_j mu_j n_j - sum_j B_j (n_{j,up} - n_{j,down}) / 2
        - global_mu * N

Periodic bonds are ``(j, j+1 mod L)`` for every ``j``.  For ``L = 2`` that
lists the single physical bond twice, which is the dimer convention with
hopping ``2t`` and interaction ``2V n_1 n_2``.  Open chains count each bond once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError
from .fock import Sector, Spin, apply_annihilate, apply_create, enumerate_sector, mode_index

PERIODIC = "periodic"
OPEN = "open"


@dataclass(frozen=True)
class ModelParams:
    L: int
    t: float = 1.0
    U: float = 0.0
    V: float = 0.0
    mu: tuple = None
    B: tuple = None
    boundary: str = PERIODIC
    global_mu: float = 0.0

    def __post_init__(self):
        if self.L < 1:
            raise DomainError(f"L must be >= 1, got {self.L}")
        if self.boundary not in (PERIODIC, OPEN):
            raise DomainError(f"unknown boundary {self.boundary!r}")
        for name in ("mu", "B"):
            val = getattr(self, name)
            val = (0.0,) * self.L if val is None else tuple(float(x) for x in val)
            if len(val) != self.L:
                raise DomainError(f"{name} has length {len(val)}, expected L={self.L}")
            object.__setattr__(self, name, val)
        scalars = (self.t, self.U, self.V, self.global_mu) + self.mu + self.B
        if not all(math.isfinite(x) for x in scalars):
            raise DomainError("model parameters must be finite")


def dimer_params(U: float, V: float, mu: float = 0.0, B: float = 0.0, **kwargs) -> ModelParams:
    """Two-site periodic model with staggered potential ``(mu, -mu)`` and field ``(B, -B)``."""
    return ModelParams(L=2, t=1.0, U=U, V=V, mu=(mu, -mu), B=(B, -B), **kwargs)


def bonds(L: int, boundary: str) -> list[tuple[int, int]]:
    if boundary == PERIODIC:
        return [(j, (j + 1) % L) for j in range(L)] if L > 1 else []
    return [(j, j + 1) for j in range(L - 1)]


@dataclass(frozen=True)
class SectorTerms:
    """Parameter-independent pieces of H on one sector.

    ``hop`` is the matrix of ``sum (c†_a c_b + c†_b c_a)`` over bonds and both
    spins; every other term is diagonal and stored as a vector.
    """

    sector: Sector
    hop: np.ndarray
    double: np.ndarray
    nn: np.ndarray
    n_site: np.ndarray      # (L, dim): n_j
    sz_site: np.ndarray     # (L, dim): n_{j,up} - n_{j,down}


@lru_cache(maxsize=None)
def sector_terms(L: int, boundary: str, n_up: int, n_down: int) -> SectorTerms:
    sector = enumerate_sector(L, n_up, n_down)
    dim = sector.dim
    if dim > MAX_SECTOR_DIM:
        raise DomainError(f"sector dimension {dim} exceeds the dense cap {MAX_SECTOR_DIM}")
    bond_list = bonds(L, boundary)

    hop = np.zeros((dim, dim))
    for col, s in enumerate(sector.states):
        for a, b in bond_list:
            for spin in Spin:
                ma, mb = mode_index(a, spin), mode_index(b, spin)
                # c†_a c_b and its conjugate c†_b c_a
                for dst, src in ((ma, mb), (mb, ma)):
                    r1 = apply_annihilate(s, src)
                    if r1 is None:
                        continue
                    r2 = apply_create(r1[0], dst)
                    if r2 is None:
                        continue
                    hop[sector.index_of[r2[0]], col] += r1[1] * r2[1]

    occ = np.array([[(s >> m) & 1 for m in range(2 * L)] for s in sector.states], dtype=float)
    n_up_site = occ[:, 0::2].T
    n_dn_site = occ[:, 1::2].T
    n_site = n_up_site + n_dn_site
    double = (n_up_site * n_dn_site).sum(axis=0)
    nn = sum((n_site[a] * n_site[b] for a, b in bond_list), np.zeros(dim))
    return SectorTerms(sector, hop, double, nn, n_site, n_up_site - n_dn_site)


MAX_SECTOR_DIM = 4096


@dataclass(frozen=True)
class HamiltonianMatrix:
    sector: Sector
    matrix: np.ndarray = field(repr=False)


def build_hamiltonian(params: ModelParams, sector: Sector) -> HamiltonianMatrix:
    if sector.L != params.L:
        raise DomainError(f"sector built for L={sector.L}, params have L={params.L}")
    terms = sector_terms(params.L, params.boundary, sector.n_up, sector.n_down)
    mu = np.asarray(params.mu)
    B = np.asarray(params.B)
    diag = (
        params.U * terms.double
        + params.V * terms.nn
        + mu @ terms.n_site
        - 0.5 * (B @ terms.sz_site)
        - params.global_mu * sector.n_particles
    )
    H = -params.t * terms.hop
    H.flat[:: sector.dim + 1] += diag
    return HamiltonianMatrix(sector, H)


# Two-electron S^z = 0 dimer states, doubly occupied first.  The |down, up>
# ket carries a minus sign relative to its site-major bitmask so that every
# hopping entry of the 4x4 block reads -2t.
DIMER_SINGLET_BASIS: Sequence[tuple[int, int]] = (
    (0b0011, +1),   # |ud, 0>
    (0b1100, +1),   # |0, ud>
    (0b1001, +1),   # |u, d>
    (0b0110, -1),   # |d, u>
)


def in_basis(H: HamiltonianMatrix, basis: Sequence[tuple[int, int]]) -> np.ndarray:
    """Matrix of ``H`` in an ordered, phased list of sector states."""
    idx = [H.sector.index_of[s] for s, _ in basis]
    phase = np.array([p for _, p in basis], dtype=float)
    return phase[:, None] * H.matrix[np.ix_(idx, idx)] * phase[None, :]

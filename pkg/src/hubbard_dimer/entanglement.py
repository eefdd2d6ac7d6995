"""Two-site, one-spin-species reduced density matrices and their concurrence.

For sites ``j, l`` and spin ``s`` the reduced state is written on the basis
``|00>, |10>, |01>, |11>`` (occupation of site j, then site l), so ``w1`` is
the weight of j occupied with l empty.  It has the X form

    [[u_plus, 0,  0,  0      ],
     [0,      w1, z,  0      ],
     [0,      z,  w2, 0      ],
     [0,      0,  0,  u_minus]]

with every entry an ensemble average of occupations and the hopping
correlator ``z = <c†_{j,s} c_{l,s}>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from .errors import DomainError, NumericError
from .fock import Spin
from .spectra import Spectrum, Weights, hopping, number, state_expectations_many, thermal_weights

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
YY = np.kron(SIGMA_Y, SIGMA_Y).real  # purely real: anti-diagonal (-1, 1, 1, -1)

INVARIANT_TOL = 1e-12
STATE_TOL = 1e-10


@dataclass(frozen=True)
class SpinSectorRDM:
    u_plus: float
    w1: float
    w2: float
    u_minus: float
    z: float
    j: int = 0
    l: int = 1
    spin: Spin = Spin.UP

    def matrix(self) -> np.ndarray:
        return np.array([
            [self.u_plus, 0.0, 0.0, 0.0],
            [0.0, self.w1, self.z, 0.0],
            [0.0, self.z, self.w2, 0.0],
            [0.0, 0.0, 0.0, self.u_minus],
        ])

    def check(self, tol: float = INVARIANT_TOL) -> "SpinSectorRDM":
        total = self.u_plus + self.w1 + self.w2 + self.u_minus
        if abs(total - 1.0) > tol:
            raise DomainError(f"RDM trace {total!r} differs from 1")
        if min(self.u_plus, self.w1, self.w2, self.u_minus) < -tol:
            raise DomainError("RDM has a negative diagonal entry")
        if self.w1 * self.w2 - self.z ** 2 < -tol:
            raise DomainError("RDM coherence block is not positive semidefinite")
        return self

    def swapped(self) -> "SpinSectorRDM":
        return SpinSectorRDM(self.u_plus, self.w2, self.w1, self.u_minus, self.z, self.l, self.j, self.spin)


@dataclass(frozen=True)
class ConcurrenceResult:
    c_wootters: float
    c_xform: float
    c_eq5: float
    e_f: float


def _check_pair(L: int, j: int, l: int) -> None:
    if j == l or not (0 <= j < L and 0 <= l < L):
        raise DomainError(f"invalid site pair ({j}, {l}) for L={L}")
    if abs(j - l) != 1 and L != 2:
        raise DomainError(f"sites ({j}, {l}) are not nearest neighbours")


class PairCorrelators:
    """Per-eigenstate ``z``, ``n_j``, ``n_l`` and ``n_j n_l`` for one site pair.

    Diagonalize once, then build the RDM for any set of weights; sweeps in
    temperature reuse the same instance.
    """

    def __init__(self, spectrum: Spectrum, j: int = 0, l: int = 1, spin: Spin = Spin.UP):
        _check_pair(spectrum.L, j, l)
        self.j, self.l, self.spin = j, l, Spin(spin)
        self.energies = spectrum.energies
        ops = (hopping(j, l, spin), number(j, spin), number(l, spin), number(j, spin) * number(l, spin))
        self.z, self.n_j, self.n_l, self.n_jl = state_expectations_many(ops, spectrum)

    def rdm(self, weights: Weights) -> SpinSectorRDM:
        p = weights.p
        u_minus = float(p @ self.n_jl)
        w1 = float(p @ self.n_j) - u_minus
        w2 = float(p @ self.n_l) - u_minus
        u_plus = 1.0 - w1 - w2 - u_minus
        return SpinSectorRDM(u_plus, w1, w2, u_minus, float(p @ self.z), self.j, self.l, self.spin)


def two_site_rdm(spectrum: Spectrum, ens, j: int = 0, l: int = 1, spin: Spin = Spin.UP) -> SpinSectorRDM:
    weights = ens if isinstance(ens, Weights) else thermal_weights(spectrum, ens)
    return PairCorrelators(spectrum, j, l, spin).rdm(weights).check()


def rho_tilde(rho: np.ndarray) -> np.ndarray:
    """Spin-flipped state ``(sy x sy) rho* (sy x sy)``."""
    return YY @ rho.conj() @ YY


def _validate_state(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise DomainError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > STATE_TOL:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > STATE_TOL:
        raise DomainError(f"density matrix trace {np.trace(rho).real!r} differs from 1")
    return rho


def wootters_spectrum(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``rho @ rho_tilde(rho)``, descending, near-zero negatives clamped."""
    rho = _validate_state(rho)
    lam = np.sort(np.linalg.eigvals(rho @ rho_tilde(rho)).real)[::-1]
    if lam.min() < -INVARIANT_TOL:
        raise NumericError(f"rho rho~ has a negative eigenvalue {lam.min():.3e}", float(lam.min()))
    return np.clip(lam, 0.0, None)


def wootters_concurrence(rho: np.ndarray) -> float:
    """Two-qubit concurrence ``max(0, s1 - s2 - s3 - s4)``.

    The ``s_i`` are the square roots of the eigenvalues of ``rho rho~``.  They
    are taken as singular values of ``tau_ij = v_i^dag (sy x sy) v_j^*`` with
    ``v_i = sqrt(p_i) e_i`` from the eigen-decomposition of ``rho``; this
    avoids the sqrt(eps) error of square-rooting tiny eigenvalues.
    """
    rho = _validate_state(rho)
    p, e = np.linalg.eigh(rho)
    if p.min() < -STATE_TOL:
        raise DomainError(f"density matrix is not positive semidefinite (eigenvalue {p.min():.3e})")
    v = e * np.sqrt(np.clip(p, 0.0, None))
    tau = v.conj().T @ YY @ v.conj()
    s = np.linalg.svd(tau, compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def xform_concurrence(rdm: SpinSectorRDM) -> float:
    return 2.0 * max(0.0, abs(rdm.z) - math.sqrt(max(rdm.u_plus * rdm.u_minus, 0.0)))


def eq5_concurrence(rdm: SpinSectorRDM) -> float:
    """Correlator form ``2 max(|<c†_j c_l>| - <n_j n_l>, 0)``."""
    return 2.0 * max(0.0, abs(rdm.z) - rdm.u_minus)


def entanglement_of_formation(C: float) -> float:
    if not 0.0 <= C <= 1.0:
        raise DomainError(f"concurrence {C!r} outside [0, 1]")
    x = 0.5 + 0.5 * math.sqrt(1.0 - C * C)
    return float((entr(x) + entr(1.0 - x)) / math.log(2.0))


def concurrences(rdm: SpinSectorRDM) -> ConcurrenceResult:
    c_w = min(wootters_concurrence(rdm.matrix()), 1.0)
    return ConcurrenceResult(
        c_wootters=c_w,
        c_xform=xform_concurrence(rdm),
        c_eq5=min(eq5_concurrence(rdm), 1.0),
        e_f=entanglement_of_formation(c_w),
    )

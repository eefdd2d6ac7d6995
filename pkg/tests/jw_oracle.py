"""Dense Jordan-Wigner reference used only by the tests.

Everything here is built from Kronecker products on the full 4^L Fock space,
with spin-major mode order (all up modes first, then all down modes).  The
package uses site-major bitmasks and sector blocks, so agreement between the
two is a check on ordering, signs and sector bookkeeping.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

_I = np.eye(2)
_Z = np.diag([1.0, -1.0])
_A = np.array([[0.0, 1.0], [0.0, 0.0]])  # |1> -> |0>


def _kron(ops):
    out = np.array([[1.0]])
    for op in ops:
        out = np.kron(out, op)
    return out


@lru_cache(maxsize=None)
def annihilators(n_modes: int) -> tuple:
    return tuple(_kron([_Z] * m + [_A] + [_I] * (n_modes - m - 1)) for m in range(n_modes))


def mode(L: int, site: int, spin: int) -> int:
    return spin * L + site


def hamiltonian(L, t=1.0, U=0.0, V=0.0, mu=None, B=None, boundary="periodic", global_mu=0.0):
    c = annihilators(2 * L)
    n = [ci.T @ ci for ci in c]
    mu = np.zeros(L) if mu is None else np.asarray(mu, float)
    B = np.zeros(L) if B is None else np.asarray(B, float)
    if boundary == "periodic":
        pairs = [(j, (j + 1) % L) for j in range(L)]
    else:
        pairs = [(j, j + 1) for j in range(L - 1)]
    H = np.zeros((4 ** L, 4 ** L))
    occ = [n[mode(L, j, 0)] + n[mode(L, j, 1)] for j in range(L)]
    for a, b in pairs:
        for s in (0, 1):
            ca, cb = c[mode(L, a, s)], c[mode(L, b, s)]
            H -= t * (ca.T @ cb + cb.T @ ca)
        H += V * occ[a] @ occ[b]
    for j in range(L):
        up, dn = n[mode(L, j, 0)], n[mode(L, j, 1)]
        H += U * up @ dn + mu[j] * occ[j] - 0.5 * B[j] * (up - dn) - global_mu * occ[j]
    return H


def number_operator(L):
    c = annihilators(2 * L)
    return sum(ci.T @ ci for ci in c)


def density_matrix(H, T=None, project=None, tol=1e-9):
    """Thermal state (``T``) or uniform ground mixture (``T=None``), optionally restricted by a projector."""
    e, v = np.linalg.eigh(H if project is None else H + 1e6 * (np.eye(len(H)) - project))
    if project is not None:
        keep = e < 1e5
        e, v = e[keep], v[:, keep]
    if T is None:
        w = (e - e.min() <= tol).astype(float)
    else:
        w = np.exp(-(e - e.min()) / T)
    w /= w.sum()
    return (v * w) @ v.T


def particle_projector(L, N):
    diag = np.diag(number_operator(L))
    return np.diag((np.abs(diag - N) < 0.5).astype(float))


def up_pair_rdm(rho, L, j, l):
    """Partial trace onto the up modes of sites ``j < l`` (adjacent in mode order)."""
    M = 2 * L
    keep = [mode(L, j, 0), mode(L, l, 0)]
    r = rho.reshape([2] * (2 * M))
    others = [m for m in range(M) if m not in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:M])
    col = list(letters[M:2 * M])
    for m in others:
        col[m] = row[m]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    return np.einsum("".join(row) + "".join(col) + "->" + out, r).reshape(4, 4)


def expectation(rho, op):
    return float(np.trace(rho @ op).real)


def concurrence_literal(rho):
    """Wootters concurrence from square roots of the eigenvalues of rho rho~."""
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    lam = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy).real
    s = np.sort(np.sqrt(np.clip(lam, 0.0, None)))[::-1]
    return max(0.0, s[0] - s[1] - s[2] - s[3])

"""Occupation-number basis for spinful lattice fermions.

States are integer bitmasks over ``2L`` spin-orbitals.  Mode ``m`` is
site-major with spin up first::

    m = 2 * site + spin        (spin: 0 = up, 1 = down)

A bitmask ``s`` stands for the ordered product of creation operators

    c†_{m_k} ... c†_{m_2} c†_{m_1} |0>,   m_1 < m_2 < ... < m_k

so moving an operator on mode ``m`` into place picks up one sign per occupied
mode with a smaller index.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import NamedTuple, Optional, Tuple

from .errors import DomainError


class Spin(enum.IntEnum):
    UP = 0
    DOWN = 1


class ModeIndex(NamedTuple):
    site: int
    spin: Spin

    @property
    def linear(self) -> int:
        return mode_index(self.site, self.spin)


def mode_index(site: int, spin: int) -> int:
    return 2 * site + int(spin)


def mode_site(m: int) -> int:
    return m >> 1


def mode_spin(m: int) -> Spin:
    return Spin(m & 1)


def _parity_below(state: int, m: int) -> int:
    return -1 if (state & ((1 << m) - 1)).bit_count() & 1 else 1


# An annihilated result is returned as ``None``; it is an ordinary outcome.
OpResult = Optional[Tuple[int, int]]


def apply_create(state: int, m: int) -> OpResult:
    """Apply ``c†_m``.  Returns ``(new_state, sign)`` or ``None`` if mode ``m`` is full."""
    if (state >> m) & 1:
        return None
    return state | (1 << m), _parity_below(state, m)


def apply_annihilate(state: int, m: int) -> OpResult:
    """Apply ``c_m``.  Returns ``(new_state, sign)`` or ``None`` if mode ``m`` is empty."""
    if not (state >> m) & 1:
        return None
    return state & ~(1 << m), _parity_below(state, m)


def apply_number(state: int, m: int) -> int:
    return (state >> m) & 1


def up_mask(L: int) -> int:
    return sum(1 << mode_index(j, Spin.UP) for j in range(L))


def down_mask(L: int) -> int:
    return sum(1 << mode_index(j, Spin.DOWN) for j in range(L))


@dataclass(frozen=True)
class Sector:
    """All basis states with fixed ``(n_up, n_down)``, sorted ascending by bitmask."""

    L: int
    n_up: int
    n_down: int
    states: Tuple[int, ...]
    index_of: dict = field(compare=False, hash=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def key(self) -> Tuple[int, int]:
        return (self.n_up, self.n_down)

    @property
    def n_particles(self) -> int:
        return self.n_up + self.n_down


@lru_cache(maxsize=None)
def enumerate_sector(L: int, n_up: int, n_down: int) -> Sector:
    if L < 1:
        raise DomainError(f"site count must be >= 1, got L={L}")
    if not (0 <= n_up <= L and 0 <= n_down <= L):
        raise DomainError(f"particle counts ({n_up}, {n_down}) out of range for L={L}")

    ups = [sum(1 << mode_index(j, Spin.UP) for j in occ) for occ in combinations(range(L), n_up)]
    downs = [sum(1 << mode_index(j, Spin.DOWN) for j in occ) for occ in combinations(range(L), n_down)]
    states = tuple(sorted(u | d for u in ups for d in downs))
    assert len(states) == comb(L, n_up) * comb(L, n_down)
    return Sector(L, n_up, n_down, states, {s: k for k, s in enumerate(states)})


def all_sectors(L: int) -> list[Sector]:
    return [enumerate_sector(L, nu, nd) for nu in range(L + 1) for nd in range(L + 1)]


def sectors_with_particles(L: int, n: int) -> list[Sector]:
    if not 0 <= n <= 2 * L:
        raise DomainError(f"particle number {n} out of range for L={L}")
    return [enumerate_sector(L, nu, n - nu) for nu in range(L + 1) if 0 <= n - nu <= L]

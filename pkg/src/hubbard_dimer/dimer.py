"""Closed-form two-site, two-electron solution (t = 1, periodic dimer).

Mixing angle, six-level spectrum, ground-state and thermal concurrence, and
the threshold temperature at which the thermal concurrence vanishes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, SearchFailure

T_START = 1e-3
T_LIMIT = 1e6


@dataclass(frozen=True)
class DimerSolution:
    U: float
    V: float
    theta: float
    E1: float
    E2: float
    E3: float
    E4: float
    E5: float
    E6: float

    @property
    def energies(self) -> np.ndarray:
        return np.array([self.E1, self.E2, self.E3, self.E4, self.E5, self.E6])

    @property
    def sin2theta(self) -> float:
        return math.sin(2.0 * self.theta)


@dataclass(frozen=True)
class ThresholdResult:
    t_th: float
    residual: float
    bracket: tuple


def solve_dimer(U: float, V: float) -> DimerSolution:
    a = U / 2.0 - V
    r = math.hypot(a, 4.0)
    # denominator a + r is always positive, so theta lands in (0, pi/2)
    theta = math.atan2(4.0, a + r)
    E1 = 0.5 * (U + 2.0 * V - 2.0 * r)
    E2 = 0.5 * (U + 2.0 * V + 2.0 * r)
    return DimerSolution(U, V, theta, E1, E2, U, 2.0 * V, 2.0 * V, 2.0 * V)


def ground_concurrence(U: float, V: float) -> float:
    return abs(solve_dimer(U, V).sin2theta)


def _boltzmann(sol: DimerSolution, T: float) -> np.ndarray:
    return np.exp(-(sol.energies - sol.E1) / T)


def thermal_correlators(U: float, V: float, T: float) -> dict:
    """Thermal ``z``, ``u_minus``, ``u_plus`` and mean energy over the six two-electron states."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    sol = solve_dimer(U, V)
    b = _boltzmann(sol, T)
    Z = b.sum()
    return {
        "z": 0.5 * sol.sin2theta * (b[0] - b[1]) / Z,
        "u_minus": b[4] / Z,
        "u_plus": b[5] / Z,
        "energy": float(b @ sol.energies / Z),
    }


def thermal_concurrence(U: float, V: float, T: float) -> float:
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    sol = solve_dimer(U, V)
    b = _boltzmann(sol, T)
    return max(abs(sol.sin2theta * (b[0] - b[1])) - 2.0 * b[4], 0.0) / b.sum()


def threshold_lhs(U: float, V: float, T: float) -> float:
    """Threshold condition divided by the (positive) lowest Boltzmann factor ``exp(-E1/T)``.

    Same sign and same root as the unscaled form, but O(1) in magnitude, so a
    residual check is meaningful even when ``exp(-E1/T)`` is astronomically large.
    """
    sol = solve_dimer(U, V)
    b = _boltzmann(sol, T)
    return abs(sol.sin2theta * (b[0] - b[1])) - 2.0 * b[4]


def bisect_threshold(f: Callable[[float], float], t_start: float = T_START,
                     t_limit: float = T_LIMIT) -> ThresholdResult:
    """Root of ``f`` that is positive at small T and negative at large T.

    The upper bracket doubles from ``t_start`` until ``f`` turns non-positive,
    then bisection runs until the midpoint is no longer representable.
    """
    if not f(t_start) > 0:
        raise SearchFailure(f"condition is not positive at T={t_start}")
    lo, hi = t_start, 2.0 * t_start
    while f(hi) > 0:
        lo, hi = hi, 2.0 * hi
        if hi > t_limit:
            raise SearchFailure(f"no sign change below T={t_limit}")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    # report whichever end sits closer to zero
    f_lo, f_hi = f(lo), f(hi)
    root, res = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
    return ThresholdResult(root, res, (lo, hi))


def threshold_temperature(U: float, V: float) -> Optional[ThresholdResult]:
    """Temperature where the thermal concurrence first vanishes; ``None`` when sin 2θ = 0."""
    if solve_dimer(U, V).sin2theta == 0.0:
        return None
    return bisect_threshold(lambda T: threshold_lhs(U, V, T))

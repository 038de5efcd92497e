"""Central configurations with vanishing multiplier (the parallelogram).

Masses are ``(x, -x, y, -y)`` with ``0 < x < y`` after normalisation.  The
unknowns are inverse cubes of two side lengths::

    u = 1 / |r3 - r1|^3,   v = 1 / |r3 - r2|^3

scaled so that ``|r3 - r1|^2 + |r3 - r2|^2 = 1``.  The diagonals give
``(u', v') = (1/|r2 - r1|^3, 1/|r4 - r3|^3)`` through a linear map of
``(u, v)``, and the parallelogram law closes the system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .core import (CentralityReport, Configuration, fit_multiplier, normalise_mass_pair,
                   to_caller_order)
from .errors import FlatTriangleError, NoRootError

BISECT_RTOL = 1e-14
U_CAP = 1e12
EQUAL_MASS_RTOL = 1e-12


@dataclass(frozen=True)
class NoSolution:
    reason: str
    x: float
    y: float

    def to_dict(self) -> dict:
        return {"result": "no_solution", "reason": self.reason, "x": self.x, "y": self.y}


@dataclass(frozen=True)
class ZeroMultSolution:
    x: float
    y: float
    u: float
    v: float
    u_prime: float
    v_prime: float
    configuration: Configuration
    report: CentralityReport
    #: canonical body k is caller body ``permutation[k]`` (0-based)
    permutation: tuple = (0, 1, 2, 3)
    caller_masses: tuple = ()

    def caller_configuration(self) -> Configuration:
        """The solution with bodies in the caller's order and with the caller's masses."""
        return to_caller_order(self.configuration, self.permutation, self.caller_masses)

    def to_dict(self) -> dict:
        return {
            "result": "solution",
            "multiplier": "zero",
            "x": self.x,
            "y": self.y,
            "u": self.u,
            "v": self.v,
            "u_prime": self.u_prime,
            "v_prime": self.v_prime,
            "configuration": self.configuration.to_dict(),
            "caller_configuration": self.caller_configuration().to_dict(),
            "xi_fit": self.report.xi_fit,
            "residuals": self.report.to_dict(),
        }


def _rtol_bisect(fn, lo, hi, rtol=BISECT_RTOL):
    # scipy refuses rtol below four machine epsilons
    return bisect(fn, lo, hi, xtol=1e-300, rtol=max(rtol, 4.0 * np.finfo(float).eps), maxiter=400)


def _coefficients(ratio):
    """Rows of the linear map taking (u, v) to (u', v') for y = ratio * x."""
    return (
        (1.0 + ratio) / 2.0,
        (1.0 - ratio) / 2.0,
        (1.0 + ratio) / (2.0 * ratio),
        (ratio - 1.0) / (2.0 * ratio),
    )


def f_value(u, v):
    return u ** (-2.0 / 3.0) + v ** (-2.0 / 3.0)


def h_map(u, v, x, y):
    a, b, c, d = _coefficients(y / x)
    return a * u + b * v, c * u + d * v


def g_value(u, v, x, y):
    """Parallelogram-law left-hand side; ``inf`` once u' reaches zero."""
    up, vp = h_map(u, v, x, y)
    if up <= 0.0 or vp <= 0.0:
        return math.inf
    return up ** (-2.0 / 3.0) + vp ** (-2.0 / 3.0)


def curve_g_point(u: float, x: float, y: float, rtol: float = BISECT_RTOL) -> float:
    """The v >= 1 with ``g(u, v) = 2`` for given u >= 1 (0 < x < y)."""
    if not 0.0 < x < y:
        raise ValueError("curve_g_point expects 0 < x < y")
    if u == 1.0:
        return 1.0
    lo = 1.0
    if g_value(u, lo, x, y) - 2.0 > 0.0:
        raise NoRootError(f"u = {u} lies outside the curve's range")
    # u' vanishes at v_max, where g blows up
    v_max = u * (y + x) / (y - x)
    for k in range(1, 1100):
        hi = min(2.0**k, v_max - (v_max - lo) * 0.5**k)
        if g_value(u, hi, x, y) - 2.0 > 0.0:
            return _rtol_bisect(lambda v: g_value(u, v, x, y) - 2.0, lo, hi, rtol)
    raise NoRootError(f"no bracket for g(u, v) = 2 at u = {u}")


def _normalise(x, y):
    ax, ay, perm = normalise_mass_pair(x, y)
    if ax > ay:
        perm = (perm[2], perm[3], perm[0], perm[1])
        ax, ay = ay, ax
    return ax, ay, perm


def build_parallelogram(u, v, u_prime, v_prime, x, y) -> Configuration:
    """Realise the solution with diagonals [r1, r2] and [r3, r4].

    Canonical pose: shared midpoint at the origin, ``r2 - r1`` along +x and
    ``r3`` in the upper half plane.
    """
    a = u ** (-1.0 / 3.0)  # |r3 - r1|
    b = v ** (-1.0 / 3.0)  # |r4 - r1| = |r3 - r2|
    c = v_prime ** (-1.0 / 3.0)  # |r4 - r3|
    if not (a < b + c and b < a + c and c < a + b):
        raise FlatTriangleError(f"lengths {a}, {b}, {c} do not form a triangle")
    cos_a = (a * a + b * b - c * c) / (2.0 * a * b)
    sin_a = math.sqrt(max(0.0, 1.0 - cos_a * cos_a))
    r1 = np.zeros(2)
    r3 = np.array([a, 0.0])
    r4 = np.array([b * cos_a, b * sin_a])
    r2 = r3 + r4 - r1
    pos = np.array([r1, r2, r3, r4])
    pos -= (r1 + r2) / 2.0
    d = pos[1] - pos[0]
    cos_t, sin_t = d / np.hypot(*d)
    rot = np.array([[cos_t, sin_t], [-sin_t, cos_t]])
    pos = pos @ rot.T
    if pos[2, 1] < 0.0:
        pos[:, 1] = -pos[:, 1]
    return Configuration([x, -x, y, -y], pos)


def _solve_uv(x, y, rtol=BISECT_RTOL):
    def f_on_curve(u):
        return f_value(u, curve_g_point(u, x, y, rtol)) - 1.0

    lo, hi = 1.0 + 1e-6, 2.0
    while f_on_curve(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > U_CAP:
            raise NoRootError(f"f - 1 has no sign change for u <= {U_CAP:g}")
    u = _rtol_bisect(f_on_curve, lo, hi, rtol)
    return u, curve_g_point(u, x, y, rtol)


def solve_zero(x: float, y: float, rtol: float = BISECT_RTOL):
    """The unique vanishing-multiplier configuration for masses (x, -x, y, -y).

    Returns :class:`NoSolution` when ``|x| == |y|``.
    """
    ax, ay, perm = _normalise(x, y)
    if ay - ax <= EQUAL_MASS_RTOL * ay:
        return NoSolution("equal absolute masses admit no vanishing-multiplier configuration",
                          float(x), float(y))
    # the system only depends on the ratio y / x
    u, v = _solve_uv(1.0, ay / ax, rtol)
    u_prime, v_prime = h_map(u, v, 1.0, ay / ax)
    config = build_parallelogram(u, v, u_prime, v_prime, ax, ay)
    return ZeroMultSolution(
        x=ax, y=ay, u=u, v=v, u_prime=u_prime, v_prime=v_prime,
        configuration=config, report=fit_multiplier(config),
        permutation=perm, caller_masses=(float(x), -float(x), float(y), -float(y)),
    )


def scan_curve(x: float, y: float, n: int = 400, u_max: float = 1e4):
    """Sample the curve g = 2 on a log grid in u; returns (u, v, f) arrays.

    Masses are normalised as in :func:`solve_zero`.
    """
    x, y, _ = _normalise(x, y)
    us = 1.0 + np.geomspace(1e-6, u_max - 1.0, n)
    vs = np.array([curve_g_point(u, x, y) for u in us])
    return us, vs, f_value(us, vs)


# Expanded sides of the flat-triangle comparison, lowest degree first.
_FLAT_LHS = (16.0, 48.0, 72.0, 66.0, 36.0, 12.0, 2.0)
_FLAT_RHS = (2.0, 6.0, 6.0, 18.0, 24.0, 12.0, 2.0)
FLAT_GAP_COEFFS = tuple(p - q for p, q in zip(_FLAT_LHS, _FLAT_RHS))


def flat_degeneracy_gap(b: float) -> float:
    """Difference of the two expanded polynomials that a flat triangle would equate.

    Equals ``12 b^4 + 48 b^3 + 66 b^2 + 42 b + 14``; every coefficient is
    positive, so there is no positive root.
    """
    return float(np.polynomial.polynomial.polyval(b, FLAT_GAP_COEFFS))

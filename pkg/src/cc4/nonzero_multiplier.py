"""Central configurations with nonzero multiplier (the two trapezoids).

With ``x, y > 0`` and the short base ``|r4 - r3| = x`` the trapezoid is fixed
by the squared diagonals ``u = |r3 - r1|^2`` and ``v = |r4 - r2|^2``.  The
squared legs follow from the affine map :func:`phi`, and centrality reduces
to ``f(u, v) = f(phi(u, v)) = f(x^2, y^2)`` with ``f = u^-3/2 + v^-3/2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .core import (EPS_GEOM, CentralityReport, Configuration, fit_multiplier,
                   normalise_mass_pair, to_caller_order)
from .errors import FlatTriangleError, NoRootError, NotATrapezoidError

BISECT_RTOL = 1e-14
U_CAP = 1e12


class BandClass(str, enum.Enum):
    BALANCED = "Balanced"
    SEMI_BALANCED = "SemiBalanced"
    UNBALANCED = "Unbalanced"


@dataclass(frozen=True)
class TrapezoidSolution:
    x: float
    y: float
    u: float
    v: float
    r23_sq: float
    r14_sq: float
    configuration: Configuration
    band_class: BandClass
    report: CentralityReport
    axis_symmetric: bool
    permutation: tuple = (0, 1, 2, 3)
    caller_masses: tuple = ()

    def caller_configuration(self) -> Configuration:
        return to_caller_order(self.configuration, self.permutation, self.caller_masses)

    def to_dict(self) -> dict:
        return {
            "result": "solution",
            "multiplier": "nonzero",
            "x": self.x,
            "y": self.y,
            "u": self.u,
            "v": self.v,
            "r23_sq": self.r23_sq,
            "r14_sq": self.r14_sq,
            "band_class": self.band_class.value,
            "axis_symmetric": self.axis_symmetric,
            "configuration": self.configuration.to_dict(),
            "caller_configuration": self.caller_configuration().to_dict(),
            "xi_fit": self.report.xi_fit,
            "residuals": self.report.to_dict(),
        }


def f_value(u, v):
    return u ** -1.5 + v ** -1.5


def phi(u, v, x, y):
    """Squared legs ``(|r3 - r2|^2, |r4 - r1|^2)`` from the squared diagonals."""
    s = x + y
    return (x * u + y * v) / s - x * y, (y * u + x * v) / s - x * y


def contour_v(u, level):
    """The v with ``f(u, v) = level``; requires ``u > level^(-2/3)``."""
    rest = level - u ** -1.5
    if rest <= 0.0:
        raise ValueError(f"u = {u} is left of the contour's asymptote")
    return rest ** (-2.0 / 3.0)


def intersection_gap(u, x, y, level=None):
    """``f(phi(u, v(u))) - level`` along the contour; ``inf`` where phi leaves the quadrant."""
    if level is None:
        level = x ** -3 + y ** -3
    v = contour_v(u, level)
    p, q = phi(u, v, x, y)
    if p <= 0.0 or q <= 0.0:
        return math.inf
    return f_value(p, q) - level




def _solve_branch(x, y, rtol=BISECT_RTOL):
    """Root of the intersection gap on the branch u > v."""
    level = x ** -3 + y ** -3
    u_sym = (level / 2.0) ** (-2.0 / 3.0)
    lo, hi = u_sym, 2.0 * u_sym
    while intersection_gap(hi, x, y, level) > 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > U_CAP:
            raise NoRootError("no sign change of the intersection gap")
    u = bisect(lambda t: intersection_gap(t, x, y, level), lo, hi,
               xtol=1e-300, rtol=max(rtol, 4.0 * np.finfo(float).eps), maxiter=400)
    return u, contour_v(u, level)


def build_trapezoid(u, v, x, y) -> Configuration:
    """Place the trapezoid with its diagonal intersection at the origin.

    ``r3`` lies on the +x axis and ``r4`` in the upper half plane; the long
    base ``[r1, r2]`` is the image of ``[r3, r4]`` under the homothety of
    ratio ``-y/x`` about the origin.
    """
    su, sv, s = math.sqrt(u), math.sqrt(v), x + y
    if not (su < sv + s and sv < su + s and s < su + sv):
        raise FlatTriangleError(f"({su}, {sv}, {s}) do not form a triangle")
    p = x * su / s
    q = x * sv / s
    cos_t = (p * p + q * q - x * x) / (2.0 * p * q)
    sin_t = math.sqrt(max(0.0, 1.0 - cos_t * cos_t))
    r3 = np.array([p, 0.0])
    r4 = np.array([q * cos_t, q * sin_t])
    k = -y / x
    return Configuration([x, -x, y, -y], np.array([k * r3, k * r4, r3, r4]))


_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def _parallel(config, a, b):
    p = config.positions
    d1 = p[a[1]] - p[a[0]]
    d2 = p[b[1]] - p[b[0]]
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    return abs(cross) < EPS_GEOM * np.hypot(*d1) * np.hypot(*d2)


def find_bases(config: Configuration) -> tuple:
    """The pair of parallel opposite sides, as 0-based index pairs.

    Parallelograms use the (1, 2) / (3, 4) pair when it qualifies.
    """
    if config.n != 4:
        raise NotATrapezoidError("a trapezoid has four vertices")
    found = [pr for pr in _PAIRINGS if _parallel(config, *pr)]
    if not found:
        raise NotATrapezoidError("no pair of parallel sides")
    return found[0]


def classify_bands(config: Configuration) -> BandClass:
    """Compare the projections of the two bases onto their common direction."""
    (a0, a1), (b0, b1) = find_bases(config)
    p = config.positions
    d = p[a1] - p[a0]
    d = d / np.hypot(*d)
    i1 = sorted((float(p[a0] @ d), float(p[a1] @ d)))
    i2 = sorted((float(p[b0] @ d), float(p[b1] @ d)))
    tol = EPS_GEOM * config.scale()
    if (i1[0] >= i2[0] - tol and i1[1] <= i2[1] + tol) or (
        i2[0] >= i1[0] - tol and i2[1] <= i1[1] + tol
    ):
        return BandClass.BALANCED
    if i1[1] < i2[0] - tol or i2[1] < i1[0] - tol:
        return BandClass.UNBALANCED
    return BandClass.SEMI_BALANCED


def is_axis_symmetric(config: Configuration, bases=None) -> bool:
    """Whether the perpendicular bisector of one base is a symmetry axis of the other."""
    (a0, a1), (b0, b1) = bases or find_bases(config)
    p = config.positions
    d = p[a1] - p[a0]
    d = d / np.hypot(*d)
    mid_a = (p[a0] + p[a1]) @ d / 2.0
    mid_b = (p[b0] + p[b1]) @ d / 2.0
    return bool(abs(mid_a - mid_b) < EPS_GEOM * config.scale())


def _finish(u, v, x, y, perm, caller):
    config = build_trapezoid(u, v, x, y)
    r23_sq, r14_sq = phi(u, v, x, y)
    return TrapezoidSolution(
        x=x, y=y, u=u, v=v, r23_sq=r23_sq, r14_sq=r14_sq,
        configuration=config,
        band_class=classify_bands(config),
        report=fit_multiplier(config),
        axis_symmetric=is_axis_symmetric(config, ((0, 1), (2, 3))),
        permutation=perm,
        caller_masses=caller,
    )


def solve_nonzero(x: float, y: float, rtol: float = BISECT_RTOL) -> tuple:
    """Both nonzero-multiplier configurations for masses (x, -x, y, -y).

    The first solution has ``u > v``; the second is its swap.
    """
    ax, ay, perm = normalise_mass_pair(x, y)
    u, v = _solve_branch(ax, ay, rtol)
    caller = (float(x), -float(x), float(y), -float(y))
    return _finish(u, v, ax, ay, perm, caller), _finish(v, u, ax, ay, perm, caller)


def scan_intersections(x: float, y: float, n: int = 800):
    """Gap values on a log grid of the contour, for counting sign changes."""
    level = x ** -3 + y ** -3
    u_min = level ** (-2.0 / 3.0)
    us = np.geomspace(u_min * (1.0 + 1e-8), 1e6 * (x + y) ** 2, n)
    return us, np.array([intersection_gap(u, x, y, level) for u in us])

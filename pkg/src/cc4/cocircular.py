"""Certificate that four co-circular bodies cannot form a central
configuration with vanishing total mass and vanishing inertia vector.

For such a configuration the mass-free identity

    1/r12^3 + 1/r34^3 = 1/r13^3 + 1/r24^3

would have to hold.  After relabelling the cyclic order so that the arcs
1-2-3 and 2-3-4 are at most half the circle, both sides 12 and 34 are
strictly shorter than the diagonals 13 and 24, so the left-hand side is
strictly larger.  :func:`cocircular_gap` returns that positive difference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import EPS_GEOM, Configuration, PlanarVector
from .errors import CollinearError, CollisionError, NotCocircularError

TOL_CIRCLE = 1e-9


@dataclass(frozen=True)
class CircleFit:
    center: PlanarVector
    radius: float
    max_deviation: float


@dataclass(frozen=True)
class GapReport:
    #: original body indices (1-based) that play the roles of 1, 2, 3, 4
    ordering: tuple
    #: True when the input labels had to be changed to meet the arc conditions
    arc_normalized: bool
    gap: float

    def to_dict(self) -> dict:
        return {"ordering": list(self.ordering), "arc_normalized": self.arc_normalized,
                "gap": self.gap}


def circumcircle(p1, p2, p3) -> CircleFit:
    a = np.asarray(p1, dtype=float)
    b = np.asarray(p2, dtype=float) - a
    c = np.asarray(p3, dtype=float) - a
    scale = max(np.hypot(*b), np.hypot(*c), np.hypot(*(c - b)))
    cross = b[0] * c[1] - b[1] * c[0]
    if scale == 0.0 or abs(cross) < EPS_GEOM * scale**2:
        raise CollinearError("the three points are collinear")
    bb = b @ b
    cc = c @ c
    ox = (c[1] * bb - b[1] * cc) / (2.0 * cross)
    oy = (b[0] * cc - c[0] * bb) / (2.0 * cross)
    center = a + np.array([ox, oy])
    radius = math.hypot(ox, oy)
    pts = np.array([p1, p2, p3], dtype=float)
    dev = float(np.max(np.abs(np.hypot(*(pts - center).T) - radius)))
    return CircleFit(PlanarVector(float(center[0]), float(center[1])), radius, dev)


def fit_circle(config: Configuration, tol: float = TOL_CIRCLE) -> CircleFit:
    """Circle through the first three bodies; the fourth must lie on it."""
    if config.n != 4:
        raise ValueError("co-circularity is tested for four bodies")
    p = config.positions
    fit = circumcircle(p[0], p[1], p[2])
    dev = abs(math.hypot(p[3, 0] - fit.center.x, p[3, 1] - fit.center.y) - fit.radius)
    if dev >= tol * fit.radius:
        raise NotCocircularError(f"fourth body is {dev:.3g} off the circle (radius {fit.radius:.3g})")
    return CircleFit(fit.center, fit.radius, max(fit.max_deviation, dev))


def _arc(t_from, t_via, t_to):
    """Length of the arc from ``t_from`` to ``t_to`` that contains ``t_via``."""
    ccw = (t_to - t_from) % (2.0 * math.pi)
    via = (t_via - t_from) % (2.0 * math.pi)
    return ccw if via < ccw else 2.0 * math.pi - ccw


def cocircular_gap(config: Configuration, tol: float = TOL_CIRCLE) -> GapReport:
    """Positive gap between the side and diagonal sums of inverse cubes."""
    fit = fit_circle(config, tol)
    p = config.positions
    theta = np.arctan2(p[:, 1] - fit.center.y, p[:, 0] - fit.center.x)
    cyc = [int(i) for i in np.argsort(theta)]
    ts = np.sort(theta)
    gaps = np.diff(np.append(ts, ts[0] + 2.0 * math.pi))
    if gaps.min() <= EPS_GEOM * 2.0 * math.pi:
        raise CollisionError("two bodies share the same angle on the circle")

    # Every dihedral relabelling of the cyclic order that satisfies both arc
    # conditions is a valid normalisation; the smallest gap among them is
    # reported so the result does not depend on the input labels.
    best = None
    for start in range(4):
        for step in (1, -1):
            lab = [cyc[(start + step * k) % 4] for k in range(4)]
            t = [theta[i] for i in lab]
            if _arc(t[0], t[1], t[2]) > math.pi or _arc(t[3], t[2], t[1]) > math.pi:
                continue
            d = lambda i, j: math.hypot(*(p[lab[i]] - p[lab[j]]))  # noqa: E731
            gap = (d(1, 0) ** -3 + d(3, 2) ** -3) - (d(2, 0) ** -3 + d(3, 1) ** -3)
            key = (gap, lab)
            if best is None or key < best:
                best = key
    if best is None:  # cannot happen: one of the two swaps always applies
        raise CollinearError("no admissible arc normalisation")
    gap, lab = best
    normalized = tuple(lab) != (0, 1, 2, 3)
    return GapReport(tuple(i + 1 for i in lab), normalized, gap)


def on_circle(angles_deg, radius=1.0, center=(0.0, 0.0), masses=(1.0, -1.0, 1.0, -1.0)):
    """Configuration with bodies at the given polar angles (degrees)."""
    t = np.radians(np.asarray(angles_deg, dtype=float))
    pos = np.column_stack([np.cos(t), np.sin(t)]) * radius + np.asarray(center, dtype=float)
    return Configuration(masses, pos)

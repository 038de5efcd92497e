"""Field of a gravitational dipole: mass -1 at (-1, 0) and mass +1 at (1, 0).

The field is even, its Jacobian determinant is non-positive, and away from
the origin and the two sources every field value has exactly two preimages
``r`` and ``-r``.  :func:`preimage` recovers them numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import PlanarVector
from .errors import NoConvergenceError, SingularityError

EPS_SING = 1e-12
SOURCES = (PlanarVector(-1.0, 0.0), PlanarVector(1.0, 0.0))

NEWTON_GRID = 24
NEWTON_BOX = 5.0
SEED_EXCLUSION = 0.05
MAX_ITER = 100
MAX_HALVINGS = 40
RESIDUAL_RTOL = 1e-12


@dataclass(frozen=True)
class FieldSample:
    point: PlanarVector
    field: PlanarVector
    jacobian_det: float


def _check(r) -> tuple:
    u, v = float(r[0]), float(r[1])
    if math.hypot(u - 1.0, v) < EPS_SING or math.hypot(u + 1.0, v) < EPS_SING:
        raise SingularityError(f"field is singular at ({u}, {v})")
    return u, v


def field_eval(r) -> PlanarVector:
    u, v = _check(r)
    return PlanarVector(*kernels.dipole_field(u, v))


def jacobian_matrix(r) -> np.ndarray:
    u, v = _check(r)
    return np.array(kernels.dipole_jacobian(u, v)).reshape(2, 2)


def jacobian_det(r) -> float:
    """Closed-form determinant of the field's Jacobian (always <= 0)."""
    u, v = _check(r)
    return float(kernels.dipole_jacobian_det(u, v))


def sample(r) -> FieldSample:
    u, v = _check(r)
    return FieldSample(PlanarVector(u, v), field_eval((u, v)), jacobian_det((u, v)))


def field_grid(umin, umax, vmin, vmax, steps):
    """Yield samples on a ``steps`` x ``steps`` grid, skipping the two sources."""
    for u in np.linspace(umin, umax, steps):
        for v in np.linspace(vmin, vmax, steps):
            try:
                yield sample((u, v))
            except SingularityError:
                continue


def newton_seeds(n=NEWTON_GRID, box=NEWTON_BOX, exclusion=SEED_EXCLUSION) -> np.ndarray:
    g = np.linspace(-box, box, n)
    uu, vv = np.meshgrid(g, g, indexing="ij")
    seeds = np.column_stack([uu.ravel(), vv.ravel()])
    keep = np.ones(len(seeds), dtype=bool)
    for s in SOURCES:
        keep &= np.hypot(seeds[:, 0] - s.x, seeds[:, 1] - s.y) > exclusion
    return seeds[keep]


def _dedupe(points: np.ndarray, tol: float) -> list:
    order = np.lexsort((points[:, 1], points[:, 0]))
    kept: list = []
    for p in points[order]:
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) > tol for q in kept):
            kept.append(p)
    return [PlanarVector(float(p[0]), float(p[1])) for p in kept]


def preimage(target, tol: float = 1e-8, seeds: np.ndarray | None = None) -> list:
    """All points ``r`` with ``field_eval(r) == target``, sorted lexicographically.

    Multi-start damped Newton from a grid of seeds; the antipode of every
    converged root is used as an extra seed.  Roots closer than ``tol`` are
    merged.
    """
    tu, tv = float(target[0]), float(target[1])
    conv = RESIDUAL_RTOL * max(1.0, math.hypot(tu, tv))
    if seeds is None:
        seeds = newton_seeds()
    roots, ok = kernels.dipole_newton(seeds, tu, tv, MAX_ITER, MAX_HALVINGS, conv, EPS_SING)
    found = roots[ok.astype(bool)]
    if len(found) == 0:
        raise NoConvergenceError(f"no Newton seed converged for target ({tu}, {tv})")
    mirrored, ok2 = kernels.dipole_newton(-found, tu, tv, MAX_ITER, MAX_HALVINGS, conv, EPS_SING)
    found = np.vstack([found, mirrored[ok2.astype(bool)]])

    # The origin is a fold of the field, so Newton only locates it to about
    # the square root of the residual tolerance.
    g0u, g0v = kernels.dipole_field(0.0, 0.0)
    if math.hypot(g0u - tu, g0v - tv) < conv:
        near = np.hypot(found[:, 0], found[:, 1]) < 10.0 * math.sqrt(conv)
        found[near] = 0.0
    return _dedupe(found, tol)

"""Newtonian accelerations, centrality tests and inertia quantities.

Everything here works for an arbitrary number of planar point masses with
the gravitational constant set to 1.  Masses may be negative.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import CollisionError, DegenerateError, InvalidMassError

#: Relative tolerance for collision and collinearity tests.
EPS_GEOM = 1e-9


class PlanarVector(NamedTuple):
    x: float
    y: float

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True, eq=False)
class Configuration:
    """An ordered set of planar bodies, each a (mass, position) pair."""

    masses: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float).reshape(-1)
        positions = np.array(self.positions, dtype=float).reshape(-1, 2)
        if masses.shape[0] != positions.shape[0]:
            raise ValueError("masses and positions differ in length")
        if masses.shape[0] < 2:
            raise ValueError("a configuration needs at least two bodies")
        if not (np.all(np.isfinite(masses)) and np.all(np.isfinite(positions))):
            raise ValueError("masses and positions must be finite")
        if np.any(masses == 0.0):
            raise ValueError("masses must be nonzero")
        masses.setflags(write=False)
        positions.setflags(write=False)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "positions", positions)
        iu, ju = np.triu_indices(self.n, 1)
        sep = self.distances()[iu, ju]
        k = int(np.argmin(sep))
        if sep[k] <= EPS_GEOM * sep.max():
            raise CollisionError(f"bodies {iu[k] + 1} and {ju[k] + 1} coincide")

    @property
    def n(self) -> int:
        return self.masses.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def distances(self) -> np.ndarray:
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return np.hypot(diff[..., 0], diff[..., 1])

    def distance(self, i: int, j: int) -> float:
        """Distance between bodies ``i`` and ``j`` (1-based, as in the literature)."""
        p = self.positions
        return math.hypot(p[j - 1, 0] - p[i - 1, 0], p[j - 1, 1] - p[i - 1, 1])

    def scale(self) -> float:
        """Largest pairwise distance."""
        return float(self.distances().max())

    def transformed(self, matrix=None, shift=(0.0, 0.0), factor=1.0) -> "Configuration":
        pos = self.positions
        if matrix is not None:
            pos = pos @ np.asarray(matrix, dtype=float).T
        return Configuration(self.masses, factor * pos + np.asarray(shift, dtype=float))

    def permuted(self, order) -> "Configuration":
        """Bodies reordered so that new body ``k`` is old body ``order[k]`` (0-based)."""
        order = list(order)
        return Configuration(self.masses[order], self.positions[order])

    def to_dict(self) -> dict:
        return {
            "masses": [float(m) for m in self.masses],
            "positions": [[float(a), float(b)] for a, b in self.positions],
        }

    @classmethod
    def from_dict(cls, doc) -> "Configuration":
        if not isinstance(doc, dict) or "masses" not in doc or "positions" not in doc:
            raise ValueError("configuration documents need 'masses' and 'positions'")
        positions = doc["positions"]
        if not all(isinstance(p, (list, tuple)) and len(p) == 2 for p in positions):
            raise ValueError("each position must be an [x, y] pair")
        return cls(doc["masses"], positions)


@dataclass(frozen=True)
class CentralityReport:
    xi_fit: float
    max_pair_residual: float
    pair_residuals: dict
    laura_andoyer_triple: tuple | None
    inertia_vector: PlanarVector
    moment_of_inertia_at_origin: float
    collinear_triples: list = field(default_factory=list)
    total_mass: float = 0.0

    def to_dict(self) -> dict:
        return {
            "xi_fit": self.xi_fit,
            "max_pair_residual": self.max_pair_residual,
            "pair_residuals": {f"{i}-{j}": r for (i, j), r in sorted(self.pair_residuals.items())},
            "laura_andoyer_triple": (
                None if self.laura_andoyer_triple is None else list(self.laura_andoyer_triple)
            ),
            "inertia_vector": list(self.inertia_vector),
            "moment_of_inertia_at_origin": self.moment_of_inertia_at_origin,
            "collinear_triples": [list(t) for t in self.collinear_triples],
            "total_mass": self.total_mass,
        }


class AffineWeights(NamedTuple):
    """Weights with zero sum whose weighted sum of positions vanishes."""

    delta: tuple

    def residuals(self, config: Configuration) -> tuple:
        d = np.asarray(self.delta)
        return float(abs(d.sum())), float(np.linalg.norm(d @ config.positions))


def accelerations(config: Configuration) -> np.ndarray:
    """Acceleration of every body, as an (N, 2) array in body order."""
    return kernels.accelerations(config.masses, config.positions)


def potential(config: Configuration) -> float:
    """Sum over pairs of m_i m_j / r_ij."""
    return float(kernels.potential(config.masses, config.positions))


def inertia_vector(config: Configuration, origin=(0.0, 0.0)) -> PlanarVector:
    """Mass-weighted sum of positions relative to ``origin``.

    Independent of ``origin`` only when the total mass vanishes.
    """
    v = config.masses @ (config.positions - np.asarray(origin, dtype=float))
    return PlanarVector(float(v[0]), float(v[1]))


def moment_of_inertia(config: Configuration, origin=(0.0, 0.0)) -> float:
    rel = config.positions - np.asarray(origin, dtype=float)
    return float(config.masses @ np.einsum("ij,ij->i", rel, rel))


def collinear_triples(config: Configuration) -> list:
    scale = config.scale()
    p = config.positions
    out = []
    for i, j, k in itertools.combinations(range(config.n), 3):
        a = p[j] - p[i]
        b = p[k] - p[i]
        if abs(a[0] * b[1] - a[1] * b[0]) < EPS_GEOM * scale**2:
            out.append((i + 1, j + 1, k + 1))
    return out


def laura_andoyer_triple(config: Configuration) -> tuple:
    """(1/r12^3 + 1/r34^3, 1/r13^3 + 1/r24^3, 1/r23^3 + 1/r14^3)."""
    if config.n != 4:
        raise ValueError("the triple is defined for four bodies")
    r = config.distance
    return (
        r(1, 2) ** -3 + r(3, 4) ** -3,
        r(1, 3) ** -3 + r(2, 4) ** -3,
        r(2, 3) ** -3 + r(1, 4) ** -3,
    )


def fit_multiplier(config: Configuration) -> CentralityReport:
    """Least-squares multiplier over all pairs plus the usual diagnostics.

    The fitted value minimises the sum over pairs of
    ``|(a_j - a_i) - xi (r_j - r_i)|^2``; the largest remaining pair
    residual certifies (or refutes) centrality.
    """
    if config.n < 3:
        raise ValueError("fit_multiplier needs at least three bodies")
    acc = accelerations(config)
    pos = config.positions
    pairs = list(itertools.combinations(range(config.n), 2))
    da = np.array([acc[j] - acc[i] for i, j in pairs])
    dr = np.array([pos[j] - pos[i] for i, j in pairs])
    denom = float(np.sum(dr * dr))
    if denom == 0.0:
        raise DegenerateError("all pairwise separations vanish")
    xi = float(np.sum(da * dr)) / denom
    res = np.hypot(*(da - xi * dr).T)
    triple = laura_andoyer_triple(config) if config.n == 4 else None
    return CentralityReport(
        xi_fit=xi,
        max_pair_residual=float(res.max()),
        pair_residuals={(i + 1, j + 1): float(r) for (i, j), r in zip(pairs, res)},
        laura_andoyer_triple=triple,
        inertia_vector=inertia_vector(config),
        moment_of_inertia_at_origin=moment_of_inertia(config),
        collinear_triples=collinear_triples(config) if config.n == 4 else [],
        total_mass=config.total_mass,
    )


def affine_weights(config: Configuration) -> AffineWeights:
    """Kernel of ``[sum d_i = 0, sum d_i r_i = 0]`` for four planar bodies.

    Normalised so that the entry of largest magnitude equals +1; among
    entries tied to within ``EPS_GEOM`` the first one wins.
    """
    if config.n != 4:
        raise ValueError("affine weights are computed for four bodies")
    rel = (config.positions - config.positions.mean(axis=0)) / config.scale()
    mat = np.vstack([np.ones(4), rel.T])
    _, sing, vt = np.linalg.svd(mat)
    if sing[2] < EPS_GEOM * sing[0]:
        raise DegenerateError("collinear configuration: the weight space is not a line")
    delta = vt[-1]
    mag = np.abs(delta)
    lead = int(np.flatnonzero(mag >= mag.max() * (1.0 - EPS_GEOM))[0])
    delta = delta / delta[lead]
    return AffineWeights(tuple(float(d) for d in delta))


def normalise_mass_pair(x, y) -> tuple:
    """Reduce masses ``(x, -x, y, -y)`` to positive ``x`` and ``y``.

    Returns ``(|x|, |y|, perm)`` where canonical body ``k`` is caller body
    ``perm[k]`` (0-based).  A negative ``x`` swaps bodies 1 and 2, a negative
    ``y`` swaps bodies 3 and 4.
    """
    for m in (x, y):
        if isinstance(m, bool) or not isinstance(m, (int, float, np.integer, np.floating)):
            raise InvalidMassError(f"masses must be real numbers, got {m!r}")
        if not math.isfinite(m) or m == 0:
            raise InvalidMassError(f"masses must be finite and nonzero, got {m!r}")
    perm = [0, 1, 2, 3]
    if x < 0:
        perm[0], perm[1] = perm[1], perm[0]
    if y < 0:
        perm[2], perm[3] = perm[3], perm[2]
    return abs(float(x)), abs(float(y)), tuple(perm)


def to_caller_order(config: Configuration, perm, masses) -> Configuration:
    pos = np.empty((config.n, 2))
    for k, c in enumerate(perm):
        pos[c] = config.positions[k]
    return Configuration(masses, pos)

"""Integrate Newton's equations from rest and test for homothetic motion.

A configuration released with zero velocities moves homothetically exactly
when it is central; the motion has a fixed center exactly when the
multiplier is nonzero.  :func:`homothetic_fit` measures both properties on
a :class:`Trajectory`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import kernels
from .core import Configuration, PlanarVector, fit_multiplier
from .errors import StepFailureError

log = logging.getLogger(__name__)

DEFAULT_T_END = 0.1
DEFAULT_TOL = 1e-10
CLOSE_APPROACH = 1e-3
MIN_STEPS = 64
XI_FIXED_CENTER = 1e-8


@dataclass(frozen=True)
class Trajectory:
    masses: np.ndarray
    times: np.ndarray
    positions: np.ndarray  # (T, N, 2)
    velocities: np.ndarray  # (T, N, 2)
    energy: np.ndarray
    close_approach: bool = False

    def __post_init__(self):
        if not (len(self.times) == len(self.positions) == len(self.velocities) == len(self.energy)):
            raise ValueError("trajectory arrays differ in length")
        if np.any(np.diff(np.abs(self.times)) <= 0.0):
            raise ValueError("times must be strictly monotone")

    def configuration(self, k: int) -> Configuration:
        return Configuration(self.masses, self.positions[k])


@dataclass(frozen=True)
class HomotheticFit:
    alpha: np.ndarray
    shape_deviation: np.ndarray
    max_shape_deviation: float
    fixed_center: PlanarVector | None = None
    fixed_center_residual: float | None = None

    def to_dict(self) -> dict:
        return {
            "alpha_final": float(self.alpha[-1]),
            "max_shape_deviation": self.max_shape_deviation,
            "fixed_center": None if self.fixed_center is None else list(self.fixed_center),
            "fixed_center_residual": self.fixed_center_residual,
        }


def energy(masses, positions, velocities) -> float:
    """Kinetic energy minus the potential sum of m_i m_j / r_ij."""
    kin = 0.5 * float(masses @ np.einsum("ij,ij->i", velocities, velocities))
    return kin - float(kernels.potential(masses, positions))


def integrate(config: Configuration, t_end: float = DEFAULT_T_END, tol: float = DEFAULT_TOL,
              backward: bool = False) -> Trajectory:
    """Release ``config`` from rest and integrate to ``t_end``.

    Uses the Dormand-Prince 5(4) pair with ``rtol = atol = tol`` and at
    least ``MIN_STEPS`` steps, so every step is a recorded sample.  Stops
    early, flagging ``close_approach``, once any pair has shrunk to
    ``CLOSE_APPROACH`` times its initial separation.  With ``backward`` the
    integration runs to ``-t_end``.
    """
    if not t_end > 0.0:
        raise ValueError("t_end must be positive")
    n = config.n
    masses = np.array(config.masses)
    iu, ju = np.triu_indices(n, 1)
    d0 = config.distances()[iu, ju]

    def rhs(_t, y):
        return kernels.nbody_rhs(y, masses)

    def approach(_t, y):
        p = y[: 2 * n].reshape(n, 2)
        d = np.hypot(*(p[iu] - p[ju]).T)
        return float(np.min(d / d0)) - CLOSE_APPROACH

    approach.terminal = True
    approach.direction = -1

    y0 = np.concatenate([config.positions.ravel(), np.zeros(2 * n)])
    t1 = -t_end if backward else t_end
    sol = solve_ivp(rhs, (0.0, t1), y0, method="RK45", rtol=tol, atol=tol, events=approach,
                    max_step=t_end / MIN_STEPS)
    if sol.status == -1:
        raise StepFailureError(sol.message)
    close = sol.status == 1
    if close:
        log.info("close approach at t = %g", sol.t[-1])
    pos = sol.y[: 2 * n].T.reshape(-1, n, 2)
    vel = sol.y[2 * n:].T.reshape(-1, n, 2)
    en = np.array([energy(masses, p, v) for p, v in zip(pos, vel)])
    return Trajectory(masses, sol.t, pos, vel, en, close)


def homothetic_fit(traj: Trajectory) -> HomotheticFit:
    """Scale factor from the (1, 2) pair and the departure from homothety.

    Deviations are relative to the initial largest pairwise distance.  A
    fixed center is fitted when the initial configuration has a nonzero
    multiplier.
    """
    pos = traj.positions
    p0 = pos[0]
    scale = traj.configuration(0).scale()
    alpha = np.hypot(*(pos[:, 1] - pos[:, 0]).T) / np.hypot(*(p0[1] - p0[0]))
    n = p0.shape[0]
    iu, ju = np.triu_indices(n, 1)
    rel = pos[:, ju] - pos[:, iu]  # (T, P, 2)
    rel0 = p0[ju] - p0[iu]
    dev = np.hypot(*np.moveaxis(rel - alpha[:, None, None] * rel0, -1, 0)).max(axis=1) / scale

    center = None
    center_res = None
    if abs(fit_multiplier(traj.configuration(0)).xi_fit) > XI_FIXED_CENTER and n >= 3:
        w = 1.0 - alpha
        lhs = pos - alpha[:, None, None] * p0  # = (1 - alpha) * center
        denom = n * float(w @ w)
        if denom > 0.0:
            omega = np.einsum("t,tij->j", w, lhs) / denom
            fitted = omega + alpha[:, None, None] * (p0 - omega)
            center_res = float(np.hypot(*np.moveaxis(pos - fitted, -1, 0)).max() / scale)
            center = PlanarVector(float(omega[0]), float(omega[1]))
    return HomotheticFit(alpha, dev, float(dev.max()), center, center_res)

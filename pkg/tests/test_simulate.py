import math

import numpy as np
import pytest
from scipy.optimize import brentq

from cc4 import simulate
from cc4.core import Configuration, accelerations, fit_multiplier
from cc4.nonzero_multiplier import solve_nonzero
from cc4.zero_multiplier import solve_zero


def perturbed(config, seed, size=1e-2):
    rng = np.random.default_rng(seed)
    return Configuration(config.masses, config.positions + size * config.scale() * rng.normal(size=(4, 2)))


def infall_separation(t, d, total_mass):
    """Separation of two bodies falling from rest (cycloid parametrisation)."""
    k = math.sqrt(d**3 / (8 * total_mass))
    eta = brentq(lambda e: k * (e + math.sin(e)) - t, 0.0, math.pi)
    return d / 2 * (1 + math.cos(eta))


def test_dipole_pair_drifts_rigidly():
    cfg = Configuration([1, -1], [[0, 0], [1.5, 0]])
    traj = simulate.integrate(cfg, t_end=1.0)
    rel = traj.positions[:, 1] - traj.positions[:, 0]
    assert np.abs(rel - rel[0]).max() < 1e-9
    # the positive mass is pushed away and the negative one follows: acceleration 1/d^2 along -x
    assert traj.positions[-1, 0, 0] == pytest.approx(-0.5 / 1.5**2, rel=1e-9)


def test_energy_conserved():
    for sol in solve_nonzero(1.0, 2.0) + (solve_zero(1.0, 2.0),):
        traj = simulate.integrate(sol.configuration)
        e = traj.energy
        assert np.abs(e - e[0]).max() <= 1e-8 * abs(e[0])


def test_radial_infall_matches_cycloid():
    cfg = Configuration([1, 1], [[0, 0], [1, 0]])
    traj = simulate.integrate(cfg, t_end=0.7, tol=1e-11)
    for t, p in zip(traj.times, traj.positions):
        assert np.linalg.norm(p[1] - p[0]) == pytest.approx(infall_separation(t, 1.0, 2.0), abs=1e-9)


def test_error_shrinks_with_tolerance():
    cfg = Configuration([1, 1], [[0, 0], [1, 0]])
    errors = []
    for tol in 1e-5 / 2.0 ** np.arange(7):
        traj = simulate.integrate(cfg, t_end=0.77, tol=tol)
        err = max(abs(np.linalg.norm(p[1] - p[0]) - infall_separation(t, 1.0, 2.0))
                  for t, p in zip(traj.times, traj.positions))
        errors.append(err)
    assert all(b <= a for a, b in zip(errors, errors[1:]))
    assert errors[-1] < errors[0] / 4


def test_close_approach_stops_cleanly():
    cfg = Configuration([1, 1], [[0, 0], [1, 0]])
    # collision at t = pi / 4 for unit separation and unit masses
    traj = simulate.integrate(cfg, t_end=1.0)
    assert traj.close_approach
    assert traj.times[-1] < math.pi / 4
    final = np.linalg.norm(traj.positions[-1, 1] - traj.positions[-1, 0])
    assert final == pytest.approx(simulate.CLOSE_APPROACH, rel=1e-6)


def test_solver_outputs_do_not_collide():
    for x, y in [(0.5, 3.0), (1.0, 1.0), (3.0, 0.5)]:
        for sol in solve_nonzero(x, y):
            cfg = sol.configuration
            t_end = 0.1 * math.sqrt(cfg.scale() ** 3 / np.abs(cfg.masses).max())
            assert not simulate.integrate(cfg, t_end).close_approach


def test_zero_multiplier_translates():
    sol = solve_zero(1.0, 2.0)
    traj = simulate.integrate(sol.configuration)
    fit = simulate.homothetic_fit(traj)
    assert fit.alpha[0] == 1.0
    np.testing.assert_allclose(fit.alpha, 1.0, atol=1e-12)
    assert fit.max_shape_deviation < 1e-8
    assert fit.fixed_center is None


def test_nonzero_multiplier_homothetic_with_fixed_center():
    for sol in solve_nonzero(1.0, 2.0):
        traj = simulate.integrate(sol.configuration)
        fit = simulate.homothetic_fit(traj)
        assert fit.max_shape_deviation < 1e-6
        assert fit.fixed_center_residual < 1e-6
        # each body starts accelerating straight at the center: r_i - a_i / xi
        cfg = sol.configuration
        xi = fit_multiplier(cfg).xi_fit
        centers = cfg.positions - accelerations(cfg) / xi
        np.testing.assert_allclose(centers, np.tile(fit.fixed_center, (4, 1)), atol=1e-6 * cfg.scale())
        assert abs(fit.alpha[-1] - 1.0) > 1e-4


def test_perturbation_breaks_homothety():
    for seed in range(3):
        for sol in solve_nonzero(1.0, 2.0) + (solve_zero(1.0, 2.0),):
            fit = simulate.homothetic_fit(simulate.integrate(perturbed(sol.configuration, seed)))
            assert fit.max_shape_deviation > 1e-4


def test_time_symmetry():
    for sol in solve_nonzero(1.0, 2.0) + (solve_zero(1.0, 2.0),):
        fwd = simulate.integrate(sol.configuration, t_end=1e-3)
        bwd = simulate.integrate(sol.configuration, t_end=1e-3, backward=True)
        assert bwd.times[-1] == pytest.approx(-1e-3)
        assert np.abs(fwd.positions[-1] - bwd.positions[-1]).max() < 1e-8
        np.testing.assert_allclose(fwd.velocities[-1], -bwd.velocities[-1], atol=1e-8)


def test_trajectory_validation():
    z = np.zeros((2, 2, 2))
    with pytest.raises(ValueError):
        simulate.Trajectory(np.ones(2), np.array([0.0, 0.0]), z, z, np.zeros(2))
    with pytest.raises(ValueError):
        simulate.Trajectory(np.ones(2), np.array([0.0, 1.0]), z, z, np.zeros(3))


def test_integrate_rejects_bad_end_time():
    with pytest.raises(ValueError):
        simulate.integrate(Configuration([1, 1], [[0, 0], [1, 0]]), t_end=0.0)

import math

import mpmath as mp
import numpy as np
import pytest

from cc4 import nonzero_multiplier as nz
from cc4.cocircular import fit_circle
from cc4.core import Configuration, fit_multiplier, inertia_vector, laura_andoyer_triple, moment_of_inertia
from cc4.errors import FlatTriangleError, InvalidMassError, NotATrapezoidError, NotCocircularError
from conftest import GRID, sorted_distances


def newton_oracle(x, y, dps=40):
    """Solve f(u, v) = f(phi(u, v)) = x^-3 + y^-3 as one 2-D system (u > v branch)."""
    with mp.workdps(dps):
        x, y = mp.mpf(x), mp.mpf(y)
        level = x**-3 + y**-3

        def f(a, b):
            return a ** (-mp.mpf(3) / 2) + b ** (-mp.mpf(3) / 2)

        def system(u, v):
            p = (x * u + y * v) / (x + y) - x * y
            q = (y * u + x * v) / (x + y) - x * y
            return [f(u, v) - level, f(p, q) - level]

        # coarse seed: smallest residual on a grid with u > v where phi stays positive
        best = None
        for u in np.geomspace(0.05, 100.0, 160) * float((x + y) ** 2):
            for v in np.geomspace(0.01, 100.0, 160) * float((x + y) ** 2):
                if v >= u:
                    continue
                p = (float(x) * u + float(y) * v) / float(x + y) - float(x * y)
                q = (float(y) * u + float(x) * v) / float(x + y) - float(x * y)
                if p <= 0 or q <= 0:
                    continue
                res = sum(float(r) ** 2 for r in system(mp.mpf(u), mp.mpf(v))) / float(level) ** 2
                if best is None or res < best[0]:
                    best = (res, u, v)
        sol = mp.findroot(system, (mp.mpf(best[1]), mp.mpf(best[2])))
        return float(sol[0]), float(sol[1])


def test_unit_mass_reference_values():
    a, b = nz.solve_nonzero(1.0, 1.0)
    assert a.u == pytest.approx(3.332979836, abs=1e-8)
    assert a.v == pytest.approx(0.6670201635, abs=1e-8)
    assert (b.u, b.v) == pytest.approx((a.v, a.u), abs=1e-14)
    assert math.sqrt(a.u) == pytest.approx(1.825645047, abs=1e-8)
    assert math.sqrt(a.v) == pytest.approx(0.8167130240, abs=1e-8)


@pytest.mark.parametrize("x,y", [(1.0, 1.0), (1.0, 2.0), (0.5, 3.0), (2.0, 0.7)])
def test_matches_two_dimensional_oracle(x, y):
    u, v = newton_oracle(x, y)
    sol = nz.solve_nonzero(x, y)[0]
    assert (sol.u, sol.v) == pytest.approx((u, v), rel=1e-12)


def test_diamond_for_equal_masses():
    for sol in nz.solve_nonzero(1.0, 1.0):
        r = sol.configuration.distance
        for i, j in [(1, 2), (2, 3), (3, 4), (4, 1)]:
            assert r(i, j) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_equal_masses_sum_rule(x):
    for sol in nz.solve_nonzero(x, x):
        assert sol.u + sol.v == pytest.approx(4 * x * x, abs=1e-10 * max(1.0, 4 * x * x))


def test_phi_examples(rng):
    for u, v, x in rng.uniform(0.5, 5, size=(20, 3)):
        p, q = nz.phi(u, v, x, x)
        assert p == pytest.approx(q, rel=1e-14)
        assert p == pytest.approx((u + v) / 2 - x * x, rel=1e-12, abs=1e-12)
    for t, x, y in rng.uniform(0.5, 5, size=(20, 3)):
        assert nz.phi(t, t, x, y) == pytest.approx((t - x * y, t - x * y), rel=1e-12, abs=1e-12)
    for u, v, x, y in rng.uniform(0.5, 5, size=(20, 4)):
        a = np.array(nz.phi(u, v, x, y))
        b = np.array(nz.phi(v, u, x, y))
        k = (x - y) / (x + y)
        np.testing.assert_allclose(a - b, k * np.array([u - v, v - u]), atol=1e-12)
        assert abs(k) < 1


def test_contour_closed_form(rng):
    for x, y in rng.uniform(0.3, 4, size=(10, 2)):
        level = x**-3 + y**-3
        u_min = level ** (-2 / 3)
        for u in u_min * np.geomspace(1.001, 1e3, 20):
            assert nz.f_value(u, nz.contour_v(u, level)) == pytest.approx(level, rel=1e-12)
        with pytest.raises(ValueError):
            nz.contour_v(0.5 * u_min, level)


@pytest.mark.parametrize("x", GRID)
@pytest.mark.parametrize("y", GRID)
def test_exactly_two_sign_changes(x, y):
    _, gap = nz.scan_intersections(x, y, n=800)
    assert np.count_nonzero(np.sign(gap[:-1]) != np.sign(gap[1:])) == 2


def test_certification_and_invariants(nonzero_solutions):
    for (x, y), sols in nonzero_solutions.items():
        level = x**-3 + y**-3
        for sol in sols:
            cfg = sol.configuration
            rep = sol.report
            assert nz.f_value(sol.u, sol.v) == pytest.approx(level, rel=1e-12)
            assert (sol.r23_sq, sol.r14_sq) == pytest.approx(nz.phi(sol.u, sol.v, x, y), rel=1e-15)
            assert nz.f_value(sol.r23_sq, sol.r14_sq) == pytest.approx(level, rel=1e-12)
            assert cfg.distance(2, 3) ** 2 == pytest.approx(sol.r23_sq, rel=1e-12)
            assert cfg.distance(1, 4) ** 2 == pytest.approx(sol.r14_sq, rel=1e-12)
            assert rep.max_pair_residual < 1e-10
            assert rep.inertia_vector.norm() < 1e-10 * max(x, y) * cfg.scale()
            assert rep.xi_fit != 0 and abs(rep.xi_fit) > 1e-3
            np.testing.assert_allclose(laura_andoyer_triple(cfg), [level] * 3, rtol=1e-10)
            assert sol.band_class is nz.BandClass.SEMI_BALANCED
            assert isinstance(sol.axis_symmetric, bool)


def test_trapezoid_geometry(nonzero_solutions):
    for (x, y), sols in nonzero_solutions.items():
        for sol in sols:
            cfg = sol.configuration
            p = cfg.positions
            assert cfg.distance(1, 3) ** 2 == pytest.approx(sol.u, rel=1e-12)
            assert cfg.distance(2, 4) ** 2 == pytest.approx(sol.v, rel=1e-12)
            # base lengths are (y, x)
            assert cfg.distance(1, 2) == pytest.approx(y, rel=1e-12)
            assert cfg.distance(3, 4) == pytest.approx(x, rel=1e-12)
            np.testing.assert_allclose(x * (p[1] - p[0]), y * (p[2] - p[3]), atol=1e-12 * x * y)
            # bodies 1, 3 and 2, 4 are the diagonals; the masses on each agree in sign
            assert cfg.masses[0] * cfg.masses[2] > 0 and cfg.masses[1] * cfg.masses[3] > 0
            assert segments_cross(p[0], p[2], p[1], p[3])
            assert nz.find_bases(cfg) == ((0, 1), (2, 3))


def segments_cross(a, b, c, d):
    def orient(p, q, r):
        return np.sign((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
    return orient(a, b, c) != orient(a, b, d) and orient(c, d, a) != orient(c, d, b)


def test_swap_solutions_are_mirror_images(nonzero_solutions):
    for sols in nonzero_solutions.values():
        a, b = sols
        assert (b.u, b.v) == pytest.approx((a.v, a.u), rel=1e-10)
        np.testing.assert_allclose(sorted_distances(a.configuration), sorted_distances(b.configuration),
                                   rtol=1e-10)


def test_moment_of_inertia_equal_at_three_bodies(nonzero_solutions):
    for sols in nonzero_solutions.values():
        for sol in sols:
            cfg = sol.configuration
            vals = [moment_of_inertia(cfg, cfg.positions[k]) for k in range(3)]
            assert max(vals) - min(vals) < 1e-10 * cfg.scale() ** 2


def test_mass_pair_exchange(nonzero_solutions):
    for (x, y), sols in nonzero_solutions.items():
        swapped = nonzero_solutions[(y, x)]
        mine = sorted(tuple(sorted_distances(s.configuration)) for s in sols)
        theirs = sorted(tuple(sorted_distances(s.configuration)) for s in swapped)
        np.testing.assert_allclose(mine, theirs, rtol=1e-10)


def test_multiplier_nonzero_on_open_grid():
    for x in np.linspace(0.2, 4.0, 5):
        for y in np.linspace(0.2, 4.0, 5):
            for sol in nz.solve_nonzero(x, y):
                assert abs(fit_multiplier(sol.configuration).xi_fit) > 1e-6


def test_band_examples():
    rect = Configuration([1, -1, 1, -1], [[0, 0], [2, 0], [2, 1], [0, 1]])
    assert nz.classify_bands(rect) is nz.BandClass.BALANCED
    disjoint = Configuration([1, -1, 1, -1], [[0, 0], [1, 0], [5, 1], [3, 1]])
    assert nz.classify_bands(disjoint) is nz.BandClass.UNBALANCED
    overlap = Configuration([1, -1, 1, -1], [[0, 0], [2, 0], [3, 1], [1, 1]])
    assert nz.classify_bands(overlap) is nz.BandClass.SEMI_BALANCED
    with pytest.raises(NotATrapezoidError):
        nz.classify_bands(Configuration([1, -1, 1, -1], [[0, 0], [2, 0.3], [3, 1], [-1, 2]]))


def test_build_trapezoid_rejects_flat_triangle():
    with pytest.raises(FlatTriangleError):
        nz.build_trapezoid(1.0, 100.0, 1.0, 1.0)


def test_solutions_are_not_cocircular(nonzero_solutions):
    for sols in nonzero_solutions.values():
        for sol in sols:
            with pytest.raises(NotCocircularError):
                fit_circle(sol.configuration)


def test_negative_masses_map_back():
    base = nz.solve_nonzero(1.0, 2.0)
    for x, y in [(-1.0, 2.0), (1.0, -2.0), (-1.0, -2.0)]:
        sols = nz.solve_nonzero(x, y)
        for sol, ref in zip(sols, base):
            cfg = sol.caller_configuration()
            assert list(cfg.masses) == [x, -x, y, -y]
            assert fit_multiplier(cfg).max_pair_residual < 1e-10
            assert inertia_vector(cfg).norm() < 1e-10 * cfg.scale()
            np.testing.assert_allclose(sorted_distances(cfg), sorted_distances(ref.configuration),
                                       rtol=1e-13)


def test_invalid_masses():
    with pytest.raises(InvalidMassError):
        nz.solve_nonzero(0.0, 1.0)
    with pytest.raises(InvalidMassError):
        nz.solve_nonzero(math.nan, 1.0)

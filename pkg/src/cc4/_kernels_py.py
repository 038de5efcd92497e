"""Pure-Python implementations of the numerical kernels.

This module mirrors ``_kernels.pyx`` function for function and is used when
the compiled extension is unavailable (or ``CC4_PURE_PYTHON=1`` is set).
Both implementations follow the same operation order so their results agree
to rounding.
"""
import math

import numpy as np

BACKEND = "python"


def accelerations(masses, positions):
    n = len(masses)
    xs = [float(p) for p in positions[:, 0]]
    ys = [float(p) for p in positions[:, 1]]
    ax = [0.0] * n
    ay = [0.0] * n
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[j] - xs[i]
            dy = ys[j] - ys[i]
            d2 = dx * dx + dy * dy
            inv3 = 1.0 / (d2 * math.sqrt(d2))
            ax[i] += masses[j] * dx * inv3
            ay[i] += masses[j] * dy * inv3
            ax[j] -= masses[i] * dx * inv3
            ay[j] -= masses[i] * dy * inv3
    return np.column_stack([ax, ay])


def potential(masses, positions):
    n = len(masses)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = float(positions[j, 0] - positions[i, 0])
            dy = float(positions[j, 1] - positions[i, 1])
            total += masses[i] * masses[j] / math.sqrt(dx * dx + dy * dy)
    return total


def nbody_rhs(state, masses):
    """Derivative of ``[x1, y1, ..., xN, yN, vx1, vy1, ..., vxN, vyN]``."""
    n = len(masses)
    pos = np.asarray(state[: 2 * n], dtype=float).reshape(n, 2)
    acc = accelerations(masses, pos)
    out = np.empty(4 * n)
    out[: 2 * n] = state[2 * n:]
    out[2 * n:] = acc.ravel()
    return out


def dipole_field(u, v):
    p1 = 1.0 + u
    p2 = 1.0 - u
    d1 = p1 * p1 + v * v
    d2 = p2 * p2 + v * v
    s1 = d1 * math.sqrt(d1)
    s2 = d2 * math.sqrt(d2)
    return p1 / s1 + p2 / s2, v / s1 - v / s2


def dipole_jacobian(u, v):
    """Return (dgu/du, dgu/dv, dgv/du, dgv/dv)."""
    p1 = 1.0 + u
    p2 = 1.0 - u
    vv = v * v
    d1 = p1 * p1 + vv
    d2 = p2 * p2 + vv
    f1 = d1 * d1 * math.sqrt(d1)
    f2 = d2 * d2 * math.sqrt(d2)
    a11 = (vv - 2.0 * p1 * p1) / f1 - (vv - 2.0 * p2 * p2) / f2
    a12 = -3.0 * v * (p1 / f1 + p2 / f2)
    a22 = (p1 * p1 - 2.0 * vv) / f1 + (2.0 * vv - p2 * p2) / f2
    return a11, a12, a12, a22


def dipole_jacobian_det(u, v):
    p1 = 1.0 + u
    p2 = 1.0 - u
    vv = v * v
    d1 = p1 * p1 + vv
    d2 = p2 * p2 + vv
    f1 = d1 * d1 * math.sqrt(d1)
    f2 = d2 * d2 * math.sqrt(d2)
    t1 = p1 * v / f1 + p2 * v / f2
    t2 = (p1 * p1 - vv) / f1 + (vv - p2 * p2) / f2
    return -8.0 * t1 * t1 - 2.0 * t2 * t2 - 4.0 * vv / (f1 * f2)


def _near_source(u, v, eps):
    return math.hypot(u - 1.0, v) < eps or math.hypot(u + 1.0, v) < eps


def dipole_newton(seeds, tu, tv, max_iter, max_halvings, tol, eps_sing):
    """Damped Newton iteration for ``field(r) = (tu, tv)`` from every seed.

    Returns ``(roots, converged)`` with shapes (K, 2) and (K,).
    """
    k = seeds.shape[0]
    roots = np.empty((k, 2))
    converged = np.zeros(k, dtype=np.uint8)
    for s in range(k):
        u = float(seeds[s, 0])
        v = float(seeds[s, 1])
        ok = 0
        if not _near_source(u, v, eps_sing):
            gu, gv = dipole_field(u, v)
            ru = gu - tu
            rv = gv - tv
            res = math.hypot(ru, rv)
            for _ in range(max_iter):
                if res < tol:
                    ok = 1
                    break
                a, b, c, d = dipole_jacobian(u, v)
                det = a * d - b * c
                if det == 0.0 or not math.isfinite(det):
                    break
                du = -(d * ru - b * rv) / det
                dv = -(a * rv - c * ru) / det
                step = 1.0
                accepted = False
                for _ in range(max_halvings + 1):
                    nu = u + step * du
                    nv = v + step * dv
                    if not _near_source(nu, nv, eps_sing):
                        gu, gv = dipole_field(nu, nv)
                        nru = gu - tu
                        nrv = gv - tv
                        nres = math.hypot(nru, nrv)
                        if nres < res:
                            u, v, ru, rv, res = nu, nv, nru, nrv, nres
                            accepted = True
                            break
                    step *= 0.5
                if not accepted:
                    break
            else:
                ok = 1 if res < tol else 0
        roots[s, 0] = u
        roots[s, 1] = v
        converged[s] = ok
    return roots, converged

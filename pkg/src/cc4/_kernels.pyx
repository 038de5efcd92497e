# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels. See ``_kernels_py.py`` for the reference twin."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot, isfinite

cnp.import_array()

BACKEND = "cython"


def accelerations(masses, positions):
    cdef const double[::1] m = np.ascontiguousarray(masses, dtype=np.float64)
    cdef const double[:, ::1] p = np.ascontiguousarray(positions, dtype=np.float64)
    cdef Py_ssize_t n = m.shape[0]
    out = np.zeros((n, 2))
    cdef double[:, ::1] a = out
    _accel(&m[0], &p[0, 0], &a[0, 0], n)
    return out


cdef void _accel(const double* m, const double* p, double* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double dx, dy, d2, inv3
    for i in range(2 * n):
        a[i] = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = p[2 * j] - p[2 * i]
            dy = p[2 * j + 1] - p[2 * i + 1]
            d2 = dx * dx + dy * dy
            inv3 = 1.0 / (d2 * sqrt(d2))
            a[2 * i] += m[j] * dx * inv3
            a[2 * i + 1] += m[j] * dy * inv3
            a[2 * j] -= m[i] * dx * inv3
            a[2 * j + 1] -= m[i] * dy * inv3


def potential(masses, positions):
    cdef const double[::1] m = np.ascontiguousarray(masses, dtype=np.float64)
    cdef const double[:, ::1] p = np.ascontiguousarray(positions, dtype=np.float64)
    cdef Py_ssize_t n = m.shape[0], i, j
    cdef double total = 0.0, dx, dy
    for i in range(n):
        for j in range(i + 1, n):
            dx = p[j, 0] - p[i, 0]
            dy = p[j, 1] - p[i, 1]
            total += m[i] * m[j] / sqrt(dx * dx + dy * dy)
    return total


def nbody_rhs(state, masses):
    cdef const double[::1] m = np.ascontiguousarray(masses, dtype=np.float64)
    cdef const double[::1] s = np.ascontiguousarray(state, dtype=np.float64)
    cdef Py_ssize_t n = m.shape[0], i
    out = np.empty(4 * n)
    cdef double[::1] o = out
    for i in range(2 * n):
        o[i] = s[2 * n + i]
    _accel(&m[0], &s[0], &o[2 * n], n)
    return out


cdef inline void _field(double u, double v, double* gu, double* gv) noexcept nogil:
    cdef double p1 = 1.0 + u, p2 = 1.0 - u
    cdef double d1 = p1 * p1 + v * v, d2 = p2 * p2 + v * v
    cdef double s1 = d1 * sqrt(d1), s2 = d2 * sqrt(d2)
    gu[0] = p1 / s1 + p2 / s2
    gv[0] = v / s1 - v / s2


cdef inline void _jac(double u, double v, double* a11, double* a12, double* a22) noexcept nogil:
    cdef double p1 = 1.0 + u, p2 = 1.0 - u, vv = v * v
    cdef double d1 = p1 * p1 + vv, d2 = p2 * p2 + vv
    cdef double f1 = d1 * d1 * sqrt(d1), f2 = d2 * d2 * sqrt(d2)
    a11[0] = (vv - 2.0 * p1 * p1) / f1 - (vv - 2.0 * p2 * p2) / f2
    a12[0] = -3.0 * v * (p1 / f1 + p2 / f2)
    a22[0] = (p1 * p1 - 2.0 * vv) / f1 + (2.0 * vv - p2 * p2) / f2


def dipole_field(double u, double v):
    cdef double gu, gv
    _field(u, v, &gu, &gv)
    return gu, gv


def dipole_jacobian(double u, double v):
    cdef double a11, a12, a22
    _jac(u, v, &a11, &a12, &a22)
    return a11, a12, a12, a22


def dipole_jacobian_det(double u, double v):
    cdef double p1 = 1.0 + u, p2 = 1.0 - u, vv = v * v
    cdef double d1 = p1 * p1 + vv, d2 = p2 * p2 + vv
    cdef double f1 = d1 * d1 * sqrt(d1), f2 = d2 * d2 * sqrt(d2)
    cdef double t1 = p1 * v / f1 + p2 * v / f2
    cdef double t2 = (p1 * p1 - vv) / f1 + (vv - p2 * p2) / f2
    return -8.0 * t1 * t1 - 2.0 * t2 * t2 - 4.0 * vv / (f1 * f2)


cdef inline bint _near_source(double u, double v, double eps) noexcept nogil:
    return hypot(u - 1.0, v) < eps or hypot(u + 1.0, v) < eps


cdef int _newton_one(double* u_io, double* v_io, double tu, double tv, int max_iter,
                     int max_halvings, double tol, double eps) noexcept nogil:
    cdef double u = u_io[0], v = v_io[0]
    cdef double gu, gv, ru, rv, res, nu, nv, nru, nrv, nres
    cdef double a, b, d, det, du, dv, step
    cdef int it, h, accepted
    if _near_source(u, v, eps):
        return 0
    _field(u, v, &gu, &gv)
    ru = gu - tu
    rv = gv - tv
    res = hypot(ru, rv)
    for it in range(max_iter):
        if res < tol:
            break
        _jac(u, v, &a, &b, &d)
        det = a * d - b * b
        if det == 0.0 or not isfinite(det):
            u_io[0] = u
            v_io[0] = v
            return 0
        du = -(d * ru - b * rv) / det
        dv = -(a * rv - b * ru) / det
        step = 1.0
        accepted = 0
        for h in range(max_halvings + 1):
            nu = u + step * du
            nv = v + step * dv
            if not _near_source(nu, nv, eps):
                _field(nu, nv, &gu, &gv)
                nru = gu - tu
                nrv = gv - tv
                nres = hypot(nru, nrv)
                if nres < res:
                    u = nu
                    v = nv
                    ru = nru
                    rv = nrv
                    res = nres
                    accepted = 1
                    break
            step *= 0.5
        if not accepted:
            u_io[0] = u
            v_io[0] = v
            return 0
    u_io[0] = u
    v_io[0] = v
    return 1 if res < tol else 0


def dipole_newton(seeds, double tu, double tv, int max_iter, int max_halvings,
                  double tol, double eps_sing):
    cdef const double[:, ::1] sd = np.ascontiguousarray(seeds, dtype=np.float64)
    cdef Py_ssize_t k = sd.shape[0], s
    roots = np.empty((k, 2))
    converged = np.zeros(k, dtype=np.uint8)
    cdef double[:, ::1] r = roots
    cdef unsigned char[::1] c = converged
    cdef double u, v
    with nogil:
        for s in range(k):
            u = sd[s, 0]
            v = sd[s, 1]
            c[s] = _newton_one(&u, &v, tu, tv, max_iter, max_halvings, tol, eps_sing)
            r[s, 0] = u
            r[s, 1] = v
    return roots, converged

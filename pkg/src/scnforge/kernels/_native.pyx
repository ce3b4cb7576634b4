# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot loops; mirrors scnforge.kernels._ref operation for operation."""

from libc.math cimport sqrt

import numpy as np

BACKEND_NAME = "native"


cdef inline double _speed_step(double u0, double k_src, double k_dst,
                               double ds, double a_max) nogil:
    cdef double a2 = a_max * a_max
    cdef double lat = u0 * k_src
    cdef double rem = a2 - lat * lat
    cdef double expl, impl, kd2, den, disc, latd
    if rem > 0.0:
        expl = u0 + 2.0 * ds * sqrt(rem)
    else:
        expl = u0
    kd2 = k_dst * k_dst
    den = 1.0 + 4.0 * ds * ds * kd2
    latd = u0 * k_dst
    disc = (a2 - latd * latd) / (ds * ds) + 4.0 * kd2 * a2
    if disc > 0.0:
        impl = (u0 + 2.0 * ds * ds * sqrt(disc)) / den
    else:
        impl = u0 / den
    return expl if expl < impl else impl


def relax_speed_limits(double[::1] u, double[::1] kappa_abs, double[::1] ds,
                       double a_max):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i
    cdef int rounds = 0
    cdef bint changed = True
    cdef double b
    fwd_arr = np.empty(n, dtype=np.float64)
    bwd_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] fwd = fwd_arr
    cdef double[::1] bwd = bwd_arr
    with nogil:
        while changed:
            changed = False
            rounds += 1
            for i in range(n):
                fwd[i] = u[i]
                bwd[i] = u[i]
            for i in range(n - 1):
                b = _speed_step(fwd[i], kappa_abs[i], kappa_abs[i + 1], ds[i], a_max)
                if b < fwd[i + 1]:
                    fwd[i + 1] = b
            for i in range(n - 1, 0, -1):
                b = _speed_step(bwd[i], kappa_abs[i], kappa_abs[i - 1], ds[i - 1], a_max)
                if b < bwd[i - 1]:
                    bwd[i - 1] = b
            for i in range(n):
                b = fwd[i] if fwd[i] < bwd[i] else bwd[i]
                if b < u[i]:
                    u[i] = b
                    changed = True
    return rounds


cdef inline int _point_in_polygon(double px, double py,
                                  double[:, ::1] poly) nogil:
    cdef Py_ssize_t n = poly.shape[0]
    cdef Py_ssize_t i, j
    cdef bint inside = False
    cdef double x1, y1, x2, y2, cross, xint, lo, hi
    for i in range(n):
        x1 = poly[i, 0]
        y1 = poly[i, 1]
        j = i + 1
        if j == n:
            j = 0
        x2 = poly[j, 0]
        y2 = poly[j, 1]
        cross = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)
        if cross == 0.0:
            lo = x1 if x1 < x2 else x2
            hi = x1 if x1 > x2 else x2
            if lo <= px <= hi:
                lo = y1 if y1 < y2 else y2
                hi = y1 if y1 > y2 else y2
                if lo <= py <= hi:
                    return 0
        if (y1 > py) != (y2 > py):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xint:
                inside = not inside
    return 1 if inside else 0


def point_in_polygon(double px, double py, double[:, ::1] poly):
    return _point_in_polygon(px, py, poly)


def points_in_polygon(double[::1] px, double[::1] py, double[:, ::1] poly):
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t k
    out = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] ov = out
    with nogil:
        for k in range(n):
            ov[k] = <unsigned char>_point_in_polygon(px[k], py[k], poly)
    return out


cdef inline bint _rects_overlap(double[:, :] a, double[:, :] b) nogil:
    cdef double ax, ay, ex, ey, alo, ahi, blo, bhi, d
    cdef Py_ssize_t r, i, k
    for r in range(2):
        for i in range(2):
            if r == 0:
                ex = a[i + 1, 0] - a[i, 0]
                ey = a[i + 1, 1] - a[i, 1]
            else:
                ex = b[i + 1, 0] - b[i, 0]
                ey = b[i + 1, 1] - b[i, 1]
            ax = -ey
            ay = ex
            alo = ahi = a[0, 0] * ax + a[0, 1] * ay
            for k in range(1, 4):
                d = a[k, 0] * ax + a[k, 1] * ay
                if d < alo:
                    alo = d
                elif d > ahi:
                    ahi = d
            blo = bhi = b[0, 0] * ax + b[0, 1] * ay
            for k in range(1, 4):
                d = b[k, 0] * ax + b[k, 1] * ay
                if d < blo:
                    blo = d
                elif d > bhi:
                    bhi = d
            if ahi < blo or bhi < alo:
                return False
    return True


def rects_overlap(double[:, ::1] a, double[:, ::1] b):
    return bool(_rects_overlap(a, b))


def first_overlap_index(double[:, :, ::1] ca, double[:, :, ::1] cb):
    cdef Py_ssize_t t, n = ca.shape[0]
    cdef Py_ssize_t hit = -1
    with nogil:
        for t in range(n):
            if _rects_overlap(ca[t], cb[t]):
                hit = t
                break
    return hit

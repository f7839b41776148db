# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled geometry kernels: voxel ball-stamping and fixed-radius neighbor queries.

The numpy fallback in ``_geomfallback`` implements the identical occupancy and
hit predicates; both backends must return bit-identical counts on the same
inputs (see tests/test_kernels_parity.py).
"""

from libc.math cimport floor, ceil, sqrt
from libc.string cimport memset

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline double _center(long gi, double h) nogil:
    return (gi + 0.5) * h


cdef inline bint _span(double p, double w, double h, double budget,
                       long* lo, long* hi) nogil:
    # Index interval {i : ((i+0.5)h - p)^2 <= budget}, w = sqrt(budget).
    # The float guesses err by at most one cell, so a 3-candidate scan with
    # the exact predicate pins the boundary (or detects an empty span).
    cdef long la = <long>ceil((p - w) / h - 0.5)
    cdef long hb = <long>floor((p + w) / h - 0.5)
    cdef long i
    cdef double dc
    cdef bint found = False
    for i in range(la - 1, la + 2):
        dc = _center(i, h) - p
        if dc * dc <= budget:
            lo[0] = i
            found = True
            break
    if not found:
        return False
    found = False
    for i in range(hb + 1, hb - 2, -1):
        dc = _center(i, h) - p
        if dc * dc <= budget:
            hi[0] = i
            found = True
            break
    if not found:
        return False
    return hi[0] >= lo[0]


def stamp_balls(double[:, ::1] pts, double r, double h,
                long[::1] lo, long[::1] dims, cnp.uint8_t[::1] bitmap):
    """Mark every voxel whose center lies within ``r`` of some point.

    Voxels are anchored at absolute multiples of ``h`` (center of global index
    ``i`` is ``(i + 0.5) h``); ``lo``/``dims`` give the window the caller
    allocated ``bitmap`` for. The window must cover all reachable voxels.
    """
    cdef Py_ssize_t n = pts.shape[0]
    cdef int d = pts.shape[1]
    cdef double r2 = r * r
    cdef double q0, q1, w0, w1
    cdef long i0, i1, a0, b0, a1, b1, a2, b2
    cdef Py_ssize_t k
    cdef long lo0 = lo[0], d0 = dims[0]
    cdef long lo1 = 0, d1 = 0, lo2 = 0, d2 = 0
    cdef double p0, p1, p2
    cdef cnp.uint8_t *buf = &bitmap[0]

    if d >= 2:
        lo1 = lo[1]; d1 = dims[1]
    if d == 3:
        lo2 = lo[2]; d2 = dims[2]
    if d < 1 or d > 3:
        raise ValueError("compiled stamp_balls supports d in {1,2,3}")

    with nogil:
        if d == 1:
            for k in range(n):
                p0 = pts[k, 0]
                if not _span(p0, r, h, r2, &a0, &b0):
                    continue
                if a0 < lo0: a0 = lo0
                if b0 > lo0 + d0 - 1: b0 = lo0 + d0 - 1
                if b0 >= a0:
                    memset(buf + (a0 - lo0), 1, b0 - a0 + 1)
        elif d == 2:
            for k in range(n):
                p0 = pts[k, 0]; p1 = pts[k, 1]
                if not _span(p0, r, h, r2, &a0, &b0):
                    continue
                for i0 in range(a0, b0 + 1):
                    if i0 < lo0 or i0 >= lo0 + d0:
                        continue
                    q0 = _center(i0, h) - p0
                    q0 = r2 - q0 * q0
                    if q0 < 0.0:
                        continue
                    w0 = sqrt(q0)
                    if not _span(p1, w0, h, q0, &a1, &b1):
                        continue
                    if a1 < lo1: a1 = lo1
                    if b1 > lo1 + d1 - 1: b1 = lo1 + d1 - 1
                    if b1 >= a1:
                        memset(buf + (i0 - lo0) * d1 + (a1 - lo1), 1, b1 - a1 + 1)
        else:
            for k in range(n):
                p0 = pts[k, 0]; p1 = pts[k, 1]; p2 = pts[k, 2]
                if not _span(p0, r, h, r2, &a0, &b0):
                    continue
                for i0 in range(a0, b0 + 1):
                    if i0 < lo0 or i0 >= lo0 + d0:
                        continue
                    q0 = _center(i0, h) - p0
                    q0 = r2 - q0 * q0
                    if q0 < 0.0:
                        continue
                    w0 = sqrt(q0)
                    if not _span(p1, w0, h, q0, &a1, &b1):
                        continue
                    for i1 in range(a1, b1 + 1):
                        if i1 < lo1 or i1 >= lo1 + d1:
                            continue
                        q1 = _center(i1, h) - p1
                        q1 = q0 - q1 * q1
                        if q1 < 0.0:
                            continue
                        w1 = sqrt(q1)
                        if not _span(p2, w1, h, q1, &a2, &b2):
                            continue
                        if a2 < lo2: a2 = lo2
                        if b2 > lo2 + d2 - 1: b2 = lo2 + d2 - 1
                        if b2 >= a2:
                            memset(buf + ((i0 - lo0) * d1 + (i1 - lo1)) * d2 + (a2 - lo2),
                                   1, b2 - a2 + 1)


def count_within(double[:, ::1] queries, double[:, ::1] refs,
                 long[::1] sorted_ids, long[::1] order,
                 long[::1] cmin, long[::1] extent,
                 double cell, double radius, bint early_exit):
    """Count queries having at least one reference point within ``radius``.

    ``sorted_ids``/``order`` index a uniform hash of the reference points with
    cell size ``cell`` (ids packed over the reference extent by the caller).
    With ``early_exit`` the scan stops at the first hit and returns 1.
    """
    cdef Py_ssize_t nq = queries.shape[0]
    cdef Py_ssize_t nr = refs.shape[0]
    cdef int d = queries.shape[1]
    cdef double r2 = radius * radius
    cdef long count = 0
    cdef Py_ssize_t k
    cdef int z, o0, o1, o2
    cdef long c0, c1, c2, nb0, nb1, nb2, cid, jlo, jhi, mid, run, j
    cdef double dist, diff
    cdef bint hit
    cdef long e0 = extent[0], m0 = cmin[0]
    cdef long e1 = 1, m1 = 0, e2 = 1, m2 = 0

    if d >= 2:
        e1 = extent[1]; m1 = cmin[1]
    if d == 3:
        e2 = extent[2]; m2 = cmin[2]
    if d < 1 or d > 3:
        raise ValueError("compiled count_within supports d in {1,2,3}")
    if nr == 0:
        return 0

    with nogil:
        for k in range(nq):
            hit = False
            c0 = <long>floor(queries[k, 0] / cell)
            c1 = <long>floor(queries[k, 1] / cell) if d >= 2 else 0
            c2 = <long>floor(queries[k, 2] / cell) if d == 3 else 0
            for o0 in range(-1, 2):
                nb0 = c0 + o0
                if nb0 < m0 or nb0 >= m0 + e0:
                    continue
                for o1 in range(-1, 2):
                    if d >= 2:
                        nb1 = c1 + o1
                        if nb1 < m1 or nb1 >= m1 + e1:
                            continue
                    elif o1 != 0:
                        continue
                    else:
                        nb1 = 0
                    for o2 in range(-1, 2):
                        if d == 3:
                            nb2 = c2 + o2
                            if nb2 < m2 or nb2 >= m2 + e2:
                                continue
                        elif o2 != 0:
                            continue
                        else:
                            nb2 = 0
                        cid = ((nb0 - m0) * e1 + (nb1 - m1)) * e2 + (nb2 - m2)
                        # lower bound binary search
                        jlo = 0
                        jhi = nr
                        while jlo < jhi:
                            mid = (jlo + jhi) >> 1
                            if sorted_ids[mid] < cid:
                                jlo = mid + 1
                            else:
                                jhi = mid
                        run = jlo
                        while run < nr and sorted_ids[run] == cid:
                            j = order[run]
                            dist = 0.0
                            for z in range(d):
                                diff = queries[k, z] - refs[j, z]
                                dist += diff * diff
                            if dist <= r2:
                                hit = True
                                break
                            run += 1
                        if hit:
                            break
                    if hit:
                        break
                if hit:
                    break
            if hit:
                count += 1
                if early_exit:
                    break
    return count

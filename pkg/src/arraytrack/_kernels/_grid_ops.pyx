# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels (hot inner loops).

Same contracts as ``_numpy_ops``; see ``arraytrack._kernels`` for the
shared signatures.
"""

import numpy as np

from libc.math cimport cos, sin, pow


def response_power_grid(pos_x, pos_y, weights, double wavenumber,
                        az_rad, el_rad, int element_kind, double element_exponent):
    "|element amplitude * sum_n w_n exp(j k (x_n u + y_n v))|^2 on the az x el grid."
    cdef double[::1] px = np.ascontiguousarray(pos_x, dtype=np.float64)
    cdef double[::1] py = np.ascontiguousarray(pos_y, dtype=np.float64)
    cdef double complex[::1] wt = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef double[::1] az = np.ascontiguousarray(az_rad, dtype=np.float64)
    cdef double[::1] el = np.ascontiguousarray(el_rad, dtype=np.float64)

    cdef Py_ssize_t na = az.shape[0], ne = el.shape[0], n = px.shape[0]
    out = np.empty((na, ne), dtype=np.float64)
    cdef double[:, ::1] o = out

    cdef Py_ssize_t i, j, m
    cdef double saz, caz, sel, cel, u, v, w, amp2, ph, c, s, sr, si, wr, wi
    for i in range(na):
        saz = sin(az[i])
        caz = cos(az[i])
        for j in range(ne):
            sel = sin(el[j])
            cel = cos(el[j])
            u = cel * saz
            v = sel
            w = cel * caz
            if w < 0.0:
                o[i, j] = 0.0
                continue
            if element_kind == 0:
                amp2 = 1.0
            else:
                amp2 = pow(w, 2.0 * element_exponent)
            sr = 0.0
            si = 0.0
            for m in range(n):
                ph = wavenumber * (px[m] * u + py[m] * v)
                c = cos(ph)
                s = sin(ph)
                wr = wt[m].real
                wi = wt[m].imag
                sr += wr * c - wi * s
                si += wr * s + wi * c
            o[i, j] = amp2 * (sr * sr + si * si)
    return out


def music_inverse_power_grid(pos_x, pos_y, projector, double wavenumber, az_rad, el_rad):
    "Re(a^H P a) on the az x el grid for a Hermitian projector P."
    cdef double[::1] px = np.ascontiguousarray(pos_x, dtype=np.float64)
    cdef double[::1] py = np.ascontiguousarray(pos_y, dtype=np.float64)
    cdef double complex[:, ::1] pm = np.ascontiguousarray(projector, dtype=np.complex128)
    cdef double[::1] az = np.ascontiguousarray(az_rad, dtype=np.float64)
    cdef double[::1] el = np.ascontiguousarray(el_rad, dtype=np.float64)

    cdef Py_ssize_t na = az.shape[0], ne = el.shape[0], n = px.shape[0]
    out = np.empty((na, ne), dtype=np.float64)
    cdef double[:, ::1] o = out
    ar_buf = np.empty(n, dtype=np.float64)
    ai_buf = np.empty(n, dtype=np.float64)
    cdef double[::1] ar = ar_buf
    cdef double[::1] ai = ai_buf

    # Steering entries are unit modulus, so the diagonal contributes the
    # real trace regardless of angle.  Hermitian symmetry folds each
    # off-diagonal pair into twice the real part of the upper entry.
    cdef Py_ssize_t npair = n * (n - 1) // 2
    pr_buf = np.empty(npair, dtype=np.float64)
    pi_buf = np.empty(npair, dtype=np.float64)
    mi_buf = np.empty(npair, dtype=np.intp)
    li_buf = np.empty(npair, dtype=np.intp)
    cdef double[::1] prr = pr_buf
    cdef double[::1] pri = pi_buf
    cdef Py_ssize_t[::1] mi = mi_buf
    cdef Py_ssize_t[::1] li = li_buf

    cdef Py_ssize_t i, j, m, l, p
    cdef double trace_re = 0.0
    p = 0
    for m in range(n):
        trace_re += pm[m, m].real
        for l in range(m + 1, n):
            prr[p] = 2.0 * pm[m, l].real
            pri[p] = 2.0 * pm[m, l].imag
            mi[p] = m
            li[p] = l
            p += 1

    cdef double saz, cel, u, v, ph, acc, cr, ci
    for i in range(na):
        saz = sin(az[i])
        for j in range(ne):
            cel = cos(el[j])
            u = cel * saz
            v = sin(el[j])
            for m in range(n):
                ph = wavenumber * (px[m] * u + py[m] * v)
                ar[m] = cos(ph)
                ai[m] = sin(ph)
            acc = trace_re
            for p in range(npair):
                m = mi[p]
                l = li[p]
                # conj(a_m) * a_l
                cr = ar[m] * ar[l] + ai[m] * ai[l]
                ci = ar[m] * ai[l] - ai[m] * ar[l]
                # 2 Re[conj(a_m) P_ml a_l]
                acc += prr[p] * cr - pri[p] * ci
            o[i, j] = acc
    return out

# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the soft-edit-distance DP.

Same scaled-significand algorithm as the pure-Python reference in
``pyref.py`` (see its module docstring), with identical operation order so
both backends produce bit-identical results.  All hot loops release the
GIL, so independent pairs can be evaluated from a thread pool.
"""

from libc.math cimport exp, expm1, fabs, frexp, ldexp

import numpy as np

BACKEND = "compiled"

ctypedef long long i64


cdef inline double _row_delta(const double* r1, const double* r2, Py_ssize_t g) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t k
    for k in range(g):
        s += fabs(r1[k] - r2[k])
    return 0.5 * s


cdef inline void _cell(double at, double bt, i64 et,
                       double al, double bl, i64 el,
                       double ad, double bd, i64 ed,
                       double d, double tau, double e1, double e2,
                       double* a_out, double* b_out, i64* e_out) noexcept nogil:
    cdef double m = e2 * expm1(tau * (d - 2.0))
    cdef double c2 = d * m + (d - 2.0) * e2
    cdef i64 e0 = et if et >= el else el
    if ed > e0:
        e0 = ed
    cdef double ft = ldexp(1.0, <int> (et - e0))
    cdef double fl = ldexp(1.0, <int> (el - e0))
    cdef double fd = ldexp(1.0, <int> (ed - e0))
    cdef double b_raw = (bt * ft + bl * fl) * e1 + bd * fd * m
    cdef double a_raw = ((at * ft + bt * ft) + (al * fl + bl * fl)) * e1 + (ad * fd * m + bd * fd * c2)
    cdef int ex
    b_out[0] = frexp(b_raw, &ex)
    a_out[0] = ldexp(a_raw, -ex)
    e_out[0] = e0 + ex


def sed_value(const double[:, ::1] x1, const double[:, ::1] x2, double tau):
    """Soft edit distance between two row-stochastic float64 matrices."""
    cdef Py_ssize_t l1 = x1.shape[0]
    cdef Py_ssize_t g = x1.shape[1]
    cdef Py_ssize_t l2 = x2.shape[0]
    cdef double e1 = exp(tau)
    cdef double e2 = exp(2.0 * tau)

    buf_a = np.empty(2 * (l2 + 1), dtype=np.float64)
    buf_b = np.empty(2 * (l2 + 1), dtype=np.float64)
    buf_e = np.empty(2 * (l2 + 1), dtype=np.int64)
    cdef double[::1] va = buf_a
    cdef double[::1] vb = buf_b
    cdef i64[::1] ve = buf_e
    cdef double* a_prev = &va[0]
    cdef double* b_prev = &vb[0]
    cdef i64* e_prev = &ve[0]
    cdef double* a_cur = a_prev + (l2 + 1)
    cdef double* b_cur = b_prev + (l2 + 1)
    cdef i64* e_cur = e_prev + (l2 + 1)
    cdef double* tmp_d
    cdef i64* tmp_e

    cdef Py_ssize_t i, j
    cdef double b0, d
    cdef i64 e0
    cdef int ex
    with nogil:
        a_prev[0] = 0.0
        b_prev[0] = 1.0
        e_prev[0] = 0
        b0 = 1.0
        e0 = 0
        for j in range(1, l2 + 1):
            b0 = frexp(b0 * e1, &ex)
            e0 += ex
            a_prev[j] = j * b0
            b_prev[j] = b0
            e_prev[j] = e0
        b0 = 1.0
        e0 = 0
        for i in range(1, l1 + 1):
            b0 = frexp(b0 * e1, &ex)
            e0 += ex
            a_cur[0] = i * b0
            b_cur[0] = b0
            e_cur[0] = e0
            for j in range(1, l2 + 1):
                d = _row_delta(&x1[i - 1, 0], &x2[j - 1, 0], g)
                _cell(a_prev[j], b_prev[j], e_prev[j],
                      a_cur[j - 1], b_cur[j - 1], e_cur[j - 1],
                      a_prev[j - 1], b_prev[j - 1], e_prev[j - 1],
                      d, tau, e1, e2,
                      &a_cur[j], &b_cur[j], &e_cur[j])
            tmp_d = a_prev; a_prev = a_cur; a_cur = tmp_d
            tmp_d = b_prev; b_prev = b_cur; b_cur = tmp_d
            tmp_e = e_prev; e_prev = e_cur; e_cur = tmp_e
    return a_prev[l2] / b_prev[l2]


cdef void _fill_tables(const double[:, ::1] x1, const double[:, ::1] x2, double tau,
                       double[:, ::1] a_sig, double[:, ::1] b_sig,
                       i64[:, ::1] s_exp, double[:, ::1] delta) noexcept nogil:
    cdef Py_ssize_t l1 = x1.shape[0]
    cdef Py_ssize_t g = x1.shape[1]
    cdef Py_ssize_t l2 = x2.shape[0]
    cdef double e1 = exp(tau)
    cdef double e2 = exp(2.0 * tau)
    cdef Py_ssize_t i, j
    cdef double b0, d
    cdef i64 e0
    cdef int ex

    a_sig[0, 0] = 0.0
    b_sig[0, 0] = 1.0
    s_exp[0, 0] = 0
    b0 = 1.0
    e0 = 0
    for j in range(1, l2 + 1):
        b0 = frexp(b0 * e1, &ex)
        e0 += ex
        a_sig[0, j] = j * b0
        b_sig[0, j] = b0
        s_exp[0, j] = e0
    b0 = 1.0
    e0 = 0
    for i in range(1, l1 + 1):
        b0 = frexp(b0 * e1, &ex)
        e0 += ex
        a_sig[i, 0] = i * b0
        b_sig[i, 0] = b0
        s_exp[i, 0] = e0

    for i in range(1, l1 + 1):
        for j in range(1, l2 + 1):
            d = _row_delta(&x1[i - 1, 0], &x2[j - 1, 0], g)
            delta[i - 1, j - 1] = d
            _cell(a_sig[i - 1, j], b_sig[i - 1, j], s_exp[i - 1, j],
                  a_sig[i, j - 1], b_sig[i, j - 1], s_exp[i, j - 1],
                  a_sig[i - 1, j - 1], b_sig[i - 1, j - 1], s_exp[i - 1, j - 1],
                  d, tau, e1, e2,
                  &a_sig[i, j], &b_sig[i, j], &s_exp[i, j])


def sed_fill_tables(const double[:, ::1] x1, const double[:, ::1] x2, double tau,
                    double[:, ::1] a_sig, double[:, ::1] b_sig,
                    i64[:, ::1] s_exp, double[:, ::1] delta):
    """Fill full scaled DP tables (and the mismatch-cost table) in place."""
    with nogil:
        _fill_tables(x1, x2, tau, a_sig, b_sig, s_exp, delta)


def sed_value_grad(const double[:, ::1] x1, const double[:, ::1] x2, double tau,
                   object d1, object d2, double weight):
    """Soft edit distance plus reverse-mode gradients.

    Accumulates weight * dSED/dx1 into d1 and weight * dSED/dx2 into d2
    (either may be None, and they may alias when x1 is x2).  Returns the
    distance value.
    """
    cdef Py_ssize_t l1 = x1.shape[0]
    cdef Py_ssize_t g = x1.shape[1]
    cdef Py_ssize_t l2 = x2.shape[0]

    a_arr = np.empty((l1 + 1, l2 + 1), dtype=np.float64)
    b_arr = np.empty((l1 + 1, l2 + 1), dtype=np.float64)
    e_arr = np.empty((l1 + 1, l2 + 1), dtype=np.int64)
    d_arr = np.empty((l1, l2), dtype=np.float64)
    cdef double[:, ::1] a_sig = a_arr
    cdef double[:, ::1] b_sig = b_arr
    cdef i64[:, ::1] s_exp = e_arr
    cdef double[:, ::1] delta = d_arr

    cdef double[:, ::1] d1v
    cdef double[:, ::1] d2v
    cdef double* p1 = NULL
    cdef double* p2 = NULL
    if d1 is not None and l1 > 0:
        d1v = d1
        p1 = &d1v[0, 0]
    if d2 is not None and l2 > 0:
        d2v = d2
        p2 = &d2v[0, 0]

    cdef double a_f, b_f, value
    cdef Py_ssize_t i, j, k
    cdef double e1 = exp(tau)
    cdef double e2 = exp(2.0 * tau)
    cdef double cai, cbi, d, m, c2, dd, ft, fl, fd, ga, gb, ad, bd, dbar, wd, u, v, s
    cdef i64 ecur

    with nogil:
        _fill_tables(x1, x2, tau, a_sig, b_sig, s_exp, delta)
    a_f = a_sig[l1, l2]
    b_f = b_sig[l1, l2]
    value = a_f / b_f
    if l1 == 0 or l2 == 0:
        return value

    ca_arr = np.zeros((l1 + 1, l2 + 1), dtype=np.float64)
    cb_arr = np.zeros((l1 + 1, l2 + 1), dtype=np.float64)
    cdef double[:, ::1] ca = ca_arr
    cdef double[:, ::1] cb = cb_arr
    ca[l1, l2] = 1.0 / b_f
    cb[l1, l2] = -value / b_f

    with nogil:
        for i in range(l1, 0, -1):
            for j in range(l2, 0, -1):
                cai = ca[i, j]
                cbi = cb[i, j]
                if cai == 0.0 and cbi == 0.0:
                    continue
                d = delta[i - 1, j - 1]
                m = e2 * expm1(tau * (d - 2.0))
                c2 = d * m + (d - 2.0) * e2
                dd = m + e2
                ecur = s_exp[i, j]
                ft = ldexp(1.0, <int> (s_exp[i - 1, j] - ecur))
                fl = ldexp(1.0, <int> (s_exp[i, j - 1] - ecur))
                fd = ldexp(1.0, <int> (s_exp[i - 1, j - 1] - ecur))
                ga = cai * e1
                gb = (cai + cbi) * e1
                ca[i - 1, j] += ga * ft
                cb[i - 1, j] += gb * ft
                ca[i, j - 1] += ga * fl
                cb[i, j - 1] += gb * fl
                ca[i - 1, j - 1] += cai * m * fd
                cb[i - 1, j - 1] += (cai * c2 + cbi * m) * fd
                ad = a_sig[i - 1, j - 1]
                bd = b_sig[i - 1, j - 1]
                dbar = (cai * (ad * tau * dd + bd * dd * (1.0 + tau * d))
                        + cbi * bd * tau * dd) * fd
                if dbar == 0.0:
                    continue
                wd = weight * dbar * 0.5
                for k in range(g):
                    u = x1[i - 1, k]
                    v = x2[j - 1, k]
                    if u > v:
                        s = wd
                    elif u < v:
                        s = -wd
                    else:
                        continue
                    if p1 != NULL:
                        p1[(i - 1) * g + k] += s
                    if p2 != NULL:
                        p2[(j - 1) * g + k] -= s
    return value

"""Pure-Python reference kernels for the soft-edit-distance DP.

The accumulators of the softmin recurrence decay like exp(tau * O(L)) and
leave the double range near L*|tau| ~ 700, so every DP cell is stored in a
scaled form: a significand pair (alpha_sig, beta_sig) plus one shared
power-of-two exponent, with beta_sig kept in [0.5, 1) by renormalising each
cell.  The final distance is the significand ratio at the corner cell; the
exponents cancel.

Cell update, with E = e^tau, E2 = e^{2 tau}, and mismatch cost d:

    alpha' = (alpha_top + beta_top + alpha_left + beta_left) * E
             + alpha_diag * (e^{tau d} - E2)
             + beta_diag * (d * e^{tau d} - 2 * E2)
    beta'  = (beta_top + beta_left) * E + beta_diag * (e^{tau d} - E2)

where e^{tau d} - E2 is evaluated as E2 * expm1(tau * (d - 2)) to avoid
cancellation at small |tau|.

This module is the reference the compiled backend must reproduce
bit-for-bit: same operation order, same libm calls, no reassociation.
It is selected automatically when the compiled extension is unavailable.
"""

from math import exp, expm1, frexp, ldexp

import numpy as np

BACKEND = "python"


def _row_delta(r1, r2, g):
    # 0.5 * L1 distance between two stochastic rows; left-to-right
    # accumulation, mirroring the C kernel exactly.
    s = 0.0
    for k in range(g):
        s += abs(r1[k] - r2[k])
    return 0.5 * s


def _cell(at, bt, et, al, bl, el, ad, bd, ed, d, tau, e1, e2):
    m = e2 * expm1(tau * (d - 2.0))
    c2 = d * m + (d - 2.0) * e2
    e0 = et if et >= el else el
    if ed > e0:
        e0 = ed
    ft = ldexp(1.0, et - e0)
    fl = ldexp(1.0, el - e0)
    fd = ldexp(1.0, ed - e0)
    b_raw = (bt * ft + bl * fl) * e1 + bd * fd * m
    a_raw = ((at * ft + bt * ft) + (al * fl + bl * fl)) * e1 + (ad * fd * m + bd * fd * c2)
    frac, ex = frexp(b_raw)
    return ldexp(a_raw, -ex), frac, e0 + ex


def sed_value(x1, x2, tau):
    """Soft edit distance between two row-stochastic float64 matrices.

    Value-only pass keeping two live DP rows.
    """
    l1, g = x1.shape
    l2 = x2.shape[0]
    r1 = x1.tolist()
    r2 = x2.tolist()
    e1 = exp(tau)
    e2 = exp(2.0 * tau)

    a_prev = [0.0] * (l2 + 1)
    b_prev = [1.0] * (l2 + 1)
    e_prev = [0] * (l2 + 1)
    b = 1.0
    e = 0
    for j in range(1, l2 + 1):
        b, ex = frexp(b * e1)
        e += ex
        a_prev[j] = j * b
        b_prev[j] = b
        e_prev[j] = e

    a_cur = [0.0] * (l2 + 1)
    b_cur = [0.0] * (l2 + 1)
    e_cur = [0] * (l2 + 1)
    b0 = 1.0
    e0 = 0
    for i in range(1, l1 + 1):
        b0, ex = frexp(b0 * e1)
        e0 += ex
        a_cur[0] = i * b0
        b_cur[0] = b0
        e_cur[0] = e0
        row = r1[i - 1]
        for j in range(1, l2 + 1):
            d = _row_delta(row, r2[j - 1], g)
            a_cur[j], b_cur[j], e_cur[j] = _cell(
                a_prev[j], b_prev[j], e_prev[j],
                a_cur[j - 1], b_cur[j - 1], e_cur[j - 1],
                a_prev[j - 1], b_prev[j - 1], e_prev[j - 1],
                d, tau, e1, e2)
        a_prev, a_cur = a_cur, a_prev
        b_prev, b_cur = b_cur, b_prev
        e_prev, e_cur = e_cur, e_prev
    return a_prev[l2] / b_prev[l2]


def sed_fill_tables(x1, x2, tau, a_sig, b_sig, s_exp, delta):
    """Fill full scaled DP tables (and the mismatch-cost table) in place.

    a_sig, b_sig: (L1+1, L2+1) float64; s_exp: (L1+1, L2+1) int64;
    delta: (L1, L2) float64.
    """
    l1, g = x1.shape
    l2 = x2.shape[0]
    r1 = x1.tolist()
    r2 = x2.tolist()
    e1 = exp(tau)
    e2 = exp(2.0 * tau)

    a_sig[0, 0] = 0.0
    b_sig[0, 0] = 1.0
    s_exp[0, 0] = 0
    b = 1.0
    e = 0
    for j in range(1, l2 + 1):
        b, ex = frexp(b * e1)
        e += ex
        a_sig[0, j] = j * b
        b_sig[0, j] = b
        s_exp[0, j] = e
    b = 1.0
    e = 0
    for i in range(1, l1 + 1):
        b, ex = frexp(b * e1)
        e += ex
        a_sig[i, 0] = i * b
        b_sig[i, 0] = b
        s_exp[i, 0] = e

    for i in range(1, l1 + 1):
        row = r1[i - 1]
        for j in range(1, l2 + 1):
            d = _row_delta(row, r2[j - 1], g)
            delta[i - 1, j - 1] = d
            a, bb, ee = _cell(
                float(a_sig[i - 1, j]), float(b_sig[i - 1, j]), int(s_exp[i - 1, j]),
                float(a_sig[i, j - 1]), float(b_sig[i, j - 1]), int(s_exp[i, j - 1]),
                float(a_sig[i - 1, j - 1]), float(b_sig[i - 1, j - 1]), int(s_exp[i - 1, j - 1]),
                d, tau, e1, e2)
            a_sig[i, j] = a
            b_sig[i, j] = bb
            s_exp[i, j] = ee


def sed_value_grad(x1, x2, tau, d1, d2, weight):
    """Soft edit distance plus reverse-mode gradients.

    Accumulates weight * dSED/dx1 into d1 and weight * dSED/dx2 into d2
    (either may be None, and they may alias when x1 is x2).  Returns the
    distance value.  The adjoint sweep runs over the same scaled
    significands as the forward pass, realigning exponents with ldexp, so
    it inherits the forward pass's dynamic range.
    """
    l1, g = x1.shape
    l2 = x2.shape[0]
    a_sig = np.empty((l1 + 1, l2 + 1))
    b_sig = np.empty((l1 + 1, l2 + 1))
    s_exp = np.empty((l1 + 1, l2 + 1), dtype=np.int64)
    delta = np.empty((l1, l2))
    sed_fill_tables(x1, x2, tau, a_sig, b_sig, s_exp, delta)
    a_f = float(a_sig[l1, l2])
    b_f = float(b_sig[l1, l2])
    value = a_f / b_f
    if l1 == 0 or l2 == 0:
        return value

    r1 = x1.tolist()
    r2 = x2.tolist()
    e1 = exp(tau)
    e2 = exp(2.0 * tau)
    ca = np.zeros((l1 + 1, l2 + 1))
    cb = np.zeros((l1 + 1, l2 + 1))
    ca[l1, l2] = 1.0 / b_f
    cb[l1, l2] = -value / b_f

    for i in range(l1, 0, -1):
        for j in range(l2, 0, -1):
            cai = float(ca[i, j])
            cbi = float(cb[i, j])
            if cai == 0.0 and cbi == 0.0:
                continue
            d = float(delta[i - 1, j - 1])
            m = e2 * expm1(tau * (d - 2.0))
            c2 = d * m + (d - 2.0) * e2
            dd = m + e2  # e^{tau d}
            ecur = int(s_exp[i, j])
            ft = ldexp(1.0, int(s_exp[i - 1, j]) - ecur)
            fl = ldexp(1.0, int(s_exp[i, j - 1]) - ecur)
            fd = ldexp(1.0, int(s_exp[i - 1, j - 1]) - ecur)
            ga = cai * e1
            gb = (cai + cbi) * e1
            ca[i - 1, j] += ga * ft
            cb[i - 1, j] += gb * ft
            ca[i, j - 1] += ga * fl
            cb[i, j - 1] += gb * fl
            ca[i - 1, j - 1] += cai * m * fd
            cb[i - 1, j - 1] += (cai * c2 + cbi * m) * fd
            ad = float(a_sig[i - 1, j - 1])
            bd = float(b_sig[i - 1, j - 1])
            dbar = (cai * (ad * tau * dd + bd * dd * (1.0 + tau * d))
                    + cbi * bd * tau * dd) * fd
            if dbar == 0.0:
                continue
            wrow1 = r1[i - 1]
            wrow2 = r2[j - 1]
            wd = weight * dbar * 0.5
            for k in range(g):
                u = wrow1[k]
                v = wrow2[k]
                if u > v:
                    s = wd
                elif u < v:
                    s = -wd
                else:
                    continue
                if d1 is not None:
                    d1[i - 1, k] += s
                if d2 is not None:
                    d2[j - 1, k] -= s
    return value

"""numba-jitted implementations of the numeric kernels.

Twin of ``_kernels_numpy``: same function names, signatures and
semantics, written in loop style for ``@njit``.  The agreement of the
two backends is enforced by tests; keep them in lock-step when editing.
Compilation is lazy and cached on disk (``cache=True``).
"""

from __future__ import annotations

import numpy as np
from numba import njit

FOUR_PI = 4.0 * np.pi

SHOT_DECAYED = 0
SHOT_CROSSED = 1
SHOT_TURNED = 2
SHOT_RAN_OFF = 3


@njit(cache=True)
def laplacian(values, dr):
    n = values.size
    out = np.empty(n)
    inv = 1.0 / (dr * dr)
    for i in range(n):
        ri2 = (i + 0.5) * (i + 0.5)
        lo = 0.0
        if i > 0:
            lo = float(i * i) * (values[i] - values[i - 1])
        if i < n - 1:
            hi = float((i + 1) * (i + 1)) * (values[i + 1] - values[i])
        else:
            hi = float(n * n) * (-2.0 * values[n - 1])
        out[i] = (hi - lo) * inv / ri2
    return out


@njit(cache=True)
def kinetic_form(u, v, dr):
    n = u.size
    acc = 0.0
    for j in range(1, n):
        acc += float(j * j) * (u[j] - u[j - 1]) * (v[j] - v[j - 1])
    interior = FOUR_PI * dr * acc
    boundary = 2.0 * FOUR_PI * (float(n * n) * dr) * u[n - 1] * v[n - 1]
    return interior + boundary


@njit(cache=True)
def kinetic(u, dr):
    return kinetic_form(u, u, dr)


@njit(cache=True)
def weighted_dot(w, u, v):
    acc = 0.0
    for i in range(w.size):
        acc += w[i] * u[i] * v[i]
    return acc


@njit(cache=True)
def power_integral(w, u, p):
    acc = 0.0
    for i in range(w.size):
        acc += w[i] * abs(u[i]) ** p
    return acc


@njit(cache=True)
def _edge_slope(h0, h1, d0, d1):
    s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
    if s * d0 <= 0.0:
        return 0.0
    if d0 * d1 < 0.0 and abs(s) > 3.0 * abs(d0):
        return 3.0 * d0
    return s


@njit(cache=True)
def pchip_slopes(x, y):
    n = x.size
    d = np.zeros(n)
    if n == 2:
        s = (y[1] - y[0]) / (x[1] - x[0])
        d[0] = s
        d[1] = s
        return d
    for k in range(1, n - 1):
        hk = x[k] - x[k - 1]
        hk1 = x[k + 1] - x[k]
        dk = (y[k] - y[k - 1]) / hk
        dk1 = (y[k + 1] - y[k]) / hk1
        if dk * dk1 > 0.0:
            w1 = 2.0 * hk1 + hk
            w2 = hk1 + 2.0 * hk
            d[k] = (w1 + w2) / (w1 / dk + w2 / dk1)
    h0 = x[1] - x[0]
    h1 = x[2] - x[1]
    d0 = (y[1] - y[0]) / h0
    d1 = (y[2] - y[1]) / h1
    d[0] = _edge_slope(h0, h1, d0, d1)
    hm = x[n - 1] - x[n - 2]
    hm1 = x[n - 2] - x[n - 3]
    dm = (y[n - 1] - y[n - 2]) / hm
    dm1 = (y[n - 2] - y[n - 3]) / hm1
    d[n - 1] = _edge_slope(hm, hm1, dm, dm1)
    return d


@njit(cache=True)
def hermite_eval(x, y, d, xq):
    n = x.size
    out = np.empty(xq.size)
    for j in range(xq.size):
        xj = xq[j]
        if xj < x[0] or xj > x[n - 1]:
            out[j] = 0.0
            continue
        k = np.searchsorted(x, xj, side="right") - 1
        if k > n - 2:
            k = n - 2
        hk = x[k + 1] - x[k]
        s = (xj - x[k]) / hk
        s2 = s * s
        s3 = s2 * s
        out[j] = ((2.0 * s3 - 3.0 * s2 + 1.0) * y[k]
                  + (s3 - 2.0 * s2 + s) * hk * d[k]
                  + (-2.0 * s3 + 3.0 * s2) * y[k + 1]
                  + (s3 - s2) * hk * d[k + 1])
    return out


@njit(cache=True)
def tridiag_solve(dl, dg, du, b):
    n = dg.size
    a = dl.copy()
    bb = dg.copy()
    c = du.copy()
    d = b.copy()
    c[n - 1] = 0.0  # declared unused; a row swap at i = n−2 reads it
    e = np.zeros(n)
    for i in range(n - 1):
        if abs(bb[i]) < abs(a[i + 1]):
            bi = bb[i]
            ci = c[i]
            di = d[i]
            bb[i] = a[i + 1]
            c[i] = bb[i + 1]
            e[i] = c[i + 1]
            d[i] = d[i + 1]
            a[i + 1] = bi
            bb[i + 1] = ci
            c[i + 1] = 0.0
            d[i + 1] = di
        m = a[i + 1] / bb[i]
        bb[i + 1] -= m * c[i]
        c[i + 1] -= m * e[i]
        d[i + 1] -= m * d[i]
    x = np.empty(n)
    x[n - 1] = d[n - 1] / bb[n - 1]
    if n > 1:
        x[n - 2] = (d[n - 2] - c[n - 2] * x[n - 1]) / bb[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (d[i] - c[i] * x[i + 1] - e[i] * x[i + 2]) / bb[i]
    return x


@njit(cache=True)
def _shoot_rhs(r, q, v, kappa, m, p):
    f = abs(q) ** (p - 2.0) * q
    return v, (m * q - f) / kappa - 2.0 * v / r


@njit(cache=True)
def _shoot_step(r, q, v, h, kappa, m, p):
    kq1, kv1 = _shoot_rhs(r, q, v, kappa, m, p)
    kq2, kv2 = _shoot_rhs(r + 0.2 * h, q + h * 0.2 * kq1,
                          v + h * 0.2 * kv1, kappa, m, p)
    kq3, kv3 = _shoot_rhs(r + 0.3 * h,
                          q + h * (0.075 * kq1 + 0.225 * kq2),
                          v + h * (0.075 * kv1 + 0.225 * kv2), kappa, m, p)
    kq4, kv4 = _shoot_rhs(r + 0.6 * h,
                          q + h * (0.3 * kq1 - 0.9 * kq2 + 1.2 * kq3),
                          v + h * (0.3 * kv1 - 0.9 * kv2 + 1.2 * kv3),
                          kappa, m, p)
    a51 = -11.0 / 54.0
    a53 = -70.0 / 27.0
    a54 = 35.0 / 27.0
    kq5, kv5 = _shoot_rhs(r + h,
                          q + h * (a51 * kq1 + 2.5 * kq2 + a53 * kq3 + a54 * kq4),
                          v + h * (a51 * kv1 + 2.5 * kv2 + a53 * kv3 + a54 * kv4),
                          kappa, m, p)
    a61 = 1631.0 / 55296.0
    a62 = 175.0 / 512.0
    a63 = 575.0 / 13824.0
    a64 = 44275.0 / 110592.0
    a65 = 253.0 / 4096.0
    kq6, kv6 = _shoot_rhs(r + 0.875 * h,
                          q + h * (a61 * kq1 + a62 * kq2 + a63 * kq3
                                   + a64 * kq4 + a65 * kq5),
                          v + h * (a61 * kv1 + a62 * kv2 + a63 * kv3
                                   + a64 * kv4 + a65 * kv5), kappa, m, p)
    b1 = 37.0 / 378.0
    b3 = 250.0 / 621.0
    b4 = 125.0 / 594.0
    b6 = 512.0 / 1771.0
    q5 = q + h * (b1 * kq1 + b3 * kq3 + b4 * kq4 + b6 * kq6)
    v5 = v + h * (b1 * kv1 + b3 * kv3 + b4 * kv4 + b6 * kv6)
    e1 = b1 - 2825.0 / 27648.0
    e3 = b3 - 18575.0 / 48384.0
    e4 = b4 - 13525.0 / 55296.0
    e5 = -277.0 / 14336.0
    e6 = b6 - 0.25
    eq = h * (e1 * kq1 + e3 * kq3 + e4 * kq4 + e5 * kq5 + e6 * kq6)
    ev = h * (e1 * kv1 + e3 * kv3 + e4 * kv4 + e5 * kv5 + e6 * kv6)
    err = abs(eq)
    if abs(ev) > err:
        err = abs(ev)
    return q5, v5, err


@njit(cache=True)
def _shoot_start(s, kappa, m, p, r0):
    c2 = (m * s - s ** (p - 1.0)) / (6.0 * kappa)
    c4 = (m - (p - 1.0) * s ** (p - 2.0)) * c2 / (20.0 * kappa)
    q = s + c2 * r0 * r0 + c4 * r0 ** 4
    v = 2.0 * c2 * r0 + 4.0 * c4 * r0 ** 3
    return q, v


@njit(cache=True)
def shoot_classify(kappa, m, p, s, r_end, rtol):
    r0 = 1e-3
    q, v = _shoot_start(s, kappa, m, p, r0)
    r = r0
    h = 1e-3
    atol = rtol * s
    floor = 1e-12 * s
    while r < r_end:
        if h > r_end - r:
            h = r_end - r
        q5, v5, err = _shoot_step(r, q, v, h, kappa, m, p)
        qa = abs(q)
        va = abs(v)
        tol = atol + rtol * (qa if qa > va else va)
        if err <= tol:
            r += h
            q = q5
            v = v5
            if q <= 0.0:
                return SHOT_CROSSED
            if q < floor:
                return SHOT_DECAYED
            if v > 0.0:
                return SHOT_TURNED
        if err > 0.0:
            fac = 0.9 * (tol / err) ** 0.2
        else:
            fac = 5.0
        if fac > 5.0:
            fac = 5.0
        if fac < 0.2:
            fac = 0.2
        h *= fac
    return SHOT_RAN_OFF


@njit(cache=True)
def shoot_profile(kappa, m, p, s, nodes, q_splice, rtol):
    out = np.zeros(nodes.size)
    r0 = 1e-3
    q, v = _shoot_start(s, kappa, m, p, r0)
    r = r0
    h = 1e-3
    atol = rtol * s
    idx = 0
    while idx < nodes.size and nodes[idx] <= r:
        out[idx] = _shoot_start(s, kappa, m, p, nodes[idx])[0]
        idx += 1
    while idx < nodes.size:
        target = nodes[idx]
        gap = target - r
        clipped = h >= gap
        hstep = gap if clipped else h
        q5, v5, err = _shoot_step(r, q, v, hstep, kappa, m, p)
        qa = abs(q)
        va = abs(v)
        tol = atol + rtol * (qa if qa > va else va)
        if err <= tol:
            q = q5
            v = v5
            if clipped:
                r = target
                out[idx] = q
                idx += 1
            else:
                r += hstep
            if q <= q_splice and v < 0.0:
                return idx, r, q, out
        if err > 0.0:
            fac = 0.9 * (tol / err) ** 0.2
        else:
            fac = 5.0
        if fac > 5.0:
            fac = 5.0
        if fac < 0.2:
            fac = 0.2
        # cap: in the flat tail err → 0 would otherwise grow h without
        # bound; node gaps are far below 10, so the cap never binds a step
        h *= fac
        if h > 10.0:
            h = 10.0
    return idx, r, q, out

"""Vectorized numpy implementations of the numeric kernels.

This module is the reference backend: every function here has a
loop-style twin in ``_kernels_numba`` with the same name, signature and
semantics.  ``kernels`` picks one of the two at import time.  Keep the
twins in lock-step when editing.

All arrays are one-dimensional float64.  Grid conventions (half-offset
radial grid) are documented in ``radial``; the kernels only see raw
arrays plus the spacing ``dr``.
"""

from __future__ import annotations

import numpy as np

FOUR_PI = 4.0 * np.pi

# shoot_classify / shoot_profile status codes
SHOT_DECAYED = 0   # profile fell below the decay floor while still decreasing
SHOT_CROSSED = 1   # profile crossed zero: amplitude too large
SHOT_TURNED = 2    # profile turned upward while positive: amplitude too small
SHOT_RAN_OFF = 3   # reached the end of the integration window undecided


def laplacian(values: np.ndarray, dr: float) -> np.ndarray:
    """Conservative radial Laplacian (1/r²)(r²u′)′ on the half-offset grid.

    Flux form with interface radii R_j = j·dr: the j = 0 flux vanishes
    (symmetry at the origin) and the outer boundary uses the Dirichlet
    ghost value u_n = −u_{n−1}, i.e. u = 0 at the interface r = R.
    """
    n = values.size
    flux = np.empty(n + 1)
    j = np.arange(1, n, dtype=np.float64)
    flux[0] = 0.0
    flux[1:n] = (j * dr) ** 2 * (values[1:] - values[:-1])
    flux[n] = (n * dr) ** 2 * (-2.0 * values[n - 1])
    r = (np.arange(n, dtype=np.float64) + 0.5) * dr
    return (flux[1:] - flux[:-1]) / (r * r * dr * dr)


def kinetic_form(u: np.ndarray, v: np.ndarray, dr: float) -> float:
    """Bilinear Dirichlet form ⟨∇u, ∇v⟩ adjoint to ``laplacian``.

    Σ_j 4πR_j²dr·(Du)_j(Dv)_j over interior interfaces plus the ghost
    boundary term 8πR²·u_{n−1}v_{n−1}/dr, so that
    weighted_dot(w, −laplacian(u), v) == kinetic_form(u, v) to round-off.
    """
    n = u.size
    j = np.arange(1, n, dtype=np.float64)
    du = u[1:] - u[:-1]
    dv = v[1:] - v[:-1]
    interior = FOUR_PI * dr * float(np.dot(j * j * du, dv))
    boundary = 2.0 * FOUR_PI * (n * n * dr) * u[n - 1] * v[n - 1]
    return interior + boundary


def kinetic(u: np.ndarray, dr: float) -> float:
    """Quadratic Dirichlet form ‖∇u‖₂² of ``kinetic_form``."""
    return kinetic_form(u, u, dr)


def weighted_dot(w: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    """Σ w_i u_i v_i (discrete ∫ u v dx when w are the volume weights)."""
    return float(np.dot(w * u, v))


def power_integral(w: np.ndarray, u: np.ndarray, p: float) -> float:
    """Σ w_i |u_i|^p (discrete ∫|u|^p dx)."""
    return float(np.dot(w, np.abs(u) ** p))


def pchip_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fritsch–Carlson monotone cubic slopes at the knots.

    Weighted harmonic mean of adjacent secants where they agree in sign,
    zero where they do not; shape-preserving one-sided rule at the ends.
    The resulting Hermite interpolant is monotone on every monotone data
    run, hence never under/overshoots (positivity-preserving).
    """
    n = x.size
    h = np.diff(x)
    delta = np.diff(y) / h
    d = np.zeros(n)
    if n == 2:
        d[0] = delta[0]
        d[1] = delta[0]
        return d
    # interior knots
    hk, hk1 = h[:-1], h[1:]
    dk, dk1 = delta[:-1], delta[1:]
    mask = (dk * dk1) > 0.0
    w1 = 2.0 * hk1 + hk
    w2 = hk1 + 2.0 * hk
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        hm = (w1 + w2) / (w1 / dk + w2 / dk1)
    d[1:-1] = np.where(mask, hm, 0.0)
    d[0] = _edge_slope(h[0], h[1], delta[0], delta[1])
    d[-1] = _edge_slope(h[-1], h[-2], delta[-1], delta[-2])
    return d


def _edge_slope(h0: float, h1: float, d0: float, d1: float) -> float:
    """Three-point one-sided slope with the standard shape clamps."""
    s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
    if s * d0 <= 0.0:
        return 0.0
    if d0 * d1 < 0.0 and abs(s) > 3.0 * abs(d0):
        return 3.0 * d0
    return s


def hermite_eval(x: np.ndarray, y: np.ndarray, d: np.ndarray,
                 xq: np.ndarray) -> np.ndarray:
    """Piecewise cubic Hermite evaluation at ascending query points.

    Queries outside [x[0], x[-1]] evaluate to 0 (the caller pads the
    knot set so that in-domain queries never hit this rule by accident).
    """
    k = np.clip(np.searchsorted(x, xq, side="right") - 1, 0, x.size - 2)
    hk = x[k + 1] - x[k]
    s = (xq - x[k]) / hk
    s2 = s * s
    s3 = s2 * s
    out = ((2.0 * s3 - 3.0 * s2 + 1.0) * y[k]
           + (s3 - 2.0 * s2 + s) * hk * d[k]
           + (-2.0 * s3 + 3.0 * s2) * y[k + 1]
           + (s3 - s2) * hk * d[k + 1])
    out[(xq < x[0]) | (xq > x[-1])] = 0.0
    return out


def tridiag_solve(dl: np.ndarray, dg: np.ndarray, du: np.ndarray,
                  b: np.ndarray) -> np.ndarray:
    """Tridiagonal solve with partial pivoting (handles indefinite systems).

    dl[i] multiplies x[i-1] in row i (dl[0] unused); du[i] multiplies
    x[i+1] (du[n-1] unused).  Row swaps introduce a second superdiagonal
    fill-in, tracked in ``e``.
    """
    n = dg.size
    a = dl.copy()
    bb = dg.copy()
    c = du.copy()
    d = b.copy()
    c[n - 1] = 0.0  # declared unused; a row swap at i = n−2 reads it
    e = np.zeros(n)
    for i in range(n - 1):
        if abs(bb[i]) < abs(a[i + 1]):
            bi, ci, di = bb[i], c[i], d[i]
            bb[i], c[i], e[i], d[i] = a[i + 1], bb[i + 1], c[i + 1], d[i + 1]
            a[i + 1], bb[i + 1], c[i + 1], d[i + 1] = bi, ci, 0.0, di
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


# Cash–Karp embedded Runge–Kutta 4(5) tableau.
_CK_C = (0.0, 0.2, 0.3, 0.6, 1.0, 0.875)
_CK_A = (
    (),
    (0.2,),
    (3.0 / 40.0, 9.0 / 40.0),
    (0.3, -0.9, 1.2),
    (-11.0 / 54.0, 2.5, -70.0 / 27.0, 35.0 / 27.0),
    (1631.0 / 55296.0, 175.0 / 512.0, 575.0 / 13824.0,
     44275.0 / 110592.0, 253.0 / 4096.0),
)
_CK_B5 = (37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0)
_CK_B4 = (2825.0 / 27648.0, 0.0, 18575.0 / 48384.0, 13525.0 / 55296.0,
          277.0 / 14336.0, 0.25)


def _shoot_rhs(r: float, q: float, v: float, kappa: float, m: float,
               p: float) -> tuple[float, float]:
    """(q, v)′ for −kappa(q″ + 2q′/r) + m·q = |q|^{p−2}q."""
    f = abs(q) ** (p - 2.0) * q
    return v, (m * q - f) / kappa - 2.0 * v / r


def _shoot_step(r: float, q: float, v: float, h: float, kappa: float,
                m: float, p: float) -> tuple[float, float, float]:
    """One Cash–Karp step; returns (q5, v5, scaled error estimate)."""
    kq = [0.0] * 6
    kv = [0.0] * 6
    kq[0], kv[0] = _shoot_rhs(r, q, v, kappa, m, p)
    for i in range(1, 6):
        qi = q
        vi = v
        a = _CK_A[i]
        for j in range(i):
            qi += h * a[j] * kq[j]
            vi += h * a[j] * kv[j]
        kq[i], kv[i] = _shoot_rhs(r + _CK_C[i] * h, qi, vi, kappa, m, p)
    q5 = q
    v5 = v
    eq = 0.0
    ev = 0.0
    for i in range(6):
        q5 += h * _CK_B5[i] * kq[i]
        v5 += h * _CK_B5[i] * kv[i]
        eq += h * (_CK_B5[i] - _CK_B4[i]) * kq[i]
        ev += h * (_CK_B5[i] - _CK_B4[i]) * kv[i]
    return q5, v5, max(abs(eq), abs(ev))


def _shoot_start(s: float, kappa: float, m: float, p: float,
                 r0: float) -> tuple[float, float]:
    """Series start q(r0), q′(r0) around the regular-singular origin."""
    c2 = (m * s - s ** (p - 1.0)) / (6.0 * kappa)
    c4 = (m - (p - 1.0) * s ** (p - 2.0)) * c2 / (20.0 * kappa)
    q = s + c2 * r0 * r0 + c4 * r0 ** 4
    v = 2.0 * c2 * r0 + 4.0 * c4 * r0 ** 3
    return q, v


def shoot_classify(kappa: float, m: float, p: float, s: float, r_end: float,
                   rtol: float) -> int:
    """Integrate the shooting profile from amplitude s and classify it."""
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
        tol = atol + rtol * max(abs(q), abs(v))
        if err <= tol:
            r += h
            q, v = q5, v5
            if q <= 0.0:
                return SHOT_CROSSED
            if q < floor:
                return SHOT_DECAYED
            if v > 0.0:
                return SHOT_TURNED
        fac = 0.9 * (tol / err) ** 0.2 if err > 0.0 else 5.0
        h *= min(5.0, max(0.2, fac))
    return SHOT_RAN_OFF


def shoot_profile(kappa: float, m: float, p: float, s: float,
                  nodes: np.ndarray, q_splice: float,
                  rtol: float) -> tuple[int, float, float, np.ndarray]:
    """Integrate and record the profile at ``nodes`` until it reaches
    the splice threshold ``q_splice`` (absolute).

    Returns (stop_index, r_stop, q_stop, values): values[:stop_index]
    are filled; the caller continues the profile analytically from
    (r_stop, q_stop).  stop_index == nodes.size means no splice point
    was reached inside the node range.
    """
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
        tol = atol + rtol * max(abs(q), abs(v))
        if err <= tol:
            q, v = q5, v5
            if clipped:
                r = target
                out[idx] = q
                idx += 1
            else:
                r += hstep
            if q <= q_splice and v < 0.0:
                return idx, r, q, out
        fac = 0.9 * (tol / err) ** 0.2 if err > 0.0 else 5.0
        # cap: in the flat tail err → 0 would otherwise grow h without
        # bound; node gaps are far below 10, so the cap never binds a step
        h = min(h * min(5.0, max(0.2, fac)), 10.0)
    return idx, r, q, out

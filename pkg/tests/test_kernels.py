"""Backend equivalence and correctness of the low-level numeric kernels."""

from __future__ import annotations

import numpy as np
import pytest

from kirchhoffgs import kernels
from kirchhoffgs import _kernels_numpy as knp

try:
    from kirchhoffgs import _kernels_numba as knb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    knb = None
    HAVE_NUMBA = False

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")


def _random_profile(rng: np.random.Generator, n: int = 257):
    r = (np.arange(n) + 0.5) * 0.03
    u = rng.standard_normal(n) * np.exp(-0.3 * r)
    v = rng.standard_normal(n) * np.exp(-0.2 * r)
    w = 4.0 * np.pi * r * r * 0.03
    return r, u, v, w


def test_backend_name_is_valid():
    assert kernels.BACKEND in ("numba", "numpy")


def test_warmup_is_idempotent():
    kernels.warmup()
    kernels.warmup()


@needs_numba
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_backends_agree_on_reductions(seed):
    rng = np.random.default_rng(seed)
    _, u, v, w = _random_profile(rng)
    assert knb.weighted_dot(w, u, v) == pytest.approx(
        knp.weighted_dot(w, u, v), rel=1e-12)
    assert knb.kinetic(u, 0.03) == pytest.approx(knp.kinetic(u, 0.03), rel=1e-12)
    assert knb.kinetic_form(u, v, 0.03) == pytest.approx(
        knp.kinetic_form(u, v, 0.03), rel=1e-12)
    for p in (2.0, 3.5, 5.0):
        assert knb.power_integral(w, u, p) == pytest.approx(
            knp.power_integral(w, u, p), rel=1e-12)


@needs_numba
def test_backends_agree_on_laplacian_and_interpolation():
    rng = np.random.default_rng(7)
    r, u, _, _ = _random_profile(rng)
    np.testing.assert_allclose(knb.laplacian(u, 0.03), knp.laplacian(u, 0.03),
                               rtol=1e-12, atol=1e-12)
    d_b = knb.pchip_slopes(r, u)
    d_p = knp.pchip_slopes(r, u)
    np.testing.assert_allclose(d_b, d_p, rtol=1e-12, atol=1e-12)
    xq = np.linspace(r[0], r[-1], 401)
    np.testing.assert_allclose(knb.hermite_eval(r, u, d_b, xq),
                               knp.hermite_eval(r, u, d_p, xq),
                               rtol=1e-12, atol=1e-12)


@needs_numba
def test_backends_agree_on_tridiagonal_solve():
    # convention: full-length bands, dl[0] and du[n-1] unused
    rng = np.random.default_rng(3)
    n = 200
    sub = rng.standard_normal(n)
    diag = rng.standard_normal(n) * 0.1  # small pivots force row swaps
    sup = rng.standard_normal(n)
    rhs = rng.standard_normal(n)
    np.testing.assert_allclose(knb.tridiag_solve(sub, diag, sup, rhs),
                               knp.tridiag_solve(sub, diag, sup, rhs),
                               rtol=1e-9, atol=1e-12)


@needs_numba
def test_backends_agree_on_shooting():
    nodes = np.linspace(0.05, 12.0, 37)
    idx_b, r_b, q_b, vals_b = knb.shoot_profile(2.25, 0.25, 5.0, 3.2, nodes,
                                                1e-10, 1e-12)
    idx_p, r_p, q_p, vals_p = knp.shoot_profile(2.25, 0.25, 5.0, 3.2, nodes,
                                                1e-10, 1e-12)
    assert idx_b == idx_p
    assert r_b == pytest.approx(r_p, rel=1e-8)
    assert q_b == pytest.approx(q_p, rel=1e-6, abs=1e-12)
    np.testing.assert_allclose(vals_b[:idx_b], vals_p[:idx_p],
                               rtol=1e-8, atol=1e-12)
    codes_b = [knb.shoot_classify(2.25, 0.25, 5.0, s, 30.0, 1e-10)
               for s in (0.5, 2.0, 3.0, 3.5, 5.0)]
    codes_p = [knp.shoot_classify(2.25, 0.25, 5.0, s, 30.0, 1e-10)
               for s in (0.5, 2.0, 3.0, 3.5, 5.0)]
    assert codes_b == codes_p
    assert kernels.SHOT_CROSSED in codes_p  # large launch overshoots
    assert kernels.SHOT_TURNED in codes_p or kernels.SHOT_DECAYED in codes_p


@pytest.mark.parametrize("impl", [knp] + ([knb] if HAVE_NUMBA else []),
                         ids=lambda m: m.__name__.rsplit("_", 1)[-1])
@pytest.mark.parametrize("seed", range(6))
def test_tridiagonal_solve_matches_dense(impl, seed):
    rng = np.random.default_rng(seed)
    n = 60
    sub = rng.standard_normal(n)
    sup = rng.standard_normal(n)
    if seed % 2 == 0:
        diag = 4.0 + rng.random(n)  # diagonally dominant
        diag = diag * np.sign(rng.standard_normal(n))
    else:
        diag = rng.standard_normal(n) * 1e-3  # needs pivoting
    rhs = rng.standard_normal(n)
    dense = np.diag(diag) + np.diag(sub[1:], -1) + np.diag(sup[:-1], 1)
    want = np.linalg.solve(dense, rhs)
    got = impl.tridiag_solve(sub, diag, sup, rhs)
    np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-10)


def test_weighted_dot_matches_exact_sum():
    import math

    rng = np.random.default_rng(11)
    w = rng.random(4001)
    a = rng.standard_normal(4001)
    b = rng.standard_normal(4001)
    want = math.fsum(float(x) for x in w * a * b)
    assert kernels.weighted_dot(w, a, b) == pytest.approx(want, rel=1e-12)

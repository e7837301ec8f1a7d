"""Nonlinearity and potential families, and the hypothesis windows.

The nonlinearity is a finite sum of odd powers

    g(s) = Σ_j μ_j |s|^{p_j−2} s,   μ_j > 0,  p_j ∈ (14/3, 6),

with primitive G(s) = Σ (μ_j/p_j)|s|^{p_j} and the combinations
G̃(s) = g(s)s/2 − G(s) and G̃′(s)s that drive the dilation identities.
The exponent window (14/3, 6) is the supercritical-but-subcritical
range in which the constrained minimization below is well posed.

Potentials are radial, nonpositive, vanishing at infinity.  Each kind
supplies V(r), W(r) = r V′(r)/2, rW′(r) and Υ(r) = 4W + rW′, plus
certified constants (σ₁, σ₂, σ₃) bounding

    |∫V u²| ≤ σ₁‖∇u‖₂²,  |∫W u²| ≤ σ₂‖∇u‖₂²,  ∫Υ₊ u² ≤ σ₃‖∇u‖₂²,

analytically where an inequality is available (inverse-square case)
and otherwise by maximizing the discrete Rayleigh quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from . import kernels
from .radial import RadialGrid, gradient_form_tridiag

P_LOW = 14.0 / 3.0
P_HIGH = 6.0


@dataclass
class Nonlinearity:
    """Odd power-sum nonlinearity Σ μ_j |s|^{p_j−2}s."""

    terms: tuple[tuple[float, float], ...]
    mu: NDArray[np.float64] = field(init=False, repr=False)
    p: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.terms = tuple((float(m), float(p)) for m, p in self.terms)
        if not self.terms:
            raise ValueError("nonlinearity needs at least one power term")
        for m, p in self.terms:
            if m <= 0.0:
                raise ValueError(f"coefficient must be positive, got {m}")
            if not (P_LOW < p < P_HIGH):
                raise ValueError(
                    f"exponent {p} outside the admissible window ({P_LOW:.6g}, {P_HIGH:g})"
                )
        self.mu = np.array([m for m, _ in self.terms])
        self.p = np.array([p for _, p in self.terms])

    @property
    def alpha(self) -> float:
        """Smallest exponent."""
        return float(self.p.min())

    @property
    def beta(self) -> float:
        """Largest exponent."""
        return float(self.p.max())

    def g(self, s):
        """g(s) = Σ μ_j |s|^{p_j−2}s (odd)."""
        s = np.asarray(s, dtype=np.float64)
        a = np.abs(s)
        out = np.zeros_like(s)
        for m, p in self.terms:
            out = out + m * a ** (p - 2.0) * s
        return out

    def G(self, s):
        """Primitive G(s) = Σ (μ_j/p_j)|s|^{p_j} (even, G(0) = 0)."""
        s = np.asarray(s, dtype=np.float64)
        a = np.abs(s)
        out = np.zeros_like(s)
        for m, p in self.terms:
            out = out + (m / p) * a**p
        return out

    def gtilde(self, s):
        """G̃(s) = g(s)s/2 − G(s) = Σ μ_j (p_j−2)/(2p_j) |s|^{p_j}."""
        s = np.asarray(s, dtype=np.float64)
        a = np.abs(s)
        out = np.zeros_like(s)
        for m, p in self.terms:
            out = out + m * (p - 2.0) / (2.0 * p) * a**p
        return out

    def gtilde_prime_s(self, s):
        """G̃′(s)·s = Σ μ_j (p_j−2)/2 |s|^{p_j}."""
        s = np.asarray(s, dtype=np.float64)
        a = np.abs(s)
        out = np.zeros_like(s)
        for m, p in self.terms:
            out = out + m * (p - 2.0) / 2.0 * a**p
        return out

    def g_prime(self, s):
        """g′(s) = Σ μ_j (p_j−1)|s|^{p_j−2} (even)."""
        s = np.asarray(s, dtype=np.float64)
        a = np.abs(s)
        out = np.zeros_like(s)
        for m, p in self.terms:
            out = out + m * (p - 1.0) * a ** (p - 2.0)
        return out

    def gtilde_prime(self, s):
        """G̃′(s) = Σ μ_j (p_j−2)/2 |s|^{p_j−2}s (odd)."""
        s = np.asarray(s, dtype=np.float64)
        a = np.abs(s)
        out = np.zeros_like(s)
        for m, p in self.terms:
            out = out + m * (p - 2.0) / 2.0 * a ** (p - 2.0) * s
        return out

    def gtilde_second(self, s):
        """G̃″(s) = Σ μ_j (p_j−2)(p_j−1)/2 |s|^{p_j−2} (even)."""
        s = np.asarray(s, dtype=np.float64)
        a = np.abs(s)
        out = np.zeros_like(s)
        for m, p in self.terms:
            out = out + m * (p - 2.0) * (p - 1.0) / 2.0 * a ** (p - 2.0)
        return out


@dataclass
class GrowthReport:
    """Sampled verification of the power-growth windows.

    ratio g(s)s/G(s) must lie in [alpha, beta]; ratio G̃′(s)s/G̃(s) must
    exceed 14/3; env_c1·min(|s|^α,|s|^β) ≤ G(s) ≤ env_c2·(|s|^α+|s|^β)
    are the fitted envelope constants (equal to G(1) for a power sum,
    attained at |s| = 1).
    """

    samples: int
    ratio_min: float
    ratio_max: float
    gtilde_ratio_min: float
    env_c1: float
    env_c2: float
    violations: tuple[float, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_growth(nl: Nonlinearity, samples: int = 2001) -> GrowthReport:
    """Sample the growth ratios of ``nl`` over s ∈ [1e-6, 1e6] (log grid)."""
    if samples < 1:
        raise ValueError("need at least one sample")
    s = np.geomspace(1e-6, 1e6, samples)
    gs_s = nl.g(s) * s
    G = nl.G(s)
    gt = nl.gtilde(s)
    gtp = nl.gtilde_prime_s(s)
    ratio = gs_s / G
    gt_ratio = gtp / gt
    a, b = nl.alpha, nl.beta
    fuzz = 1e-12
    bad = (ratio < a * (1.0 - fuzz)) | (ratio > b * (1.0 + fuzz))
    bad |= gt_ratio <= P_LOW
    min_env = np.minimum(s**a, s**b)
    max_env = np.maximum(s**a, s**b)
    c1 = float(np.min(G / min_env))
    c2 = float(np.max(G / max_env))
    bad |= G < c1 * min_env * (1.0 - fuzz)
    bad |= G > c2 * (s**a + s**b) * (1.0 + fuzz)
    return GrowthReport(
        samples=samples,
        ratio_min=float(ratio.min()),
        ratio_max=float(ratio.max()),
        gtilde_ratio_min=float(gt_ratio.min()),
        env_c1=c1,
        env_c2=c2,
        violations=tuple(float(x) for x in s[bad]),
    )


class Potential:
    """Radial potential interface: V ≤ 0, V(∞) = 0.

    ``homogeneity`` is the degree h with V(s·r) = s^h V(r) when the
    potential is homogeneous (enables closed-form dilation integrals);
    None means dilated integrals are evaluated by quadrature.
    """

    kind: str = "abstract"
    homogeneity: float | None = None

    def v(self, r):
        raise NotImplementedError

    def w(self, r):
        """W(r) = r V′(r)/2."""
        raise NotImplementedError

    def r_wprime(self, r):
        """r·W′(r)."""
        raise NotImplementedError

    def upsilon(self, r):
        """Υ(r) = 4W(r) + rW′(r)."""
        return 4.0 * self.w(r) + self.r_wprime(r)

    def params(self) -> dict:
        return {}

    def __repr__(self) -> str:
        ps = ", ".join(f"{k}={v:g}" for k, v in self.params().items())
        return f"{type(self).__name__}({ps})"


class ZeroPotential(Potential):
    """V ≡ 0 (the reference problem)."""

    kind = "zero"
    homogeneity: float | None = 0.0

    def v(self, r):
        return np.zeros_like(np.asarray(r, dtype=np.float64))

    def w(self, r):
        return np.zeros_like(np.asarray(r, dtype=np.float64))

    def r_wprime(self, r):
        return np.zeros_like(np.asarray(r, dtype=np.float64))


class HardyPotential(Potential):
    """Inverse-square well V(r) = −mu/r².

    Scale-free: dilations act on its integrals as exact powers of t,
    and the classical inequality ∫u²/r² ≤ 4‖∇u‖₂² certifies the σ's
    analytically.
    """

    kind = "hardy"
    homogeneity: float | None = -2.0

    def __init__(self, mu: float):
        if mu <= 0.0:
            raise ValueError(f"mu must be positive, got {mu}")
        self.mu = float(mu)

    def v(self, r):
        r = np.asarray(r, dtype=np.float64)
        return -self.mu / (r * r)

    def w(self, r):
        r = np.asarray(r, dtype=np.float64)
        return self.mu / (r * r)

    def r_wprime(self, r):
        r = np.asarray(r, dtype=np.float64)
        return -2.0 * self.mu / (r * r)

    def params(self) -> dict:
        return {"mu": self.mu}


class GaussianWellPotential(Potential):
    """Smooth bounded well V(r) = −V₀·exp(−r²/w²)."""

    kind = "gaussian_well"
    homogeneity: float | None = None

    def __init__(self, depth: float, width: float):
        if depth <= 0.0:
            raise ValueError(f"depth must be positive, got {depth}")
        if width <= 0.0:
            raise ValueError(f"width must be positive, got {width}")
        self.depth = float(depth)
        self.width = float(width)

    def v(self, r):
        r = np.asarray(r, dtype=np.float64)
        return -self.depth * np.exp(-(r / self.width) ** 2)

    def w(self, r):
        r = np.asarray(r, dtype=np.float64)
        x2 = (r / self.width) ** 2
        return self.depth * x2 * np.exp(-x2)

    def r_wprime(self, r):
        r = np.asarray(r, dtype=np.float64)
        x2 = (r / self.width) ** 2
        return self.depth * np.exp(-x2) * (2.0 * x2 - 2.0 * x2 * x2)

    def params(self) -> dict:
        return {"depth": self.depth, "width": self.width}


def potential_from_kind(kind: str, **params) -> Potential:
    """Construct a potential by its config name."""
    kind = kind.strip().lower()
    if kind == "zero":
        return ZeroPotential()
    if kind == "hardy":
        return HardyPotential(params["mu"])
    if kind == "gaussian_well":
        return GaussianWellPotential(params["depth"], params["width"])
    raise ValueError(f"unknown potential kind {kind!r}")


def _rayleigh_sup(q: NDArray[np.float64], grid: RadialGrid,
                  tol: float = 1e-12, max_iter: int = 20000) -> float:
    """sup_u ∫q u² dx / ‖∇u‖₂² over grid fields, by power iteration.

    Applies the inverse of the (tridiagonal, SPD) gradient-form matrix
    to the multiplication operator diag(w·q) each sweep; the Rayleigh
    quotient of the iterate converges to the top eigenvalue of the
    pencil.  q must be nonnegative.
    """
    wq = grid.w * q
    if not np.any(wq > 0.0):
        return 0.0
    dr = grid.dr
    dl, diag, du = gradient_form_tridiag(grid)
    x = np.exp(-grid.r / max(grid.r[np.argmax(wq)], grid.dr))
    theta_old = 0.0
    for _ in range(max_iter):
        y = kernels.tridiag_solve(dl, diag, du, wq * x)
        nrm = float(np.max(np.abs(y)))
        if nrm == 0.0:
            return 0.0
        x = y / nrm
        num = float(np.dot(wq, x * x))
        den = kernels.kinetic(x, dr)
        theta = num / den
        if abs(theta - theta_old) <= tol * max(theta, 1e-300):
            return theta
        theta_old = theta
    raise RuntimeError(
        f"Rayleigh iteration did not settle within {max_iter} sweeps "
        f"(last value {theta_old:.6e})"
    )


def sigma_bounds(pot: Potential, grid: RadialGrid) -> tuple[float, float, float]:
    """Certified constants (σ₁, σ₂, σ₃) for ``pot`` on ``grid``.

    Inverse-square wells use the analytic inequality (constant 4);
    other kinds maximize the discrete Rayleigh quotient for each of
    |V|, |W|, Υ₊ and inflate the estimate by 5% to cover the
    discretization gap.
    """
    if isinstance(pot, ZeroPotential):
        return (0.0, 0.0, 0.0)
    if isinstance(pot, HardyPotential):
        return (4.0 * pot.mu, 4.0 * pot.mu, 8.0 * pot.mu)
    r = grid.r
    s1 = _rayleigh_sup(np.abs(pot.v(r)), grid)
    s2 = _rayleigh_sup(np.abs(pot.w(r)), grid)
    s3 = _rayleigh_sup(np.maximum(pot.upsilon(r), 0.0), grid)
    return (1.05 * s1, 1.05 * s2, 1.05 * s3)


@dataclass
class AdmissibilityReport:
    """Hypothesis windows for (a, nonlinearity, potential).

    window1 = (3(α−2)−4)/(3(α−2))·a            (σ₁ strictly below)
    window2 = min{3(α−2)(a−σ₁)/4 − a, (6−β)/(2β)·a}   (σ₂ at most)
    window3 = 2a                               (σ₃ strictly below)
    """

    sigma1: float
    sigma2: float
    sigma3: float
    window1: float
    window2: float
    window3: float
    passed1: bool
    passed2: bool
    passed3: bool

    @property
    def margins(self) -> tuple[float, float, float]:
        return (self.window1 - self.sigma1,
                self.window2 - self.sigma2,
                self.window3 - self.sigma3)

    @property
    def all_passed(self) -> bool:
        return self.passed1 and self.passed2 and self.passed3

    def lines(self) -> list[str]:
        """Human-readable summary, one line per condition."""
        out = []
        for i, (s, wnd, ok) in enumerate(
            ((self.sigma1, self.window1, self.passed1),
             (self.sigma2, self.window2, self.passed2),
             (self.sigma3, self.window3, self.passed3)),
            start=1,
        ):
            rel = "<" if i != 2 else "<="
            mark = "pass" if ok else "FAIL"
            out.append(
                f"  condition {i}: sigma{i} = {s:.6g} {rel} {wnd:.6g}"
                f"  (margin {wnd - s:+.6g})  [{mark}]"
            )
        return out


def admissibility(a: float, nl: Nonlinearity, pot: Potential,
                  grid: RadialGrid) -> AdmissibilityReport:
    """Evaluate the three potential-size windows against ``a``."""
    if a <= 0.0:
        raise ValueError(f"a must be positive, got {a}")
    s1, s2, s3 = sigma_bounds(pot, grid)
    al, be = nl.alpha, nl.beta
    k = 3.0 * (al - 2.0)
    w1 = (k - 4.0) / k * a
    w2 = min(k * (a - s1) / 4.0 - a, (6.0 - be) / (2.0 * be) * a)
    w3 = 2.0 * a
    return AdmissibilityReport(
        sigma1=s1, sigma2=s2, sigma3=s3,
        window1=w1, window2=w2, window3=w3,
        passed1=s1 < w1, passed2=s2 <= w2, passed3=s3 < w3,
    )

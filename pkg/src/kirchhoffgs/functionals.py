"""Energies, Pohozaev functionals, gradients, and the fiber profile Ψ.

For a field u with kinetic norm K = ‖∇u‖₂²:

    J(u) = (a/2)K + (b/4)K² + (1/2)∫V u² − ∫G(u)
    I(u) = J(u) with V dropped
    P(u) = aK + bK² − ∫W u² − 3∫G̃(u)        (zero on the constraint manifold)

and the frozen-coefficient variants J_A, I_A, P_A, P_{∞,A} replace the
quadratic Kirchhoff term by bA²K (used for verification only).

The fiber map (t⋆u)(x) = t^{3/2} u(tx) preserves mass; Ψ_u(t) = J(t⋆u)
is assembled analytically in t: kinetic terms scale as t² and t⁴, each
power integral as t^{3p_j/2−3}, and the potential terms become
∫V(r/t) u² (closed form in t for homogeneous V, quadrature otherwise).
The derivative identity t·Ψ′(t) = P(t⋆u) is exact in this assembly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import kernels
from .model import Nonlinearity, Potential, ZeroPotential
from .radial import RadialField, RadialGrid, kinetic, laplacian_radial, mass


@dataclass(frozen=True)
class ProblemSpec:
    """Full problem data (coefficients, mass, nonlinearity, potential, grid)."""

    a: float
    b: float
    c: float
    nl: Nonlinearity
    pot: Potential
    grid: RadialGrid

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            val = getattr(self, name)
            if not (val > 0.0 and np.isfinite(val)):
                raise ValueError(f"{name} must be positive and finite, got {val}")

    def without_potential(self) -> "ProblemSpec":
        if isinstance(self.pot, ZeroPotential):
            return self
        return dataclasses.replace(self, pot=ZeroPotential())


@dataclass
class FiberProfile:
    """Tabulated fiber energy: Ψ, Ψ′, Ψ″ at each t."""

    t: NDArray[np.float64]
    psi: NDArray[np.float64]
    psi_prime: NDArray[np.float64]
    psi_second: NDArray[np.float64]

    def rows(self):
        return zip(self.t, self.psi, self.psi_prime, self.psi_second)


def _check_field(spec: ProblemSpec, u: RadialField) -> None:
    if u.grid != spec.grid:
        raise ValueError("field grid does not match the problem grid")


class FiberEnergy:
    """Ψ_u(t) = J(t⋆u) and its t-derivatives, without resampling.

    Precomputes K, the power integrals L_j = ∫|u|^{p_j}, and either the
    three potential moments (homogeneous V: closed form in t) or the
    weighted samples needed to quadrature V(r/t) per evaluation.
    """

    def __init__(self, spec: ProblemSpec, u: RadialField):
        _check_field(spec, u)
        self.spec = spec
        grid = spec.grid
        nl = spec.nl
        self.kin = kinetic(u)
        self.ell = np.array(
            [kernels.power_integral(grid.w, u.values, p) for p in nl.p]
        )
        self.coef = nl.mu / nl.p              # μ_j/p_j
        self.expo = 1.5 * nl.p - 3.0          # e_j: ∫|t⋆u|^{p_j} = t^{e_j} L_j
        pot = spec.pot
        self._hom = pot.homogeneity
        r = grid.r
        u2w = grid.w * u.values * u.values
        if self._hom is not None:
            self._iv = float(np.dot(u2w, pot.v(r)))
            self._iw = float(np.dot(u2w, pot.w(r)))
            self._ix = float(np.dot(u2w, pot.r_wprime(r)))
        else:
            self._u2w = u2w
            self._r = r

    # potential moments of the dilated field: ∫V(r/t)u², ∫W(r/t)u², ∫(r/t)W′(r/t)u²
    def _pot_moments(self, t: float) -> tuple[float, float, float]:
        if self._hom is not None:
            s = t ** (-self._hom)
            return s * self._iv, s * self._iw, s * self._ix
        pot = self.spec.pot
        rt = self._r / t
        return (
            float(np.dot(self._u2w, pot.v(rt))),
            float(np.dot(self._u2w, pot.w(rt))),
            float(np.dot(self._u2w, pot.r_wprime(rt))),
        )

    def value(self, t: float) -> float:
        """Ψ(t); Ψ(1) = J(u) by construction."""
        t = _positive_t(t)
        vt, _, _ = self._pot_moments(t)
        powers = float(np.dot(self.coef * self.ell, t**self.expo))
        a, b = self.spec.a, self.spec.b
        return (0.5 * a * self.kin * t * t
                + 0.25 * b * self.kin * self.kin * t**4
                + 0.5 * vt - powers)

    def slope(self, t: float) -> float:
        """Ψ′(t); t·Ψ′(t) = P(t⋆u)."""
        t = _positive_t(t)
        _, wt, _ = self._pot_moments(t)
        powers = float(np.dot(self.coef * self.expo * self.ell,
                              t ** (self.expo - 1.0)))
        a, b = self.spec.a, self.spec.b
        return (a * self.kin * t
                + b * self.kin * self.kin * t**3
                - wt / t - powers)

    def curvature(self, t: float) -> float:
        """Ψ″(t)."""
        t = _positive_t(t)
        _, wt, xt = self._pot_moments(t)
        powers = float(np.dot(self.coef * self.expo * (self.expo - 1.0) * self.ell,
                              t ** (self.expo - 2.0)))
        a, b = self.spec.a, self.spec.b
        return (a * self.kin
                + 3.0 * b * self.kin * self.kin * t * t
                + (wt + xt) / (t * t) - powers)


def _positive_t(t: float) -> float:
    t = float(t)
    if not (t > 0.0 and np.isfinite(t)):
        raise ValueError(f"fiber parameter t must be positive, got {t}")
    return t


def energy_J(spec: ProblemSpec, u: RadialField) -> float:
    """J(u) = (a/2)‖∇u‖₂² + (b/4)‖∇u‖₂⁴ + (1/2)∫V u² − ∫G(u)."""
    return FiberEnergy(spec, u).value(1.0)


def energy_I(spec: ProblemSpec, u: RadialField) -> float:
    """I(u): the energy with the potential dropped."""
    return FiberEnergy(spec.without_potential(), u).value(1.0)


def potential_quadratic(spec: ProblemSpec, u: RadialField, which: str = "v") -> float:
    """∫q u² for q ∈ {V, W, rW′, Υ} (quadrature with the analytic q)."""
    _check_field(spec, u)
    fn = {"v": spec.pot.v, "w": spec.pot.w,
          "rwprime": spec.pot.r_wprime, "upsilon": spec.pot.upsilon}[which]
    q = fn(spec.grid.r)
    return kernels.weighted_dot(spec.grid.w, q * u.values, u.values)


def pohozaev_P(spec: ProblemSpec, u: RadialField) -> float:
    """P(u) = a‖∇u‖₂² + b‖∇u‖₂⁴ − ∫W u² − 3∫G̃(u)."""
    _check_field(spec, u)
    k = kinetic(u)
    iw = potential_quadratic(spec, u, "w")
    gt = float(np.dot(spec.grid.w, spec.nl.gtilde(u.values)))
    return spec.a * k + spec.b * k * k - iw - 3.0 * gt


def pohozaev_Pinf(spec: ProblemSpec, u: RadialField) -> float:
    """P_∞(u): the Pohozaev functional with the W term dropped."""
    return pohozaev_P(spec.without_potential(), u)


def energy_JA(spec: ProblemSpec, u: RadialField, A2: float) -> float:
    """J_A(u) = (a/2)K + (b/2)A²K + (1/2)∫V u² − ∫G(u) for frozen A² ≥ 0."""
    _check_A2(A2)
    _check_field(spec, u)
    k = kinetic(u)
    iv = potential_quadratic(spec, u, "v")
    g = float(np.dot(spec.grid.w, spec.nl.G(u.values)))
    return 0.5 * spec.a * k + 0.5 * spec.b * A2 * k + 0.5 * iv - g


def energy_IA(spec: ProblemSpec, u: RadialField, A2: float) -> float:
    """I_A(u): J_A with the potential dropped."""
    return energy_JA(spec.without_potential(), u, A2)


def pohozaev_PA(spec: ProblemSpec, u: RadialField, A2: float) -> float:
    """P_A(u) = aK + bA²K − ∫W u² − 3∫G̃(u) for frozen A² ≥ 0."""
    _check_A2(A2)
    _check_field(spec, u)
    k = kinetic(u)
    iw = potential_quadratic(spec, u, "w")
    gt = float(np.dot(spec.grid.w, spec.nl.gtilde(u.values)))
    return spec.a * k + spec.b * A2 * k - iw - 3.0 * gt


def pohozaev_PinfA(spec: ProblemSpec, u: RadialField, A2: float) -> float:
    """P_{∞,A}(u): P_A with the W term dropped."""
    return pohozaev_PA(spec.without_potential(), u, A2)


def _check_A2(A2: float) -> None:
    if A2 < 0.0 or not np.isfinite(A2):
        raise ValueError(f"frozen coefficient A2 must be >= 0, got {A2}")


def gradient_J(spec: ProblemSpec, u: RadialField) -> RadialField:
    """L² functional derivative −(a + b‖∇u‖₂²)Δu + V u − g(u).

    The λ-free part of stationarity: a normalized solution satisfies
    gradient_J(u) + λu = 0.
    """
    _check_field(spec, u)
    k = kinetic(u)
    lap = laplacian_radial(u)
    vals = (-(spec.a + spec.b * k) * lap.values
            + spec.pot.v(spec.grid.r) * u.values
            - spec.nl.g(u.values))
    return RadialField(spec.grid, vals)


def gradient_P(spec: ProblemSpec, u: RadialField) -> RadialField:
    """L² functional derivative of P: −2(a + 2b‖∇u‖₂²)Δu − 2W u − 3G̃′(u).

    The constraint normal of the Pohozaev set; the first-order condition
    of minimizing J on the set is gradient_J(u) + λu + θ·gradient_P(u) = 0.
    """
    _check_field(spec, u)
    k = kinetic(u)
    lap = laplacian_radial(u)
    vals = (-2.0 * (spec.a + 2.0 * spec.b * k) * lap.values
            - 2.0 * spec.pot.w(spec.grid.r) * u.values
            - 3.0 * spec.nl.gtilde_prime(u.values))
    return RadialField(spec.grid, vals)


def lambda_estimate(spec: ProblemSpec, u: RadialField) -> float:
    """Multiplier estimate λ = −⟨J′(u), u⟩ / c."""
    if mass(u) <= 0.0:
        raise ValueError("lambda_estimate needs a field with positive mass")
    grad = gradient_J(spec, u)
    return -kernels.weighted_dot(spec.grid.w, grad.values, u.values) / spec.c


def psi(spec: ProblemSpec, u: RadialField, t: float) -> float:
    """Ψ_u(t) = J(t⋆u)."""
    return FiberEnergy(spec, u).value(t)


def psi_prime(spec: ProblemSpec, u: RadialField, t: float) -> float:
    """Ψ_u′(t) = P(t⋆u)/t."""
    return FiberEnergy(spec, u).slope(t)


def psi_second(spec: ProblemSpec, u: RadialField, t: float) -> float:
    """Ψ_u″(t)."""
    return FiberEnergy(spec, u).curvature(t)

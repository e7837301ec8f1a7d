"""Fiber maximization and projection onto the dilation constraint set.

Every mass-c field u has a unique t_u > 0 maximizing the fiber energy
Ψ_u(t) = J(t⋆u): Ψ′ is positive for small t (the kinetic terms vanish
faster than the power terms as t → 0 under the exponent window) and
Ψ → −∞ for large t, and the admissibility windows rule out degenerate
or multiple critical points.  The projected field resample(u, t_u),
renormalized to mass c, lies on the constraint set {P = 0} up to
interpolation error; projection re-runs the maximization on the
resampled field until the residual clears the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functionals import FiberEnergy, FiberProfile, ProblemSpec, pohozaev_P
from .radial import RadialField, kinetic, mass, normalize_to, resample

T_MIN = 1e-6
T_MAX = 1e6
SLOPE_TOL = 1e-10
PROJECTION_REL_TOL = 1e-6


class DegenerateFieldError(RuntimeError):
    """No fiber-slope sign change inside [T_MIN, T_MAX].

    Signals a field too concentrated or too spread out for the
    truncated domain (its maximizer would need a dilation outside the
    representable range).
    """


class ProjectionAccuracyError(RuntimeError):
    """Projection could not reach the Pohozaev residual tolerance."""


@dataclass
class FiberMaximizer:
    """Result of maximizing Ψ_u: location, value, curvature, and work done."""

    t_u: float
    psi_at_max: float
    psi_second_at_max: float
    bracket: tuple[float, float]
    iterations: int


def _check_mass(spec: ProblemSpec, u: RadialField) -> None:
    m = mass(u)
    if m <= 0.0:
        raise ValueError("cannot maximize the fiber of the zero field")
    if abs(m - spec.c) > 1e-8 * spec.c:
        raise ValueError(
            f"field mass {m!r} is not the prescribed mass {spec.c!r} "
            "(renormalize before projecting)"
        )


def maximize_fiber(spec: ProblemSpec, u: RadialField) -> FiberMaximizer:
    """Locate the unique maximizer t_u of Ψ_u(t) = J(t⋆u).

    Brackets the sign change of Ψ′ on a ratio-2 geometric grid from
    t = 1, bisects to |Ψ′(t)| < 1e-10·max(1, |Ψ(t)|), then polishes
    with curvature-based Newton steps kept inside the bracket.
    """
    _check_mass(spec, u)
    fe = FiberEnergy(spec, u)
    iterations = 0

    # bracket: Ψ′ > 0 on the left, < 0 on the right
    lo = hi = 1.0
    s1 = fe.slope(1.0)
    if s1 > 0.0:
        lo = 1.0
        hi = 2.0
        while fe.slope(hi) > 0.0:
            lo = hi
            hi *= 2.0
            iterations += 1
            if hi > T_MAX:
                raise DegenerateFieldError(
                    f"fiber slope stayed positive up to t = {lo:g}; "
                    "the field is too concentrated for the domain"
                )
    elif s1 < 0.0:
        hi = 1.0
        lo = 0.5
        while fe.slope(lo) < 0.0:
            hi = lo
            lo *= 0.5
            iterations += 1
            if lo < T_MIN:
                raise DegenerateFieldError(
                    f"fiber slope stayed negative down to t = {hi:g}; "
                    "the field is too spread out for the domain"
                )
    else:
        lo = hi = 1.0
    bracket = (lo, hi)

    # bisection on the slope sign
    t = 1.0 if lo == hi else 0.5 * (lo + hi)
    if lo != hi:
        for _ in range(200):
            t = 0.5 * (lo + hi)
            s = fe.slope(t)
            iterations += 1
            if abs(s) < SLOPE_TOL * max(1.0, abs(fe.value(t))):
                break
            if s > 0.0:
                lo = t
            else:
                hi = t

    # safeguarded Newton polish on Ψ′ (curvature is negative near t_u)
    best_t, best_s = t, abs(fe.slope(t))
    for _ in range(8):
        curv = fe.curvature(best_t)
        if curv == 0.0:
            break
        step = fe.slope(best_t) / curv
        cand = best_t - step
        if not (lo <= cand <= hi):
            break
        cs = abs(fe.slope(cand))
        iterations += 1
        if cs < best_s:
            best_t, best_s = cand, cs
        else:
            break
    t = best_t

    curv = fe.curvature(t)
    if curv >= 0.0:
        raise DegenerateFieldError(
            f"fiber curvature at the located maximizer is {curv:g} >= 0; "
            "the spec is outside the admissible regime"
        )
    return FiberMaximizer(
        t_u=t,
        psi_at_max=fe.value(t),
        psi_second_at_max=curv,
        bracket=bracket,
        iterations=iterations,
    )


def project_pohozaev(spec: ProblemSpec, u: RadialField,
                     max_rounds: int = 8,
                     t_log: list[float] | None = None,
                     rel_tol: float = PROJECTION_REL_TOL) -> RadialField:
    """Project a mass-c field onto {P = 0} along its dilation fiber.

    Each round maximizes the fiber and resamples at t_u; because the
    maximizer zeroes the semi-exact fiber slope, realizing the dilation
    on the grid leaves an interpolation residual in P that the maximizer
    cannot see, so the round then polishes t against the realized map
    t ↦ P(t⋆w) (Newton seeded with the fiber curvature, continued by
    secant).  Every polish trial resamples the round's starting field,
    never an already-resampled one, so interpolation noise does not
    stack.  Rounds repeat until |P(w)| ≤ rel_tol·(a‖∇w‖₂² + b‖∇w‖₂⁴);
    a field already within tolerance is returned as-is (no resampling
    noise added).  When ``t_log`` is given, the net dilation factor of
    every round is appended to it (diagnostics).
    """
    if rel_tol <= 0.0:
        raise ValueError("rel_tol must be positive")
    _check_mass(spec, u)
    w = u
    for _ in range(max_rounds):
        res, scale = _pohozaev_residual(spec, w)
        if res <= rel_tol * scale:
            return w
        fm = maximize_fiber(spec, w)
        t = fm.t_u
        cand = normalize_to(resample(w, t), spec.c)
        f = pohozaev_P(spec, cand)
        best, best_rel, best_t = cand, _relative_residual(spec, cand, f), t
        # d/dt of t·Ψ′(t) at the maximizer, where Ψ′ vanishes
        slope = fm.psi_second_at_max * fm.t_u
        t_prev = math.nan
        f_prev = math.nan
        for _ in range(20):
            if best_rel <= 0.5 * rel_tol or slope == 0.0:
                break
            step = f / slope
            step = math.copysign(min(abs(step), 0.5 * t), step)
            t_prev, f_prev = t, f
            t = t - step
            cand = normalize_to(resample(w, t), spec.c)
            f = pohozaev_P(spec, cand)
            rel = _relative_residual(spec, cand, f)
            if rel < best_rel:
                best, best_rel, best_t = cand, rel, t
            if t != t_prev and f != f_prev:
                slope = (f - f_prev) / (t - t_prev)
        if t_log is not None:
            t_log.append(best_t)
        w = best
    res, scale = _pohozaev_residual(spec, w)
    if res <= rel_tol * scale:
        return w
    raise ProjectionAccuracyError(
        f"|P| = {res:.3e} still exceeds {rel_tol:g}·scale = "
        f"{rel_tol * scale:.3e} after {max_rounds} projection rounds "
        f"(kinetic {kinetic(w):.6g})"
    )


def _relative_residual(spec: ProblemSpec, w: RadialField, p_val: float) -> float:
    k = kinetic(w)
    return abs(p_val) / (spec.a * k + spec.b * k * k)


def _pohozaev_residual(spec: ProblemSpec, w: RadialField) -> tuple[float, float]:
    k = kinetic(w)
    scale = spec.a * k + spec.b * k * k
    return abs(pohozaev_P(spec, w)), scale


def fiber_scan(spec: ProblemSpec, u: RadialField,
               t_grid: np.ndarray) -> FiberProfile:
    """Tabulate Ψ, Ψ′, Ψ″ of u over ``t_grid`` (all entries positive)."""
    _check_mass(spec, u)
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("t_grid must be a nonempty 1-D array")
    if not np.all(t_grid > 0.0):
        raise ValueError("all fiber parameters must be positive")
    fe = FiberEnergy(spec, u)
    psi = np.array([fe.value(t) for t in t_grid])
    dpsi = np.array([fe.slope(t) for t in t_grid])
    ddpsi = np.array([fe.curvature(t) for t in t_grid])
    return FiberProfile(t=t_grid, psi=psi, psi_prime=dpsi, psi_second=ddpsi)


def sign_changes(values: np.ndarray) -> int:
    """Number of strict sign alternations in a sequence, ignoring zeros."""
    s = np.sign(values)
    s = s[s != 0.0]
    if s.size < 2:
        return 0
    return int(np.sum(s[1:] != s[:-1]))

"""Sharp interpolation-inequality constant via its radial optimizer Q.

The optimizer of ‖u‖_p^p ≤ C_p‖∇u‖₂^{(3p−6)/2}‖u‖₂^{(6−p)/2} on ℝ³ is
the unique positive radial decaying solution of

    −((3p−6)/4) ΔQ + ((6−p)/4) Q = Q^{p−1},

and the best constant is C_p = p/(2‖Q‖₂^{p−2}).  Q is found by
shooting on the center amplitude s = Q(0) (bisecting between profiles
that cross zero — amplitude too large — and profiles that turn upward —
too small), splicing the analytic far-field tail C·e^{−kr}/r, and then
polishing the sampled profile with damped Newton on the *discrete*
equation so the residual of the grid operator is solver-exact rather
than limited by finite-difference truncation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .radial import RadialField, RadialGrid

#: amplitude below which the integrated profile is handed to the analytic tail
SPLICE_REL = 1e-6
SHOOT_RTOL = 1e-11
BISECT_CAP = 200


class ShootingFailureError(RuntimeError):
    """Amplitude bisection could not separate crossing from turning."""


@dataclass
class GNData:
    """Optimizer profile and the constant it certifies.

    ``q`` is None for summary objects loaded from JSON caches (the
    constant and mass survive serialization; the profile does not).
    """

    p: float
    grid: RadialGrid
    q: RadialField | None
    q_mass: float
    constant: float
    amplitude: float

    def __post_init__(self) -> None:
        if not (2.0 < self.p < 6.0):
            raise ValueError(f"exponent must lie in (2, 6), got {self.p}")
        if self.q_mass <= 0.0 or self.constant <= 0.0:
            raise ValueError("q_mass and constant must be positive")


def q_equation_coefficients(p: float) -> tuple[float, float]:
    """(κ, m) of −κΔQ + mQ = Q^{p−1}: κ = (3p−6)/4, m = (6−p)/4."""
    return (3.0 * p - 6.0) / 4.0, (6.0 - p) / 4.0


def default_q_grid(p: float) -> RadialGrid:
    """Grid sized to the decay rate k = sqrt(m/κ): ~23.5 e-folds of tail."""
    kappa, m = q_equation_coefficients(p)
    k = math.sqrt(m / kappa)
    rmax = min(23.5 / k, 140.0)
    n = int(round(rmax / 2e-3))
    return RadialGrid(rmax=rmax, n=n)


def _classify(kappa: float, m: float, p: float, s: float, r_end: float) -> int:
    return kernels.shoot_classify(kappa, m, p, s, r_end, SHOOT_RTOL)


def _bisect_amplitude(kappa: float, m: float, p: float, r_end: float) -> float:
    """Amplitude between the turning and crossing regimes."""
    s = 1.0
    cls = _classify(kappa, m, p, s, r_end)
    if cls in (kernels.SHOT_DECAYED, kernels.SHOT_RAN_OFF):
        return s
    if cls == kernels.SHOT_TURNED:
        lo = s
        for _ in range(60):
            s *= 2.0
            cls = _classify(kappa, m, p, s, r_end)
            if cls == kernels.SHOT_CROSSED:
                hi = s
                break
            if cls == kernels.SHOT_TURNED:
                lo = s
            else:
                return s
        else:
            raise ShootingFailureError(
                f"no crossing amplitude found below {s:g} for p = {p}"
            )
    else:  # crossed at s = 1
        hi = s
        for _ in range(60):
            s *= 0.5
            cls = _classify(kappa, m, p, s, r_end)
            if cls == kernels.SHOT_TURNED:
                lo = s
                break
            if cls == kernels.SHOT_CROSSED:
                hi = s
            else:
                return s
        else:
            raise ShootingFailureError(
                f"no turning amplitude found above {s:g} for p = {p}"
            )
    for _ in range(BISECT_CAP):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-15 * hi:
            return mid
        cls = _classify(kappa, m, p, mid, r_end)
        if cls == kernels.SHOT_TURNED:
            lo = mid
        elif cls == kernels.SHOT_CROSSED:
            hi = mid
        else:
            return mid
    raise ShootingFailureError(
        f"amplitude bisection for p = {p} failed to separate the turning "
        f"and crossing regimes within {BISECT_CAP} iterations "
        f"(bracket [{lo:.17g}, {hi:.17g}])"
    )


def _sampled_profile(kappa: float, m: float, p: float, s: float,
                     grid: RadialGrid) -> np.ndarray:
    """Shooting profile at the grid nodes with the analytic tail spliced in."""
    stop_idx, r_stop, q_stop, values = kernels.shoot_profile(
        kappa, m, p, s, grid.r, SPLICE_REL * s, SHOOT_RTOL
    )
    if stop_idx < grid.n:
        if q_stop <= 0.0:
            raise ShootingFailureError(
                f"profile for p = {p} crossed zero before the splice point"
            )
        k = math.sqrt(m / kappa)
        tail_c = q_stop * r_stop * math.exp(k * r_stop)
        rr = grid.r[stop_idx:]
        values[stop_idx:] = tail_c * np.exp(-k * rr) / rr
    return values


def _newton_polish(kappa: float, m: float, p: float,
                   values: np.ndarray, grid: RadialGrid,
                   rel_tol: float = 1e-9, max_iter: int = 30) -> np.ndarray:
    """Damped Newton on the discrete equation −κ L_h q + m q − q^{p−1} = 0.

    The shooting profile satisfies the ODE, not the grid operator; a few
    Newton steps on the tridiagonal system move it to the exact discrete
    solution, making the operator residual limited only by round-off.
    """
    n = grid.n
    dr = grid.dr
    r2dr2 = grid.r * grid.r * dr * dr
    r_if = np.arange(0, n + 1, dtype=np.float64) * dr  # interface radii
    lo2 = r_if[:-1] ** 2
    hi2 = r_if[1:] ** 2
    # off-diagonals of −κ L_h (constant in q)
    dl = np.zeros(n)
    du = np.zeros(n)
    dl[1:] = -kappa * lo2[1:] / r2dr2[1:]
    du[:-1] = -kappa * hi2[:-1] / r2dr2[:-1]
    diag_lap = kappa * (lo2 + hi2) / r2dr2
    diag_lap[n - 1] = kappa * (lo2[n - 1] + 2.0 * hi2[n - 1]) / r2dr2[n - 1]

    q = values.copy()

    def residual(vec: np.ndarray) -> np.ndarray:
        return (-kappa * kernels.laplacian(vec, dr) + m * vec
                - np.abs(vec) ** (p - 2.0) * vec)

    def l2w(vec: np.ndarray) -> float:
        return math.sqrt(kernels.weighted_dot(grid.w, vec, vec))

    fnorm = l2w(residual(q))
    scale = l2w(q)
    for _ in range(max_iter):
        if fnorm <= rel_tol * scale:
            break
        f = residual(q)
        dg = diag_lap + m - (p - 1.0) * np.abs(q) ** (p - 2.0)
        delta = kernels.tridiag_solve(dl, dg, du, -f)
        step = 1.0
        for _ in range(12):
            cand = q + step * delta
            cnorm = l2w(residual(cand))
            if cnorm < fnorm:
                q = cand
                fnorm = cnorm
                break
            step *= 0.5
        else:
            break
        scale = l2w(q)
    if fnorm > rel_tol * scale:
        raise ShootingFailureError(
            f"discrete polish stalled at relative residual {fnorm / scale:.3e} "
            f"for p = {p}"
        )
    return q


def solve_Q(p: float, grid: RadialGrid | None = None) -> GNData:
    """Ground-state optimizer of the interpolation inequality at exponent p."""
    if not (2.0 < p < 6.0):
        raise ValueError(f"exponent must lie in (2, 6), got {p}")
    if grid is None:
        grid = default_q_grid(p)
    kappa, m = q_equation_coefficients(p)
    s = _bisect_amplitude(kappa, m, p, grid.rmax)
    values = _sampled_profile(kappa, m, p, s, grid)
    values = _newton_polish(kappa, m, p, values, grid)
    q = RadialField(grid, values)
    q_mass = kernels.power_integral(grid.w, values, 2.0)
    constant = p / (2.0 * q_mass ** ((p - 2.0) / 2.0))
    return GNData(p=p, grid=grid, q=q, q_mass=q_mass,
                  constant=constant, amplitude=s)


def q_equation_residual(gn: GNData) -> float:
    """Relative discrete-operator residual ‖−κΔQ + mQ − Q^{p−1}‖₂/‖Q‖₂."""
    if gn.q is None:
        raise ValueError("summary GNData has no profile to check")
    kappa, m = q_equation_coefficients(gn.p)
    vals = gn.q.values
    res = (-kappa * kernels.laplacian(vals, gn.grid.dr) + m * vals
           - np.abs(vals) ** (gn.p - 2.0) * vals)
    num = math.sqrt(kernels.weighted_dot(gn.grid.w, res, res))
    den = math.sqrt(kernels.weighted_dot(gn.grid.w, vals, vals))
    return num / den


def verify_gn(u: RadialField, p: float, gn: GNData) -> float:
    """GN quotient of u: ‖u‖_p^p / (C_p‖∇u‖₂^{(3p−6)/2}‖u‖₂^{(6−p)/2}).

    ≤ 1 (up to discretization) for every field; = 1 at the optimizer.
    """
    if p != gn.p:
        raise ValueError(f"GN data is for p = {gn.p}, asked about p = {p}")
    w = u.grid.w
    lp = kernels.power_integral(w, u.values, p)
    if lp <= 0.0:
        raise ValueError("verify_gn needs a nonzero field")
    kin = kernels.kinetic(u.values, u.grid.dr)
    msq = kernels.power_integral(w, u.values, 2.0)
    return lp / (gn.constant * kin ** ((3.0 * p - 6.0) / 4.0)
                 * msq ** ((6.0 - p) / 4.0))


def to_json(gn: GNData) -> str:
    """Serialize the cacheable summary (constant, mass, grid metadata)."""
    return json.dumps(
        {
            "schema": 1,
            "p": gn.p,
            "q_mass": gn.q_mass,
            "constant": gn.constant,
            "amplitude": gn.amplitude,
            "grid": {"rmax": gn.grid.rmax, "n": gn.grid.n},
        },
        indent=2,
        sort_keys=True,
    )


def from_json(text: str) -> GNData:
    """Rebuild a summary GNData (no profile) from ``to_json`` output."""
    d = json.loads(text)
    if d.get("schema") != 1:
        raise ValueError(f"unsupported summary schema {d.get('schema')!r}")
    grid = RadialGrid(rmax=float(d["grid"]["rmax"]), n=int(d["grid"]["n"]))
    return GNData(
        p=float(d["p"]),
        grid=grid,
        q=None,
        q_mass=float(d["q_mass"]),
        constant=float(d["constant"]),
        amplitude=float(d["amplitude"]),
    )

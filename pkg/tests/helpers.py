"""Shared generators and finite-difference probes for the test suite."""

from __future__ import annotations

import numpy as np

from kirchhoffgs.radial import RadialField, RadialGrid, normalize_to


def bump_field(grid: RadialGrid, rng: np.random.Generator,
               modulated: bool = True) -> RadialField:
    """A random smooth decaying profile (positive when modulated)."""
    width = float(np.exp(rng.uniform(np.log(0.4), np.log(3.0))))
    amp = float(rng.uniform(0.3, 3.0))
    vals = amp * np.exp(-((grid.r / width) ** 2))
    if modulated:
        q = rng.uniform(0.5, 2.0)
        ph = rng.uniform(0.0, 2.0 * np.pi)
        vals = vals * (1.0 + 0.4 * np.sin(q * grid.r + ph))
    return RadialField(grid, vals)


def signed_field(grid: RadialGrid, rng: np.random.Generator) -> RadialField:
    """A random decaying profile with a sign change."""
    base = bump_field(grid, rng, modulated=False)
    r0 = rng.uniform(0.5, 3.0)
    s0 = rng.uniform(0.3, 1.5)
    dip = 1.0 - 1.8 * np.exp(-((grid.r - r0) / s0) ** 2)
    return RadialField(grid, base.values * dip)


def random_mass_field(spec, rng: np.random.Generator,
                      signed: bool = False) -> RadialField:
    """A random field renormalized to the prescribed mass of ``spec``."""
    u = signed_field(spec.grid, rng) if signed else bump_field(spec.grid, rng)
    return normalize_to(u, spec.c)


def directional_fd(f, u: RadialField, v: RadialField, eps: float = 1e-5) -> float:
    """Centered difference of the scalar field functional f along v."""
    up = RadialField(u.grid, u.values + eps * v.values)
    um = RadialField(u.grid, u.values - eps * v.values)
    return (f(up) - f(um)) / (2.0 * eps)


def rel_err(got: float, want: float, floor: float = 1e-300) -> float:
    return abs(got - want) / max(abs(want), floor)

"""Dilation-profile maximization and projection onto the constraint set."""

from __future__ import annotations

import math

import numpy as np
import pytest

from helpers import random_mass_field, rel_err
from kirchhoffgs.fiber import (DegenerateFieldError, FiberMaximizer,
                               fiber_scan, maximize_fiber, project_pohozaev,
                               sign_changes)
from kirchhoffgs.functionals import (ProblemSpec, energy_J, pohozaev_P, psi,
                                     psi_prime)
from kirchhoffgs.model import HardyPotential, Nonlinearity, ZeroPotential
from kirchhoffgs.radial import (RadialField, RadialGrid, gaussian_field,
                                kinetic, lp_integral, mass, normalize_to)

GRID = RadialGrid(rmax=40.0, n=2048)
QUINTIC = Nonlinearity(((80.09, 5.0),))


def _spec(nl=QUINTIC, c=1.0, pot=None):
    return ProblemSpec(a=1.0, b=1.0, c=c, nl=nl,
                       pot=pot if pot is not None else HardyPotential(0.02),
                       grid=GRID)


def _cubic_profile_fixture(weight_scale: float):
    """Unit-kinetic profile whose slope is t + t³ − (4.5·weight_scale)·t^{7/2}."""
    u0 = gaussian_field(GRID, 1.0, 1.0)
    u = RadialField(GRID, u0.values / math.sqrt(kinetic(u0)))
    d0 = lp_integral(u, 5.0) / 5.0
    nl = Nonlinearity(((weight_scale / d0, 5.0),))
    spec = ProblemSpec(a=1.0, b=1.0, c=mass(u), nl=nl,
                       pot=ZeroPotential(), grid=GRID)
    return spec, u


class TestMaximize:
    def test_scalar_slope_with_root_between_one_and_two(self):
        # slope t + t³ − 0.9 t^{7/2}: positive at 1 (1.1), negative at 2
        spec, u = _cubic_profile_fixture(0.2)
        assert psi_prime(spec, u, 1.0) == pytest.approx(1.1, abs=1e-10)
        assert psi_prime(spec, u, 2.0) == pytest.approx(
            10.0 - 0.9 * 2.0 ** 3.5, abs=1e-9)
        res = maximize_fiber(spec, u)
        assert 1.0 < res.t_u < 2.0
        assert abs(psi_prime(spec, u, res.t_u)) < 1e-8 * spec.c
        assert res.psi_second_at_max < 0.0
        assert res.psi_at_max == pytest.approx(psi(spec, u, res.t_u), rel=1e-12)

    def test_maximizer_of_projected_field_is_one(self, baseline_spec,
                                                 projected_ensemble):
        for _, w in projected_ensemble[:10]:
            res = maximize_fiber(baseline_spec, w)
            assert abs(res.t_u - 1.0) < 1e-6

    def test_heavier_weight_moves_the_maximizer_left(self):
        locations = []
        for scale in (0.1, 0.2, 0.4):
            spec, u = _cubic_profile_fixture(scale)
            locations.append(maximize_fiber(spec, u).t_u)
        assert locations[0] > locations[1] > locations[2]

    def test_windowed_out_field_raises(self):
        nl = Nonlinearity(((1e-30, 5.0),))
        spec = ProblemSpec(a=1.0, b=1.0, c=1.0, nl=nl,
                           pot=ZeroPotential(), grid=GRID)
        u = normalize_to(gaussian_field(GRID, 1.0, 1.0), 1.0)
        with pytest.raises(DegenerateFieldError):
            maximize_fiber(spec, u)

    def test_mass_mismatch_rejected(self):
        spec = _spec()
        u = normalize_to(gaussian_field(GRID), 2.0)
        with pytest.raises(ValueError):
            maximize_fiber(spec, u)
        with pytest.raises(ValueError):
            maximize_fiber(spec, RadialField(GRID, np.zeros(GRID.n)))


class TestProjection:
    def test_lands_on_the_constraint_set(self, baseline_spec,
                                         projected_ensemble):
        for _, w in projected_ensemble:
            k = kinetic(w)
            scale = baseline_spec.a * k + baseline_spec.b * k * k
            assert abs(pohozaev_P(baseline_spec, w)) <= 1e-6 * scale
            assert mass(w) == pytest.approx(baseline_spec.c, rel=1e-12)

    def test_is_idempotent(self, baseline_spec, projected_ensemble):
        for _, w in projected_ensemble[:5]:
            w2 = project_pohozaev(baseline_spec, w)
            scale = float(np.max(np.abs(w.values)))
            assert np.max(np.abs(w2.values - w.values)) < 1e-4 * scale

    def test_never_lowers_the_fiber_maximum(self, baseline_spec,
                                            projected_ensemble):
        # J(projection) = max_t Ψ(t) ≥ Ψ(1) = J(u)
        for u, w in projected_ensemble[:20]:
            ju = energy_J(baseline_spec, u)
            jw = energy_J(baseline_spec, w)
            assert jw >= ju - 1e-6 * (1.0 + abs(ju))

    def test_projection_of_member_is_itself(self, baseline_spec,
                                            projected_ensemble):
        _, w = projected_ensemble[0]
        res = maximize_fiber(baseline_spec, w)
        assert abs(res.t_u - 1.0) < 1e-6


class TestScan:
    def test_profile_shape_on_random_fields(self, baseline_spec):
        rng = np.random.default_rng(777)
        t_grid = np.geomspace(1e-3, 1e3, 400)
        for _ in range(5):
            u = random_mass_field(baseline_spec, rng)
            prof = fiber_scan(baseline_spec, u, t_grid)
            assert sign_changes(prof.psi_prime) == 1
            assert prof.psi[0] > 0.0       # quadratic term dominates small t
            assert prof.psi[-1] < 0.0      # power terms dominate large t

    def test_scan_matches_pointwise_evaluation(self, baseline_spec):
        rng = np.random.default_rng(778)
        u = random_mass_field(baseline_spec, rng)
        t_grid = np.array([0.5, 1.0, 2.0])
        prof = fiber_scan(baseline_spec, u, t_grid)
        for i, t in enumerate(t_grid):
            assert prof.psi[i] == psi(baseline_spec, u, t)
            assert prof.psi_prime[i] == psi_prime(baseline_spec, u, t)

    def test_scan_validates_the_grid(self, baseline_spec):
        rng = np.random.default_rng(779)
        u = random_mass_field(baseline_spec, rng)
        with pytest.raises(ValueError):
            fiber_scan(baseline_spec, u, np.array([]))
        with pytest.raises(ValueError):
            fiber_scan(baseline_spec, u, np.array([0.0, 1.0]))


class TestSignChanges:
    def test_counts_strict_alternations(self):
        assert sign_changes(np.array([1.0, 2.0, -1.0])) == 1
        assert sign_changes(np.array([1.0, 0.0, -1.0])) == 1  # zeros ignored
        assert sign_changes(np.array([1.0, -1.0, 1.0])) == 2
        assert sign_changes(np.array([3.0, 2.0, 1.0])) == 0
        assert sign_changes(np.array([0.0, 0.0])) == 0

"""Acceptance gate: the ten shipping criteria, one test (and line) each.

Run `pytest -v tests/test_acceptance.py` to get exactly one pass/fail line
per criterion; each test also prints a `[criterion N]` summary visible
with `-s`.  Shared solves are module-scoped so the matrix is computed once.
"""

from __future__ import annotations

import dataclasses
import math
import time

import numpy as np
import pytest

from helpers import bump_field, directional_fd, rel_err, signed_field
from kirchhoffgs import cli, kernels
from kirchhoffgs.fiber import fiber_scan, maximize_fiber, sign_changes
from kirchhoffgs.functionals import (ProblemSpec, energy_J, gradient_J,
                                     pohozaev_P, psi_prime, psi_second)
from kirchhoffgs.gn import q_equation_residual, verify_gn
from kirchhoffgs.model import (HardyPotential, Nonlinearity, ZeroPotential,
                               sigma_bounds)
from kirchhoffgs.radial import (RadialGrid, gaussian_field, kinetic,
                                normalize_to, resample)
from kirchhoffgs.solver import (SolveOptions, delta_bar, delta_bar_envelope,
                                minimize_on_pohozaev, verify_solution)

MATRIX_C = (0.5, 1.0, 2.0)
MATRIX_MU = (0.0, 0.01, 0.02)


def _announce(n: int, text: str) -> None:
    print(f"[criterion {n:2d}] PASS — {text}", flush=True)


@pytest.fixture(scope="module")
def matrix_results(base_grid, quintic):
    out = {}
    for mu in MATRIX_MU:
        pot = HardyPotential(mu) if mu > 0.0 else ZeroPotential()
        for c in MATRIX_C:
            spec = ProblemSpec(a=1.0, b=1.0, c=c, nl=quintic, pot=pot,
                               grid=base_grid)
            out[(c, mu)] = (spec, minimize_on_pohozaev(spec, SolveOptions()))
    return out


@pytest.fixture(scope="module")
def mass_four_result(base_grid, quintic):
    spec = ProblemSpec(a=1.0, b=1.0, c=4.0, nl=quintic, pot=ZeroPotential(),
                       grid=base_grid)
    return spec, minimize_on_pohozaev(spec, SolveOptions())


@pytest.fixture(scope="module")
def refined_result(quintic):
    spec = ProblemSpec(a=1.0, b=1.0, c=1.0, nl=quintic,
                       pot=HardyPotential(0.02),
                       grid=RadialGrid(rmax=60.0, n=4096))
    return spec, minimize_on_pohozaev(spec, SolveOptions())


def test_criterion_01_constraint_membership_within_budget(baseline_spec):
    t0 = time.perf_counter()
    result = minimize_on_pohozaev(baseline_spec, SolveOptions())
    elapsed = time.perf_counter() - t0
    assert result.converged
    k = kinetic(result.u)
    scale = baseline_spec.a * k + baseline_spec.b * k * k
    p_abs = abs(pohozaev_P(baseline_spec, result.u))
    assert p_abs <= 1e-6 * scale
    assert elapsed <= 60.0
    _announce(1, f"|P(u)| = {p_abs:.3e} ≤ 1e-6·(aK+bK²) = {1e-6 * scale:.3e}, "
                 f"solved in {elapsed:.2f}s")


def test_criterion_02_multiplier_positive_with_lower_bound(matrix_results,
                                                           gn_cache):
    worst = math.inf
    for (c, mu), (spec, res) in matrix_results.items():
        assert res.converged, (c, mu)
        assert res.lam > 0.0, (c, mu)
        _, s2, _ = sigma_bounds(spec.pot, spec.grid)
        db2 = delta_bar(spec, gn_cache) ** 2
        be = spec.nl.beta
        chain = ((3.0 - be / 2.0) * (2.0 / (3.0 * (be - 2.0)))
                 * ((spec.a - s2) * db2 + spec.b * db2 * db2) - s2 * db2)
        bound = chain / spec.c
        assert res.lam >= 0.95 * bound, (c, mu, res.lam, bound)
        worst = min(worst, res.lam / bound)
    _announce(2, f"λ > 0 on all 9 runs; min λ/bound = {worst:.3f} ≥ 0.95")


def test_criterion_03_potential_strictly_lowers_the_minimum(matrix_results):
    _, with_pot = matrix_results[(1.0, 0.02)]
    _, without = matrix_results[(1.0, 0.0)]
    margin = without.energy - with_pot.energy
    assert margin > 1e-6
    lone = minimize_on_pohozaev(
        matrix_results[(1.0, 0.02)][0].without_potential(), SolveOptions())
    assert rel_err(lone.energy, without.energy) < 1e-8
    _announce(3, f"m̃(1) = {with_pot.energy:.8f} < m(1) = "
                 f"{without.energy:.8f} (margin {margin:.2e}); "
                 f"equality at zero size")


def test_criterion_04_reference_value_strictly_decreasing(matrix_results,
                                                          mass_four_result):
    energies = [matrix_results[(c, 0.0)][1].energy for c in MATRIX_C]
    energies.append(mass_four_result[1].energy)
    gaps = [a - b for a, b in zip(energies, energies[1:])]
    assert all(g > 1e-6 for g in gaps), energies
    _announce(4, "m(c) strictly decreasing on c ∈ {0.5, 1, 2, 4}: "
                 + " > ".join(f"{e:.6f}" for e in energies))


def test_criterion_05_fiber_structure_on_random_fields(baseline_spec,
                                                       projected_ensemble):
    t_grid = np.geomspace(1e-3, 1e3, 400)
    s3 = sigma_bounds(baseline_spec.pot, baseline_spec.grid)[2]
    for u, w in projected_ensemble:
        profile = fiber_scan(baseline_spec, u, t_grid)
        assert sign_changes(profile.psi_prime) == 1
        res = maximize_fiber(baseline_spec, u)
        assert res.psi_second_at_max < 0.0
        k = kinetic(w)
        scale = baseline_spec.a * k + baseline_spec.b * k * k
        bound = (-2.0 * baseline_spec.a + s3) * k + 1e-6 * scale
        assert psi_second(baseline_spec, w, 1.0) <= bound
    _announce(5, "100/100 random fields: unique slope sign change, "
                 "negative curvature at the maximizer, curvature window "
                 "holds at projected points")


def test_criterion_06_kinetic_floor(matrix_results, mass_four_result,
                                    baseline_spec, gn_cache):
    checked = 0
    for spec, res in list(matrix_results.values()) + [mass_four_result]:
        floor = delta_bar(spec, gn_cache)
        assert math.sqrt(res.kinetic) >= floor, spec.c
        checked += 1
    env = delta_bar_envelope(baseline_spec, gn_cache)
    root = delta_bar(baseline_spec, gn_cache)
    assert env <= root
    _announce(6, f"‖∇u‖ ≥ δ̄ on {checked}/{checked} converged runs; "
                 f"closed-form envelope {env:.5f} ≤ root {root:.5f}")


def test_criterion_07_interpolation_sharpness(gn_cache):
    grid = RadialGrid(rmax=40.0, n=2048)
    for p in (4.0, 5.0, 5.5):
        gn = gn_cache[p]
        assert q_equation_residual(gn) < 1e-6
        self_ratio = verify_gn(gn.q, p, gn)
        assert 0.999 <= self_ratio <= 1.001
        rng = np.random.default_rng(int(1000 * p))
        worst = 0.0
        for i in range(1000):
            u = bump_field(grid, rng) if i % 2 == 0 else signed_field(grid, rng)
            worst = max(worst, verify_gn(u, p, gn))
        assert worst <= 1.001, p
    _announce(7, "optimizer quotient within [0.999, 1.001] and 1000 random "
                 "fields per exponent stay below the sharp constant")


def test_criterion_08_gradient_and_profile_consistency(baseline_spec):
    rng = np.random.default_rng(2024)
    for _ in range(20):
        u = bump_field(baseline_spec.grid, rng)
        v = bump_field(baseline_spec.grid, rng)
        got = kernels.weighted_dot(baseline_spec.grid.w,
                                   gradient_J(baseline_spec, u).values,
                                   v.values)
        fd = directional_fd(lambda x: energy_J(baseline_spec, x), u, v)
        assert rel_err(got, fd) < 1e-5

    fine = RadialGrid(rmax=30.0, n=8192)
    spec = dataclasses.replace(baseline_spec, grid=fine)
    u = normalize_to(gaussian_field(fine, 2.0, 0.31), spec.c)
    for t in (0.5, 1.0, 2.0):
        lhs = psi_prime(spec, u, t) * t
        rhs = pohozaev_P(spec, resample(u, t))
        assert rel_err(lhs, rhs) < 1e-4
    h = 1e-5
    for t in (0.8, 1.0, 1.5):
        fd2 = (psi_prime(spec, u, t + h) - psi_prime(spec, u, t - h)) / (2 * h)
        assert rel_err(psi_second(spec, u, t), fd2) < 1e-4
    _announce(8, "20/20 directional derivatives at 1e-5; fiber slope and "
                 "curvature identities at 1e-4")


def test_criterion_09_grid_refinement_stability(baseline_result,
                                                refined_result):
    coarse = baseline_result.energy
    fine = refined_result[1].energy
    change = rel_err(fine, coarse)
    assert refined_result[1].converged
    assert change < 0.01
    _announce(9, f"m̃(1): {coarse:.8f} → {fine:.8f} under (n, R) → "
                 f"(4096, 60), relative change {change:.2e} < 1%")


def test_criterion_10_deterministic_artifacts(tmp_path, monkeypatch,
                                              gn_cache):
    from kirchhoffgs.cli import load_config
    from kirchhoffgs.solver import result_from_payload
    import json

    ini = (tmp_path / "run.ini")
    ini.write_text(
        "[problem]\na = 1.0\nb = 1.0\nc = 1.0\nterms = 80.09:5.0\n"
        "potential = hardy\npotential_mu = 0.02\n\n"
        "[grid]\nrmax = 40.0\nn = 2048\n\n[solver]\nseed = 0\n\n"
        "[output]\ndirectory = out\nformats = json,csv\n")
    blobs = []
    for sub in ("first", "second"):
        d = tmp_path / sub
        d.mkdir()
        monkeypatch.chdir(d)
        assert cli.main(["solve", str(ini)]) == 0
        blobs.append((d / "out" / "result.json").read_bytes())
    assert blobs[0] == blobs[1]

    data = json.loads(blobs[0])
    result = result_from_payload(data["result"])
    report = verify_solution(load_config(str(ini)).spec, result, gn_cache)
    assert [[c.name, c.passed] for c in report.checks] == data["verification"]
    _announce(10, "re-run is byte-identical and a fresh verification "
                  "reproduces the stored report")

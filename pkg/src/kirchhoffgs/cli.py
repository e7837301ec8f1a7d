"""Command-line entry point: config ingestion, commands, persistence.

Commands
--------
check       validate growth and potential-size hypotheses; exit 0 iff all pass
solve       run the constrained minimization; write result.json + trace.csv
sweep       solve across a mass list; write sweep.csv
fiber-scan  tabulate the fiber energy of the configured initial field
gn          compute an interpolation-constant optimizer; write gn JSON

Configs are flat INI files (sections problem/grid/solver/output); every
key is validated against a whitelist and unknown keys are rejected with
a diagnostic.  Exit codes: 0 success, 1 failed numerical check, 2 bad
input.  All written artifacts carry the fully-resolved config and the
package version in a header block; outputs contain no timestamps so
identical inputs produce identical bytes.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .fiber import fiber_scan, sign_changes
from .functionals import ProblemSpec
from .gn import q_equation_residual, solve_Q, to_json as gn_to_json, verify_gn
from .model import (
    Nonlinearity,
    admissibility,
    check_growth,
    potential_from_kind,
)
from .radial import RadialGrid
from .solver import (
    SolveOptions,
    gn_cache_for,
    mass_sweep,
    minimize_on_pohozaev,
    result_to_payload,
    verify_solution,
)


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


_ALLOWED_KEYS = {
    "problem": {"a", "b", "c", "terms", "potential",
                "potential_mu", "potential_depth", "potential_width"},
    "grid": {"rmax", "n"},
    "solver": {"step", "max_iter", "grad_tol", "pohozaev_tol", "seed",
               "init", "init_width", "metric"},
    "output": {"directory", "formats"},
}
_REQUIRED_KEYS = {
    "problem": {"a", "b", "c", "terms", "potential"},
    "grid": {"rmax", "n"},
}


@dataclass
class RunConfig:
    """Parsed and validated configuration."""

    spec: ProblemSpec
    opts: SolveOptions
    out_dir: Path
    formats: tuple[str, ...]
    resolved: dict[str, dict[str, str]]

    def header_lines(self) -> list[str]:
        out = [f"artifact_version = {__version__}"]
        for section in sorted(self.resolved):
            for key in sorted(self.resolved[section]):
                out.append(f"{section}.{key} = {self.resolved[section][key]}")
        return out


def _parse_terms(text: str) -> Nonlinearity:
    """'mu:p[, mu:p ...]' → Nonlinearity."""
    terms = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 2:
            raise ConfigError(
                f"bad nonlinearity term {chunk!r}: expected 'mu:p'"
            )
        try:
            terms.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ConfigError(f"bad nonlinearity term {chunk!r}: {exc}") from exc
    if not terms:
        raise ConfigError("problem.terms lists no power terms")
    try:
        return Nonlinearity(tuple(terms))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> RunConfig:
    """Read, whitelist-validate, and materialize a run configuration."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not read:
        raise ConfigError(f"config file not found: {path}")

    for section in parser.sections():
        if section not in _ALLOWED_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _ALLOWED_KEYS[section]:
                raise ConfigError(
                    f"unknown key {key!r} in section [{section}] "
                    f"(allowed: {', '.join(sorted(_ALLOWED_KEYS[section]))})"
                )
    for section, required in _REQUIRED_KEYS.items():
        if section not in parser:
            raise ConfigError(f"missing required section [{section}]")
        missing = required - set(parser[section])
        if missing:
            raise ConfigError(
                f"section [{section}] is missing keys: {', '.join(sorted(missing))}"
            )

    def getfloat(section: str, key: str, default: float | None = None) -> float:
        raw = parser[section].get(key) if section in parser else None
        if raw is None:
            if default is None:
                raise ConfigError(f"missing {section}.{key}")
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"{section}.{key} = {raw!r} is not a number") from exc

    def getint(section: str, key: str, default: int | None = None) -> int:
        val = getfloat(section, key, None if default is None else float(default))
        if val != int(val):
            raise ConfigError(f"{section}.{key} must be an integer, got {val}")
        return int(val)

    prob = parser["problem"]
    nl = _parse_terms(prob["terms"])
    kind = prob["potential"].strip().lower()
    pot_params = {}
    try:
        if kind == "hardy":
            pot_params["mu"] = getfloat("problem", "potential_mu")
        elif kind == "gaussian_well":
            pot_params["depth"] = getfloat("problem", "potential_depth")
            pot_params["width"] = getfloat("problem", "potential_width")
        elif kind != "zero":
            raise ConfigError(f"unknown potential kind {kind!r}")
        pot = potential_from_kind(kind, **pot_params)
        grid = RadialGrid(rmax=getfloat("grid", "rmax"), n=getint("grid", "n"))
        spec = ProblemSpec(
            a=getfloat("problem", "a"),
            b=getfloat("problem", "b"),
            c=getfloat("problem", "c"),
            nl=nl, pot=pot, grid=grid,
        )
        defaults = SolveOptions()
        opts = SolveOptions(
            step=getfloat("solver", "step", defaults.step),
            max_iter=getint("solver", "max_iter", defaults.max_iter),
            grad_tol=getfloat("solver", "grad_tol", defaults.grad_tol),
            pohozaev_tol=getfloat("solver", "pohozaev_tol", defaults.pohozaev_tol),
            seed=getint("solver", "seed", defaults.seed),
            init=(parser["solver"].get("init", defaults.init).strip()
                  if "solver" in parser else defaults.init),
            init_width=getfloat("solver", "init_width", defaults.init_width),
            metric=(parser["solver"].get("metric", defaults.metric).strip()
                    if "solver" in parser else defaults.metric),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    out_section = parser["output"] if "output" in parser else {}
    out_dir = Path(out_section.get("directory", "."))
    formats = tuple(
        f.strip().lower()
        for f in out_section.get("formats", "json,csv").split(",") if f.strip()
    )
    for f in formats:
        if f not in ("json", "csv"):
            raise ConfigError(f"unknown output format {f!r}")

    resolved = {
        "problem": {
            "a": repr(spec.a), "b": repr(spec.b), "c": repr(spec.c),
            "terms": ", ".join(f"{m!r}:{p!r}" for m, p in nl.terms),
            "potential": kind,
            **{f"potential_{k}": repr(v) for k, v in pot.params().items()},
        },
        "grid": {"rmax": repr(grid.rmax), "n": str(grid.n)},
        "solver": {
            "step": repr(opts.step), "max_iter": str(opts.max_iter),
            "grad_tol": repr(opts.grad_tol),
            "pohozaev_tol": repr(opts.pohozaev_tol),
            "seed": str(opts.seed), "init": opts.init,
            "init_width": repr(opts.init_width),
            "metric": opts.metric,
        },
        "output": {"directory": str(out_dir), "formats": ",".join(formats)},
    }
    return RunConfig(spec=spec, opts=opts, out_dir=out_dir,
                     formats=formats, resolved=resolved)


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    opts = cfg.opts
    if getattr(args, "seed", None) is not None:
        opts = dataclasses.replace(opts, seed=args.seed)
        cfg.resolved["solver"]["seed"] = str(args.seed)
    out_dir = cfg.out_dir
    if getattr(args, "out_dir", None) is not None:
        out_dir = Path(args.out_dir)
        cfg.resolved["output"]["directory"] = str(out_dir)
    return dataclasses.replace(cfg, opts=opts, out_dir=out_dir)


def _csv_header(cfg: RunConfig) -> str:
    return "".join(f"# {line}\n" for line in cfg.header_lines())


def _write_text(cfg: RunConfig, name: str, text: str) -> Path:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / name
    path.write_text(text)
    return path


def _admissibility_gate(cfg: RunConfig, skip: bool) -> int | None:
    """Print hypothesis reports; return an exit code if the gate fails."""
    growth = check_growth(cfg.spec.nl)
    print(f"growth windows: ratio g(s)s/G in [{growth.ratio_min:.6g}, "
          f"{growth.ratio_max:.6g}], superlinearity min {growth.gtilde_ratio_min:.6g}"
          f" -> {'pass' if growth.passed else 'FAIL'}")
    report = admissibility(cfg.spec.a, cfg.spec.nl, cfg.spec.pot, cfg.spec.grid)
    for line in report.lines():
        print(line)
    if growth.passed and report.all_passed:
        return None
    if skip:
        print("admissibility gate FAILED but --unsafe-skip-admissibility is set")
        return None
    print("admissibility gate FAILED (use --unsafe-skip-admissibility to force)")
    return 1


def cmd_check(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    gate = _admissibility_gate(cfg, skip=False)
    return 0 if gate is None else 1


def cmd_solve(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    gate = _admissibility_gate(cfg, skip=args.unsafe_skip_admissibility)
    if gate is not None:
        return gate
    spec, opts = cfg.spec, cfg.opts
    gn_cache = gn_cache_for(spec)
    result = minimize_on_pohozaev(spec, opts)
    report = verify_solution(spec, result, gn_cache,
                             grad_tol=opts.grad_tol,
                             pohozaev_tol=opts.pohozaev_tol)

    print(f"converged      : {result.converged} "
          f"({result.iterations} iterations)")
    print(f"energy  m~(c)  : {result.energy:.10g}")
    print(f"lambda         : {result.lam:.10g}")
    print(f"kinetic        : {result.kinetic:.10g}")
    print(f"|P|/scale      : {result.pohozaev_residual:.3e}")
    print(f"stationarity   : {result.stationarity_residual:.3e}")
    print(f"raw residual   : {result.pde_residual_raw:.3e} "
          f"(pohozaev multiplier {result.pohozaev_multiplier:.3e})")
    print("verification:")
    for line in report.lines():
        print(line)

    if "json" in cfg.formats:
        payload = {
            "schema": 1,
            "config": cfg.resolved,
            "result": result_to_payload(result),
            "verification": [[c.name, c.passed] for c in report.checks],
        }
        path = _write_text(cfg, "result.json",
                           json.dumps(payload, indent=2, sort_keys=True))
        print(f"wrote {path}")
    if "csv" in cfg.formats:
        lines = [_csv_header(cfg), "iter,energy,residual,t_u\n"]
        for i, row in enumerate(result.trace):
            lines.append(f"{i},{row.energy!r},{row.residual!r},{row.t_u!r}\n")
        path = _write_text(cfg, "trace.csv", "".join(lines))
        print(f"wrote {path}")
    return 0 if (result.converged and report.all_passed) else 1


def cmd_sweep(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    try:
        c_values = [float(x) for x in args.masses.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --masses list {args.masses!r}: {exc}") from exc
    if not c_values:
        raise ConfigError("--masses lists no values")
    if any(c <= 0.0 for c in c_values):
        raise ConfigError("--masses must all be positive")
    if sorted(c_values) != c_values:
        raise ConfigError("--masses must be ascending")
    gate = _admissibility_gate(cfg, skip=args.unsafe_skip_admissibility)
    if gate is not None:
        return gate
    rows = mass_sweep(cfg.spec, c_values, cfg.opts)
    lines = [_csv_header(cfg),
             "c,m_tilde,m_ref,lambda,kinetic,pohozaev_residual,converged\n"]
    ok = True
    for row in rows:
        lines.append(
            f"{row.c!r},{row.m_tilde!r},{row.m_ref!r},{row.lam!r},"
            f"{row.kinetic!r},{row.pohozaev_residual!r},{row.converged}\n"
        )
        status = "ok" if row.converged else f"FAILED {row.error}".rstrip()
        print(f"c = {row.c:g}: m~ = {row.m_tilde:.8g}, m_ref = {row.m_ref:.8g}, "
              f"lambda = {row.lam:.6g} [{status}]")
        ok = ok and row.converged
    if "csv" in cfg.formats:
        path = _write_text(cfg, "sweep.csv", "".join(lines))
        print(f"wrote {path}")
    return 0 if ok else 1


def cmd_fiber_scan(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    gate = _admissibility_gate(cfg, skip=args.unsafe_skip_admissibility)
    if gate is not None:
        return gate
    if args.t_min <= 0 or args.t_max <= args.t_min or args.points < 2:
        raise ConfigError("need 0 < t-min < t-max and at least 2 points")
    from .solver import _initial_field  # the configured seeded start

    u0 = _initial_field(cfg.spec, cfg.opts)
    t_grid = np.geomspace(args.t_min, args.t_max, args.points)
    profile = fiber_scan(cfg.spec, u0, t_grid)
    changes = sign_changes(profile.psi_prime)
    print(f"fiber scan over t in [{args.t_min:g}, {args.t_max:g}] "
          f"({args.points} points): {changes} sign change(s) of psi_prime")
    if "csv" in cfg.formats:
        lines = [_csv_header(cfg), "t,psi,psi_prime,psi_second\n"]
        for t, v, dv, ddv in profile.rows():
            lines.append(f"{t!r},{v!r},{dv!r},{ddv!r}\n")
        path = _write_text(cfg, "fiber.csv", "".join(lines))
        print(f"wrote {path}")
    return 0 if changes == 1 else 1


def cmd_gn(args) -> int:
    p = args.p
    if not (2.0 < p < 6.0):
        raise ConfigError(f"exponent must lie in (2, 6), got {p}")
    gn = solve_Q(p)
    residual = q_equation_residual(gn)
    ratio = verify_gn(gn.q, p, gn)
    print(f"p = {p:g}: amplitude = {gn.amplitude:.8f}, "
          f"mass = {gn.q_mass:.8f}, constant = {gn.constant:.10g}")
    print(f"equation residual = {residual:.3e}, self-quotient = {ratio:.8f}")
    out_dir = Path(args.out_dir) if args.out_dir else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"gn_p{p:g}.json"
    path.write_text(gn_to_json(gn))
    print(f"wrote {path}")
    ok = residual < 1e-6 and abs(ratio - 1.0) <= 1e-3
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kirchhoffgs",
        description=("Ground-state normalized solutions of a Kirchhoff-type "
                     "equation with mass constraint, on a radial grid."),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_unsafe: bool = True):
        p.add_argument("config", help="path to an INI run configuration")
        p.add_argument("--seed", type=int, default=None,
                       help="override solver.seed")
        p.add_argument("--out-dir", default=None,
                       help="override output.directory")
        if with_unsafe:
            p.add_argument("--unsafe-skip-admissibility", action="store_true",
                           help="run even if the hypothesis windows fail")

    p_check = sub.add_parser("check", help="validate hypotheses and exit")
    add_common(p_check, with_unsafe=False)
    p_check.set_defaults(func=cmd_check)

    p_solve = sub.add_parser("solve", help="minimize on the constraint set")
    add_common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="solve across a mass list")
    add_common(p_sweep)
    p_sweep.add_argument("--masses", required=True,
                         help="comma-separated ascending masses, e.g. 0.5,1,2,4")
    p_sweep.set_defaults(func=cmd_sweep)

    p_scan = sub.add_parser("fiber-scan",
                            help="tabulate the fiber energy of the initial field")
    add_common(p_scan)
    p_scan.add_argument("--t-min", type=float, default=1e-3)
    p_scan.add_argument("--t-max", type=float, default=1e3)
    p_scan.add_argument("--points", type=int, default=400)
    p_scan.set_defaults(func=cmd_fiber_scan)

    p_gn = sub.add_parser("gn", help="compute an interpolation optimizer")
    p_gn.add_argument("--p", type=float, required=True,
                      help="exponent in (2, 6)")
    p_gn.add_argument("--out-dir", default=None)
    p_gn.set_defaults(func=cmd_gn)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

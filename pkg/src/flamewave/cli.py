"""Command-line entry point.

Commands: solve a single wave, sweep the reaction order, evaluate limit-case
oracles, emit phase-portrait polylines, or verify a solve against the full
diagnostic battery.  All outputs are plain text (CSV tables plus one JSON
summary per solve) with floats printed to 17 significant digits, so repeated
runs are byte-identical and diff-able.

Exit codes: 0 success, 1 solver non-convergence (or failed verification),
2 usage error, 3 validation error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import enum
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import (
    DomainError,
    FlamewaveError,
    PhysicalParams,
    SolverConfig,
)
from .manifold import manifold_seed, sample_phase_portrait
from .limits import (
    lambda_zero_solution,
    speed_alpha_one,
    speed_alpha_zero,
    sweep_alpha,
)
from .profiles import WaveSolution, build_wave, extend_full_line
from .diagnostics import run_diagnostics

__all__ = ["RunSpec", "Command", "parse_args", "emit_outputs", "main"]

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4


class Command(enum.Enum):
    SOLVE = "solve"
    SWEEP = "sweep"
    LIMIT = "limit"
    PORTRAIT = "portrait"
    VERIFY = "verify"


@dataclass
class RunSpec:
    command: Command
    alphas: list[float]
    lam: float
    theta: float
    cfg: SolverConfig
    out_dir: Path
    n_points: int = 2048
    picard: bool = False
    formats: set[str] = field(default_factory=lambda: {"profile-table", "summary"})
    limit_case: str | None = None
    portrait_c: float = 1.0
    portrait_span: float = 6.0
    portrait_box: float = 2.0
    seeds: list[tuple[float, float]] = field(default_factory=list)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_text(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad_in}"{k}": {_json_text(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad_in}{_json_text(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return '"' + repr(x) + '"'
        return _fmt(x)
    if obj is None:
        return "null"
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _range_expand(token: str) -> list[float]:
    """'0.1:0.9:0.1' -> [0.1, 0.2, ..., 0.9]; plain numbers pass through."""
    if ":" not in token:
        return [float(token)]
    parts = token.split(":")
    if len(parts) != 3:
        raise DomainError(f"range syntax is start:stop:step, got {token!r}")
    start, stop, step = (float(s) for s in parts)
    if step <= 0.0 or stop < start:
        raise DomainError(f"bad range {token!r}")
    count = int(math.floor((stop - start) / step + 1.0e-9)) + 1
    return [start + k * step for k in range(count)]


def _load_config_file(path: str) -> list[str]:
    """key=value lines -> argv fragment; real flags override these."""
    argv: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config line must be key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            flag = "--" + key
            if key == "picard":
                if value.lower() in ("1", "true", "yes"):
                    argv.append(flag)
            else:
                for tok in value.split(","):
                    argv.extend([flag, tok.strip()])
    return argv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flamewave",
        description="Traveling-wave solver for ignition-interface fronts "
        "with fractional reaction order.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, need_alpha=True):
        if need_alpha:
            sp.add_argument("--alpha", action="append", required=True,
                            help="reaction order in (0,1); repeatable; sweep accepts start:stop:step")
        sp.add_argument("--lambda", dest="lam", type=float, required=True,
                        help="inverse Lewis number")
        sp.add_argument("--theta", type=float, required=True,
                        help="ignition temperature in (0,1)")
        sp.add_argument("--out", type=str, required=True, help="output directory")
        sp.add_argument("--tol-ode", type=float, default=None, help="ODE relative tolerance")
        sp.add_argument("--tol-root", type=float, default=None,
                        help="root tolerance for both speed and closure bisections")
        sp.add_argument("--grid", type=int, default=2048, help="profile grid points")
        sp.add_argument("--seed-x", type=float, default=None,
                        help="tail handoff concentration (default: internal policy)")
        sp.add_argument("--picard", action="store_true",
                        help="experimental projected fixed-point iteration for the closure")
        sp.add_argument("--formats", type=str, default="profile-table,summary",
                        help="comma-separated subset of {profile-table,summary}")

    for name in ("solve", "verify"):
        sp = sub.add_parser(name)
        add_common(sp)

    sp = sub.add_parser("sweep")
    add_common(sp)

    sp = sub.add_parser("limit")
    sp.add_argument("--case", required=True,
                    choices=["alpha-one", "alpha-zero", "lambda-zero"])
    sp.add_argument("--alpha", action="append", default=None)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--out", type=str, required=True)

    sp = sub.add_parser("portrait")
    add_common(sp)
    sp.add_argument("--c", dest="portrait_c", type=float, default=1.0,
                    help="speed parameter of the plotted field")
    sp.add_argument("--span", dest="portrait_span", type=float, default=6.0)
    sp.add_argument("--box", dest="portrait_box", type=float, default=2.0,
                    help="half-width of the clipping box")
    sp.add_argument("--seed", dest="seeds", action="append", default=None,
                    help="x,y seed point; repeatable")
    return parser


def parse_args(argv: list[str]) -> RunSpec:
    """Parse (config-file-aware) flags into a validated RunSpec."""
    if "--config" in argv:
        idx = argv.index("--config")
        if idx + 1 >= len(argv):
            raise DomainError("--config needs a file path")
        pre = _load_config_file(argv[idx + 1])
        argv = argv[: idx] + argv[idx + 2 :]
        # config first so explicit flags win for scalars
        argv = [argv[0]] + pre + argv[1:] if argv else pre

    parser = _build_parser()
    ns = parser.parse_args(argv)
    command = Command(ns.command)

    alphas: list[float] = []
    if getattr(ns, "alpha", None):
        for token in ns.alpha:
            alphas.extend(_range_expand(token))
    if command is Command.LIMIT:
        case = ns.case
        alpha_default = {"alpha-one": 1.0, "alpha-zero": 0.0}.get(case, 0.5)
        if not alphas:
            alphas = [alpha_default]
        lam = ns.lam
        theta = ns.theta
        for a in alphas:
            if not (0.0 <= a <= 1.0):
                raise DomainError(f"alpha {a} outside [0, 1]")
        return RunSpec(
            command=command, alphas=alphas, lam=lam, theta=theta,
            cfg=SolverConfig(), out_dir=Path(ns.out), limit_case=case,
        )

    if not alphas:
        raise DomainError("at least one --alpha is required")
    main_path = command in (Command.SOLVE, Command.VERIFY, Command.SWEEP)
    for a in alphas:
        if main_path and not (0.0 < a < 1.0):
            raise DomainError(f"alpha {a} outside (0, 1)")
    if command in (Command.SOLVE, Command.VERIFY) and len(alphas) != 1:
        raise DomainError(f"{command.value} takes exactly one --alpha")

    kwargs = {}
    if ns.tol_ode is not None:
        kwargs["ode_rel_tol"] = ns.tol_ode
        kwargs["ode_abs_tol"] = min(1.0e-14, ns.tol_ode)
    if ns.tol_root is not None:
        kwargs["c_bisect_tol"] = ns.tol_root
        kwargs["v0_bisect_tol"] = ns.tol_root
    if ns.seed_x is not None:
        kwargs["seed_x"] = ns.seed_x
    cfg = SolverConfig(**kwargs)

    formats = {tok.strip() for tok in ns.formats.split(",") if tok.strip()}
    unknown = formats - {"profile-table", "summary"}
    if unknown:
        raise DomainError(f"unknown formats: {sorted(unknown)}")

    seeds: list[tuple[float, float]] = []
    if getattr(ns, "seeds", None):
        for tok in ns.seeds:
            xs, ys = tok.split(",")
            seeds.append((float(xs), float(ys)))

    if ns.grid < 8:
        raise DomainError("--grid must be at least 8")

    return RunSpec(
        command=command,
        alphas=alphas,
        lam=ns.lam,
        theta=ns.theta,
        cfg=cfg,
        out_dir=Path(ns.out),
        n_points=ns.grid,
        picard=ns.picard,
        formats=formats,
        portrait_c=getattr(ns, "portrait_c", 1.0),
        portrait_span=getattr(ns, "portrait_span", 6.0),
        portrait_box=getattr(ns, "portrait_box", 2.0),
        seeds=seeds,
    )


def _summary_dict(p: PhysicalParams, sol: WaveSolution) -> dict:
    closure = sol.closure
    residuals = {
        "closure_defect": closure.residual,
        "speed_defect": closure.speed.psi_residual,
    }
    checks = []
    if sol.diagnostics is not None:
        checks = sol.diagnostics.to_rows()
        for row in checks:
            row["pass"] = bool(row["pass"])
    return {
        "alpha": p.alpha,
        "lambda": p.lam,
        "theta": p.theta,
        "c": closure.c,
        "R": closure.R,
        "v0": closure.v0_star,
        "iterations": closure.iterations,
        "residuals": residuals,
        "checks": checks,
    }


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def _profile_csv(sol: WaveSolution, xi_min: float, xi_max: float) -> str:
    ext = extend_full_line(sol, xi_min, xi_max)
    rows = ["xi,v,vp,u,up,region"]
    for k in range(len(ext.xi)):
        xi = ext.xi[k]
        region = "pre" if xi < 0.0 else ("reaction" if xi <= ext.R else "post")
        rows.append(
            ",".join(_fmt(val) for val in (xi, ext.v[k], ext.vp[k], ext.u[k], ext.up[k]))
            + "," + region
        )
    return "\n".join(rows) + "\n"


def emit_outputs(spec: RunSpec, payload) -> None:
    """Write the files for one completed run into spec.out_dir."""
    out = spec.out_dir
    out.mkdir(parents=True, exist_ok=True)

    if spec.command in (Command.SOLVE, Command.VERIFY):
        p, sol = payload
        if "profile-table" in spec.formats:
            xi_min = -3.0 * p.lam / sol.closure.c
            xi_max = sol.closure.R * 1.25
            _write_text(out / "profile.csv", _profile_csv(sol, xi_min, xi_max))
        if "summary" in spec.formats:
            _write_text(out / "summary.json", _json_text(_summary_dict(p, sol)) + "\n")

    elif spec.command is Command.SWEEP:
        rows = payload
        lines = ["alpha,c,R,v0"]
        for row in rows:
            lines.append(",".join(_fmt(x) for x in (row.alpha, row.c, row.R, row.v0)))
        _write_text(out / "sweep.csv", "\n".join(lines) + "\n")
        for k, row in enumerate(rows):
            obj = {
                "alpha": row.alpha,
                "lambda": spec.lam,
                "theta": spec.theta,
                "c": row.c,
                "R": row.R,
                "v0": row.v0,
                "ok": row.ok,
                "message": row.message,
            }
            _write_text(out / f"summary_{k:03d}.json", _json_text(obj) + "\n")

    elif spec.command is Command.LIMIT:
        _write_text(out / "summary.json", _json_text(payload) + "\n")

    elif spec.command is Command.PORTRAIT:
        for k, poly in enumerate(payload):
            lines = ["t,x,y"]
            for t, x, y in poly:
                lines.append(",".join(_fmt(val) for val in (t, x, y)))
            _write_text(out / f"seed_{k:03d}.csv", "\n".join(lines) + "\n")


def _run(spec: RunSpec) -> int:
    if spec.command in (Command.SOLVE, Command.VERIFY):
        p = PhysicalParams(alpha=spec.alphas[0], lam=spec.lam, theta=spec.theta)
        sol = build_wave(p, spec.cfg, n_points=spec.n_points, picard=spec.picard)
        report = run_diagnostics(sol, spec.cfg)
        sol = WaveSolution(closure=sol.closure, profile=sol.profile, diagnostics=report)
        emit_outputs(spec, (p, sol))
        if spec.command is Command.VERIFY and not report.all_pass:
            failed = [c.name for c in report.checks if not c.passed]
            print(f"verification FAILED: {failed}", file=sys.stderr)
            return EXIT_SOLVER
        return EXIT_OK

    if spec.command is Command.SWEEP:
        p_base = PhysicalParams(alpha=spec.alphas[0], lam=spec.lam, theta=spec.theta)
        rows = sweep_alpha(p_base, spec.alphas, spec.cfg)
        emit_outputs(spec, rows)
        return EXIT_OK if all(r.ok for r in rows) else EXIT_SOLVER

    if spec.command is Command.LIMIT:
        case = spec.limit_case
        if case == "alpha-one":
            c = speed_alpha_one(spec.theta, spec.lam)
            obj = {"case": case, "lambda": spec.lam, "theta": spec.theta, "c": c, "R": "inf"}
        elif case == "alpha-zero":
            c = speed_alpha_zero(spec.theta)
            obj = {"case": case, "theta": spec.theta, "c": c, "R": c}
        else:
            p = PhysicalParams(alpha=spec.alphas[0], lam=0.0, theta=spec.theta)
            wave = lambda_zero_solution(p)
            obj = {"case": case, "alpha": p.alpha, "theta": spec.theta, "c": wave.c, "R": wave.R}
        emit_outputs(spec, obj)
        return EXIT_OK

    if spec.command is Command.PORTRAIT:
        p = PhysicalParams(alpha=spec.alphas[0], lam=spec.lam, theta=spec.theta)
        box = spec.portrait_box
        seeds = spec.seeds
        if not seeds:
            edge = np.linspace(-0.9 * box, 0.9 * box, 4)
            seeds = [(float(x), 0.95 * box) for x in edge]
            seeds += [(float(x), -0.95 * box) for x in edge]
            seeds += [(0.95 * box, float(y)) for y in edge]
            seeds += [(-0.95 * box, float(y)) for y in edge]
            seeds.append((0.0, 0.0))
            seed_state = manifold_seed(p, spec.portrait_c, 0.5 * box)
            seeds.append((seed_state.x, seed_state.y))
        polys = sample_phase_portrait(
            p,
            spec.portrait_c,
            seeds,
            spec.portrait_span,
            spec.cfg,
            box=((-box, box), (-box, box)),
        )
        emit_outputs(spec, polys)
        return EXIT_OK

    raise AssertionError("unreachable")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        spec = parse_args(argv)
    except DomainError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit as exc:  # argparse usage failure
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _run(spec)
    except DomainError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FlamewaveError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

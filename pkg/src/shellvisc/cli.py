"""Command-line front end: ``shellvisc {verify,eval,sweep}``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import boundary as bd
from . import fd
from . import geometry as geo
from . import operators as ops
from . import suites as st
from . import thinshell as ts
from .fields import PRESET_NAMES, extend_along_rays, preset, random_divfree, random_field

SCHEMA_VERSION = 1
RNG_NOTE = "numpy PCG64 seeded with SeedSequence([seed, suite index, a index])"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument and config handling


def _grid(text: str) -> tuple[int, int]:
    try:
        n, m = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64x128, got {text!r}") from None
    if n < 2 or m < 2:
        raise argparse.ArgumentTypeError("grid sizes must be at least 2")
    return n, m


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}") from None


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, action="append", dest="a_values", metavar="A", help="semi-axis ratio (repeatable)")
    p.add_argument("--samples", type=int, help="sample points per a (default depends on the suite)")
    p.add_argument("--seed", type=_seed, help="64-bit seed (default 0)")
    p.add_argument("--h1", type=float, dest="h_first", help="first-derivative step (default 1e-4)")
    p.add_argument("--h2", type=float, dest="h_second", help="Cartesian Laplacian step of the replay oracle (default 1e-3)")
    for s in st.SUITES:
        p.add_argument(f"--tol.{s}", type=float, dest=f"tol_{s}", metavar="TOL", help=f"nominal tolerance of the {s} suite")
    p.add_argument("--delta-pole", type=float, dest="delta_pole", help="polar band excluded from sampling (default 1e-2)")
    p.add_argument("--grid", type=_grid, help="quadrature / evaluation grid NxM (default 64x128)")
    p.add_argument("--format", choices=("json", "text", "csv"), dest="fmt")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--config", help="INI file with [run] and [tolerances] sections; flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shellvisc", description="Verify viscosity operators on an ellipsoid of revolution and their thin-shell limits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suites", default=",".join(st.SUITES), help=f"comma list from {', '.join(st.SUITES)}")
    _common(v)

    e = sub.add_parser("eval", help="tabulate an operator applied to a preset field on a grid")
    e.add_argument("--op", required=True, help=f"one of {', '.join(k.value for k in ops.OperatorKind)}")
    e.add_argument("--field", required=True, help=f"preset: {', '.join(PRESET_NAMES)}")
    e.add_argument("--route", choices=[r.value for r in (ops.Route.STRUCTURAL, ops.Route.COEFFICIENT)], default="structural")
    _common(e)

    w = sub.add_parser("sweep", help="log-log convergence slope of a check")
    w.add_argument("--target", required=True, help="check id; see SWEEP_TARGETS")
    w.add_argument("--steps", type=_floats, help="step list (h or eps), at least 3 values")
    _common(w)
    return parser


def _read_config(path: str) -> dict:
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise UsageError(f"malformed config {path}: {exc}") from None
    out: dict = {}
    if cp.has_section("run"):
        run = cp["run"]
        conv = {
            "a": ("a_values", _floats),
            "samples": ("samples", int),
            "seed": ("seed", _seed),
            "h1": ("h_first", float),
            "h2": ("h_second", float),
            "delta_pole": ("delta_pole", float),
            "grid": ("grid", _grid),
            "format": ("fmt", str),
            "out": ("out", str),
        }
        for key, raw in run.items():
            if key not in conv:
                raise UsageError(f"unknown key {key!r} in [run] of {path}")
            name, fn = conv[key]
            try:
                out[name] = fn(raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"bad value for {key} in {path}: {exc}") from None
    if cp.has_section("tolerances"):
        tols = {}
        for key, raw in cp["tolerances"].items():
            if key not in st.SUITES:
                raise UsageError(f"unknown suite {key!r} in [tolerances] of {path}")
            try:
                tols[key] = float(raw)
            except ValueError:
                raise UsageError(f"bad tolerance for {key} in {path}") from None
        out["tolerances"] = tols
    extra = set(cp.sections()) - {"run", "tolerances"}
    if extra:
        raise UsageError(f"unknown section(s) in {path}: {', '.join(sorted(extra))}")
    return out


def resolve(args, default_a=None) -> tuple[st.RunConfig, str, str | None]:
    conf = _read_config(args.config) if args.config else {}
    tols = dict(conf.get("tolerances", {}))
    for s in st.SUITES:
        val = getattr(args, f"tol_{s}", None)
        if val is not None:
            tols[s] = val
    kw = {"tolerances": tols}
    for name in ("a_values", "samples", "seed", "h_first", "h_second", "delta_pole", "grid"):
        val = getattr(args, name, None)
        if val is None:
            val = conf.get(name)
        if val is not None:
            kw[name] = val
    if "a_values" not in kw and default_a is not None:
        kw["a_values"] = list(default_a)
    try:
        cfg = st.RunConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fmt = args.fmt or conf.get("fmt") or "json"
    if fmt not in ("json", "text", "csv"):
        raise UsageError(f"unknown format {fmt!r}")
    return cfg, fmt, args.out or conf.get("out")


# ---------------------------------------------------------------------------
# output


def _envelope(command: str, cfg: st.RunConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "shellvisc",
        "version": __version__,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": cfg.echo(),
        "rng": RNG_NOTE,
    }


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt_num(x) -> str:
    return f"{x:.3e}" if isinstance(x, float) else str(x)


def _check_row(suite: str, c: dict):
    if "slope" in c:
        lo, hi = (f"{w:g}" if w is not None else inf for w, inf in zip(c["window"], ("-inf", "inf")))
        value, bound = c["slope"], f"[{lo}, {hi}]"
    elif "lower" in c:
        value, bound = c["min"], f">= {c['lower']:.3e}"
    else:
        value, bound = c["max"], f"< {c['tol']:.0e}"
    return [suite, c["id"], f"{c['a']:g}", _fmt_num(value), bound, "pass" if c["passed"] else "FAIL"]


def render_verify(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    rows = [_check_row(s["name"], c) for s in report["suites"] for c in s["checks"]]
    header = ["suite", "check", "a", "value", "bound", "status"]
    if fmt == "csv":
        return _csv(header, rows)
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths))]
    lines += ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)) for r in rows]
    for s in report["suites"]:
        lines.append(f"suite {s['name']}: {'pass' if s['passed'] else 'FAIL'}")
    lines.append(f"overall: {'pass' if report['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg: st.RunConfig, suites: list[str]) -> dict:
    report = _envelope("verify", cfg)
    blocks = []
    for name in suites:
        checks = [c.to_dict() for c in st.run_suite(cfg, name)]
        blocks.append({"name": name, "tolerance": cfg.tol(name), "passed": all(c["passed"] for c in checks), "checks": checks})
    report["suites"] = blocks
    report["passed"] = all(b["passed"] for b in blocks)
    return report


def eval_grid(cfg: st.RunConfig, op: str, field: str, route: str = "structural"):
    """Rows (phi, theta, out1, out2) over the grid, pole band excluded."""
    if len(cfg.a_values) != 1:
        raise UsageError("eval takes exactly one --a")
    params = geo.EllipsoidParams(cfg.a_values[0], cfg.delta_pole)
    try:
        kind = ops.OperatorKind(op)
    except ValueError:
        raise UsageError(f"unknown operator {op!r}; choose from {', '.join(k.value for k in ops.OperatorKind)}") from None
    try:
        u = preset(field, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    nphi, nth = cfg.grid
    d = params.delta_pole
    phi = d + (np.pi - 2 * d) * (np.arange(nphi) + 0.5) / nphi
    theta = -np.pi + 2 * np.pi * np.arange(nth) / nth
    P, T = np.meshgrid(phi, theta, indexing="ij")
    p = geo.SurfacePoint(P.ravel(), T.ravel())
    res = ops.apply(params, kind, u, p, cfg.h_first)
    out = res.values[ops.Route(route)]
    return np.column_stack([p.phi, p.theta, out[:, 0], out[:, 1]])


def cmd_eval(cfg: st.RunConfig, op: str, field: str, fmt: str, route: str = "structural") -> str:
    rows = eval_grid(cfg, op, field, route)
    header = ["phi", "theta", "out1", "out2"]
    if fmt == "csv":
        return _csv(header, [[repr(float(x)) for x in r] for r in rows])
    if fmt == "text":
        lines = ["  ".join(h.rjust(22) for h in header)]
        lines += ["  ".join(f"{x:22.15e}" for x in r) for r in rows]
        return "\n".join(lines) + "\n"
    doc = _envelope("eval", cfg)
    doc.update(op=op, field=field, route=route, a=float(cfg.a_values[0]), columns=header, rows=rows.tolist())
    return json.dumps(doc) + "\n"


def _sweep_fn(target: str, params: geo.EllipsoidParams, p: geo.SurfacePoint, h: float):
    """Map a target id to (error function of the step, default steps)."""
    v = extend_along_rays(params, random_field(params, 1))
    q = geo.ShellPoint.scaling(np.full(p.phi.shape, 1.05), p.phi, p.theta)
    simple = {
        "weingarten": lambda s: np.max(bd.shell_shape_check(params, p, s, 2)),
        "connection": lambda s: np.max(np.abs(geo.connection_fd(params, p, s, 2) - geo.connection_on_E(params, p))),
        "helpful": lambda s: np.max(geo.helpful_suite(params, p, s, 2)),
        "c313": lambda s: np.max(np.abs(np.array(geo.c313_routes(params, p, s, 2)[1:]) - geo.c313(params, p))),
        "navier-routes": lambda s: np.max(bd.navier_residual(params, v, q, None, s, 2).gap()),
        "hodge-routes": lambda s: np.max(bd.hodge_residual(params, v, q, s, 2).gap()),
        "nh-relation": lambda s: np.max(bd.nh_relation_check(params, v, q, s, 2)),
    }
    if target in simple:
        return simple[target], st.SLOPE_STEPS
    head, _, rest = target.partition(":")
    if head == "operator":
        try:
            kind = ops.OperatorKind(rest)
        except ValueError:
            raise UsageError(f"unknown operator {rest!r}") from None
        u = random_divfree(params, 1)
        return (lambda s: np.max(ops.apply(params, kind, u, p, s, 2).gap())), st.SLOPE_STEPS
    if head in ("replay", "audit", "audit-unsolved"):
        try:
            sc = ts.scenario(rest)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        u0 = random_divfree(params, 1)
        if head == "replay":
            jet = ts.solve_bc_coeffs(params, sc, u0, h)
            field = ts.build_field(params, jet)
            target_v = ops.apply(params, sc.target, u0, p, h).value
            return (lambda s: np.max(np.abs(ts.extrinsic_laplacian_tangential(params, field, p, s, 2) - target_v))), st.CART_SLOPE_STEPS
        if sc.direction is not geo.Chart.SCALING:
            raise UsageError("the eps audit runs on scaling scenarios")
        jet = ts.solve_bc_coeffs(params, sc, u0, h) if head == "audit" else ts.jet_from(geo.Chart.SCALING, u0)
        field = ts.build_field(params, jet)

        def audit(eps):
            qq = geo.ShellPoint.scaling(np.full(p.phi.shape, 1.0 + eps), p.phi, p.theta)
            return np.max(np.abs(ts.outer_residual(params, sc.bc, field, qq, h)))

        return audit, st.CART_SLOPE_STEPS
    raise UsageError(f"unknown sweep target {target!r}; choose from {', '.join(SWEEP_TARGETS)}")


SWEEP_TARGETS = (
    "weingarten",
    "connection",
    "helpful",
    "c313",
    "navier-routes",
    "hodge-routes",
    "nh-relation",
    "operator:<op>",
    "replay:<scenario>",
    "audit:<scenario>",
    "audit-unsolved:<scenario>",
)


def cmd_sweep(cfg: st.RunConfig, target: str, steps) -> dict:
    if steps is not None and len(steps) < 3:
        raise UsageError("a sweep needs at least 3 steps")
    if steps is not None and any(s <= 0 for s in steps):
        raise UsageError("steps must be positive")
    report = _envelope("sweep", cfg)
    rows = []
    for i, a in enumerate(cfg.a_values):
        params = geo.EllipsoidParams(float(a), cfg.delta_pole)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, len(st.SUITES), i])))
        p = st.sample_points(params, rng, cfg.samples or st.N_SLOPE_POINTS)
        fn, default = _sweep_fn(target, params, p, cfg.h_first)
        hs = list(steps or default)
        errs = [float(fn(s)) for s in hs]
        slope, intercept = fd.loglog_slope(hs, errs)
        rows.append({"a": float(a), "steps": hs, "errors": errs, "slope": slope, "intercept": intercept})
    report.update(target=target, results=rows)
    return report


def render_sweep(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    header = ["target", "a", "slope", "intercept", "errors"]
    rows = [[report["target"], f"{r['a']:g}", f"{r['slope']:.4f}", f"{r['intercept']:.4f}", " ".join(f"{e:.3e}" for e in r["errors"])] for r in report["results"]]
    if fmt == "csv":
        return _csv(header, rows)
    return "\n".join("  ".join(r) for r in [header] + rows) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with status 2 on usage errors
    try:
        if args.command == "verify":
            suites = [s.strip() for s in args.suites.split(",") if s.strip()]
            bad = [s for s in suites if s not in st.SUITES]
            if bad or not suites:
                raise UsageError(f"unknown suite(s) {', '.join(bad) or '(none)'}; choose from {', '.join(st.SUITES)}")
            cfg, fmt, out = resolve(args)
            report = cmd_verify(cfg, suites)
            _emit(render_verify(report, fmt), out)
            return EXIT_OK if report["passed"] else EXIT_FAIL
        if args.command == "eval":
            cfg, fmt, out = resolve(args, default_a=[1.0])
            _emit(cmd_eval(cfg, args.op, args.field, fmt, args.route), out)
            return EXIT_OK
        cfg, fmt, out = resolve(args, default_a=[2.0])
        _emit(render_sweep(cmd_sweep(cfg, args.target, args.steps), fmt), out)
        return EXIT_OK
    except UsageError as exc:
        print(f"shellvisc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ts.PreconditionError as exc:
        print(f"shellvisc: precondition failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    cauchykit [--format table|csv|json] [--out PATH] [--order TERMS:WINDOW] [--seed N] COMMAND ...

Commands: ``length``, ``curvature``, ``delta``, ``probe``.  Exit status is 0 on
success, 1 on a numeric failure and 2 on bad usage or unparsable input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import calculus, crofton, curvature
from . import expr as ex
from . import lc
from .curves import Parametric, Polyline, discretize
from .lc import TruncationContext

DEFAULT_SEGMENTS = 1024


class UsageError(Exception):
    """Bad input; maps to exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    ctx: TruncationContext
    fmt: str = "table"
    out: str | None = None
    seed: int = 0


@dataclass
class Output:
    columns: Sequence[str]
    rows: list[tuple]
    notes: list[tuple[str, Any]]

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(self.columns)
            writer.writerows([_csv_cell(v) for v in row] for row in self.rows)
            return buf.getvalue()
        if fmt == "json":
            doc = {k: _json_cell(v) for k, v in self.notes}
            doc["rows"] = [{c: _json_cell(v) for c, v in zip(self.columns, row)} for row in self.rows]
            return json.dumps(doc, indent=2) + "\n"
        cells = [list(self.columns)] + [[_table_cell(v) for v in row] for row in self.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(self.columns))]
        lines = [f"{k}: {_table_cell(v)}" for k, v in self.notes]
        for r in cells:
            lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_cell(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _table_cell(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


# --- argument helpers --------------------------------------------------------

def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            try:
                lo_i, hi_i = int(lo), int(hi)
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad range {part!r}") from None
            n = lo_i
            while n <= hi_i:  # doubling ladder, e.g. 4..64
                out.append(n)
                n *= 2
            continue
        try:
            out.append(int(float(part)) if "e" in part.lower() else int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    return out


def _order(text: str) -> TruncationContext:
    try:
        return TruncationContext.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_expr(text: str, allowed, what: str) -> ex.Expr:
    try:
        return ex.parse(text, allowed)
    except ex.ParseError as exc:
        raise UsageError(f"{what}: {exc.message} at offset {exc.position}: {text!r}") from None


# --- curve specs ---------------------------------------------------------------

def load_spec_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.lstrip().startswith("{"):
        return arg
    try:
        return Path(arg).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read curve spec {arg!r}: {exc.strerror}") from None


def parse_curve_spec(text: str) -> tuple[Polyline | Parametric, int]:
    """Validate CurveSpec JSON into a curve and a segment count.

    Errors name the offending JSON path, e.g. ``$.parametric.t0``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"$: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise UsageError("$: curve spec must be a JSON object")
    kinds = [k for k in ("polyline", "parametric") if k in doc]
    if len(kinds) != 1:
        raise UsageError("$: expected exactly one of 'polyline' or 'parametric'")
    segments = doc.get("segments", DEFAULT_SEGMENTS)
    if not isinstance(segments, int) or isinstance(segments, bool) or segments < 1:
        raise UsageError("$.segments: expected a positive integer")
    if kinds[0] == "polyline":
        pts = doc["polyline"]
        if not isinstance(pts, list):
            raise UsageError("$.polyline: expected a list of [x, y] pairs")
        for i, p in enumerate(pts):
            if (not isinstance(p, list) or len(p) != 2
                    or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)):
                raise UsageError(f"$.polyline[{i}]: expected [x, y] numbers")
        try:
            return Polyline(pts), segments
        except ValueError as exc:
            raise UsageError(f"$.polyline: {exc}") from None
    par = doc["parametric"]
    if not isinstance(par, dict):
        raise UsageError("$.parametric: expected an object")
    var = par.get("var", "t")
    if not isinstance(var, str) or not var.isidentifier():
        raise UsageError("$.parametric.var: expected an identifier")
    coords = {}
    for key in ("x", "y"):
        src = par.get(key)
        if not isinstance(src, str):
            raise UsageError(f"$.parametric.{key}: expected an expression string")
        try:
            coords[key] = ex.parse(src, [var])
        except ex.ParseError as exc:
            raise UsageError(f"$.parametric.{key}: {exc.message} at offset {exc.position}") from None
    bounds = {}
    for key in ("t0", "t1"):
        v = par.get(key)
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise UsageError(f"$.parametric.{key}: expected a number")
        bounds[key] = float(v)
    try:
        return Parametric(coords["x"], coords["y"], bounds["t0"], bounds["t1"], var), segments
    except ValueError as exc:
        raise UsageError(f"$.parametric: {exc}") from None


# --- commands --------------------------------------------------------------------

def cmd_length(args: argparse.Namespace, cfg: RunConfig) -> Output:
    curve, segments = parse_curve_spec(load_spec_text(args.spec))
    poly = curve if isinstance(curve, Polyline) else discretize(curve, segments)
    reports = crofton.bound_sweep(poly, args.n, args.offsets)
    exact = reports[0].exact
    rows = [r.as_row() for r in reports]
    notes: list[tuple[str, Any]] = [("length", exact)]
    violations = crofton.bound_violations(reports)
    notes.append(("bound_violations", len(violations)))
    if args.random is not None:
        if args.random < 2:
            raise UsageError("--random needs at least 2 samples")
        est, se = crofton.random_line_estimate(poly, args.random, cfg.seed)
        # Monte-Carlo row: offset column reads "random", bound column holds the standard error
        rows.append((args.random, "random", est / (0.5 * math.pi), est, exact, abs(est - exact), se))
    return Output(crofton.CSV_COLUMNS, rows, notes)


def _t_values(args: argparse.Namespace) -> list[float]:
    if args.t is not None:
        return args.t
    try:
        lo, hi, count = args.range.split(":")
        lo_f, hi_f, n = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"--range expects T0:T1:COUNT, got {args.range!r}") from None
    if n < 1:
        raise UsageError("--range COUNT must be positive")
    if n == 1:
        return [lo_f]
    return [lo_f + (hi_f - lo_f) * k / (n - 1) for k in range(n)]


def cmd_curvature(args: argparse.Namespace, cfg: RunConfig) -> Output:
    if cfg.ctx.exponent_window < curvature.MIN_WINDOW:
        raise UsageError(f"curvature needs --order window >= {curvature.MIN_WINDOW}")
    curve, _ = parse_curve_spec(load_spec_text(args.spec))
    if not isinstance(curve, Parametric):
        raise UsageError("curvature needs a parametric curve spec, not a polyline")
    rows = []
    for t in _t_values(args):
        try:
            rows.append(curvature.osculating(curve, t, cfg.ctx).as_row())
        except curvature.CurvatureError as err:
            try:
                x, y = curve.point(t)
            except ArithmeticError:
                x = y = None
            try:
                tau = curvature.tangent_angle(curve, t, cfg.ctx)
            except curvature.CurvatureError:
                tau = None
            rho = math.inf if err.kind is curvature.CurvatureErrorKind.INFINITE_RADIUS else None
            rows.append((float(t), x, y, tau, rho, None, None, err.kind.value))
    return Output(curvature.CSV_COLUMNS, rows, [])


def cmd_delta(args: argparse.Namespace, cfg: RunConfig) -> Output:
    F = _parse_expr(args.F, None, "F")
    names = ex.variables(F)
    if len(names) > 1:
        raise UsageError(f"F must use at most one variable, found {sorted(names)}")
    var = next(iter(names), "m")
    try:
        target = 0.5 * math.pi * ex.eval_real(F, {var: args.a})
    except ex.DomainError as exc:
        raise UsageError(f"F is undefined at a={args.a!r}: {exc}") from None
    rows = []
    for eps in args.eps:
        for alpha in args.alpha:
            try:
                params = calculus.DeltaKernelParams(args.a, alpha, eps, args.points)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            rows.append((alpha, eps, calculus.delta_kernel_integral(F, params, var=var)))
    rows.append(("target", None, target))
    return Output(("alpha", "eps", "value"), rows, [("target", target)])


def cmd_probe(args: argparse.Namespace, cfg: RunConfig) -> Output:
    if args.sum is not None:
        term = _parse_expr(args.sum, ["k", "x"], "--sum")
        try:
            probe = calculus.sum_theorem_probe(term, args.ladder, args.ratio)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return Output(("n", "n_prime", "x", "tail_value"),
                      [(r.n, r.n_prime, r.x, r.tail_value) for r in probe], [])
    if args.f is None:
        raise UsageError("probe needs a function expression (or --sum)")
    f = _parse_expr(args.f, None, "f")
    if len(ex.variables(f)) > 1:
        raise UsageError(f"f must use at most one variable, found {sorted(ex.variables(f))}")
    columns = ("mode", "point", "increment", "difference", "continuous")
    rows = []
    if args.micro is not None:
        p_text, inc_text = args.micro
        try:
            p = lc.parse_lc(p_text, cfg.ctx)
            inc = lc.parse_lc(inc_text, cfg.ctx)
        except ex.ParseError as exc:
            raise UsageError(f"--micro: {exc.message} at offset {exc.position}") from None
        try:
            v = calculus.microcontinuity_probe(f, p, inc, cfg.ctx)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        except calculus.NotDefinedError:
            rows.append(("micro", lc.render(p), lc.render(inc), None, "not defined"))
        else:
            rows.append(("micro", lc.render(v.point), lc.render(v.increment), lc.render(v.difference),
                         v.continuous))
        return Output(columns, rows, [])
    for x0 in args.x0:
        try:
            v = calculus.continuity_probe(f, x0, cfg.ctx)
        except calculus.NotDefinedError:
            rows.append(("standard", repr(float(x0)), "1.0*eps", None, "not defined"))
        else:
            rows.append(("standard", lc.render(v.point), lc.render(v.increment), lc.render(v.difference),
                         v.continuous))
    return Output(columns, rows, [])


# --- entry point -----------------------------------------------------------------

def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("table", "csv", "json"), default=d("table"))
    parser.add_argument("--out", metavar="PATH", default=d(None), help="write output here instead of stdout")
    parser.add_argument("--order", metavar="TERMS:WINDOW", type=_order, default=d(TruncationContext()),
                        help="LC truncation: term budget and exponent window (default 32:8)")
    parser.add_argument("--seed", type=int, default=d(0), help="SplitMix64 seed for Monte-Carlo rows")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cauchykit", description=__doc__.split("\n\n")[0])
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("length", parents=[common], help="Crofton length estimates of a curve")
    p.add_argument("spec", help="CurveSpec JSON: a file path, inline JSON, or - for stdin")
    p.add_argument("--n", type=_int_list, default=[4, 8, 16, 32, 64],
                   help="line counts, e.g. 4,8,16 or 4..64 (doubling)")
    p.add_argument("--offsets", type=int, default=1, help="phases per n, uniform over [0, pi/n)")
    p.add_argument("--random", type=int, metavar="SAMPLES", help="append a Monte-Carlo row")
    p.set_defaults(run=cmd_length)

    p = sub.add_parser("curvature", parents=[common], help="radius and center of curvature")
    p.add_argument("spec", help="parametric CurveSpec JSON (path, inline, or -)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--t", type=_float_list, help="comma-separated parameter values; write --t=-1,0 when the list starts with a minus")
    g.add_argument("--range", metavar="T0:T1:COUNT", help="COUNT equally spaced values; write --range=-1:1:5 for a negative start")
    p.set_defaults(run=cmd_curvature)

    p = sub.add_parser("delta", parents=[common], help="Cauchy-kernel delta integral")
    p.add_argument("F", help="expression in one variable")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--alpha", type=_float_list, default=[1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    p.add_argument("--eps", type=_float_list, default=[1e-2])
    p.add_argument("--points", type=int, default=10, help="Gauss-Legendre points per panel")
    p.set_defaults(run=cmd_delta)

    p = sub.add_parser("probe", parents=[common], help="continuity, microcontinuity and tail probes")
    p.add_argument("f", nargs="?", help="function of one variable")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--x0", type=_float_list, default=[0.0], help="standard points; write --x0=-1,2 for a leading minus")
    g.add_argument("--micro", nargs=2, metavar=("P", "INC"), help="LC literals, e.g. eps eps^2")
    g.add_argument("--sum", metavar="TERM", help="series term in k and x")
    p.add_argument("--ladder", type=_int_list, default=[100, 1000, 10000])
    p.add_argument("--ratio", type=int, default=2, help="n' = ratio * n")
    p.set_defaults(run=cmd_probe)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(ctx=args.order, fmt=args.format, out=args.out, seed=args.seed)
    try:
        with lc.localcontext(cfg.ctx):
            text = args.run(args, cfg).render(cfg.fmt)
    except UsageError as exc:
        print(f"cauchykit {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"cauchykit {args.command}: numeric failure: {exc}", file=sys.stderr)
        return 1
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every subcommand prints one JSON document (or writes a plot file). Exit
codes: 0 ok, 2 usage, 3 I/O, 4 inconclusive, 5 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .contfrac import cf_expand, convergents
from .errors import InconclusiveError, RNDFError
from .geometry import dimension_estimate, resolved_period, sample_curve
from .rational import classify
from .series import EvalConfig, TimePoint, phi_value
from .tangent import no_tangent_certificate

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INCONCLUSIVE, EXIT_NUMERIC = 0, 2, 3, 4, 5


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-8
    precision_digits: int = 32
    threads: int = 1
    output_path: str = "-"
    format: str = "json"

    def __post_init__(self):
        EvalConfig(tol=self.tol, precision_digits=self.precision_digits)
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.format not in ("svg", "csv", "json"):
            raise ValueError("format must be svg, csv or json")

    def eval_config(self) -> EvalConfig:
        return EvalConfig(tol=self.tol, precision_digits=self.precision_digits)


class UsageError(Exception):
    pass


def parse_point(text: str, var: str, digits: int) -> TimePoint:
    """A rational ``p/q``, a decimal literal or a named constant."""
    text = text.strip()
    try:
        if "/" in text:
            p, q = text.split("/")
            if var == "x":
                return TimePoint.rational(int(p), int(q))
            return TimePoint(Fraction(0), Fraction(int(p), int(q)), var="t", kind="decimal", label=text)
        if text.lstrip("+-").replace(".", "", 1).isdigit():
            return TimePoint.decimal(text, var=var)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse point {text!r}") from exc
    if var != "x":
        raise UsageError("named constants are values of x")
    try:
        return TimePoint.named(text, precision_digits=max(digits, 16))
    except RNDFError as exc:
        raise UsageError(str(exc)) from exc


def _write_atomic(path: str, data: str):
    if path == "-":
        sys.stdout.write(data)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".rndf-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def _cx(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def cmd_eval(args, run: RunConfig) -> dict:
    if args.t is not None:
        tp = parse_point(args.t, "t", run.precision_digits)
    else:
        tp = parse_point(args.x, "x", run.precision_digits)
    sv = phi_value(tp, run.eval_config())
    return {"re": sv.value.real, "im": sv.value.imag, "err_bound": sv.err_bound, "terms": sv.terms}


def _g9(v: float) -> str:
    s = f"{v:.9g}"
    return "0" if s == "-0" else s


def render_svg(z: np.ndarray) -> str:
    """One path through the points, y pointing up, viewBox padded by 5%."""
    x, y = z.real, -z.imag
    x0, x1, y0, y1 = x.min(), x.max(), y.min(), y.max()
    w, h = max(x1 - x0, 1e-300), max(y1 - y0, 1e-300)
    mx, my = 0.05 * w, 0.05 * h
    vb = [x0 - mx, y0 - my, w + 2 * mx, h + 2 * my]
    d = "M" + " L".join(f"{_g9(a)} {_g9(b)}" for a, b in zip(x, y))
    stroke = _g9(max(w, h) / 1000)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{" ".join(_g9(v) for v in vb)}">\n'
        f'<path d="{d}" fill="none" stroke="black" stroke-width="{stroke}"/>\n'
        "</svg>\n"
    )


def render_csv(params: np.ndarray, z: np.ndarray) -> str:
    rows = ["param,re,im"]
    rows += [f"{p:.17g},{v.real:.17g},{v.imag:.17g}" for p, v in zip(params, z)]
    return "\n".join(rows) + "\n"


def cmd_plot(args, run: RunConfig) -> str:
    a, b = _plot_bound(args.from_, args.var), _plot_bound(args.to, args.var)
    if not a < b:
        raise UsageError("--from must be below --to")
    poly = sample_curve(a, b, args.n, run.eval_config(), var=args.var, threads=run.threads)
    fmt = args.format or run.format
    if fmt == "csv":
        return render_csv(poly.params, poly.points)
    if fmt == "svg":
        return render_svg(poly.points)
    raise UsageError("plot writes svg or csv")


def _plot_bound(text: str, var: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse bound {text!r}") from exc


def cmd_classify(args, run: RunConfig) -> dict:
    try:
        p, q = (int(v) for v in args.point.split("/"))
    except ValueError as exc:
        raise UsageError("expected p/q") from exc
    pt = classify(p, q)
    return {"p": p, "q": q, "klass": pt.klass, "q_tilde": pt.q_tilde, "verdict": pt.klass}


def _clean(v):
    if isinstance(v, complex):
        return _cx(v)
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def cmd_probe(args, run: RunConfig) -> dict:
    if args.rational is not None:
        tp = parse_point(args.rational, "x", run.precision_digits)
    elif args.named is not None:
        tp = parse_point(args.named, "x", run.precision_digits)
    else:
        tp = parse_point(args.x, "x", run.precision_digits)
    kw = {}
    if args.count is not None:
        if not tp.is_rational or classify(tp.base.numerator, tp.base.denominator).klass != "spiral":
            raise UsageError("--count applies to spiral points")
        kw["count"] = args.count
    v = no_tangent_certificate(tp, run.eval_config(), **kw)
    out = {"verdict": v.kind}
    out.update(_clean(v.evidence))
    return out


def cmd_cf(args, run: RunConfig) -> dict:
    tp = parse_point(args.constant, "x", run.precision_digits)
    cf = cf_expand(tp, args.n)
    cs = convergents(cf, tp)
    return {
        "quotients": list(cf.quotients),
        "convergents": [{"n": c.n, "p": c.p, "q": c.q, "K": c.K, "side": c.side} for c in cs],
        "verdict": "exact" if cf.exact else "certified",
    }


def cmd_dim(args, run: RunConfig) -> dict:
    poly = resolved_period(args.n, args.eps_lo / 4 * 0.999, run.eval_config())
    est = dimension_estimate(poly, args.eps_lo, args.eps_hi, args.levels)
    inside = 1.0 <= est.slope <= 1.45
    return {"slope": est.slope, "stderr": est.stderr, "samples": len(poly),
            "eps": list(est.eps), "counts": list(est.counts),
            "verdict": "in_bracket" if inside else "outside_bracket"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rndf", description=__doc__.splitlines()[0], allow_abbrev=False)
    ap.add_argument("--tol", type=float, default=1e-8, help="absolute tolerance of each curve value")
    ap.add_argument("--precision-digits", type=int, default=32, help="digits kept from irrational inputs")
    ap.add_argument("--threads", type=int, default=None, help="worker threads (env RNDF_THREADS wins)")
    ap.add_argument("--out", default="-", help="output file, '-' for stdout")
    sub = ap.add_subparsers(dest="cmd", required=True)

    e = sub.add_parser("eval", allow_abbrev=False, help="evaluate the curve at one point")
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--t", help="parameter t (decimal or p/q)")
    g.add_argument("--x", help="rescaled x = 2 pi t (decimal, p/q or a named constant)")
    e.add_argument("--tol", type=float, dest="sub_tol", default=None)
    e.set_defaults(func=cmd_eval)

    p = sub.add_parser("plot", allow_abbrev=False, help="sample the curve to SVG or CSV")
    p.add_argument("--from", dest="from_", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--var", choices=("t", "x"), default="t")
    p.add_argument("--format", choices=("svg", "csv"), default="svg")
    p.add_argument("--out", dest="sub_out", default=None)
    p.set_defaults(func=cmd_plot)

    c = sub.add_parser("classify", allow_abbrev=False, help="corner or spiral class of p/q")
    c.add_argument("point")
    c.set_defaults(func=cmd_classify)

    pr = sub.add_parser("probe", allow_abbrev=False, help="no-tangent certificate at a point")
    g = pr.add_mutually_exclusive_group(required=True)
    g.add_argument("--rational", help="p/q in x units")
    g.add_argument("--named", help="pi-3, sqrt2-1 or golden-1")
    g.add_argument("--x", help="decimal x")
    pr.add_argument("--count", type=int, default=None, help="sweep length at spiral points")
    pr.set_defaults(func=cmd_probe)

    f = sub.add_parser("cf", allow_abbrev=False, help="continued fraction and convergents")
    f.add_argument("constant")
    f.add_argument("--n", type=int, default=8, help="number of quotients including a0")
    f.set_defaults(func=cmd_cf)

    d = sub.add_parser("dim", allow_abbrev=False, help="box-counting dimension of one period")
    d.add_argument("--n", type=int, default=2_000_000)
    d.add_argument("--eps-lo", type=float, default=1e-4)
    d.add_argument("--eps-hi", type=float, default=1e-2)
    d.add_argument("--levels", type=int, default=8, help="eps levels per decade")
    d.set_defaults(func=cmd_dim)
    return ap


def _run_config(args) -> RunConfig:
    threads = args.threads or 1
    env = os.environ.get("RNDF_THREADS")
    if env:
        try:
            threads = int(env)
        except ValueError as exc:
            raise UsageError("RNDF_THREADS must be an integer") from exc
    tol = getattr(args, "sub_tol", None) or args.tol
    out = getattr(args, "sub_out", None) or args.out
    fmt = getattr(args, "format", None) or "json"
    return RunConfig(tol=tol, precision_digits=args.precision_digits, threads=threads,
                     output_path=out, format=fmt)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run = _run_config(args)
        result = args.func(args, run)
        text = result if isinstance(result, str) else _json(result)
        _write_atomic(run.output_path, text)
        return EXIT_OK
    except UsageError as exc:
        print(f"rndf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconclusiveError as exc:
        _emit_safely(run, {"verdict": "Inconclusive", "reason": str(exc)})
        return EXIT_INCONCLUSIVE
    except OSError as exc:
        print(f"rndf: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # configuration, domain and class errors
        print(f"rndf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RNDFError, ArithmeticError) as exc:
        print(f"rndf: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def _emit_safely(run: RunConfig, obj: dict):
    try:
        _write_atomic(run.output_path, _json(obj))
    except OSError:
        pass


if __name__ == "__main__":
    sys.exit(main())

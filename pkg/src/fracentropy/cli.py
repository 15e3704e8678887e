"""Command-line front end.

Every subcommand prints one result envelope

    {"request": ..., "results": ..., "provenance": {"method", "tolerances", "seed", "revision"}}

as JSON (sorted keys) or, with ``--format csv``, the result rows as CSV with
a header and 17 significant digits. Failures print a JSON error object on
stderr and exit with 2 (usage), 3 (domain) or 4 (numerical).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .bounds import bound_power_of_ce, bound_sum_max, bound_triplet
from .catalog import CATALOG, parse_distribution
from .dynamic import dyn_bounds_report, dyn_fgce, dyn_fgcre, dyn_nfgce, idfce_check
from .empirical import McConfig, clt_montecarlo, empirical_fgce, prefix_fgce
from .errors import DomainError, FracEntropyError, IdentityViolation, NoClosedForm, NumericalError
from .fractional import fgce_via_rl, fgcre_via_rl
from .measures import fgce, fgcre, nfgce
from .model import DEFAULT_QUADRATURE, MeasureReport, Method, as_alpha
from .orders import (
    dfr_check,
    disp_implies_fgce,
    hr_dfr_implies,
    order_dispersive,
    order_hr,
    order_st,
    st_counterexample_scan,
)
from .prhm import (
    PrhmSpec,
    e_theta,
    fgce_prhm,
    prhm_model,
    prhm_sandwich,
    recurrence_n,
    recurrence_step,
    weighted_terms,
)
from .rng import SEED_ENV, default_seed

__all__ = ["main", "run", "ParseError", "IoError", "parse_grid", "read_values"]

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERICAL = 0, 2, 3, 4


class ParseError(FracEntropyError, ValueError):
    """Malformed command line or grid expression."""


class IoError(FracEntropyError, OSError):
    """Input file missing, unreadable or not numeric."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# parsing helpers


def parse_grid(text: str, *, allow_zero: bool = False) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma list; ``0:2:0.1`` gives 21 points."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ParseError(f"grid {text!r} must look like start:stop:step")
            start, stop, step = parts
            if not step > 0 or stop < start:
                raise ParseError(f"grid {text!r} needs step > 0 and stop >= start")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            vals = [round(start + i * step, 12) for i in range(n)]
        else:
            vals = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ParseError(f"grid {text!r} is not numeric") from exc
    if not vals:
        raise ParseError(f"grid {text!r} is empty")
    if any(not math.isfinite(v) for v in vals):
        raise ParseError(f"grid {text!r} has non-finite entries")
    bad = [v for v in vals if (v < 0 if allow_zero else v <= 0)]
    if bad:
        raise ParseError(f"grid entries must be {'>= 0' if allow_zero else '> 0'}, got {bad[0]:g}")
    return vals


def read_values(path: str) -> np.ndarray:
    """One number per line (commas also separate); ``#`` starts a comment."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path!r}: {exc.strerror or exc}") from exc
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        for tok in line.replace(",", " ").split():
            try:
                out.append(float(tok))
            except ValueError as exc:
                raise IoError(f"{path}:{lineno}: {tok!r} is not a number") from exc
    if not out:
        raise IoError(f"{path!r} holds no numbers")
    return np.asarray(out, dtype=float)


def _alphas(args, *, allow_zero: bool = False) -> tuple[list[float], bool]:
    """Alpha values and whether a grid was given."""
    if getattr(args, "alpha_grid", None):
        return parse_grid(args.alpha_grid, allow_zero=allow_zero), True
    if args.alpha is None:
        raise ParseError("one of --alpha or --alpha-grid is required")
    a = float(args.alpha)
    if not (a > 0 or (allow_zero and a == 0)):
        # domain, not syntax: alpha itself is a parameter of the measure
        as_alpha(a)
    return [a], False


def _ts(args) -> tuple[list[float], bool]:
    if getattr(args, "t_grid", None):
        return parse_grid(args.t_grid, allow_zero=True), True
    if args.t is None:
        raise ParseError("one of --t or --t-grid is required")
    return [float(args.t)], False


# ---------------------------------------------------------------------------
# subcommands; each returns (results, methods)


def _report_row(r: MeasureReport, **keys) -> dict:
    return {**keys, "value": r.value, "method": r.method.value, "err_estimate": r.err_estimate}


def _measure_one(d, measure: str, a: float, method: str) -> MeasureReport:
    m = d.model()
    if measure == "fgce":
        if method in ("auto", "closed_form"):
            try:
                return MeasureReport(d.closed_form_fgce(a), Method.CLOSED_FORM, 0.0)
            except NoClosedForm:
                if method == "closed_form":
                    raise
        if method == "rl":
            return fgce_via_rl(m, a)
        return fgce(m, a)
    if measure == "nfgce":
        if method in ("auto", "closed_form"):
            try:
                return MeasureReport(d.closed_form_nfgce(a), Method.CLOSED_FORM, 0.0)
            except NoClosedForm:
                if method == "closed_form":
                    raise
        return nfgce(m, a)
    if method == "closed_form":
        raise NoClosedForm("closed forms cover the FGCE and its normalized form only")
    return fgcre_via_rl(m, a) if method == "rl" else fgcre(m, a)


def cmd_measure(args):
    d = parse_distribution(args.dist)
    alphas, grid = _alphas(args)
    rows = [_report_row(_measure_one(d, args.measure, a, args.method), alpha=a) for a in alphas]
    return (rows if grid else rows[0]), {r["method"] for r in rows}


def cmd_dynamic(args):
    m = parse_distribution(args.dist).model()
    a = as_alpha(args.alpha)
    ts, grid = _ts(args)
    fn = {"past": dyn_fgce, "residual": dyn_fgcre, "normalized": dyn_nfgce}[args.kind]
    rows = [_report_row(fn(m, a, t), t=t) for t in ts]
    if args.idfce:
        v = idfce_check(m, a, ts if len(ts) > 1 else None)
        out = {"series": rows, "idfce": {"verdict": v.verdict, "witness": v.witness}}
        return out, {r["method"] for r in rows}
    return (rows if grid else rows[0]), {r["method"] for r in rows}


def cmd_prhm(args):
    base = parse_distribution(args.dist).model()
    spec = PrhmSpec(base, args.theta)
    a = as_alpha(args.alpha)
    ce = fgce_prhm(spec, a)
    out: dict[str, Any] = {
        "fgce": _report_row(ce),
        "e_theta_alpha": e_theta(spec, a),
        "e_theta_alpha_plus_1": e_theta(spec, a + 1.0),
        "identities": [recurrence_step(spec, a).to_dict(), weighted_terms(spec, a).to_dict()],
    }
    if args.n is not None:
        out["identities"].append(recurrence_n(spec, a, args.n).to_dict())
    if args.t is not None:
        s = prhm_sandwich(spec, a, args.t)
        out["dynamic"] = {"t": args.t, "value": s.lhs, "sandwich": s.to_dict()}
    return out, {ce.method.value}


def cmd_bounds(args):
    m = parse_distribution(args.dist).model()
    alphas, _ = _alphas(args)
    rows = []
    for a in alphas:
        if args.t is not None:
            reports = dyn_bounds_report(m, a, args.t)
        else:
            reports = bound_triplet(m, a) if m.pdf is not None else []
            if m.support.bounded:
                reports += bound_power_of_ce(m, a)
            if args.with_dist:
                reports.append(bound_sum_max(m, parse_distribution(args.with_dist).model(), a))
        rows += [{"alpha": a, **r.to_dict()} for r in reports]
    return rows, {Method.QUADRATURE_X.value}


def cmd_orders(args):
    mx = parse_distribution(args.x).model()
    my = parse_distribution(args.y).model()
    rows = [order_st(mx, my).to_dict(), order_hr(mx, my).to_dict()]
    try:
        rows.append(order_dispersive(mx, my).to_dict())
    except DomainError as exc:
        rows.append({"relation": "dispersive", "holds": None, "witness": None, "note": str(exc)})
    out: dict[str, Any] = {"orders": rows, "dfr": {"x": dfr_check(mx), "y": dfr_check(my)}}
    if args.alpha is not None:
        a = as_alpha(args.alpha)
        implied = []
        for fn in (disp_implies_fgce, hr_dfr_implies):
            try:
                implied.append(fn(mx, my, a).to_dict())
            except DomainError as exc:
                implied.append({"name": fn.__name__, "holds": None, "note": str(exc)})
        out["implications"] = implied
    return out, {Method.QUADRATURE_X.value}


def cmd_scan(args):
    res = st_counterexample_scan(parse_grid(args.b_grid), parse_grid(args.d_grid), args.l, args.alpha)
    rows = [{"b": b, "d": d, "diff": v} for b, d, v in res.rows()]
    return rows, {Method.CLOSED_FORM.value}


def cmd_empirical(args):
    values = read_values(args.input)
    alphas, grid = _alphas(args, allow_zero=True)
    if args.prefix:
        rows = [{"alpha": a, "n": n, "value": v} for a in alphas for n, v in prefix_fgce(values, a)]
        return rows, {Method.EMPIRICAL.value}
    rows = [_report_row(empirical_fgce(values, a), alpha=a, n=int(values.size)) for a in alphas]
    return (rows if grid else rows[0]), {Method.EMPIRICAL.value}


def cmd_mc(args):
    cfg = McConfig(args.reps, args.n, args.seed, as_alpha(args.alpha), args.rate, args.law)
    res = clt_montecarlo(cfg)
    mean, var = cfg.exact_moments()
    out = {
        "mean": res.mean, "var": res.var, "ks": res.ks, "ks_pvalue": res.ks_pvalue,
        "z_quantiles": res.z_quantiles(), "exact_mean": mean, "exact_var": var,
    }
    return out, {Method.EMPIRICAL.value}


_IDENTITY_BASES = ("uniform:l=1", "power:b=2,l=1", "exponential:lam=1")
_RL_BASES = ("uniform:l=1", "power:b=2,l=1", "half-logistic", "exponential:lam=1")


def cmd_verify(args):
    alphas, _ = _alphas(args)
    rows = []
    for a in alphas:
        for name in sorted(CATALOG):
            d = CATALOG[name]()
            try:
                ref = d.closed_form_fgce(a)
            except (NoClosedForm, DomainError):
                continue
            r = fgce(d.model(), a)
            rows.append(_check("closed_form", d.spec(), a, r.value, ref, 1e-8 * max(1.0, abs(ref))))
        for spec in _RL_BASES:
            m = parse_distribution(spec).model()
            rows.append(_check("rl_fgce", spec, a, fgce_via_rl(m, a).value, fgce(m, a).value, 1e-6))
            rows.append(_check("rl_fgcre", spec, a, fgcre_via_rl(m, a).value, fgcre(m, a).value, 1e-6))
        for spec in _IDENTITY_BASES:
            for theta in args.theta:
                p = PrhmSpec(parse_distribution(spec).model(), theta)
                label = f"{spec}|theta={theta:g}"
                ce = fgce(prhm_model(p), a).value
                rows.append(_check("prhm_two_term", label, a, fgce_prhm(p, a).value, ce, 1e-7))
                for n in (2, 3, 4):
                    c = recurrence_n(p, a, n)
                    rows.append(_check(f"recurrence_n{n}", label, a, c.value, c.reference, c.tolerance))
    failed = [r for r in rows if not r["holds"]]
    if failed:
        f = failed[0]
        exc = IdentityViolation(
            f"{len(failed)} of {len(rows)} identity checks failed; first: {f['identity']} on {f['dist']} "
            f"at alpha={f['alpha']:g} (residual {f['residual']:.3g})"
        )
        exc.rows = rows
        raise exc
    return rows, {Method.CLOSED_FORM.value, Method.QUADRATURE_X.value}


def _check(identity, dist, a, value, reference, tol) -> dict:
    res = abs(value - reference)
    return {"identity": identity, "dist": dist, "alpha": a, "value": value, "reference": reference,
            "residual": res, "tolerance": tol, "holds": bool(res <= tol)}


def cmd_catalog(args):
    rows = []
    for name in sorted(CATALOG):
        cls = CATALOG[name]
        d = cls()
        m = d.model()
        try:
            d.closed_form_fgce(2.0)
            closed = True
        except NoClosedForm:
            closed = False
        except DomainError:
            closed = True
        rows.append({
            "name": name, "example": d.spec(), "lower": m.lower, "upper": m.upper,
            "closed_form": closed, "has_pdf": m.pdf is not None, "has_quantile": m.quantile is not None,
        })
    return rows, {Method.CLOSED_FORM.value}


# ---------------------------------------------------------------------------
# argument parser


def build_parser() -> _Parser:
    p = _Parser(prog="fracentropy", description="Fractional generalized cumulative entropy toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or built-in")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=fn)
        return sp

    def alpha_opts(sp, required=True):
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--alpha", type=float)
        g.add_argument("--alpha-grid", help="start:stop:step (inclusive) or comma list")

    sp = add("measure", cmd_measure, "FGCE, fractional CRE or the normalized measure of a catalog law")
    sp.add_argument("--dist", required=True, help='e.g. "uniform:l=1", "frechet:b=1,eta=2"')
    alpha_opts(sp)
    sp.add_argument("--measure", choices=("fgce", "fgcre", "nfgce"), default="fgce")
    sp.add_argument("--method", choices=("auto", "closed_form", "quadrature", "rl"), default="auto")

    sp = add("dynamic", cmd_dynamic, "past or residual measure as a function of t")
    sp.add_argument("--dist", required=True)
    sp.add_argument("--alpha", type=float, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--t", type=float)
    g.add_argument("--t-grid")
    sp.add_argument("--kind", choices=("past", "residual", "normalized"), default="past")
    sp.add_argument("--idfce", action="store_true", help="also report whether the past measure increases in t")

    sp = add("prhm", cmd_prhm, "proportional reversed hazards model F^theta")
    sp.add_argument("--dist", required=True, help="base law")
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--t", type=float)
    sp.add_argument("--n", type=int, help="recurrence depth (>= 2)")

    sp = add("bounds", cmd_bounds, "bound reports for a catalog law")
    sp.add_argument("--dist", required=True)
    alpha_opts(sp)
    sp.add_argument("--t", type=float, help="report the dynamic bounds at this t")
    sp.add_argument("--with-dist", help="independent Y for the sum bound")

    sp = add("orders", cmd_orders, "stochastic orders between X and Y")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--alpha", type=float, help="also compare the measures where an order implies it")

    sp = add("scan", cmd_scan, "power-law difference matrix CE(b) - CE(d)")
    sp.add_argument("--b-grid", required=True)
    sp.add_argument("--d-grid", required=True)
    sp.add_argument("--l", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)

    sp = add("empirical", cmd_empirical, "plug-in estimate from a data file")
    sp.add_argument("--input", required=True, help="one number per line, '#' comments; '-' for stdin")
    alpha_opts(sp)
    sp.add_argument("--prefix", action="store_true", help="estimate on the first n values for every n")

    sp = add("mc", cmd_mc, "Monte Carlo check of the estimator's standardized distribution")
    sp.add_argument("--law", choices=("exponential", "uniform"), default="exponential")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--reps", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--rate", type=float, default=1.0)

    sp = add("verify-identities", cmd_verify, "closed forms, PRHM recurrences and fractional-integral identities")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float)
    g.add_argument("--alpha-grid", default="0.5,1,2")
    sp.add_argument("--theta", type=lambda s: parse_grid(s), default=[0.5, 2.0], help="comma list")

    add("catalog", cmd_catalog, "list the named distributions")
    return p


# ---------------------------------------------------------------------------
# serialization


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return obj


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def _flatten(prefix: str, obj, out: dict):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, (list, tuple)) and prefix:
        out[prefix] = ";".join(_fmt(x) for x in obj)
    else:
        out[prefix] = obj


def _csv_rows(results) -> list[dict]:
    if isinstance(results, list):
        rows = results
    elif isinstance(results, dict) and any(isinstance(v, list) and v and isinstance(v[0], dict)
                                           for v in results.values()):
        # pick the first list of records (e.g. a series) as the table
        rows = next(v for v in results.values() if isinstance(v, list) and v and isinstance(v[0], dict))
    else:
        rows = [results]
    flat = []
    for r in rows:
        f: dict = {}
        _flatten("", r, f)
        flat.append(f)
    return flat


def to_csv(results) -> str:
    rows = _csv_rows(results)
    header: list[str] = []
    for r in rows:
        header += [k for k in r if k not in header]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(r.get(k)) for k in header])
    return buf.getvalue()


def _request_echo(args) -> dict:
    skip = {"func", "format", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str, str]:
    """Run the CLI and return ``(exit_code, stdout_text, stderr_text)`` without exiting."""
    sub = None
    try:
        args = build_parser().parse_args(argv)
        sub = args.subcommand
        if args.seed is None:
            args.seed = default_seed()
        results, methods = args.func(args)
        if args.format == "csv":
            text = to_csv(_clean(results))
        else:
            env = {
                "request": _request_echo(args),
                "results": results,
                "provenance": {
                    "method": sorted(methods),
                    "tolerances": {"abs_tol": DEFAULT_QUADRATURE.abs_tol, "rel_tol": DEFAULT_QUADRATURE.rel_tol},
                    "seed": args.seed,
                    "revision": __version__,
                },
            }
            text = json.dumps(_clean(env), sort_keys=True, indent=2) + "\n"
        if args.output:
            try:
                with open(args.output, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
            except OSError as exc:
                raise IoError(f"cannot write {args.output!r}: {exc.strerror or exc}") from exc
            return EXIT_OK, "", ""
        return EXIT_OK, text, ""
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0), "", ""
    except (ParseError, IoError) as exc:
        return EXIT_USAGE, "", _error_json(exc, sub)
    except DomainError as exc:
        return EXIT_DOMAIN, "", _error_json(exc, sub)
    except (NumericalError, ArithmeticError) as exc:
        rows = getattr(exc, "rows", None)
        extra = {"checks": _clean(rows)} if rows is not None else None
        return EXIT_NUMERICAL, "", _error_json(exc, sub, extra)


def _error_json(exc: BaseException, sub: Optional[str], extra: Optional[dict] = None) -> str:
    err = {"type": type(exc).__name__, "message": str(exc), "subcommand": sub}
    if extra:
        err.update(extra)
    return json.dumps({"error": err}, sort_keys=True) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())

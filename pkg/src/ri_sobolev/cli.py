"""Command-line front end: deciders, trend checkers, domain export and verification suites.

Exit codes: 0 Holds (or a passing suite), 1 Fails (or a failing suite),
2 numeric trend, 64 bad arguments, 65 data that cannot be processed
(a truncated domain without --allow-truncation, a non-convex profile).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import (
    check_fundamental,
    check_power_mk,
    check_psi_in_associate,
    decide_john,
    decide_lz_algebra,
    decide_lz_fundamental,
    decide_lz_reduced,
    decide_orlicz_algebra,
    decide_orlicz_reduced,
    random_lz_tuples,
)
from .extremal import DomainSampler, equimeasurability_check
from .hardy import HardyContext, admissible_envelope, pointwise_bound_check, random_admissible
from .isoperimetry import (
    IsoperimetricProfile,
    PowerLog,
    build_domain_profile,
    profile_from_dict,
    smooth_profile,
)
from .norms import Lebesgue, PowerLogYoung, eval_norm, parse_norm
from .rearrangement import (
    PiecewiseConstantFunction,
    decreasing_rearrangement,
    hl_pairing,
    level_mean,
    random_step_function,
)
from .verdict import FAILS, HOLDS, Verdict, jsonable

EXIT_HOLDS, EXIT_FAILS, EXIT_TREND = 0, 1, 2
EXIT_USAGE, EXIT_DATA = 64, 65


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Parsed command plus everything needed to reproduce its output."""

    command: str
    params: dict
    seed: int = 0
    out: str | None = None
    tolerances: dict = field(default_factory=dict)

    def header(self) -> dict:
        # the output location is not part of the computation
        d = asdict(self)
        d.pop("out")
        return jsonable({"ri_sobolev": __version__, **d})


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else ("inf" if x > 0 else ("-inf" if x < 0 else "nan"))
    if isinstance(x, (np.floating, np.integer)):
        return _fmt(x.item())
    return str(x)


def csv_text(cfg: RunConfig, columns: list[str], rows: list[dict]) -> str:
    """CSV with a '# {config}' first line and a header row; deterministic formatting."""
    buf = io.StringIO()
    buf.write("# " + json.dumps(cfg.header(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c, "")) for c in columns])
    return buf.getvalue()


def _write(path: str | Path, text: str):
    Path(path).write_text(text, encoding="utf-8")


def _emit_verdict(cfg: RunConfig, v: Verdict) -> int:
    doc = {"config": cfg.header(), "verdict": v.to_dict()}
    text = json.dumps(doc, sort_keys=True, indent=2)
    print(text)
    if cfg.out:
        _write(cfg.out, text + "\n")
    if v.outcome == HOLDS:
        return EXIT_HOLDS
    if v.outcome == FAILS:
        return EXIT_FAILS
    return EXIT_TREND


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_profile_args(p: argparse.ArgumentParser, n_default: int = 2):
    p.add_argument("--alpha", type=float, help="power profile t^alpha")
    p.add_argument("--lam", type=float, default=None,
                   help="log exponent: t^alpha log^lam(e/t)")
    p.add_argument("--n", type=int, default=n_default, help="dimension")
    p.add_argument("--profile", help="profile as JSON, e.g. '{\"form\": \"power\", \"alpha\": 0.5}'")


def _profile(args) -> IsoperimetricProfile:
    if args.profile:
        d = json.loads(args.profile)
        d.setdefault("n", args.n)
        return profile_from_dict(d)
    if args.alpha is None:
        raise UsageError("give --alpha or --profile")
    if args.lam is not None:
        return IsoperimetricProfile(PowerLog(args.alpha, args.lam), args.n)
    return IsoperimetricProfile.power(args.alpha, args.n)


def _lz_args(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)


def _orlicz_args(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=float, required=True, help="A(t) = t^p log^lam(e+t)")
    p.add_argument("--lam", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="ri-sobolev", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    top.add_argument("--seed", type=int, default=0)
    top.add_argument("--out", help="output file (decide, norm) or prefix (domain, verify)")
    top.add_argument("--kappa-band", type=float, default=None,
                     help="trend checkers: powers below this exponent count as zero")
    top.add_argument("--nu-tol", type=float, default=None,
                     help="trend checkers: tolerance on the log exponent")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    dec = sub.add_parser("decide", help="run a decider or trend checker")
    dsub = dec.add_subparsers(dest="which", required=True, parser_class=_Parser)
    p = dsub.add_parser("john")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--norm", required=True)
    p = dsub.add_parser("lz")
    p.add_argument("--m", type=int, required=True)
    _lz_args(p)
    p = dsub.add_parser("orlicz")
    p.add_argument("--m", type=int, required=True)
    _orlicz_args(p)
    p = dsub.add_parser("lz-reduced")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _lz_args(p)
    p = dsub.add_parser("orlicz-reduced")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _orlicz_args(p)
    for name in ("psi", "fundamental", "power-mk"):
        p = dsub.add_parser(name)
        p.add_argument("--m", type=int, required=True)
        if name == "power-mk":
            p.add_argument("--k", type=int, required=True)
        p.add_argument("--norm", required=True)
        p.add_argument("--closed-form", action="store_true",
                       help="use the exact decider when one exists")
        _add_profile_args(p)

    p = sub.add_parser("domain", help="tabulate the domain of revolution for a profile")
    _add_profile_args(p)
    p.add_argument("--smooth", action="store_true", help="smooth the profile first")
    p.add_argument("--allow-truncation", action="store_true")
    p.add_argument("--pointcloud", action="store_true")
    p.add_argument("--steps", type=int, default=64)

    p = sub.add_parser("verify", help="run a verification suite")
    vsub = p.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    s = vsub.add_parser("lemma31")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--trials", type=int, default=1000)
    s = vsub.add_parser("prop33")
    s.add_argument("--sweep", choices=["default", "small"], default="default")
    s.add_argument("--count", type=int, default=None)
    vsub.add_parser("remark34")
    s = vsub.add_parser("equimeasure")
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--functions", type=int, default=10)
    s.add_argument("--samples", type=int, default=1_000_000)
    s = vsub.add_parser("rearrangement")
    s.add_argument("--trials", type=int, default=10_000)

    p = sub.add_parser("norm", help="evaluate a norm of a step function given as JSON")
    p.add_argument("--norm", required=True)
    p.add_argument("--function", required=True,
                   help="JSON {breakpoints, values}, or @file")
    return top


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_decide(args, cfg: RunConfig) -> int:
    w = args.which
    tol = cfg.tolerances
    if w == "john":
        v = decide_john(args.m, args.n, parse_norm(args.norm))
    elif w == "lz":
        v = decide_lz_algebra(args.m, args.alpha, args.p, args.q, args.beta)
    elif w == "orlicz":
        v = decide_orlicz_algebra(args.m, args.alpha, PowerLogYoung(args.p, args.lam))
    elif w == "lz-reduced":
        v = decide_lz_reduced(args.m, args.k, args.alpha, args.p, args.q, args.beta)
    elif w == "orlicz-reduced":
        v = decide_orlicz_reduced(args.m, args.k, args.alpha, PowerLogYoung(args.p, args.lam))
    else:
        I = _profile(args)
        norm = parse_norm(args.norm)
        if w == "psi":
            v = check_psi_in_associate(I, args.m, norm, closed_form=args.closed_form, **tol)
        elif w == "fundamental":
            v = check_fundamental(I, args.m, norm, closed_form=args.closed_form, **tol)
        else:
            v = check_power_mk(I, args.m, args.k, norm, closed_form=args.closed_form, **tol)
    return _emit_verdict(cfg, v)


def cmd_domain(args, cfg: RunConfig) -> int:
    I = _profile(args)
    if args.pointcloud and I.n != 3:
        raise UsageError("--pointcloud needs n = 3")
    if args.smooth:
        I = smooth_profile(I)
    if not math.isfinite(I.L) and not args.allow_truncation:
        raise DataError(
            "the integral of 1/I diverges at 0, so the domain is infinitely long; "
            "rerun with --allow-truncation to tabulate it down to measure 1e-9"
        )
    try:
        D = build_domain_profile(I)
    except ValueError as e:
        raise DataError(f"{e} (try --smooth)") from None
    checks = D.validate()
    summary = {"header": D.header(), "checks": checks}
    print(json.dumps(jsonable(summary), sort_keys=True, indent=2))
    print(f"volume {D.volume():.6f}")
    prefix = cfg.out or "domain"
    _write(prefix + ".csv", D.to_csv(preamble=cfg.header()))
    _write(prefix + ".json", json.dumps(jsonable({"config": cfg.header(), **summary}),
                                        sort_keys=True, indent=2) + "\n")
    if args.pointcloud:
        pts = D.point_cloud(steps=args.steps)
        cols = ["x_n", "y1", "y2"][: pts.shape[1]]
        rows = [dict(zip(cols, map(float, row))) for row in pts]
        _write(prefix + ".points.csv", csv_text(cfg, cols, rows))
    return EXIT_HOLDS


def _suite_lemma31(args, cfg, rng):
    if args.m < 2:
        raise UsageError("lemma31 needs --m >= 2")
    ctx = HardyContext(IsoperimetricProfile.power(args.alpha, 2), args.m)
    rows = []
    for k in range(1, args.m):
        env = pointwise_bound_check(ctx, admissible_envelope(ctx), k)
        rows.append({"k": k, "trial": "envelope", "constant": env.constant,
                     "worst_ratio": env.worst_ratio, "worst_t": env.worst_t, "ok": env.holds})
        for i in range(args.trials):
            r = pointwise_bound_check(ctx, random_admissible(ctx, rng), k)
            rows.append({"k": k, "trial": i, "constant": r.constant,
                         "worst_ratio": r.worst_ratio, "worst_t": r.worst_t, "ok": r.holds})
    return ["k", "trial", "constant", "worst_ratio", "worst_t", "ok"], rows


def _suite_prop33(args, cfg, rng):
    count = args.count or (100 if args.sweep == "default" else 20)
    rows = []
    for t in random_lz_tuples(rng, count):
        norm = t.norm()
        I = IsoperimetricProfile.power(t.alpha, 2)
        psi = check_psi_in_associate(I, t.m, norm, **cfg.tolerances)
        fund = check_fundamental(I, t.m, norm, **cfg.tolerances)
        exact = decide_lz_algebra(t.m, t.alpha, t.p, t.q, t.beta)
        exact_f = decide_lz_fundamental(t.m, t.alpha, t.p, t.q, t.beta)
        implication = not (psi.trend == "converges" and fund.outcome == FAILS)
        agree = psi.positive == exact.positive and fund.outcome == exact_f.outcome
        rows.append({**t.as_row(), "n": 2, "k": "", "outcome": exact.outcome,
                     "psi_trend": psi.trend, "fundamental": fund.outcome,
                     "fundamental_exact": exact_f.outcome,
                     "agree": agree, "implication": implication, "ok": agree and implication})
    cols = ["m", "n", "k", "alpha", "p", "q", "beta", "outcome", "psi_trend", "fundamental",
            "fundamental_exact", "agree", "implication", "ok"]
    return cols, rows


def _suite_remark34(args, cfg, rng):
    rows = []
    for alpha in (0.6, 0.75):
        for m in (2, 3):
            if not alpha > 1 - 1 / m:
                continue
            norm = Lebesgue(1.0 / (m * (1 - alpha)))
            I = IsoperimetricProfile.power(alpha, 2)
            f = check_fundamental(I, m, norm, **cfg.tolerances)
            v = check_psi_in_associate(I, m, norm, **cfg.tolerances)
            ok = f.holds and v.trend == "diverges" and v.slope is not None and v.slope > 0.05
            rows.append({"alpha": alpha, "m": m, "norm": norm.label(), "fundamental": f.outcome,
                         "C": f.witness, "psi_trend": v.trend, "slope": v.slope, "ok": ok})
    return ["alpha", "m", "norm", "fundamental", "C", "psi_trend", "slope", "ok"], rows


def _suite_equimeasure(args, cfg, rng):
    D = build_domain_profile(IsoperimetricProfile.power(args.alpha, args.n))
    Ms = DomainSampler(D).measure_coordinates(args.samples, seed=cfg.seed)
    rows = []
    for i in range(args.functions):
        h = random_step_function(rng)
        r = equimeasurability_check(D, h, measure_samples=Ms)
        rows.append({"function": i, "n_samples": r.n_samples, "ks": r.ks_distance,
                     "level": r.worst_level, "ok": r.ks_distance < 0.005})
    return ["function", "n_samples", "ks", "level", "ok"], rows


def _suite_rearrangement(args, cfg, rng):
    rows = []
    for i in range(args.trials):
        f, g = random_step_function(rng), random_step_function(rng)
        lhs, rhs = hl_pairing(f, g)
        fs = decreasing_rearrangement(f)
        t = float(rng.uniform(0.01, 0.99))
        # f** dominates f* pointwise and is non-increasing
        ok = (lhs <= rhs * (1 + 1e-12) + 1e-15 and fs.is_nonincreasing()
              and level_mean(f, t) >= float(fs(t)) * (1 - 1e-12))
        rows.append({"trial": i, "hl_lhs": lhs, "hl_rhs": rhs, "ok": ok})
    return ["trial", "hl_lhs", "hl_rhs", "ok"], rows


SUITES = {
    "lemma31": _suite_lemma31,
    "prop33": _suite_prop33,
    "remark34": _suite_remark34,
    "equimeasure": _suite_equimeasure,
    "rearrangement": _suite_rearrangement,
}


def cmd_verify(args, cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    cols, rows = SUITES[args.suite](args, cfg, rng)
    path = (cfg.out or f"verify-{args.suite}") + ".csv"
    _write(path, csv_text(cfg, cols, rows))
    failed = [r for r in rows if not r["ok"]]
    print(json.dumps({"suite": args.suite, "cases": len(rows), "failed": len(failed),
                      "csv": path}, sort_keys=True))
    if failed:
        print(json.dumps(jsonable(failed[0]), sort_keys=True), file=sys.stderr)
        return EXIT_FAILS
    return EXIT_HOLDS


def cmd_norm(args, cfg: RunConfig) -> int:
    text = args.function
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    f = PiecewiseConstantFunction.from_json(text)
    norm = parse_norm(args.norm)
    doc = {"config": cfg.header(), "norm": norm.label(), "value": eval_norm(norm, f)}
    out = json.dumps(jsonable(doc), sort_keys=True, indent=2)
    print(out)
    if cfg.out:
        _write(cfg.out, out + "\n")
    return EXIT_HOLDS


COMMANDS = {"decide": cmd_decide, "domain": cmd_domain, "verify": cmd_verify, "norm": cmd_norm}


def _config(args) -> RunConfig:
    skip = {"command", "seed", "out", "kappa_band", "nu_tol"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    tol = {}
    for name in ("kappa_band", "nu_tol"):
        val = getattr(args, name)
        if val is not None:
            if not val > 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
            tol[name] = val
    return RunConfig(args.command, params, args.seed, args.out, tol)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as e:
        print(f"ri-sobolev: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"ri-sobolev: {e}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, json.JSONDecodeError, KeyError) as e:
        print(f"ri-sobolev: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""padicvoa command line: JSON-first experiment commands.

Exit codes: 0 success/PASS, 1 verified FAIL, 2 usage error, 3 precision shortfall.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from .brackets import bracket_lift
from .expr import ParseError, format_state, parse_state
from .fock import FockState
from .modes import (
    ccr_failures,
    grading_failures,
    jacobi_failures,
    norm_compat_failures,
    virasoro_failures,
)
from .modforms import (
    InsufficientChain,
    KummerChain,
    QSeries,
    UnderdeterminedWindow,
    eisenstein,
    eisenstein_star,
    kummer_diff,
    kummer_prediction,
    quasimodular_fit,
    sup_norm,
)
from .onepoint import TraceReport, z_function
from .scalar import NotCauchy, padic_valuation, scalar_to_str
from .spectral import (
    PRECISION_SHORT,
    FamilyMember,
    PadicTarget,
    PrecisionShort,
    approximate_eigen_family,
    resolvent_norm_profile,
    verify_family,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3
SCHEMA = "padicvoa.{}/1"
DEFAULTS = {"prime": 5, "seed": 0, "degree_cap": 30, "qmax": 20}
MAX_WITNESSES = 10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Outcome:
    """Payload plus exit code for one command."""

    def __init__(self, payload: dict, code: int = EXIT_OK, series: Optional[QSeries] = None):
        self.payload = payload
        self.code = code
        self.series = series


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _setting(args, name: str, local: Optional[str] = None):
    """Subcommand flag, then global flag, then config file, then default."""
    if local and getattr(args, local, None) is not None:
        return getattr(args, local)
    val = getattr(args, "g_" + name, None)
    if val is not None:
        return val
    return args.config_values.get(name, DEFAULTS[name])


def _state(args, text: str) -> FockState:
    return parse_state(text, degree_cap=_setting(args, "degree_cap"))


# -- commands --------------------------------------------------------------------

def cmd_zexp(args) -> Outcome:
    D = _setting(args, "qmax", "qmax")
    v = _state(args, args.state)
    a = bracket_lift(v) if args.lift else v
    series = z_function(a, D)
    fit = quasimodular_fit(series, args.fit, D) if args.fit is not None else None
    report = TraceReport(format_state(a), D, series, fit)
    code = EXIT_OK if fit is None or fit.ok else EXIT_FAIL
    return Outcome(report.to_json(), code, series)


def _chain(args, p: int, k: int) -> KummerChain:
    if args.chain:
        return KummerChain(p, tuple(int(x) for x in args.chain.split(",")))
    return KummerChain.build(p, k, args.steps)


def cmd_eisenstein(args) -> Outcome:
    D = _setting(args, "qmax", "qmax")
    if not args.star:
        series = eisenstein(args.k, D)
        out = {"k": args.k, "series": series.to_json()}
        if args.p is not None:
            out["p"] = args.p
            out["sup_norm"] = sup_norm(series - QSeries.constant(1, D), args.p).to_json()
        return Outcome(out, series=series)
    p = _setting(args, "prime", "p")
    chain = _chain(args, p, args.k)
    coeffs, short = [], []
    for n in range(D + 1):
        try:
            coeffs.append(eisenstein_star(chain, n, args.precision).to_json())
        except InsufficientChain:
            coeffs.append(None)
            short.append(n)
    out = {
        "p": p,
        "chain": list(chain.weights),
        "limit_weight": chain.limit().to_json(),
        "precision": args.precision,
        "coeffs": coeffs,
        "shortfalls": short,
    }
    return Outcome(out, EXIT_PRECISION if short else EXIT_OK)


def cmd_kummer(args) -> Outcome:
    D = _setting(args, "qmax", "qmax")
    p = _setting(args, "prime", "p")
    chain = KummerChain.build(p, args.start, args.steps)
    steps, ok = [], True
    for i in range(len(chain.weights) - 1):
        gap = kummer_diff(chain, i, D)
        bound = kummer_prediction(p, chain.weights[i], chain.weights[i + 1])
        good = gap <= bound
        ok &= good
        steps.append({
            "from": chain.weights[i],
            "to": chain.weights[i + 1],
            "gap": gap.to_json(),
            "predicted": bound.to_json(),
            "verdict": _verdict(good),
        })
    out = {
        "p": p,
        "qmax": D,
        "chain": list(chain.weights),
        "steps": steps,
        "limit_weight": chain.limit().to_json(),
        "verdict": _verdict(ok),
    }
    return Outcome(out, EXIT_OK if ok else EXIT_FAIL)


def _suite_outcome(name: str, failures: list, params: dict) -> Outcome:
    out = dict(params)
    out.update({
        "suite": name,
        "failures": len(failures),
        "witnesses": failures[:MAX_WITNESSES],
        "verdict": _verdict(not failures),
    })
    return Outcome(out, EXIT_OK if not failures else EXIT_FAIL)


def cmd_jacobi(args) -> Outcome:
    seed = _setting(args, "seed", "seed")
    bad = jacobi_failures(args.trials, args.degree, args.window, seed)
    params = {"degree": args.degree, "window": args.window, "trials": args.trials, "seed": seed}
    return _suite_outcome("jacobi", bad, params)


def cmd_axioms(args) -> Outcome:
    seed = _setting(args, "seed")
    D = args.degree
    if args.suite == "ccr":
        bad = ccr_failures(10 if D is None else D)
    elif args.suite == "virasoro":
        bad = virasoro_failures(8 if D is None else D)
    elif args.suite == "grading":
        bad = grading_failures(max_degree=6 if D is None else D, seed=seed)
    else:
        primes = (args.g_prime,) if args.g_prime is not None else (2, 5)
        bad = norm_compat_failures(primes=primes, max_degree=5 if D is None else D, seed=seed)
    return _suite_outcome(args.suite, bad, {"degree": D, "seed": seed})


def cmd_resolvent(args) -> Outcome:
    p = _setting(args, "prime", "p")
    target = PadicTarget.parse(args.lam, p)
    profile = resolvent_norm_profile(target, args.mmax, p)
    out = {"lambda": target.to_json(), "mmax": args.mmax}
    out.update(profile.to_json())
    return Outcome(out, EXIT_PRECISION if profile.shortfalls else EXIT_OK)


def cmd_eigen_family(args) -> Outcome:
    p = _setting(args, "prime", "p")
    target = PadicTarget.parse(args.lam, p)
    rho = Fraction(args.rho)
    members = approximate_eigen_family(target, args.steps, rho)
    out = {
        "p": p,
        "rho": scalar_to_str(rho),
        "lambda": args.lam,
        "members": [m.to_json() for m in members],
    }
    return Outcome(out)


def _load_family(path: str) -> list[FamilyMember]:
    with open(path) as fh:
        data = json.load(fh)
    return [FamilyMember(int(m["weight"]), FockState.from_json(m["state"])) for m in data["members"]]


def cmd_eigen_verify(args) -> Outcome:
    p = _setting(args, "prime", "p")
    target = PadicTarget.parse(args.lam, p)
    members = _load_family(args.family)
    report = verify_family(members, target, Fraction(args.rho))
    code = {"PASS": EXIT_OK, "FAIL": EXIT_FAIL, PRECISION_SHORT: EXIT_PRECISION}[report.verdict]
    return Outcome(report.to_json(), code)


def cmd_eisenstein_search(args) -> Outcome:
    """Two-mode bracket states h[-a]h[-b]1 whose Z-image is a multiple of E_k."""
    p = _setting(args, "prime", "p")
    D = _setting(args, "qmax", "qmax")
    target = eisenstein(args.k, D)
    matches, tried = [], 0
    for total in range(2, args.degree + 1):
        for b in range(1, total // 2 + 1):
            a = total - b
            text = f"h[-{a}] h[-{b}] vac"
            z = z_function(_state(args, text), D)
            tried += 1
            if z.is_zero():
                continue
            c = z[0]
            if c and (z - target * QSeries.constant(c, D)).is_zero():
                matches.append({
                    "state": text,
                    "weight": total,
                    "multiple": scalar_to_str(c),
                    "multiple_valuation": padic_valuation(c, p),
                })
    out = {"p": p, "k": args.k, "degree": args.degree, "qmax": D, "tried": tried, "matches": matches}
    return Outcome(out)


# -- plumbing ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padicvoa", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--prime", dest="g_prime", type=int)
    ap.add_argument("--seed", dest="g_seed", type=int)
    ap.add_argument("--degree-cap", dest="g_degree_cap", type=int)
    ap.add_argument("--qmax", dest="g_qmax", type=int)
    ap.add_argument("--config", help="JSON file with prime/seed/degree_cap/qmax")
    ap.add_argument("--format", dest="g_format", choices=("json", "csv"),
                    help="csv emits the q-series of zexp/eisenstein")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("zexp", help="Z(a) = eta * Tr o(a) q^L(0)")
    s.add_argument("--state", required=True)
    s.add_argument("--qmax", type=int)
    s.add_argument("--fit", type=int, metavar="WEIGHT")
    s.add_argument("--lift", action="store_true", help="apply bracket_lift to the state first")
    s.add_argument("--format", choices=("json", "csv"))
    s.set_defaults(func=cmd_zexp)

    s = sub.add_parser("eisenstein", help="E_k or its p-adic limit E_k^*")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--qmax", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--star", action="store_true")
    s.add_argument("--chain", help="comma-separated weights")
    s.add_argument("--steps", type=int, default=3)
    s.add_argument("--precision", type=int, default=2)
    s.add_argument("--format", choices=("json", "csv"))
    s.set_defaults(func=cmd_eisenstein)

    s = sub.add_parser("kummer", help="sup-norm gaps along a Kummer chain")
    s.add_argument("--p", type=int)
    s.add_argument("--start", type=int, required=True)
    s.add_argument("--steps", type=int, default=3)
    s.add_argument("--qmax", type=int)
    s.set_defaults(func=cmd_kummer)

    s = sub.add_parser("jacobi-check", help="Jacobi identity on seeded random triples")
    s.add_argument("--degree", type=int, default=6)
    s.add_argument("--window", type=int, default=3)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_jacobi)

    s = sub.add_parser("axioms", help="exact axiom suites")
    s.add_argument("--suite", choices=("ccr", "virasoro", "grading", "normcompat"), required=True)
    s.add_argument("--degree", type=int)
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("resolvent", help="mode-wise norms of (L(0) - lambda)^-1")
    s.add_argument("--p", type=int)
    s.add_argument("--lambda", dest="lam", required=True, help="rational, or ...digits")
    s.add_argument("--mmax", type=int, default=50)
    s.set_defaults(func=cmd_resolvent)

    s = sub.add_parser("eigen-family", help="bracket states with weights approaching lambda")
    s.add_argument("--p", type=int)
    s.add_argument("--rho", default="0")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--steps", type=int, default=6)
    s.set_defaults(func=cmd_eigen_family)

    s = sub.add_parser("eigen-verify", help="L[0] residuals of a state family")
    s.add_argument("--p", type=int)
    s.add_argument("--rho", default="0")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--family", required=True, metavar="FILE")
    s.set_defaults(func=cmd_eigen_verify)

    s = sub.add_parser("eisenstein-search", help="two-mode bracket states with Z = c E_k")
    s.add_argument("--p", type=int)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--degree", type=int, default=8)
    s.add_argument("--qmax", type=int)
    s.set_defaults(func=cmd_eisenstein_search)
    return ap


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def series_csv(series: QSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "coeff"])
    for n in range(series.D + 1):
        w.writerow([n, scalar_to_str(series[n])])
    return buf.getvalue()


def _error(kind: str, message: str, code: int, **extra) -> int:
    obj = {"schema": SCHEMA.format("error"), "error": kind, "message": message, "exit_code": code}
    obj.update(extra)
    sys.stderr.write(dumps(obj))
    return code


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.config_values = {}
        if args.config:
            with open(args.config) as fh:
                args.config_values = {k.replace("-", "_"): v for k, v in json.load(fh).items()}
        outcome = args.func(args)
    except UsageError as e:
        return _error("usage", str(e), EXIT_USAGE)
    except ParseError as e:
        return _error("parse", str(e), EXIT_USAGE, position=e.pos)
    except (PrecisionShort, InsufficientChain, UnderdeterminedWindow) as e:
        return _error("precision", str(e), EXIT_PRECISION)
    except NotCauchy as e:
        return _error("not_cauchy", str(e), EXIT_FAIL, index=e.index)
    except (ValueError, OSError, KeyError) as e:
        return _error("invalid", str(e), EXIT_USAGE)
    payload = {"schema": SCHEMA.format(args.command)}
    payload.update(outcome.payload)
    fmt = getattr(args, "format", None) or args.g_format or "json"
    if fmt == "csv":
        if outcome.series is None:
            return _error("usage", f"{args.command} has no series for csv output", EXIT_USAGE)
        sys.stdout.write(series_csv(outcome.series))
    else:
        sys.stdout.write(dumps(payload))
    return outcome.code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

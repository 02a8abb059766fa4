"""Command line: ``gl3twist verify <suite>`` and ``gl3twist compute <op> k=v ...``."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import charsums, deltacore, expcalc, expsums
from .config import RunConfig
from .errors import ConfigError, Gl3TwistError
from .modarith import DirichletCharacter
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ALIASES = {"λ": "lam", "lambda": "lam", "η": "eta", "ν": "nu", "ν1": "nu1", "ξ": "xi", "θ": "theta", "ρ": "rho"}


# -- compute ---------------------------------------------------------------------

class UsageError(Exception):
    pass


def _parse_value(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return text


def parse_assignments(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"expected key=value, got {item!r}")
        out[ALIASES.get(key, key)] = _parse_value(val)
    return out


def _need(args: dict, *names: str) -> list:
    missing = [n for n in names if n not in args]
    if missing:
        raise UsageError(f"missing arguments: {', '.join(missing)}")
    extra = sorted(set(args) - set(names))
    if extra:
        raise UsageError(f"unexpected arguments: {', '.join(extra)}")
    return [args[n] for n in names]


def _charsum_params(args: dict) -> charsums.CharSumParams:
    """Required: p, k, lam.  The rest default to j = 1, unit moduli, m = m' = 1, n2 = 0, eta = 1."""
    defaults = {"j": 1, "q": 1, "qp": 1, "n1p": 1, "n1pp": 1, "m": 1, "mp": 1, "n2": 0, "eta": 1}
    p, k, j, lam, q, qp, n1p, n1pp, m, mp, n2, eta = _need(
        {**defaults, **args}, "p", "k", "j", "lam", "q", "qp", "n1p", "n1pp", "m", "mp", "n2", "eta")
    chi = DirichletCharacter.primitive(p, k, j)
    return charsums.CharSumParams(chi, lam, q, qp, n1p, n1pp, m, mp, n2, eta)


# each op returns (value, bound or None, annotation)
def _op_kloosterman(a):
    a_, b, c = _need(a, "a", "b", "c")
    r = expsums.kloosterman(a_, b, c)
    return r.value, r.abs_bound, "Weil bound"


def _op_gauss(a):
    p, k, j = _need(a, "p", "k", "j")
    r = expsums.gauss_sum(DirichletCharacter.primitive(p, k, j))
    return r.value, r.abs_bound, "|tau| = p^(k/2)"


def _op_ramanujan(a):
    q, n = _need(a, "q", "n")
    r = expsums.ramanujan_sum(q, n)
    return r.value, r.abs_bound, "|c_q(n)| <= gcd(q, n)"


def _op_delta_exact(a):
    n, Q = _need(a, "n", "Q")
    return deltacore.delta_exact(deltacore.DeltaExpansion(Q), n), None, "equals 1 iff n = 0"


def _op_delta_padic(a):
    n, Q, p, lam = _need(a, "n", "Q", "p", "lam")
    return deltacore.delta_padic(deltacore.DeltaExpansion(Q, p, lam), n), None, "delta(n / p^lam)"


def _op_frak_C_star(a):
    s = _charsum_params(a)
    return charsums.frak_C_star(s), 10 * charsums.c_star_bound(s), "10 x correlation-sum size"


def _op_c1_star(a):
    s = _charsum_params(a)
    return charsums.c1_star(s), 10 * charsums.c1_bound(s), "10 qh qh' (qh, qh', n2)"


def _op_c2_star(a):
    s = _charsum_params(a)
    bound = charsums.c2_bound_zero(s) if s.n2 == 0 else charsums.c2_bound_nonzero(s)
    return charsums.c2_star(s), 10 * bound, "10 x p-part size"


def _op_frak_C(a):
    return charsums.frak_C(_charsum_params(a)), None, "direct enumeration"


def _op_quintic(a):
    p, nu1, m, mp, qh, qph, xi = _need({k: v for k, v in a.items() if k != "n2"},
                                       "p", "nu1", "m", "mp", "qh", "qph", "xi")
    return charsums.quintic_root_count(p, nu1, m, mp, qh, qph, xi), 5, "at most 5 roots mod p^nu1"


def _op_xi(a):
    p, k, j, nu = _need(a, "p", "k", "j", "nu")
    return charsums.xi_of_char(DirichletCharacter.primitive(p, k, j), nu).xi, None, "xi mod p^nu"


def _op_balance(a):
    theta, rho = _need(a, "theta", "rho")
    res = expcalc.balance(expcalc.load_ledger("final_terms"), Fraction(theta), Fraction(rho))
    return res.exponent, None, f"dominant: {', '.join(res.dominant)}; p-slack {res.p_slack}"


def _op_optimize(a):
    _need(a)
    res = expcalc.optimize(expcalc.load_ledger("final_terms"))
    return res.exponent, None, f"theta = {res.theta}, rho = {res.rho}; active: {', '.join(res.active)}"


OPS: dict[str, Callable[[dict], tuple]] = {
    "expsums.kloosterman": _op_kloosterman,
    "expsums.gauss_sum": _op_gauss,
    "expsums.ramanujan_sum": _op_ramanujan,
    "deltacore.delta_exact": _op_delta_exact,
    "deltacore.delta_padic": _op_delta_padic,
    "charsums.frak_C": _op_frak_C,
    "charsums.frak_C_star": _op_frak_C_star,
    "charsums.c1_star": _op_c1_star,
    "charsums.c2_star": _op_c2_star,
    "charsums.quintic_root_count": _op_quintic,
    "charsums.xi_of_char": _op_xi,
    "expcalc.balance": _op_balance,
    "expcalc.optimize": _op_optimize,
}


def format_value(v) -> str:
    """Integers and real numbers print plainly; float noise below 1e-9 is rounded away."""
    if isinstance(v, (int, Fraction)):
        return str(v)
    z = complex(v)
    scale = max(1.0, abs(z))
    re = z.real
    if abs(z.imag) > 1e-9 * scale:
        return f"{z.real:.12g}{z.imag:+.12g}j"
    if abs(re - round(re)) <= 1e-9 * scale:
        return str(int(round(re)))
    return f"{re:.12g}"


def compute(op: str, items: list[str], out=None) -> int:
    out = sys.stdout if out is None else out
    if op not in OPS:
        print(f"unknown op {op!r}; known: {', '.join(sorted(OPS))}", file=sys.stderr)
        return EXIT_USAGE
    try:
        value, bound, note = OPS[op](parse_assignments(items))
    except (UsageError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Gl3TwistError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(format_value(value), file=out)
    if bound is None:
        print(f"# {note}", file=out)
        return EXIT_OK
    # some bounds are attained exactly (|tau| = p^(k/2)), so allow float rounding
    ok = abs(complex(value)) <= bound * (1 + 1e-9)
    print(f"# bound {bound:.6g} ({note}): {'pass' if ok else 'FAIL'}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


# -- verify ----------------------------------------------------------------------

def verify(args: argparse.Namespace) -> int:
    try:
        cfg = RunConfig.load(args.config)
        if args.format is not None:
            cfg.format = args.format
        if args.jobs is not None:
            if args.jobs < 1:
                raise ConfigError("--jobs must be positive")
            cfg.jobs = args.jobs
        if args.out is not None:
            cfg.output = args.out
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run_suite(args.suite, cfg)
    except (ConfigError, KeyError, TypeError) as exc:
        print(f"config error: {exc!r}", file=sys.stderr)
        return EXIT_USAGE
    text = report.render(cfg.format)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    failed = report.failures()
    print(f"{args.suite}: {len(report.records)} checks, {len(failed)} failed", file=sys.stderr)
    for r in failed:
        print(f"  FAIL {r.check_id}: {r.anchor}", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gl3twist", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite and write a report")
    v.add_argument("suite", choices=(*SUITES, "all"))
    v.add_argument("--config", help="JSON run configuration (default: $GL3TWIST_CONFIG)")
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--format", choices=("json", "csv"))
    v.add_argument("--jobs", type=int, help="worker processes")
    c = sub.add_parser("compute", help="evaluate one operation")
    c.add_argument("op", help="module.function, e.g. expsums.kloosterman")
    c.add_argument("assignments", nargs="*", metavar="key=value")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return verify(args)
    return compute(args.op, args.assignments)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

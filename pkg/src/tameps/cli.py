"""Command line front end: eps, verify, tables.

Everything printed on stdout is exact text: root expressions when the
value has finite order, full serializations otherwise.  Floating point
appears only behind --approx and is labelled as non-authoritative.
Output files are written to a temporary name and renamed into place, so
a crashed run never leaves a half-written table.  Exit codes: 0 clean,
1 failed verification records, 2 bad configuration, 3 precision
exhausted, 4 a named internal invariant broke.
"""

import argparse
import cmath
import os
import sys
from typing import List, Optional

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - python < 3.11
    import tomli as tomllib

from .abelian import lambda_product, lamprecht_tate_epsilon, tate_epsilon
from .characters import (
    ONE,
    AdditiveChar,
    MultChar,
    TableChar,
    TameChar,
    char_conductor,
    psi_standard,
)
from .cyclotomic import (
    EpsilonValue,
    epsilon_text,
    parse_root,
    parse_serialized,
)
from .errors import ConfigError, ContractError, PrecisionError
from .heisenberg import HeisenbergDatum, HeisenbergRep, solve_theta
from .localring import Ring, make_ring, unit_group
from .suites import RING_BOUND, SUITE_NAMES, run_suite, summarize, table_rows
from .wformulas import (
    w_congruence,
    w_direct,
    w_invariant_minimal,
    w_large_conductor,
    w_nonminimal,
)

_TABLE_COLUMNS = ("q", "m", "theta", "conductor", "swan",
                  "det_teich", "det_pi", "w", "torsion")


def _parse_psi(ring: Ring, text: str) -> AdditiveChar:
    if text == "canonical":
        return psi_standard(ring)
    for key in ("cond=", "shift="):
        if text.startswith(key):
            try:
                return AdditiveChar(ring, int(text[len(key):]))
            except ValueError:
                raise ConfigError(f"bad additive character spec {text!r}")
    raise ConfigError(
        f"unknown additive character {text!r}; use canonical, cond=N or shift=N")


def _parse_chi(ring: Ring, text: str) -> MultChar:
    if text == "legendre":
        if ring.q % 2 == 0:
            raise ConfigError("legendre character needs odd residue size")
        return TameChar(ring, (ring.q - 1) // 2)
    parts = text.split(":")
    if parts[0] == "tame" and len(parts) in (2, 3):
        try:
            mult = int(parts[1])
        except ValueError:
            raise ConfigError(f"bad tame character spec {text!r}")
        t = parse_root(parts[2]) if len(parts) == 3 else ONE
        return TameChar(ring, mult, t)
    if parts[0] == "wild" and len(parts) == 4:
        try:
            level, un, pn = (int(x) for x in parts[1:])
        except ValueError:
            raise ConfigError(f"bad wild character spec {text!r}")
        gens = unit_group(ring, level)
        images = [parse_root(f"zeta({gens[0][1]})") ** un]
        images.extend(parse_root(f"zeta({o})") ** pn for _, o in gens[1:])
        return TableChar(ring, level, gens, images)
    raise ConfigError(
        f"unknown character {text!r}; use legendre, tame:M[:root] or "
        "wild:LEVEL:UN:PN")


def _epsilon(chi: MultChar, psi: AdditiveChar) -> EpsilonValue:
    a = char_conductor(chi)
    if a >= 2:
        return lamprecht_tate_epsilon(chi, psi, conductor=a)
    return tate_epsilon(chi, psi, conductor=a)


def _approx_line(v: EpsilonValue) -> str:
    z = v.embed_complex()
    return (f"approx: {z.real:+.12e}{z.imag:+.12e}i "
            "(floating point, not authoritative)")


def _emit(lines: List[str], out: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    tmp = f"{out}.{os.getpid()}.tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, out)


# -- eps ---------------------------------------------------------------

def _root_exponent(expr: str, group_order: int, what: str) -> int:
    r = parse_root(expr)
    num, den = r.exp.numerator, r.exp.denominator
    if group_order % den:
        raise ConfigError(
            f"{what} image {expr!r} has order {den}, which does not divide "
            f"the group order {group_order}")
    return num * (group_order // den)


def _rep_from_config(path: str) -> HeisenbergRep:
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"config file does not parse: {err}")
    try:
        p = int(cfg["field"]["p"])
        f0 = int(cfg["field"].get("f0", 1))
        eta_expr = cfg["eta"]["image"]
        theta_expr = cfg["theta"]["image"]
    except KeyError as err:
        raise ConfigError(f"config is missing {err} ")
    F = make_ring(p, f0, 1)
    mult = _root_exponent(eta_expr, F.q - 1, "eta")
    datum = HeisenbergDatum(F, mult)
    m = datum.m
    s = _root_exponent(theta_expr, F.q ** m - 1, "theta")
    sols = solve_theta(datum)
    if s not in sols:
        raise ConfigError(
            f"theta exponent {s} does not solve the restriction system; "
            f"valid exponents: {sols}")
    t = parse_root(cfg["theta"].get("t", "1"))
    twist = None
    if "twist" in cfg:
        tw = cfg["twist"]
        try:
            level = int(tw["level"])
            un = int(tw.get("unit", 1))
            pn = int(tw.get("principal", 1))
        except KeyError as err:
            raise ConfigError(f"twist block is missing {err}")
        gens = unit_group(F, level)
        images = [parse_root(f"zeta({gens[0][1]})") ** un]
        images.extend(parse_root(f"zeta({o})") ** pn for _, o in gens[1:])
        twist = TableChar(F, level, gens, images)
    return HeisenbergRep(datum, s, t, twist)


def _heisenberg_lines(rep: HeisenbergRep, psi: AdditiveChar,
                      route: str, approx: bool) -> List[str]:
    minimal = rep.is_minimal()
    routes = [route]
    if route == "all":
        routes = (["direct", "invariant", "congruence"] if minimal
                  else ["direct", "congruence", "nonminimal", "large"])
    lines = []
    for r in routes:
        if r == "direct":
            w = w_direct(rep, psi)
            lines.append(f"direct: {epsilon_text(w)}")
            if approx:
                lines.append(_approx_line(w))
        elif r == "invariant":
            rpt = w_invariant_minimal(rep, psi)
            verdict = "agrees" if rpt.equal else "DISAGREES"
            lines.append(f"invariant: {verdict} ({epsilon_text(rpt.rhs)})")
        elif r == "congruence":
            rpt = w_congruence(rep, psi)
            verdict = "exact" if rpt.equal else "BROKEN"
            lines.append(f"congruence: power {rep.m} identity {verdict}; "
                         f"{rpt.note}")
        elif r == "nonminimal":
            rpt = w_nonminimal(rep, psi)
            if rpt.flagged:
                lines.append("nonminimal: flagged branch; closed form off "
                             "by a quadratic Gauss sum")
            else:
                verdict = "agrees" if rpt.equal else "DISAGREES"
                lines.append(f"nonminimal: {verdict}")
        elif r == "large":
            rpt = w_large_conductor(rep, psi)
            verdict = "agrees" if rpt.equal else "DISAGREES"
            lines.append(f"large-conductor: {verdict}")
        else:
            raise ConfigError(f"unknown route {r!r}")
    return lines


def cmd_eps(args) -> int:
    lines: List[str] = []
    if args.mode == "abelian":
        F = make_ring(args.p, args.f, 1)
        w = _epsilon(_parse_chi(F, args.chi), _parse_psi(F, args.psi))
        lines.append(epsilon_text(w))
        if args.approx:
            lines.append(_approx_line(w))
    elif args.mode == "lambda":
        F = make_ring(args.p, args.f, 1)
        E = _parse_ext(F, args.ext)
        w = lambda_product(E, F, _parse_psi(F, args.psi))
        lines.append(epsilon_text(w))
        if args.approx:
            lines.append(_approx_line(w))
    else:
        rep = _rep_from_config(args.config)
        psi = _parse_psi(rep.F, args.psi)
        lines.extend(_heisenberg_lines(rep, psi, args.route, args.approx))
    _emit(lines, args.out)
    return 0


def _parse_ext(F: Ring, text: str) -> Ring:
    parts = text.split(":")
    twisted = parts[-1] == "u"
    if twisted:
        parts = parts[:-1]
    u = F.k.g if twisted else None
    if parts == ["ram2"]:
        return make_ring(F.p, F.f, 2, u=u)
    if parts[0] == "ram" and len(parts) == 2:
        return make_ring(F.p, F.f, int(parts[1]), u=u)
    if parts[0] == "unram" and len(parts) == 2:
        if twisted:
            raise ConfigError("an unramified extension has no uniformizer twist")
        return make_ring(F.p, F.f * int(parts[1]), 1)
    if parts[0] == "mixed" and len(parts) == 3:
        return make_ring(F.p, F.f * int(parts[1]), int(parts[2]), u=u)
    raise ConfigError(
        f"unknown extension {text!r}; use ram2, ram:E, unram:F or mixed:F:E "
        "(append :u to twist the uniformizer)")


# -- verify ------------------------------------------------------------

def cmd_verify(args) -> int:
    records = run_suite(args.suite, seed=args.seed, max_q=args.max_q,
                        max_m=args.max_m, level=args.level)
    lines = []
    for r in records:
        tag = "ok " if r.passed else ("skip" if r.passed is None else "FAIL")
        lines.append(f"[{tag}] {r.case}  {r.detail}")
    lines.append(summarize(records))
    _emit(lines, args.out)
    return 0 if all(r.passed is not False for r in records) else 1


# -- tables ------------------------------------------------------------

def _size_budget() -> int:
    raw = os.environ.get("EPS_MAX_MEMORY")
    if not raw:
        return RING_BOUND
    try:
        budget = int(raw)
    except ValueError:
        raise ConfigError(f"EPS_MAX_MEMORY must be an integer, got {raw!r}")
    # coarse model: an enumerated splitting ring costs ~256 bytes per
    # residue element in tables and scratch
    return max(9, min(RING_BOUND, budget // 256))


def _approx_of_text(s: str) -> str:
    """Floating-point rendering of a canonical value text; diagnostics only."""
    try:
        z = parse_serialized(s).embed_complex()
    except ConfigError:
        z = cmath.exp(2j * cmath.pi * float(parse_root(s).exp))
    return f"{z.real:+.6e}{z.imag:+.6e}i"


def cmd_tables(args) -> int:
    rows = table_rows(seed=args.seed, max_q=args.max_q,
                      max_size=_size_budget())
    cols = _TABLE_COLUMNS + (("w_approx",) if args.approx else ())
    # the serialized w field uses ';' internally, so columns join on '|'
    lines = ["# " + "|".join(cols)]
    if args.approx:
        lines[0] += "   (w_approx is floating point, not authoritative)"
    for row in rows:
        if args.approx:
            row = dict(row)
            row["w_approx"] = _approx_of_text(row["w"])
        lines.append("|".join(f"{c}={row[c]}" for c in cols))
    _emit(lines, args.out)
    return 0


# -- parser ------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tameps",
        description="Exact local constants for tame local data",
        epilog="EPS_MAX_MEMORY bounds the enumeration budget for tables.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-q", type=int, default=None)
        sp.add_argument("--max-m", type=int, default=None)
        sp.add_argument("--level", type=int, default=None)
        sp.add_argument("--out", default=None,
                        help="write output to this file atomically")
        sp.add_argument("--approx", action="store_true",
                        help="append floating-point diagnostics")

    eps = sub.add_parser("eps", help="compute one local constant")
    eps.add_argument("mode", choices=("abelian", "lambda", "heisenberg"))
    eps.add_argument("--p", type=int)
    eps.add_argument("--f", type=int, default=1)
    eps.add_argument("--chi", default="legendre",
                     help="legendre | tame:M[:root] | wild:LEVEL:UN:PN")
    eps.add_argument("--ext", default="ram2",
                     help="ram2 | ram:E | unram:F | mixed:F:E, optional :u")
    eps.add_argument("--psi", default="canonical",
                     help="canonical | cond=N | shift=N")
    eps.add_argument("--config", help="TOML file describing the rep")
    eps.add_argument("--route", default="all",
                     choices=("direct", "invariant", "congruence",
                              "nonminimal", "large", "all"))
    common(eps)
    eps.set_defaults(func=cmd_eps)

    ver = sub.add_parser("verify", help="run one verification suite")
    ver.add_argument("suite", choices=SUITE_NAMES)
    common(ver)
    ver.set_defaults(func=cmd_verify)

    tab = sub.add_parser("tables", help="emit the minimal-family sweep")
    common(tab)
    tab.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "eps":
        if args.mode in ("abelian", "lambda") and args.p is None:
            print("error: --p is required for this mode", file=sys.stderr)
            return 2
        if args.mode == "heisenberg" and not args.config:
            print("error: --config is required for heisenberg mode",
                  file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except PrecisionError as err:
        print(f"precision exhausted: {err}", file=sys.stderr)
        return 3
    except ContractError as err:
        print(f"invariant broke: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

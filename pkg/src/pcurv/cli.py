"""Command-line frontend.

Exit codes: 0 success, 1 a ``verify`` suite failed, 2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import gv
from .connection import (
    GradedConnection,
    p_curvature_direct,
    solve_by_covariant_constancy,
)
from .errors import PcurvError
from .localp1 import closed_form_pcurvature, steenrod_report, voisin_matrix
from .matrices import MatrixPolynomial
from .scalars import check_prime
from .verify import SUITES, run_suite

COMMANDS = ("pcurv", "closed-form", "verify", "gv-expand", "gv-invert", "build-connection", "steenrod")


class InputError(Exception):
    pass


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"input: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"input: {path} is not valid JSON ({exc.msg} at line {exc.lineno})") from None


def _prime_list(text: str) -> list[int]:
    try:
        primes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"primes: cannot parse {text!r}") from None
    for p in primes:
        check_prime(p)
    return primes


def _require(args, name: str):
    if getattr(args, name) is None:
        raise InputError(f"{name}: --{name} is required for {args.command}")
    return getattr(args, name)


def _truncation(args) -> int:
    E = _require(args, "truncation")
    if E < 0:
        raise InputError(f"truncation: must be >= 0, got {E}")
    return E


def _load_connection(args) -> GradedConnection:
    if args.input is None:
        return voisin_matrix(check_prime(_require(args, "prime")), _truncation(args))
    conn = GradedConnection.from_json(_read_json(args.input))
    if args.prime is not None and args.prime != conn.p:
        raise InputError(f"prime: --prime {args.prime} does not match p={conn.p} in {args.input}")
    if args.truncation is not None and args.truncation != conn.E:
        raise InputError(f"truncation: --truncation {args.truncation} does not match E={conn.E} in {args.input}")
    return conn


# -- pretty rendering -------------------------------------------------------


def pretty_matrix_polynomial(psi: MatrixPolynomial, names: list[str]) -> str:
    lines = []
    for i in range(psi.n):
        for j in range(psi.n):
            e = psi.entry(i, j)
            if not e.is_zero():
                lines.append(f"{names[i]} <- {names[j]}: {e.pretty()}")
    return "\n".join(lines or ["0"]) + "\n"


def pretty_report(report: dict) -> str:
    lines = [f"p = {report['p']}, E = {report['E']}, convention {report['convention']}", report["provenance"], ""]
    for row in report["correlators"]:
        lines.append(f"({row['input']}, {row['pair_with']}): {row['pretty']}")
    lines.append("")
    for s in report["multiple_cover_support"]:
        lines.append(
            f"t^(p-1) {s['output']} <- {s['input']}: quantum exponents {s['exponents']}"
            f" divisible by p: {s['divisible_by_p']}"
        )
    lines.append(f"classical limit matches: {report['classical_limit_matches']}")
    return "\n".join(lines) + "\n"


def pretty_table(table: dict) -> str:
    lines = [f"{table['kind']} (max degree {table['max_degree']})"]
    lines += [f"  {d}: {v}" for d, v in sorted(table["values"].items(), key=lambda kv: int(kv[0]))]
    return "\n".join(lines) + "\n"


def pretty_verify(report: dict) -> str:
    lines = []
    for r in report["results"]:
        status = "SKIP" if r.get("skipped") else ("PASS" if r["passed"] else "FAIL")
        lines.append(f"{status} {r['name']} ({r['checked']} checks)")
        if not r["passed"]:
            lines.append(f"     first failure: {json.dumps(r['failures'][0], sort_keys=True)}")
    lines.append("OK" if report["passed"] else "FAILED")
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------


def cmd_pcurv(args):
    conn = _load_connection(args)
    psi = solve_by_covariant_constancy(conn) if args.engine == "recursion" else p_curvature_direct(conn)
    if args.format == "pretty":
        return pretty_matrix_polynomial(psi, [e.name for e in conn.basis]), 0
    return dump_json(psi.to_json()), 0


def cmd_closed_form(args):
    p = check_prime(_require(args, "prime"))
    psi = closed_form_pcurvature(p, _truncation(args))
    if args.format == "pretty":
        return pretty_matrix_polynomial(psi, ["1", "b", "C", "P"]), 0
    return dump_json(psi.to_json()), 0


def cmd_verify(args):
    primes = _prime_list(args.primes) if args.primes else ([check_prime(args.prime)] if args.prime else None)
    if args.suite != "all" and args.suite not in SUITES:
        raise InputError(f"suite: unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    if args.truncation is not None and args.truncation < 0:
        raise InputError(f"truncation: must be >= 0, got {args.truncation}")
    verdicts = run_suite(args.suite, primes, args.truncation, args.seed)
    passed = all(v.passed for v in verdicts)
    report = {"suite": args.suite, "passed": passed, "results": [v.to_json() for v in verdicts]}
    if not passed:
        first = next(v for v in verdicts if not v.passed)
        report["first_failure"] = {"invariant": first.name, "detail": first.failures[0]}
    text = pretty_verify(report) if args.format == "pretty" else dump_json(report)
    return text, 0 if passed else 1


def _load_table(args, kind: str):
    table = gv.table_from_json(_read_json(_require(args, "input")))
    expected = gv.BPSTable if kind == "bps" else gv.GWTable
    if not isinstance(table, expected):
        raise InputError(f"kind: {args.command} expects a '{kind}' table")
    return table


def _emit_table(args, table):
    data = table.to_json()
    return (pretty_table(data) if args.format == "pretty" else dump_json(data)), 0


def cmd_gv_expand(args):
    n = _load_table(args, "bps")
    D = args.truncation if args.truncation is not None else n.max_degree
    if D < 1:
        raise InputError(f"truncation: max degree must be >= 1, got {D}")
    return _emit_table(args, gv.bps_to_gw(n, D))


def cmd_gv_invert(args):
    return _emit_table(args, gv.gw_to_bps(_load_table(args, "gw")))


def cmd_build_connection(args):
    p = check_prime(_require(args, "prime"))
    E = _truncation(args)
    if args.input is None:
        conn = voisin_matrix(p, E)
    else:
        conn = gv.build_divisor_connection(args.kappa, _load_table(args, "gw"), p, E)
    return dump_json(conn.to_json()), 0


def cmd_steenrod(args):
    conn = _load_connection(args)
    report = steenrod_report(conn.p, conn.E, conn, flip_t=args.flip_t)
    return (pretty_report(report) if args.format == "pretty" else dump_json(report)), 0


HANDLERS = {
    "pcurv": cmd_pcurv,
    "closed-form": cmd_closed_form,
    "verify": cmd_verify,
    "gv-expand": cmd_gv_expand,
    "gv-invert": cmd_gv_invert,
    "build-connection": cmd_build_connection,
    "steenrod": cmd_steenrod,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcurv", description="p-curvature of quantum connections over F_p")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--prime", type=int)
        sp.add_argument("--truncation", type=int)
        sp.add_argument("--input")
        sp.add_argument("--output")
        sp.add_argument("--format", choices=("json", "pretty"), default="json")
        if name == "verify":
            sp.add_argument("--suite", default="all")
            sp.add_argument("--primes")
            sp.add_argument("--seed", type=int, default=0)
        if name == "pcurv":
            sp.add_argument("--engine", choices=("direct", "recursion"), default="direct")
        if name == "build-connection":
            sp.add_argument("--kappa", type=int, default=0)
        if name == "steenrod":
            sp.add_argument("--flip-t", action="store_true", help="report under t -> -t")
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise InputError(f"command: expected one of {', '.join(COMMANDS)}")
        if args.prime is not None:
            check_prime(args.prime)
        text, code = HANDLERS[args.command](args)
    except (InputError, PcurvError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: input: malformed data ({exc!r})", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line entry point: ``coxeter-packets {info,exponents,verify,packets}``."""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from .alcove import barycenter, coweight_coset_representatives
from .arith import InadmissibleResidueField
from .report import jsonable
from .rootsys import RootSystemType, build
from .verify import DEFAULT_WEYL_BOUND, LEMMAS, EmptyGrid, run_lemma
from .weyl import char_poly, coxeter_element, cyclotomic_factorization, exponents, format_poly

SCHEMA_VERSION = 1

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _parse_type(text: str) -> RootSystemType:
    try:
        return RootSystemType.parse(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _parse_types(text: Optional[str]) -> Optional[List[RootSystemType]]:
    if text is None or text.strip().lower() == "all":
        return None
    return [_parse_type(s) for s in text.split(",") if s.strip()]


def _parse_ints(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"not a list of integers: {text!r}") from None


def _emit(payload: dict, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        out = {"schema_version": SCHEMA_VERSION}
        out.update(jsonable(payload))
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _matrix_lines(rows) -> List[str]:
    width = max(len(str(x)) for r in rows for x in r)
    return ["  [" + " ".join(str(x).rjust(width) for x in r) + "]" for r in rows]


# -- subcommands -------------------------------------------------------------

def cmd_info(args) -> int:
    t = _parse_type(args.type)
    d = build(t)
    rows = [list(d.cartan.row(i)) for i in range(d.rank)]
    payload = {
        "type": str(t),
        "rank": d.rank,
        "cartan": rows,
        "coxeter_number": d.coxeter_number,
        "exponents": list(exponents(d)),
        "positive_roots": len(d.positive_roots),
        "highest_root": list(d.highest_root),
        "connection_invariants": list(d.connection_group.invariant_factors),
        "barycenter": list(barycenter(d).coords),
        "lambda_order": len(coweight_coset_representatives(d)),
    }
    lines = [f"type: {t}", "cartan:"] + _matrix_lines(rows) + [
        f"h: {d.coxeter_number}",
        f"exponents: {list(exponents(d))}",
        f"highest root: {list(d.highest_root)}",
        f"P/Q: {d.connection_group}",
        "barycenter: (" + ", ".join(str(x) for x in barycenter(d).coords) + ")",
        f"|Lambda|: {payload['lambda_order']}",
    ]
    _emit(payload, args.json, lines)
    return EXIT_PASS


def cmd_exponents(args) -> int:
    t = _parse_type(args.type)
    d = build(t)
    poly = char_poly(coxeter_element(d))
    fac = cyclotomic_factorization(poly, d.coxeter_number)
    payload = {
        "type": str(t),
        "coxeter_number": d.coxeter_number,
        "exponents": list(exponents(d)),
        "coxeter_polynomial": format_poly(poly),
        "cyclotomic_factors": {str(m): e for m, e in sorted(fac.items())},
    }
    factors = " ".join(f"Phi_{m}" + (f"^{e}" if e > 1 else "") for m, e in sorted(fac.items()))
    lines = [
        f"{t}: h = {d.coxeter_number}",
        f"exponents: {' '.join(str(m) for m in exponents(d))}",
        f"det(X - c) = {format_poly(poly)} = {factors}",
    ]
    _emit(payload, args.json, lines)
    return EXIT_PASS


def cmd_verify(args) -> int:
    if args.lemma not in LEMMAS:
        raise UsageError(f"unknown lemma {args.lemma!r}; choose from {', '.join(LEMMAS)}")
    types = _parse_types(args.types)
    qs = _parse_ints(args.q)
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    try:
        rep = run_lemma(args.lemma, types, args.max_rank, qs, args.weyl_bound, args.jobs)
    except EmptyGrid as e:
        raise UsageError(str(e)) from None
    lines = [f"{args.lemma}: {LEMMAS[args.lemma].summary}"]
    for r in rep.results:
        lines.append(f"  {'PASS' if r.passed else 'FAIL'}  {r.instance.descriptor}")
        for e in r.report.entries:
            if not e.passed or args.verbose:
                mark = "ok " if e.passed else "BAD"
                detail = ", ".join(f"{k}={jsonable(v)}" for k, v in e.details.items())
                lines.append(f"        {mark} {e.name}" + (f"  [{detail}]" if detail else ""))
        for n in r.report.notes:
            lines.append(f"        note: {n}")
    for s in rep.skipped:
        lines.append(f"  skip  {s}")
    passed = sum(r.passed for r in rep.results)
    lines.append(f"{'PASS' if rep.passed else 'FAIL'}: {passed}/{len(rep.results)} instances")
    if args.timing:
        lines.append(f"time: {rep.seconds:.2f}s")
    _emit(rep.to_dict(timing=args.timing), args.json, lines)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_packets(args) -> int:
    from .packets import build_packets

    t = _parse_type(args.type)
    d = build(t)
    try:
        table = build_packets(d, args.q)
    except InadmissibleResidueField as e:
        raise UsageError(f"refused: {e}; the construction assumes p does not divide h") from None
    lines = [
        f"{t} q={args.q}: |Z(k)| = {table.central_character_labels} central character label(s)",
        f"per label: {len(table.classes)} classes, torus orbit size {table.class_orbit_size}, "
        f"{len(table.packets)} packets of size {', '.join(str(s) for s in sorted(set(table.packet_sizes)))}",
    ]
    for k, p in enumerate(table.packets):
        lines.append(f"  packet {k}: " + " ".join(str(m) for m in p.members))
    for e in table.report.entries:
        lines.append(f"  {'ok ' if e.passed else 'BAD'} {e.name}")
    _emit(table.to_dict(), args.json, lines)
    return EXIT_PASS if table.report.passed else EXIT_FAIL


# -- argument parsing --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coxeter-packets",
                description="Exact checks on root data, Coxeter elements and simple supercuspidal packets.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("info", help="Cartan matrix, h, exponents, P/Q, barycenter")
    s.add_argument("type")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("exponents", help="exponents from the Coxeter polynomial")
    s.add_argument("type")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_exponents)

    s = sub.add_parser("verify", help="run one lemma over a (type, q) grid")
    s.add_argument("lemma", help=", ".join(LEMMAS))
    s.add_argument("--types", "--type", dest="types", help="comma-separated types, or 'all'")
    s.add_argument("--max-rank", type=int)
    s.add_argument("--q", help="comma-separated residue field sizes")
    s.add_argument("--weyl-bound", type=int, default=DEFAULT_WEYL_BOUND)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--json", action="store_true")
    s.add_argument("--verbose", "-v", action="store_true", help="show passing checks too")
    s.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("packets", help="packet table for a type and residue field size")
    s.add_argument("type")
    s.add_argument("q", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_packets)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # anything else is a bug, not a verdict
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

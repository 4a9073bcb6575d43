"""Command-line entry point: ``cdcongruence <subcommand> ...``.

Exit codes: 0 success / YES, 1 NO, 2 usage or hypothesis error,
3 verification failure or scan discrepancies.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import arith
from .criterion import (
    HypothesisError,
    Instance,
    Witness,
    decide,
    enumerate_witnesses,
    instance_from_document,
    verify_witness,
)
from .group_model import blueprint_document, blueprint_from_witness, degrees_of_product, verify_blueprint
from .scanner import cross_check, scan, write_csv, write_jsonl

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3
JOBS_ENV = "CDCONGRUENCE_JOBS"


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return value


def _int(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}")


def _int_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        bounds = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}")
    if bounds[0] > bounds[1]:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return bounds


def _congruence(text: str) -> tuple[int, int]:
    r, sep, n = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return int(r), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RESIDUE:MODULUS, got {text!r}")


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdcongruence",
        description="Decide whether d is a character degree of a solvable group of order d(d+e).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p):
        p.add_argument("--d", type=_positive_int, required=True, help="candidate degree d")
        p.add_argument("--cofactor", type=_positive_int, required=True, help="d+e")
        p.add_argument("--force", action="store_true", help="allow d not square-free or gcd(d, d+e) > 1")

    p = sub.add_parser("decide", help="print YES and the canonical witness, or NO")
    instance_args(p)
    p = sub.add_parser("witness", help="list canonical witnesses, one JSON document per line")
    instance_args(p)
    p.add_argument("--limit", type=_positive_int, default=10)
    p = sub.add_parser("construct", help="build the group blueprint and check its degrees")
    instance_args(p)
    p = sub.add_parser("verify", help="re-check serialized witnesses")
    p.add_argument("--witness", required=True, help="file with witness JSON lines ('-' for stdin)")
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("scan", help="sweep e and square-free d")
    p.add_argument("--e", type=_int_range, required=True, help="LO..HI or a single value")
    p.add_argument("--d-max", type=_positive_int, required=True)
    p.add_argument("--jobs", type=_positive_int, default=None, help=f"worker processes (default ${JOBS_ENV} or 1)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--output", default="-")
    p.add_argument("--include-out-of-hypothesis", action="store_true")
    p.add_argument("--max-records", type=_positive_int, default=None)
    p.add_argument("--cross-check", type=_positive_int, default=None, metavar="CEILING",
                   help="re-derive verdicts with the brute-force oracle up to this search size")

    p = sub.add_parser("factor", help="prime factorization")
    p.add_argument("n", type=_positive_int)
    p = sub.add_parser("order", help="multiplicative order of A modulo M")
    p.add_argument("a", type=_int)
    p.add_argument("m", type=_int)
    p = sub.add_parser("crt", help="solve x = r (mod n) for pairwise coprime n")
    p.add_argument("congruences", type=_congruence, nargs="*", metavar="R:N")
    return parser


def _instance(args) -> Instance:
    inst = Instance.from_ints(args.d, args.cofactor, force=args.force)
    if inst.hypothesis_flags:
        print("warning: outside hypotheses: " + ", ".join(sorted(inst.hypothesis_flags)), file=sys.stderr)
    return inst


def _cmd_decide(args, out) -> int:
    inst = _instance(args)
    w = decide(inst)
    if w is None:
        print("NO", file=out)
        return EXIT_NO
    print("YES", file=out)
    print(w.to_json(inst), file=out)
    return EXIT_OK


def _cmd_witness(args, out) -> int:
    inst = _instance(args)
    for w in enumerate_witnesses(inst, args.limit):
        print(w.to_json(inst), file=out)
    return EXIT_OK


def _cmd_construct(args, out) -> int:
    inst = _instance(args)
    w = decide(inst)
    if w is None:
        print(f"no witness for {inst}; nothing to construct", file=sys.stderr)
        print("NO", file=out)
        return EXIT_NO
    bp = blueprint_from_witness(inst, w)
    doc = blueprint_document(bp, inst, w)
    doc["report"] = verify_blueprint(bp, inst, degrees_of_product(bp)).to_document()
    print(json.dumps(doc, separators=(",", ":")), file=out)
    return EXIT_OK if doc["report"]["ok"] else EXIT_VERIFY


def _read_witness_lines(path: str) -> list[str]:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read witness file {path}: {exc.strerror}")
    return [ln for ln in text.splitlines() if ln.strip() and ln.strip() not in ("YES", "NO")]


def _cmd_verify(args, out) -> int:
    lines = _read_witness_lines(args.witness)
    if not lines:
        raise UsageError(f"no witness documents in {args.witness}")
    status = EXIT_OK
    for ln in lines:
        try:
            doc = json.loads(ln)
            inst = instance_from_document(doc, force=args.force)
            w = Witness.from_document(doc)
        except (ValueError, KeyError, TypeError) as exc:
            if isinstance(exc, HypothesisError):
                raise
            raise UsageError(f"malformed witness document: {exc}")
        check = verify_witness(inst, w)
        result = {"d": inst.d, "cofactor": inst.cofactor_value, "ok": check.ok,
                  "failures": [f"{code}: {msg}" for code, msg in check.failures]}
        print(json.dumps(result, separators=(",", ":")), file=out)
        if not check:
            status = EXIT_VERIFY
    return status


def _cmd_scan(args, out) -> int:
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    records = list(scan(args.e, args.d_max, args.include_out_of_hypothesis, jobs, args.max_records))
    writer = write_csv if args.format == "csv" else write_jsonl
    if args.output == "-":
        writer(records, out)
    else:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                writer(records, fh)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc.strerror}")
    if args.cross_check is not None:
        problems = cross_check(records, args.cross_check)
        for p in problems:
            print(f"discrepancy d={p.d} e={p.e} {p.kind}: {p.detail}", file=sys.stderr)
        if problems:
            return EXIT_VERIFY
    return EXIT_OK


def _cmd_factor(args, out) -> int:
    f = arith.factor(args.n)
    print(json.dumps({"n": args.n, "factors": [list(e) for e in f.entries]}, separators=(",", ":")), file=out)
    return EXIT_OK


def _cmd_order(args, out) -> int:
    print(arith.multiplicative_order(args.a, args.m), file=out)
    return EXIT_OK


def _cmd_crt(args, out) -> int:
    x, n = arith.crt_solve(args.congruences)
    print(json.dumps({"solution": x, "modulus": n}, separators=(",", ":")), file=out)
    return EXIT_OK


_COMMANDS = {
    "decide": _cmd_decide,
    "witness": _cmd_witness,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
    "factor": _cmd_factor,
    "order": _cmd_order,
    "crt": _cmd_crt,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, out)
    except HypothesisError as exc:
        print(f"error: {exc} (use --force to explore anyway)", file=sys.stderr)
        return EXIT_USAGE
    except arith.DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())

"""Sweep (d, e) ranges, record verdicts, and cross-check them."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .arith import factor, is_square_free
from .criterion import (
    DEFAULT_ORACLE_CEILING,
    Instance,
    Witness,
    decide,
    oracle_cost,
    oracle_decide,
    verify_witness,
)
from .group_model import blueprint_from_witness, verify_blueprint

__all__ = [
    "ScanRecord",
    "ScanTruncated",
    "Discrepancy",
    "CSV_HEADER",
    "order_bound",
    "scan",
    "cross_check",
    "write_csv",
    "write_jsonl",
]

CSV_HEADER = ("d", "e", "order", "verdict", "witness", "bound_ok")


def order_bound(e: int) -> int:
    """Largest possible |G| for a degree d with |G| = d(d+e), e > 1."""
    return e**4 - e**3


@dataclass(frozen=True)
class ScanRecord:
    d: int
    e: int
    order: int
    verdict: str
    witness: Optional[Witness]
    blueprint_ok: bool
    bound_ok: Optional[bool]
    hypothesis_flags: frozenset = field(default_factory=frozenset)

    @property
    def is_yes(self) -> bool:
        return self.verdict == "YES"

    def instance(self) -> Instance:
        return Instance.from_ints(self.d, self.d + self.e, force=bool(self.hypothesis_flags))

    def csv_row(self) -> list[str]:
        verdict = self.verdict
        if self.hypothesis_flags:
            verdict += ";" + ";".join(sorted(self.hypothesis_flags))
        return [
            str(self.d),
            str(self.e),
            str(self.order),
            verdict,
            self.witness.describe() if self.witness is not None else "",
            "" if self.bound_ok is None else str(self.bound_ok).lower(),
        ]

    def to_document(self) -> dict:
        doc = {
            "d": self.d,
            "e": self.e,
            "order": self.order,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_document(self.instance())["pairs"],
            "blueprint_ok": self.blueprint_ok,
            "bound_ok": self.bound_ok,
        }
        if self.hypothesis_flags:
            doc["flags"] = sorted(self.hypothesis_flags)
        return doc


@dataclass(frozen=True)
class ScanTruncated:
    """Marker closing a scan stream that hit its record ceiling."""

    emitted: int


def evaluate(instance: Instance) -> ScanRecord:
    witness = decide(instance)
    blueprint_ok = False
    if witness is not None:
        blueprint_ok = bool(verify_blueprint(blueprint_from_witness(instance, witness), instance))
    e = instance.e
    return ScanRecord(
        d=instance.d,
        e=e,
        order=instance.order,
        verdict="YES" if witness is not None else "NO",
        witness=witness,
        blueprint_ok=blueprint_ok,
        bound_ok=instance.order <= order_bound(e) if e > 1 else None,
        hypothesis_flags=instance.hypothesis_flags,
    )


def _square_free_up_to(limit: int) -> list[int]:
    return [d for d in range(1, limit + 1) if is_square_free(factor(d))]


def _scan_slice(args: tuple[int, tuple[int, ...], bool]) -> list[ScanRecord]:
    e, ds, include_out = args
    records = []
    for d in ds:
        n = d + e
        if n < 1:
            continue
        in_hyp = math.gcd(d, n) == 1 and e > 1
        if not in_hyp and not include_out:
            continue
        records.append(evaluate(Instance.from_ints(d, n, force=not in_hyp)))
    return records


def scan(
    e_range: tuple[int, int],
    d_limit: int,
    include_out_of_hypothesis: bool = False,
    jobs: int = 1,
    max_records: Optional[int] = None,
) -> Iterator[Union[ScanRecord, ScanTruncated]]:
    """Yield one record per square-free ``d <= d_limit`` and ``e`` in range.

    Only instances with ``gcd(d, d+e) = 1`` and ``e > 1`` are produced unless
    ``include_out_of_hypothesis`` is set; those extra records carry their
    hypothesis flags. Records come out in ascending ``(e, d)`` order for any
    ``jobs``. Past ``max_records`` the stream ends with :class:`ScanTruncated`.
    """
    e_lo, e_hi = e_range
    if e_lo > e_hi:
        raise ValueError(f"empty e range {e_lo}..{e_hi}")
    ds = tuple(_square_free_up_to(d_limit))
    tasks = [(e, ds, include_out_of_hypothesis) for e in range(e_lo, e_hi + 1)]

    def emit(slices: Iterable[list[ScanRecord]]):
        count = 0
        for chunk in slices:
            for rec in chunk:
                if max_records is not None and count >= max_records:
                    yield ScanTruncated(count)
                    return
                count += 1
                yield rec

    if jobs <= 1 or len(tasks) <= 1:
        yield from emit(map(_scan_slice, tasks))
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from emit(pool.map(_scan_slice, tasks))


@dataclass(frozen=True)
class Discrepancy:
    d: int
    e: int
    kind: str
    detail: str


def cross_check(
    records: Iterable[Union[ScanRecord, ScanTruncated]], ceiling: int = DEFAULT_ORACLE_CEILING
) -> list[Discrepancy]:
    """Recompute each verdict with the brute-force oracle and re-verify YES records.

    Instances whose oracle space exceeds ``ceiling`` skip the oracle
    comparison but still get witness and blueprint re-verification.
    """
    found = []
    for rec in records:
        if isinstance(rec, ScanTruncated):
            continue
        inst = rec.instance()
        if oracle_cost(inst) <= ceiling:
            expected = oracle_decide(inst, ceiling)
            if expected != rec.is_yes:
                found.append(Discrepancy(rec.d, rec.e, "verdict", f"record {rec.verdict}, oracle {expected}"))
        if rec.is_yes:
            if rec.witness is None:
                found.append(Discrepancy(rec.d, rec.e, "witness", "YES without witness"))
                continue
            check = verify_witness(inst, rec.witness)
            if not check:
                found.append(Discrepancy(rec.d, rec.e, "witness", ", ".join(check.reasons)))
                continue
            report = verify_blueprint(blueprint_from_witness(inst, rec.witness), inst)
            if not report or not rec.blueprint_ok:
                found.append(Discrepancy(rec.d, rec.e, "blueprint", "; ".join(report.details) or "flag false"))
            if rec.e > 1 and not rec.bound_ok:
                found.append(Discrepancy(rec.d, rec.e, "bound", f"{rec.order} > {order_bound(rec.e)}"))
    return found


def write_csv(stream: Iterable[Union[ScanRecord, ScanTruncated]], out: io.TextIOBase) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in stream:
        if isinstance(rec, ScanTruncated):
            out.write(f"# truncated after {rec.emitted} records\n")
        else:
            writer.writerow(rec.csv_row())


def write_jsonl(stream: Iterable[Union[ScanRecord, ScanTruncated]], out: io.TextIOBase) -> None:
    for rec in stream:
        if isinstance(rec, ScanTruncated):
            doc = {"truncated": True, "records": rec.emitted}
        else:
            doc = rec.to_document()
        out.write(json.dumps(doc, separators=(",", ":")) + "\n")

"""Scan-table serialization: CSV and JSON-lines.

Column schema (exact header order):

    delay_s, counts_a, counts_b, counts_cc, int_time_s,
    rate_a_hz, rate_b_hz, rate_cc_hz, seed

Floats are written with ``repr`` (shortest round-trip form), so a given
record list always serializes to identical bytes.
"""

from __future__ import annotations

import io
import json
from typing import Iterable, Sequence

from .detection import ScanRecord

CSV_COLUMNS = (
    "delay_s",
    "counts_a",
    "counts_b",
    "counts_cc",
    "int_time_s",
    "rate_a_hz",
    "rate_b_hz",
    "rate_cc_hz",
    "seed",
)
CSV_HEADER = ",".join(CSV_COLUMNS)


def _row(record: ScanRecord) -> str:
    return ",".join(
        (
            repr(record.delay),
            str(record.counts_a),
            str(record.counts_b),
            str(record.counts_cc),
            repr(record.integration_time),
            repr(record.rate_a),
            repr(record.rate_b),
            repr(record.rate_cc),
            str(record.rng_seed),
        )
    )


def to_csv(records: Sequence[ScanRecord]) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for record in records:
        out.write(_row(record) + "\n")
    return out.getvalue()


def to_json_lines(records: Sequence[ScanRecord]) -> str:
    out = io.StringIO()
    for record in records:
        out.write(
            json.dumps(
                {
                    "delay_s": record.delay,
                    "counts_a": record.counts_a,
                    "counts_b": record.counts_b,
                    "counts_cc": record.counts_cc,
                    "int_time_s": record.integration_time,
                    "rate_a_hz": record.rate_a,
                    "rate_b_hz": record.rate_b,
                    "rate_cc_hz": record.rate_cc,
                    "seed": record.rng_seed,
                },
                sort_keys=False,
            )
            + "\n"
        )
    return out.getvalue()


def _record_from_fields(fields: dict) -> ScanRecord:
    return ScanRecord(
        delay=float(fields["delay_s"]),
        counts_a=int(fields["counts_a"]),
        counts_b=int(fields["counts_b"]),
        counts_cc=int(fields["counts_cc"]),
        integration_time=float(fields["int_time_s"]),
        rng_seed=int(fields["seed"]),
    )


def from_csv(text: str) -> list[ScanRecord]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty scan table")
    header = lines[0].split(",")
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(
            f"unexpected scan-table header {lines[0]!r}; expected {CSV_HEADER!r}"
        )
    records = []
    for line in lines[1:]:
        values = line.split(",")
        if len(values) != len(CSV_COLUMNS):
            raise ValueError(f"malformed scan-table row: {line!r}")
        records.append(_record_from_fields(dict(zip(CSV_COLUMNS, values))))
    return records


def from_json_lines(text: str) -> list[ScanRecord]:
    records = []
    for line in text.splitlines():
        if not line.strip():
            continue
        records.append(_record_from_fields(json.loads(line)))
    return records


def read_records(text: str) -> list[ScanRecord]:
    """Parse either serialization, sniffing the first non-blank line."""
    for line in text.splitlines():
        if line.strip():
            first = line.strip()
            break
    else:
        raise ValueError("empty scan table")
    if first.startswith("{"):
        return from_json_lines(text)
    return from_csv(text)

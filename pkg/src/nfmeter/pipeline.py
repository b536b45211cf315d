"""End-to-end extraction: pcap files -> sorted, finalized flow records.

Parallelism shards whole files across processes; per-file results are
concatenated in input order and stably sorted by (first_seen, five-tuple),
so the output is byte-identical for any worker count.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .features import FlowRecord, finalize
from .flows import DEFAULT_ACTIVE_TIMEOUT_US, DEFAULT_IDLE_TIMEOUT_US, FlowTable
from .l7 import L7Table
from .packets import SkipReason, open_capture


@dataclass
class ExtractStats:
    frames: int = 0
    decoded: int = 0
    flows: int = 0
    skipped: Counter = field(default_factory=Counter)

    def add(self, other: "ExtractStats") -> None:
        self.frames += other.frames
        self.decoded += other.decoded
        self.flows += other.flows
        self.skipped.update(other.skipped)

    def skip_summary(self) -> str:
        if not self.skipped:
            return "none"
        return ", ".join(
            f"{reason.value}={count}" for reason, count in sorted(
                self.skipped.items(), key=lambda kv: kv[0].value
            )
        )


def extract_capture(
    path: str,
    idle_timeout_us: int = DEFAULT_IDLE_TIMEOUT_US,
    active_timeout_us: int = DEFAULT_ACTIVE_TIMEOUT_US,
    l7_table: L7Table | None = None,
) -> tuple[list[FlowRecord], ExtractStats]:
    """Meter one capture file into flow records sorted by (first_seen, key)."""
    l7_table = l7_table or L7Table.default()
    reader = open_capture(path)
    table = FlowTable(idle_timeout_us, active_timeout_us)
    upsert = table.upsert_packet
    for pkt in reader:
        upsert(pkt)
    records = [finalize(acc, l7_table) for acc in table.flush()]
    records.sort(key=FlowRecord.sort_key)
    stats = ExtractStats(
        frames=reader.frames,
        decoded=reader.decoded,
        flows=len(records),
        skipped=Counter(reader.skipped),
    )
    return records, stats


def _extract_one(
    args: tuple[str, int, int, L7Table],
) -> tuple[list[FlowRecord], ExtractStats]:
    path, idle_us, active_us, l7_table = args
    return extract_capture(path, idle_us, active_us, l7_table)


def extract_many(
    paths: list[str],
    idle_timeout_us: int = DEFAULT_IDLE_TIMEOUT_US,
    active_timeout_us: int = DEFAULT_ACTIVE_TIMEOUT_US,
    l7_table: L7Table | None = None,
    workers: int = 1,
) -> tuple[list[FlowRecord], ExtractStats]:
    """Meter several captures; flows never span file boundaries."""
    l7_table = l7_table or L7Table.default()
    totals = ExtractStats()
    records: list[FlowRecord] = []
    if workers <= 1 or len(paths) <= 1:
        results = (extract_capture(p, idle_timeout_us, active_timeout_us, l7_table) for p in paths)
        for recs, stats in results:
            records.extend(recs)
            totals.add(stats)
    else:
        jobs = [(p, idle_timeout_us, active_timeout_us, l7_table) for p in paths]
        with ProcessPoolExecutor(max_workers=min(workers, len(paths))) as pool:
            for recs, stats in pool.map(_extract_one, jobs):
                records.extend(recs)
                totals.add(stats)
    records.sort(key=FlowRecord.sort_key)
    return records, totals


__all__ = ["ExtractStats", "extract_capture", "extract_many", "SkipReason"]

"""Attach binary and categorical attack labels by matching ground-truth events.

Ground truth is a CSV with columns src_ip,dst_ip,src_port,dst_port,protocol,
attack and optional start,end columns (epoch seconds). `*` wildcards the
port/protocol columns. Matching is bidirectional; among multiple matching
events the most specific one (fewest wildcards) wins, then file order.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .errors import SchemaError
from .features import FlowRecord

REQUIRED_COLUMNS = ("src_ip", "dst_ip", "src_port", "dst_port", "protocol", "attack")
BENIGN = "Benign"
WILDCARD = "*"


@dataclass(slots=True)
class GroundTruthEvent:
    """One attack event; "*" in an IP field and None in a port/protocol
    field mean wildcard."""

    src_ip: str
    dst_ip: str
    src_port: int | None
    dst_port: int | None
    protocol: int | None
    attack: str
    start_us: int | None = None
    end_us: int | None = None
    order: int = 0

    @property
    def wildcards(self) -> int:
        return (
            (self.src_ip == WILDCARD)
            + (self.dst_ip == WILDCARD)
            + (self.src_port is None)
            + (self.dst_port is None)
            + (self.protocol is None)
        )

    def matches(
        self,
        src_ip: str,
        dst_ip: str,
        src_port: int,
        dst_port: int,
        protocol: int,
        first_us: int | None,
        last_us: int | None,
        use_windows: bool,
    ) -> bool:
        if self.protocol is not None and self.protocol != protocol:
            return False
        forward = (
            self.src_ip in (WILDCARD, src_ip)
            and self.dst_ip in (WILDCARD, dst_ip)
            and (self.src_port is None or self.src_port == src_port)
            and (self.dst_port is None or self.dst_port == dst_port)
        )
        reverse = (
            self.src_ip in (WILDCARD, dst_ip)
            and self.dst_ip in (WILDCARD, src_ip)
            and (self.src_port is None or self.src_port == dst_port)
            and (self.dst_port is None or self.dst_port == src_port)
        )
        if not (forward or reverse):
            return False
        if use_windows and self.start_us is not None and self.end_us is not None and first_us is not None:
            if last_us is None:
                last_us = first_us
            if last_us < self.start_us or first_us > self.end_us:
                return False
        return True


def _parse_port(text: str) -> int | None:
    if text == "*":
        return None
    port = int(text)
    if not 0 <= port <= 65535:
        raise ValueError(f"port {port} out of range")
    return port


def _parse_time_us(text: str) -> int | None:
    if not text:
        return None
    return round(float(text) * 1_000_000)


class LabelIndex:
    """Immutable lookup over ground-truth events.

    Events naming both IPs are bucketed by the unordered pair; events with a
    wildcard IP cannot be bucketed and are scanned for every flow.
    """

    def __init__(self, events: list[GroundTruthEvent], skipped: list[str]) -> None:
        self.events = events
        self.skipped = skipped
        self._by_pair: dict[tuple[str, str], list[GroundTruthEvent]] = {}
        self._wildcard_ip: list[GroundTruthEvent] = []
        for ev in events:
            if WILDCARD in (ev.src_ip, ev.dst_ip):
                self._wildcard_ip.append(ev)
                continue
            pair = (ev.src_ip, ev.dst_ip) if ev.src_ip <= ev.dst_ip else (ev.dst_ip, ev.src_ip)
            self._by_pair.setdefault(pair, []).append(ev)

    def __len__(self) -> int:
        return len(self.events)

    def match(
        self,
        src_ip: str,
        dst_ip: str,
        src_port: int,
        dst_port: int,
        protocol: int,
        first_us: int | None = None,
        last_us: int | None = None,
        use_windows: bool = True,
    ) -> GroundTruthEvent | None:
        pair = (src_ip, dst_ip) if src_ip <= dst_ip else (dst_ip, src_ip)
        best: GroundTruthEvent | None = None
        best_rank: tuple[int, int] | None = None
        candidates = list(self._by_pair.get(pair, ())) + self._wildcard_ip
        for ev in candidates:
            if ev.matches(
                src_ip, dst_ip, src_port, dst_port, protocol, first_us, last_us, use_windows
            ):
                rank = (ev.wildcards, ev.order)
                if best_rank is None or rank < best_rank:
                    best, best_rank = ev, rank
        return best


def load_ground_truth(path: str) -> LabelIndex:
    """Load an event CSV; malformed rows are skipped and reported."""
    events: list[GroundTruthEvent] = []
    skipped: list[str] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, no header") from None
        positions = {name: i for i, name in enumerate(header)}
        missing = [name for name in REQUIRED_COLUMNS if name not in positions]
        if missing:
            raise SchemaError(f"{path}: missing required columns {missing}")
        has_window = "start" in positions and "end" in positions
        for row in reader:
            line = reader.line_num
            try:
                attack = row[positions["attack"]]
                if not attack or attack == BENIGN:
                    raise ValueError(f"attack category must be non-empty and not {BENIGN!r}")
                proto_text = row[positions["protocol"]]
                start_us = end_us = None
                if has_window:
                    start_us = _parse_time_us(row[positions["start"]])
                    end_us = _parse_time_us(row[positions["end"]])
                    if (start_us is None) != (end_us is None):
                        raise ValueError("start and end must be given together")
                    if start_us is not None and start_us > end_us:  # type: ignore[operator]
                        raise ValueError("start after end")
                events.append(
                    GroundTruthEvent(
                        src_ip=row[positions["src_ip"]],
                        dst_ip=row[positions["dst_ip"]],
                        src_port=_parse_port(row[positions["src_port"]]),
                        dst_port=_parse_port(row[positions["dst_port"]]),
                        protocol=None if proto_text == "*" else int(proto_text),
                        attack=attack,
                        start_us=start_us,
                        end_us=end_us,
                        order=len(events),
                    )
                )
            except (ValueError, IndexError) as exc:
                skipped.append(f"line {line}: {exc}")
    return LabelIndex(events, skipped)


@dataclass
class LabelSummary:
    """Distribution of labels produced by one labelling pass."""

    total: int = 0
    attack: int = 0
    categories: Counter = field(default_factory=Counter)
    skipped_events: list[str] = field(default_factory=list)

    @property
    def benign(self) -> int:
        return self.total - self.attack

    @property
    def ratio(self) -> str:
        """Benign-to-attack ratio out of ten, e.g. '9.6 to 0.4'."""
        if self.total == 0:
            return "0.0 to 0.0"
        benign_tenths = self.benign / self.total * 10
        return f"{benign_tenths:.1f} to {10 - benign_tenths:.1f}"


def label_flow(index: LabelIndex, record: FlowRecord, use_windows: bool = True) -> FlowRecord:
    """Set record.label/attack in place from the best matching event.

    Records without flow-time metadata (first/last_seen_us of 0, as produced
    by reading a CSV back) match windowed events on the five-tuple alone.
    """
    first = record.first_seen_us or None
    last = record.last_seen_us or None
    event = index.match(
        record.IPV4_SRC_ADDR,
        record.IPV4_DST_ADDR,
        record.L4_SRC_PORT,
        record.L4_DST_PORT,
        record.PROTOCOL,
        first,
        last,
        use_windows,
    )
    if event is None:
        record.label = 0
        record.attack = BENIGN
    else:
        record.label = 1
        record.attack = event.attack
    return record


def label_dataset(
    records: Iterable[FlowRecord], index: LabelIndex, use_windows: bool = True
) -> tuple[list[FlowRecord], LabelSummary]:
    """Label every record exactly once; returns them with a distribution."""
    summary = LabelSummary(skipped_events=list(index.skipped))
    out: list[FlowRecord] = []
    for record in records:
        label_flow(index, record, use_windows)
        summary.total += 1
        summary.attack += record.label or 0
        summary.categories[record.attack] += 1
        out.append(record)
    return out, summary

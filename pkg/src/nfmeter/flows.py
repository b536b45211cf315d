"""Bidirectional flow aggregation with idle/active timeout expiry.

Flows are keyed by the unordered five-tuple; the first packet fixes the
client/server orientation. Expiry is evaluated lazily against packet
timestamps (upsert) or an explicit clock (expire_flows) — there is no
wall-clock involvement, so runs are deterministic.
"""

from __future__ import annotations

from enum import Enum

from .features import FlowAccumulator, FlowKey
from .packets import PacketRecord

DEFAULT_IDLE_TIMEOUT_US = 30 * 1_000_000
DEFAULT_ACTIVE_TIMEOUT_US = 120 * 1_000_000

_CanonicalKey = tuple[tuple[str, int], tuple[str, int], int]


class FlowEvent(Enum):
    NEW_FLOW = "new"
    CONTINUED = "continued"
    EXPIRED_THEN_NEW = "expired_then_new"


def _canonical(src_ip: str, src_port: int, dst_ip: str, dst_port: int, proto: int) -> _CanonicalKey:
    a = (src_ip, src_port)
    b = (dst_ip, dst_port)
    return (a, b, proto) if a <= b else (b, a, proto)


class FlowTable:
    """Single-writer map of active flows plus a queue of expired ones.

    A packet arriving exactly at last_seen + idle_timeout (or first_seen +
    active_timeout) still continues the flow; one microsecond later it
    expires the old flow and starts a new one.
    """

    def __init__(
        self,
        idle_timeout_us: int = DEFAULT_IDLE_TIMEOUT_US,
        active_timeout_us: int = DEFAULT_ACTIVE_TIMEOUT_US,
    ) -> None:
        if idle_timeout_us <= 0 or active_timeout_us <= 0:
            raise ValueError("timeouts must be positive")
        self.idle_timeout_us = idle_timeout_us
        self.active_timeout_us = active_timeout_us
        self._active: dict[_CanonicalKey, FlowAccumulator] = {}
        self._expired: list[FlowAccumulator] = []

    def __len__(self) -> int:
        return len(self._active)

    def _timed_out(self, acc: FlowAccumulator, now_us: int) -> bool:
        return (
            now_us - acc.last_seen_us > self.idle_timeout_us
            or now_us - acc.first_seen_us > self.active_timeout_us
        )

    def _expiry_us(self, acc: FlowAccumulator) -> int:
        return min(
            acc.last_seen_us + self.idle_timeout_us,
            acc.first_seen_us + self.active_timeout_us,
        )

    def upsert_packet(self, pkt: PacketRecord) -> FlowEvent:
        ckey = _canonical(pkt.src_ip, pkt.src_port, pkt.dst_ip, pkt.dst_port, pkt.l4_protocol)
        acc = self._active.get(ckey)
        if acc is None:
            acc = FlowAccumulator(
                FlowKey(pkt.src_ip, pkt.dst_ip, pkt.src_port, pkt.dst_port, pkt.l4_protocol),
                pkt.timestamp_us,
            )
            self._active[ckey] = acc
            acc.accumulate(pkt, True)
            return FlowEvent.NEW_FLOW
        if self._timed_out(acc, pkt.timestamp_us):
            self._expired.append(acc)
            acc = FlowAccumulator(
                FlowKey(pkt.src_ip, pkt.dst_ip, pkt.src_port, pkt.dst_port, pkt.l4_protocol),
                pkt.timestamp_us,
            )
            self._active[ckey] = acc
            acc.accumulate(pkt, True)
            return FlowEvent.EXPIRED_THEN_NEW
        key = acc.key
        from_client = pkt.src_ip == key.client_ip and pkt.src_port == key.client_port
        acc.accumulate(pkt, from_client)
        return FlowEvent.CONTINUED

    def expire_flows(self, now_us: int) -> list[FlowAccumulator]:
        """Drain every flow expired by now_us, in expiry order.

        Includes flows already queued by upsert_packet. Ties are broken by
        first_seen, then FlowKey.
        """
        due = self._expired
        self._expired = []
        for ckey, acc in list(self._active.items()):
            if self._timed_out(acc, now_us):
                del self._active[ckey]
                due.append(acc)
        due.sort(key=lambda a: (self._expiry_us(a), a.first_seen_us, a.key))
        return due

    def flush(self) -> list[FlowAccumulator]:
        """Drain everything — queued expired flows and all active flows.

        Ordered by (first_seen, FlowKey); the table is empty afterwards.
        """
        out = self._expired + list(self._active.values())
        self._expired = []
        self._active.clear()
        out.sort(key=lambda a: (a.first_seen_us, a.key))
        return out

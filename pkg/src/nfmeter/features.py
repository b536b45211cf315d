"""Per-flow feature accumulation and the 43-feature flow record.

Direction convention: IN / "src->dst" means client->server, where the client
is whichever endpoint sent the first packet of the flow. Byte counters and
packet-size features all use the IP total-length field, so SHORTEST/LONGEST
_FLOW_PKT coincide with MIN/MAX_IP_PKT_LEN here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import EmptyFlowError
from .l7 import L7Table, parse_dns, parse_ftp_response
from .packets import PROTO_ICMP, PROTO_TCP, PROTO_UDP, PacketRecord

# Column order of the extended feature set; also the CSV column order.
FEATURES: tuple[str, ...] = (
    "IPV4_SRC_ADDR",
    "IPV4_DST_ADDR",
    "L4_SRC_PORT",
    "L4_DST_PORT",
    "PROTOCOL",
    "L7_PROTO",
    "IN_BYTES",
    "OUT_BYTES",
    "IN_PKTS",
    "OUT_PKTS",
    "FLOW_DURATION_MILLISECONDS",
    "TCP_FLAGS",
    "CLIENT_TCP_FLAGS",
    "SERVER_TCP_FLAGS",
    "DURATION_IN",
    "DURATION_OUT",
    "MIN_TTL",
    "MAX_TTL",
    "LONGEST_FLOW_PKT",
    "SHORTEST_FLOW_PKT",
    "MIN_IP_PKT_LEN",
    "MAX_IP_PKT_LEN",
    "SRC_TO_DST_SECOND_BYTES",
    "DST_TO_SRC_SECOND_BYTES",
    "RETRANSMITTED_IN_BYTES",
    "RETRANSMITTED_IN_PKTS",
    "RETRANSMITTED_OUT_BYTES",
    "RETRANSMITTED_OUT_PKTS",
    "SRC_TO_DST_AVG_THROUGHPUT",
    "DST_TO_SRC_AVG_THROUGHPUT",
    "NUM_PKTS_UP_TO_128_BYTES",
    "NUM_PKTS_128_TO_256_BYTES",
    "NUM_PKTS_256_TO_512_BYTES",
    "NUM_PKTS_512_TO_1024_BYTES",
    "NUM_PKTS_1024_TO_1514_BYTES",
    "TCP_WIN_MAX_IN",
    "TCP_WIN_MAX_OUT",
    "ICMP_TYPE",
    "ICMP_IPV4_TYPE",
    "DNS_QUERY_ID",
    "DNS_QUERY_TYPE",
    "DNS_TTL_ANSWER",
    "FTP_COMMAND_RET_CODE",
)

# The reduced 12-feature set keeps its historical column order, which places
# TCP_FLAGS before FLOW_DURATION_MILLISECONDS.
BASIC_FEATURES: tuple[str, ...] = (
    "IPV4_SRC_ADDR",
    "IPV4_DST_ADDR",
    "L4_SRC_PORT",
    "L4_DST_PORT",
    "PROTOCOL",
    "L7_PROTO",
    "IN_BYTES",
    "OUT_BYTES",
    "IN_PKTS",
    "OUT_PKTS",
    "TCP_FLAGS",
    "FLOW_DURATION_MILLISECONDS",
)

RATE_FEATURES: frozenset[str] = frozenset(
    (
        "SRC_TO_DST_SECOND_BYTES",
        "DST_TO_SRC_SECOND_BYTES",
        "SRC_TO_DST_AVG_THROUGHPUT",
        "DST_TO_SRC_AVG_THROUGHPUT",
    )
)

ADDRESS_FEATURES: frozenset[str] = frozenset(("IPV4_SRC_ADDR", "IPV4_DST_ADDR"))

_FIN, _SYN = 0x01, 0x02
_SERIAL_HALF = 0x8000_0000
_U32 = 0xFFFF_FFFF

DNS_PORT = 53
FTP_CONTROL_PORT = 21


class FlowKey(NamedTuple):
    """Oriented five-tuple; the client is the sender of the first packet."""

    client_ip: str
    server_ip: str
    client_port: int
    server_port: int
    l4_protocol: int


def detect_retransmission(
    boundary: int | None, seq: int, payload_len: int
) -> tuple[bool, int]:
    """Classify one payload-bearing TCP segment against a direction's history.

    Returns (is_retransmission, new_boundary). A segment is a retransmission
    iff its whole range [seq, seq+payload_len) sits at or below the highest
    sequence boundary seen so far in that direction. Comparisons use serial
    (modulo 2^32) arithmetic so wrapping streams behave.
    """
    end = (seq + payload_len) & _U32
    if boundary is None:
        return False, end
    if ((boundary - end) & _U32) < _SERIAL_HALF:  # end <= boundary, serially
        return True, boundary
    return False, end


@dataclass(slots=True)
class FlowRecord:
    """One finalized flow: the 43 features plus labels and flow-time metadata.

    first_seen_us / last_seen_us are pipeline metadata (used for sorting and
    time-window label matching); they are not CSV columns.
    """

    IPV4_SRC_ADDR: str
    IPV4_DST_ADDR: str
    L4_SRC_PORT: int
    L4_DST_PORT: int
    PROTOCOL: int
    L7_PROTO: int
    IN_BYTES: int
    OUT_BYTES: int
    IN_PKTS: int
    OUT_PKTS: int
    FLOW_DURATION_MILLISECONDS: int
    TCP_FLAGS: int
    CLIENT_TCP_FLAGS: int
    SERVER_TCP_FLAGS: int
    DURATION_IN: int
    DURATION_OUT: int
    MIN_TTL: int
    MAX_TTL: int
    LONGEST_FLOW_PKT: int
    SHORTEST_FLOW_PKT: int
    MIN_IP_PKT_LEN: int
    MAX_IP_PKT_LEN: int
    SRC_TO_DST_SECOND_BYTES: float
    DST_TO_SRC_SECOND_BYTES: float
    RETRANSMITTED_IN_BYTES: int
    RETRANSMITTED_IN_PKTS: int
    RETRANSMITTED_OUT_BYTES: int
    RETRANSMITTED_OUT_PKTS: int
    SRC_TO_DST_AVG_THROUGHPUT: float
    DST_TO_SRC_AVG_THROUGHPUT: float
    NUM_PKTS_UP_TO_128_BYTES: int
    NUM_PKTS_128_TO_256_BYTES: int
    NUM_PKTS_256_TO_512_BYTES: int
    NUM_PKTS_512_TO_1024_BYTES: int
    NUM_PKTS_1024_TO_1514_BYTES: int
    TCP_WIN_MAX_IN: int
    TCP_WIN_MAX_OUT: int
    ICMP_TYPE: int
    ICMP_IPV4_TYPE: int
    DNS_QUERY_ID: int
    DNS_QUERY_TYPE: int
    DNS_TTL_ANSWER: int
    FTP_COMMAND_RET_CODE: int
    label: int | None = None
    attack: str | None = None
    dataset: str | None = None
    first_seen_us: int = 0
    last_seen_us: int = 0

    @property
    def key(self) -> FlowKey:
        return FlowKey(
            self.IPV4_SRC_ADDR,
            self.IPV4_DST_ADDR,
            self.L4_SRC_PORT,
            self.L4_DST_PORT,
            self.PROTOCOL,
        )

    def sort_key(self) -> tuple:
        return (self.first_seen_us,) + self.key


class FlowAccumulator:
    """Mutable per-flow state updated packet by packet.

    Owned by exactly one flow table; finalize() reads a snapshot and is pure.
    """

    __slots__ = (
        "key",
        "first_seen_us",
        "last_seen_us",
        "in_bytes",
        "in_pkts",
        "out_bytes",
        "out_pkts",
        "in_first_us",
        "in_last_us",
        "out_first_us",
        "out_last_us",
        "client_flags",
        "server_flags",
        "win_max_in",
        "win_max_out",
        "retrans_in_bytes",
        "retrans_in_pkts",
        "retrans_out_bytes",
        "retrans_out_pkts",
        "seq_bound_in",
        "seq_bound_out",
        "min_ttl",
        "max_ttl",
        "min_ip_len",
        "max_ip_len",
        "pkts_128",
        "pkts_256",
        "pkts_512",
        "pkts_1024",
        "pkts_1514",
        "icmp_type",
        "icmp_code",
        "dns_query_id",
        "dns_query_type",
        "dns_query_seen",
        "dns_ttl_answer",
        "dns_ttl_seen",
        "ftp_ret_code",
    )

    def __init__(self, key: FlowKey, first_timestamp_us: int) -> None:
        self.key = key
        self.first_seen_us = first_timestamp_us
        self.last_seen_us = first_timestamp_us
        self.in_bytes = 0
        self.in_pkts = 0
        self.out_bytes = 0
        self.out_pkts = 0
        self.in_first_us = 0
        self.in_last_us = 0
        self.out_first_us = 0
        self.out_last_us = 0
        self.client_flags = 0
        self.server_flags = 0
        self.win_max_in = 0
        self.win_max_out = 0
        self.retrans_in_bytes = 0
        self.retrans_in_pkts = 0
        self.retrans_out_bytes = 0
        self.retrans_out_pkts = 0
        self.seq_bound_in: int | None = None
        self.seq_bound_out: int | None = None
        self.min_ttl = 0
        self.max_ttl = 0
        self.min_ip_len = 0
        self.max_ip_len = 0
        self.pkts_128 = 0
        self.pkts_256 = 0
        self.pkts_512 = 0
        self.pkts_1024 = 0
        self.pkts_1514 = 0
        self.icmp_type: int | None = None
        self.icmp_code: int | None = None
        self.dns_query_id = 0
        self.dns_query_type = 0
        self.dns_query_seen = False
        self.dns_ttl_answer = 0
        self.dns_ttl_seen = False
        self.ftp_ret_code = 0

    @property
    def packets(self) -> int:
        return self.in_pkts + self.out_pkts

    def accumulate(self, pkt: PacketRecord, from_client: bool) -> None:
        ts = pkt.timestamp_us
        if ts < self.first_seen_us:
            self.first_seen_us = ts
        if ts > self.last_seen_us:
            self.last_seen_us = ts

        length = pkt.ip_total_length
        if self.packets == 0:
            self.min_ip_len = length
            self.max_ip_len = length
            self.min_ttl = pkt.ttl
            self.max_ttl = pkt.ttl
        else:
            if length < self.min_ip_len:
                self.min_ip_len = length
            if length > self.max_ip_len:
                self.max_ip_len = length
            if pkt.ttl < self.min_ttl:
                self.min_ttl = pkt.ttl
            if pkt.ttl > self.max_ttl:
                self.max_ttl = pkt.ttl

        if length <= 512:
            if length <= 128:
                self.pkts_128 += 1
            elif length <= 256:
                self.pkts_256 += 1
            else:
                self.pkts_512 += 1
        elif length <= 1024:
            self.pkts_1024 += 1
        elif length <= 1514:
            self.pkts_1514 += 1

        if from_client:
            if self.in_pkts == 0:
                self.in_first_us = ts
                self.in_last_us = ts
            else:
                if ts < self.in_first_us:
                    self.in_first_us = ts
                if ts > self.in_last_us:
                    self.in_last_us = ts
            self.in_pkts += 1
            self.in_bytes += length
        else:
            if self.out_pkts == 0:
                self.out_first_us = ts
                self.out_last_us = ts
            else:
                if ts < self.out_first_us:
                    self.out_first_us = ts
                if ts > self.out_last_us:
                    self.out_last_us = ts
            self.out_pkts += 1
            self.out_bytes += length

        proto = pkt.l4_protocol
        if proto == PROTO_TCP:
            if pkt.tcp_flags is not None:
                if from_client:
                    self.client_flags |= pkt.tcp_flags
                    if pkt.tcp_window > self.win_max_in:  # type: ignore[operator]
                        self.win_max_in = pkt.tcp_window  # type: ignore[assignment]
                else:
                    self.server_flags |= pkt.tcp_flags
                    if pkt.tcp_window > self.win_max_out:  # type: ignore[operator]
                        self.win_max_out = pkt.tcp_window  # type: ignore[assignment]
                plen = pkt.tcp_payload_len
                if plen:  # pure ACKs never count as retransmissions
                    if from_client:
                        retx, self.seq_bound_in = detect_retransmission(
                            self.seq_bound_in, pkt.tcp_seq, plen  # type: ignore[arg-type]
                        )
                        if retx:
                            self.retrans_in_bytes += length
                            self.retrans_in_pkts += 1
                    else:
                        retx, self.seq_bound_out = detect_retransmission(
                            self.seq_bound_out, pkt.tcp_seq, plen  # type: ignore[arg-type]
                        )
                        if retx:
                            self.retrans_out_bytes += length
                            self.retrans_out_pkts += 1
            # Reply codes come from the endpoint holding the control port.
            source_port = self.key.client_port if from_client else self.key.server_port
            if source_port == FTP_CONTROL_PORT and pkt.payload:
                code = parse_ftp_response(pkt.payload)
                if code is not None:
                    self.ftp_ret_code = code
        elif proto == PROTO_UDP:
            if (
                (self.key.client_port == DNS_PORT or self.key.server_port == DNS_PORT)
                and pkt.payload
                and not (self.dns_query_seen and self.dns_ttl_seen)
            ):
                msg = parse_dns(pkt.payload, from_server=not from_client)
                if msg is not None:
                    if not msg.is_response:
                        if not self.dns_query_seen:
                            self.dns_query_seen = True
                            self.dns_query_id = msg.transaction_id
                            self.dns_query_type = msg.query_type
                    elif not self.dns_ttl_seen and msg.first_a_ttl is not None:
                        self.dns_ttl_seen = True
                        self.dns_ttl_answer = msg.first_a_ttl
        elif proto == PROTO_ICMP:
            if self.icmp_type is None and pkt.icmp_type is not None:
                self.icmp_type = pkt.icmp_type
                self.icmp_code = pkt.icmp_code


def finalize(acc: FlowAccumulator, l7_table: L7Table) -> FlowRecord:
    """Turn an accumulator into an immutable 43-feature record.

    Rates divide by the millisecond-truncated duration; a 0 ms flow uses a
    1 s divisor so single-packet flows get finite, stable rates.
    """
    if acc.packets == 0:
        raise EmptyFlowError("cannot finalize a flow with no packets")
    key = acc.key
    duration_ms = (acc.last_seen_us - acc.first_seen_us) // 1000
    duration_in = (acc.in_last_us - acc.in_first_us) // 1000 if acc.in_pkts >= 2 else 0
    duration_out = (acc.out_last_us - acc.out_first_us) // 1000 if acc.out_pkts >= 2 else 0
    secs = duration_ms / 1000 if duration_ms > 0 else 1.0
    icmp_type = acc.icmp_type if acc.icmp_type is not None else 0
    icmp_code = acc.icmp_code if acc.icmp_code is not None else 0
    return FlowRecord(
        IPV4_SRC_ADDR=key.client_ip,
        IPV4_DST_ADDR=key.server_ip,
        L4_SRC_PORT=key.client_port,
        L4_DST_PORT=key.server_port,
        PROTOCOL=key.l4_protocol,
        L7_PROTO=l7_table.classify(key.l4_protocol, key.client_port, key.server_port),
        IN_BYTES=acc.in_bytes,
        OUT_BYTES=acc.out_bytes,
        IN_PKTS=acc.in_pkts,
        OUT_PKTS=acc.out_pkts,
        FLOW_DURATION_MILLISECONDS=duration_ms,
        TCP_FLAGS=acc.client_flags | acc.server_flags,
        CLIENT_TCP_FLAGS=acc.client_flags,
        SERVER_TCP_FLAGS=acc.server_flags,
        DURATION_IN=duration_in,
        DURATION_OUT=duration_out,
        MIN_TTL=acc.min_ttl,
        MAX_TTL=acc.max_ttl,
        LONGEST_FLOW_PKT=acc.max_ip_len,
        SHORTEST_FLOW_PKT=acc.min_ip_len,
        MIN_IP_PKT_LEN=acc.min_ip_len,
        MAX_IP_PKT_LEN=acc.max_ip_len,
        SRC_TO_DST_SECOND_BYTES=acc.in_bytes / secs,
        DST_TO_SRC_SECOND_BYTES=acc.out_bytes / secs,
        RETRANSMITTED_IN_BYTES=acc.retrans_in_bytes,
        RETRANSMITTED_IN_PKTS=acc.retrans_in_pkts,
        RETRANSMITTED_OUT_BYTES=acc.retrans_out_bytes,
        RETRANSMITTED_OUT_PKTS=acc.retrans_out_pkts,
        SRC_TO_DST_AVG_THROUGHPUT=8 * acc.in_bytes / secs,
        DST_TO_SRC_AVG_THROUGHPUT=8 * acc.out_bytes / secs,
        NUM_PKTS_UP_TO_128_BYTES=acc.pkts_128,
        NUM_PKTS_128_TO_256_BYTES=acc.pkts_256,
        NUM_PKTS_256_TO_512_BYTES=acc.pkts_512,
        NUM_PKTS_512_TO_1024_BYTES=acc.pkts_1024,
        NUM_PKTS_1024_TO_1514_BYTES=acc.pkts_1514,
        TCP_WIN_MAX_IN=acc.win_max_in,
        TCP_WIN_MAX_OUT=acc.win_max_out,
        ICMP_TYPE=icmp_type * 256 + icmp_code,
        ICMP_IPV4_TYPE=icmp_type,
        DNS_QUERY_ID=acc.dns_query_id,
        DNS_QUERY_TYPE=acc.dns_query_type,
        DNS_TTL_ANSWER=acc.dns_ttl_answer,
        FTP_COMMAND_RET_CODE=acc.ftp_ret_code,
        first_seen_us=acc.first_seen_us,
        last_seen_us=acc.last_seen_us,
    )

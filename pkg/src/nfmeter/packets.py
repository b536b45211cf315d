"""Classic-pcap reading and Ethernet/IPv4/L4 packet decoding.

Supports the four classic pcap magics (microsecond and nanosecond
resolution, either byte order) with an Ethernet link layer. One 802.1Q
VLAN tag is stepped over; QinQ, IPv6 and other ethertypes are skipped
and counted. Timestamps are normalized to integer microseconds.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from socket import inet_ntoa
from typing import Iterator

from .errors import TruncatedFileError, UnsupportedFormatError

LINKTYPE_ETHERNET = 1

_MAGIC_US_BE = 0xA1B2C3D4
_MAGIC_US_LE = 0xD4C3B2A1
_MAGIC_NS_BE = 0xA1B23C4D
_MAGIC_NS_LE = 0x4D3CB2A1

_ETH_IPV4 = 0x0800
_ETH_IPV6 = 0x86DD
_ETH_VLAN = 0x8100
_ETH_QINQ = 0x88A8

PROTO_ICMP = 1
PROTO_TCP = 6
PROTO_UDP = 17


class SkipReason(Enum):
    """Why a captured frame produced no PacketRecord."""

    NON_IPV4 = "non_ipv4"
    IPV6 = "ipv6"
    QINQ = "qinq"
    MALFORMED = "malformed"


@dataclass(slots=True)
class PacketRecord:
    """One decoded link/IP/L4 packet.

    ip_total_length is the IP header's total-length field, not the captured
    frame length. Ports are 0 for portless protocols and for packets whose
    L4 header is fragmented away or cut off by the snap length. tcp_* fields
    are set only for TCP packets with an intact TCP header; icmp_* only for
    ICMP packets with type and code captured.
    """

    timestamp_us: int
    src_ip: str
    dst_ip: str
    src_port: int
    dst_port: int
    l4_protocol: int
    ip_total_length: int
    ttl: int
    tcp_flags: int | None = None
    tcp_seq: int | None = None
    tcp_payload_len: int | None = None
    tcp_window: int | None = None
    icmp_type: int | None = None
    icmp_code: int | None = None
    payload: bytes = b""


def decode_packet(
    raw: bytes, link_type: int = LINKTYPE_ETHERNET, timestamp_us: int = 0
) -> PacketRecord | SkipReason:
    """Decode one captured frame into a PacketRecord, or say why not.

    Never raises on arbitrary frame bytes: inconsistent IP headers come back
    as SkipReason.MALFORMED, and a truncated or corrupt L4 header degrades to
    a portless record so IP-level byte/packet accounting stays exact.
    """
    if link_type != LINKTYPE_ETHERNET:
        raise UnsupportedFormatError(f"unsupported link type {link_type}, need Ethernet (1)")
    n = len(raw)
    if n < 14:
        return SkipReason.MALFORMED
    ethertype = (raw[12] << 8) | raw[13]
    ip_off = 14
    if ethertype == _ETH_QINQ:
        return SkipReason.QINQ
    if ethertype == _ETH_VLAN:
        if n < 18:
            return SkipReason.MALFORMED
        ethertype = (raw[16] << 8) | raw[17]
        ip_off = 18
        if ethertype == _ETH_VLAN or ethertype == _ETH_QINQ:
            return SkipReason.QINQ
    if ethertype != _ETH_IPV4:
        return SkipReason.IPV6 if ethertype == _ETH_IPV6 else SkipReason.NON_IPV4

    if n < ip_off + 20:
        return SkipReason.MALFORMED
    vi = raw[ip_off]
    if vi >> 4 != 4:
        return SkipReason.MALFORMED
    ihl = (vi & 0x0F) << 2
    if ihl < 20:
        return SkipReason.MALFORMED
    total_length = (raw[ip_off + 2] << 8) | raw[ip_off + 3]
    if total_length < ihl:
        return SkipReason.MALFORMED
    if n < ip_off + ihl:
        return SkipReason.MALFORMED

    ttl = raw[ip_off + 8]
    proto = raw[ip_off + 9]
    src_ip = inet_ntoa(raw[ip_off + 12 : ip_off + 16])
    dst_ip = inet_ntoa(raw[ip_off + 16 : ip_off + 20])

    # Non-first fragments carry no L4 header: IP-level fields only.
    frag_offset = ((raw[ip_off + 6] & 0x1F) << 8) | raw[ip_off + 7]
    if frag_offset:
        return PacketRecord(timestamp_us, src_ip, dst_ip, 0, 0, proto, total_length, ttl)

    l4_off = ip_off + ihl
    l4_total = total_length - ihl
    # Bound by the IP length so Ethernet padding never leaks into payloads.
    captured_l4 = n - l4_off
    if captured_l4 > l4_total:
        captured_l4 = l4_total

    if proto == PROTO_TCP:
        if captured_l4 < 20:
            return PacketRecord(timestamp_us, src_ip, dst_ip, 0, 0, proto, total_length, ttl)
        doff = (raw[l4_off + 12] >> 4) << 2
        if doff < 20 or doff > l4_total:
            return PacketRecord(timestamp_us, src_ip, dst_ip, 0, 0, proto, total_length, ttl)
        payload = raw[l4_off + doff : l4_off + captured_l4] if captured_l4 > doff else b""
        return PacketRecord(
            timestamp_us,
            src_ip,
            dst_ip,
            (raw[l4_off] << 8) | raw[l4_off + 1],
            (raw[l4_off + 2] << 8) | raw[l4_off + 3],
            proto,
            total_length,
            ttl,
            tcp_flags=raw[l4_off + 13],
            tcp_seq=int.from_bytes(raw[l4_off + 4 : l4_off + 8], "big"),
            tcp_payload_len=l4_total - doff,
            tcp_window=(raw[l4_off + 14] << 8) | raw[l4_off + 15],
            payload=payload,
        )
    if proto == PROTO_UDP:
        if captured_l4 < 8:
            return PacketRecord(timestamp_us, src_ip, dst_ip, 0, 0, proto, total_length, ttl)
        udp_len = (raw[l4_off + 4] << 8) | raw[l4_off + 5]
        end = captured_l4
        if 8 <= udp_len <= l4_total and udp_len < end:
            end = udp_len
        payload = raw[l4_off + 8 : l4_off + end] if end > 8 else b""
        return PacketRecord(
            timestamp_us,
            src_ip,
            dst_ip,
            (raw[l4_off] << 8) | raw[l4_off + 1],
            (raw[l4_off + 2] << 8) | raw[l4_off + 3],
            proto,
            total_length,
            ttl,
            payload=payload,
        )
    if proto == PROTO_ICMP:
        if captured_l4 < 2:
            return PacketRecord(timestamp_us, src_ip, dst_ip, 0, 0, proto, total_length, ttl)
        payload = raw[l4_off + 4 : l4_off + captured_l4] if captured_l4 > 4 else b""
        return PacketRecord(
            timestamp_us,
            src_ip,
            dst_ip,
            0,
            0,
            proto,
            total_length,
            ttl,
            icmp_type=raw[l4_off],
            icmp_code=raw[l4_off + 1],
            payload=payload,
        )
    return PacketRecord(timestamp_us, src_ip, dst_ip, 0, 0, proto, total_length, ttl)


class CaptureReader:
    """Single-consumer iterator over the PacketRecords of one pcap file.

    The file is read into memory up front (captures here are desk-scale).
    Iteration yields decoded records in file order; undecodable frames are
    counted in `skipped` by reason. A file ending mid-record yields the
    records decoded so far, then raises TruncatedFileError.
    """

    _REC_BE = struct.Struct(">IIII")
    _REC_LE = struct.Struct("<IIII")

    def __init__(self, path: str) -> None:
        self.path = path
        with open(path, "rb") as fh:
            self._data = fh.read()
        if len(self._data) < 24:
            raise UnsupportedFormatError(f"{path}: too short for a pcap global header")
        magic = int.from_bytes(self._data[:4], "big")
        if magic == _MAGIC_US_BE:
            self._rec, self.nanosecond = self._REC_BE, False
        elif magic == _MAGIC_US_LE:
            self._rec, self.nanosecond = self._REC_LE, False
        elif magic == _MAGIC_NS_BE:
            self._rec, self.nanosecond = self._REC_BE, True
        elif magic == _MAGIC_NS_LE:
            self._rec, self.nanosecond = self._REC_LE, True
        else:
            raise UnsupportedFormatError(f"{path}: not a classic pcap file (magic 0x{magic:08x})")
        endian = ">" if self._rec is self._REC_BE else "<"
        self.link_type = struct.unpack_from(endian + "I", self._data, 20)[0]
        if self.link_type != LINKTYPE_ETHERNET:
            raise UnsupportedFormatError(
                f"{path}: link type {self.link_type} not supported, need Ethernet (1)"
            )
        self.frames = 0
        self.decoded = 0
        self.skipped: Counter[SkipReason] = Counter()

    def __iter__(self) -> Iterator[PacketRecord]:
        data = self._data
        n = len(data)
        unpack = self._rec.unpack_from
        ns = self.nanosecond
        off = 24
        while off < n:
            if off + 16 > n:
                raise TruncatedFileError(f"{self.path}: truncated record header at byte {off}")
            ts_sec, ts_frac, incl_len, _orig_len = unpack(data, off)
            off += 16
            if off + incl_len > n:
                raise TruncatedFileError(f"{self.path}: truncated frame at byte {off}")
            frame = data[off : off + incl_len]
            off += incl_len
            self.frames += 1
            ts = ts_sec * 1_000_000 + (ts_frac // 1000 if ns else ts_frac)
            rec = decode_packet(frame, LINKTYPE_ETHERNET, ts)
            if rec.__class__ is PacketRecord:
                self.decoded += 1
                yield rec  # type: ignore[misc]
            else:
                self.skipped[rec] += 1  # type: ignore[index]


def open_capture(path: str) -> CaptureReader:
    """Open a classic pcap file for reading.

    Raises UnsupportedFormatError for a bad magic or non-Ethernet link type.
    """
    return CaptureReader(path)

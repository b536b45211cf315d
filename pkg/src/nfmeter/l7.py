"""Application-layer helpers: DNS and FTP payload parsing, port-based L7 ids.

DNS parsing covers UDP messages only (TCP framing with reassembly is out of
scope). L7 classification is a configurable port->id table rather than deep
packet inspection; ids follow the nDPI numbering convention.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

_TYPE_A = 1


@dataclass(slots=True)
class DnsMessage:
    """The observations one DNS message contributes to flow features."""

    is_response: bool
    transaction_id: int
    query_type: int  # first question's QTYPE; 0 when absent or unparseable
    first_a_ttl: int | None  # TTL of the first TYPE=A answer, if any


def _skip_name(data: bytes, i: int) -> int:
    """Step past the (possibly compressed) name at offset i; -1 if malformed.

    A compression pointer terminates the name, so skipping never loops; plain
    labels strictly advance the offset and are bounds-checked each step.
    """
    n = len(data)
    while i < n:
        b = data[i]
        if b == 0:
            return i + 1
        if b & 0xC0 == 0xC0:
            return i + 2 if i + 2 <= n else -1
        if b & 0xC0:
            return -1  # reserved label types
        i += 1 + b
    return -1


def parse_dns(payload: bytes, from_server: bool = False) -> DnsMessage | None:
    """Parse a UDP DNS message into the fields flow records care about.

    The header's QR bit decides query vs response regardless of direction, so
    a response captured client-side still parses; `from_server` is accepted
    as a routing hint only. Malformed sections degrade gracefully: a broken
    question leaves query_type 0, a broken answer chain stops TTL extraction.
    Returns None if even the 12-byte header is missing.
    """
    n = len(payload)
    if n < 12:
        return None
    txid = (payload[0] << 8) | payload[1]
    flags = (payload[2] << 8) | payload[3]
    qdcount = (payload[4] << 8) | payload[5]
    ancount = (payload[6] << 8) | payload[7]
    is_response = bool(flags & 0x8000)
    qtype = 0
    i = 12
    for q in range(qdcount):
        j = _skip_name(payload, i)
        if j < 0 or j + 4 > n:
            return DnsMessage(is_response, txid, qtype, None)
        if q == 0:
            qtype = (payload[j] << 8) | payload[j + 1]
        i = j + 4
    a_ttl: int | None = None
    if is_response:
        for _ in range(ancount):
            j = _skip_name(payload, i)
            if j < 0 or j + 10 > n:
                break
            rtype = (payload[j] << 8) | payload[j + 1]
            if rtype == _TYPE_A:
                a_ttl = int.from_bytes(payload[j + 4 : j + 8], "big")
                break
            rdlen = (payload[j + 8] << 8) | payload[j + 9]
            i = j + 10 + rdlen
            if i > n:
                break
    return DnsMessage(is_response, txid, qtype, a_ttl)


def parse_ftp_response(payload: bytes) -> int | None:
    """Extract the reply code from a server->client FTP control payload.

    Recognizes the standard reply shape: three ASCII digits followed by a
    space (final line) or hyphen (multi-line). Anything else returns None.
    """
    if len(payload) < 4:
        return None
    a, b, c, sep = payload[0], payload[1], payload[2], payload[3]
    if 0x30 <= a <= 0x39 and 0x30 <= b <= 0x39 and 0x30 <= c <= 0x39 and sep in (0x20, 0x2D):
        return (a - 0x30) * 100 + (b - 0x30) * 10 + (c - 0x30)
    return None


# Default port->application table. Ids follow the nDPI numbering convention:
# ftp_control=1, pop3=2, smtp=3, imap=4, dns=5, http=7, ntp=9, dhcp=18,
# telnet=70, tls=91, ssh=92. Same `protocol,port,id` format as user tables.
DEFAULT_L7_TABLE_TEXT = """\
# protocol,port,id
tcp,21,1
tcp,25,3
tcp,53,5
udp,53,5
tcp,80,7
tcp,8080,7
tcp,110,2
tcp,143,4
udp,123,9
udp,67,18
udp,68,18
tcp,23,70
tcp,443,91
tcp,22,92
"""

_PROTO_NAMES = {"tcp": 6, "udp": 17}


class L7Table:
    """Port->application-id lookup applied to the lower of a flow's ports."""

    def __init__(self, entries: dict[tuple[int, int], int]) -> None:
        self._entries = entries

    @classmethod
    def parse(cls, text: str, source: str = "<builtin>") -> "L7Table":
        entries: dict[tuple[int, int], int] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError(lineno, f"{source}: expected protocol,port,id, got {raw!r}")
            proto_name, port_s, id_s = (p.strip() for p in parts)
            proto = _PROTO_NAMES.get(proto_name.lower())
            if proto is None:
                raise ParseError(lineno, f"{source}: unknown protocol {proto_name!r}")
            try:
                port, app_id = int(port_s), int(id_s)
            except ValueError:
                raise ParseError(lineno, f"{source}: non-numeric port or id in {raw!r}") from None
            if not 0 <= port <= 65535 or app_id < 0:
                raise ParseError(lineno, f"{source}: port or id out of range in {raw!r}")
            entries[(proto, port)] = app_id
        return cls(entries)

    @classmethod
    def load(cls, path: str) -> "L7Table":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.parse(fh.read(), source=path)

    @classmethod
    def default(cls) -> "L7Table":
        return cls.parse(DEFAULT_L7_TABLE_TEXT)

    def classify(self, protocol: int, client_port: int, server_port: int) -> int:
        """Application id for a flow, 0 when unknown."""
        port = client_port if client_port < server_port else server_port
        return self._entries.get((protocol, port), 0)

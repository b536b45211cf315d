"""Synthetic flow-CSV builders for the evaluation tests.

Rows are built as column->string dicts covering the full extended feature
set, then written under whichever layout a test needs, so the same flows can
be rendered as an extended file and as its basic projection. The header
tuples are spelled out here on purpose: they are an independent pin of the
published CSV interface, cross-checked against the package constants.
"""

from __future__ import annotations

import random
from pathlib import Path

EXTENDED_HEADER: tuple[str, ...] = (
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

BASIC_HEADER: tuple[str, ...] = (
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


def _base_row(rng: random.Random) -> dict[str, str]:
    """One flow with every column drawn from a class-independent distribution."""
    row = {name: str(rng.randrange(0, 30)) for name in EXTENDED_HEADER}
    row["IPV4_SRC_ADDR"] = f"10.{rng.randrange(256)}.{rng.randrange(256)}.{rng.randrange(1, 255)}"
    row["IPV4_DST_ADDR"] = f"172.16.{rng.randrange(256)}.{rng.randrange(1, 255)}"
    row["L4_SRC_PORT"] = str(rng.randrange(1024, 65536))
    row["L4_DST_PORT"] = str(rng.choice((21, 22, 53, 80, 443)))
    row["PROTOCOL"] = str(rng.choice((6, 17)))
    row["L7_PROTO"] = str(rng.choice((0, 5, 7)))
    row["IN_BYTES"] = str(rng.randrange(200, 4000))
    row["OUT_BYTES"] = str(rng.randrange(100, 3000))
    row["IN_PKTS"] = str(rng.randrange(2, 30))
    row["OUT_PKTS"] = str(rng.randrange(1, 20))
    row["FLOW_DURATION_MILLISECONDS"] = str(rng.randrange(0, 120_000))
    row["TCP_FLAGS"] = str(rng.randrange(0, 64))
    row["MIN_TTL"] = str(rng.choice((32, 64, 128)))
    row["MAX_TTL"] = row["MIN_TTL"]
    row["SRC_TO_DST_SECOND_BYTES"] = f"{rng.uniform(0, 9999):.4f}"
    row["DST_TO_SRC_SECOND_BYTES"] = f"{rng.uniform(0, 9999):.4f}"
    row["TCP_WIN_MAX_IN"] = str(rng.randrange(20_000, 65_536))
    row["RETRANSMITTED_IN_PKTS"] = str(rng.randrange(0, 3))
    row["NUM_PKTS_UP_TO_128_BYTES"] = str(rng.randrange(0, 5))
    row["DNS_TTL_ANSWER"] = "0"
    row["FTP_COMMAND_RET_CODE"] = "0"
    return row


def _mark_attack_extended(row: dict[str, str], rng: random.Random) -> None:
    """Signal visible only in columns the basic layout does not carry."""
    row["TCP_WIN_MAX_IN"] = str(rng.randrange(0, 600))
    row["RETRANSMITTED_IN_PKTS"] = str(rng.randrange(40, 90))
    row["NUM_PKTS_UP_TO_128_BYTES"] = str(rng.randrange(50, 120))
    row["DNS_TTL_ANSWER"] = str(rng.randrange(3000, 4000))


def _mark_attack_basic(row: dict[str, str], rng: random.Random) -> None:
    """Signal in columns every layout carries (and that survive the drops)."""
    row["IN_PKTS"] = str(rng.randrange(400, 900))
    row["IN_BYTES"] = str(rng.randrange(50_000, 90_000))
    row["TCP_FLAGS"] = "2"


def binary_rows(
    n: int, seed: int = 0, informative: str = "all", attack_name: str = "DoS"
) -> list[dict[str, str]]:
    """Separable two-class flows; every third row is the attack class.

    informative="extended" confines the class signal to extended-only
    columns, so a basic projection of the same rows is near-uninformative;
    "all" also marks columns the basic layout carries.
    """
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        row = _base_row(rng)
        if i % 3 == 0:
            _mark_attack_extended(row, rng)
            if informative == "all":
                _mark_attack_basic(row, rng)
            row["Label"], row["Attack"] = "1", attack_name
        else:
            row["Label"], row["Attack"] = "0", "Benign"
        rows.append(row)
    return rows


def multiclass_rows(n: int, seed: int = 0) -> list[dict[str, str]]:
    """Three separable classes, distinct on packet count / window / FTP code."""
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        row = _base_row(rng)
        cls = ("Benign", "DoS", "Brute Force")[i % 3]
        if cls == "DoS":
            row["IN_PKTS"] = str(rng.randrange(400, 900))
            row["TCP_WIN_MAX_IN"] = str(rng.randrange(0, 600))
        elif cls == "Brute Force":
            row["FTP_COMMAND_RET_CODE"] = "530"
            row["TCP_WIN_MAX_IN"] = str(rng.randrange(0, 600))
        row["Label"] = "0" if cls == "Benign" else "1"
        row["Attack"] = cls
        rows.append(row)
    return rows


def write_dataset(
    path: Path,
    rows: list[dict[str, str]],
    variant: str = "extended",
    labelled: bool = True,
    with_dataset: bool = False,
) -> Path:
    """Render row dicts under the requested layout and write the CSV."""
    header = list(EXTENDED_HEADER if variant == "extended" else BASIC_HEADER)
    if labelled:
        header += ["Label", "Attack"]
    if with_dataset:
        header += ["Dataset"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(row.get(name, "synth") for name in header))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path

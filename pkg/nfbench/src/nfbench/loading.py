"""Flow-record CSV loading.

The harness consumes the flow-metering toolchain purely through its published
CSV layouts, so the recognized column lists are pinned here verbatim: a
12-column basic and a 43-column extended feature set, each optionally followed
by Label/Attack and then a Dataset column.
"""

from __future__ import annotations

from dataclasses import dataclass

import pandas as pd

from .errors import SchemaError

EXTENDED_FEATURES: tuple[str, ...] = (
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

LABEL_COLUMN = "Label"
ATTACK_COLUMN = "Attack"
DATASET_COLUMN = "Dataset"

# Flow identifiers: dropped before training so the model cannot memorize
# endpoints instead of behavior.
IDENTIFIER_COLUMNS: tuple[str, ...] = (
    "IPV4_SRC_ADDR",
    "IPV4_DST_ADDR",
    "L4_SRC_PORT",
    "L4_DST_PORT",
)

TTL_COLUMNS: tuple[str, ...] = ("MIN_TTL", "MAX_TTL")

_VARIANTS = {"basic": BASIC_FEATURES, "extended": EXTENDED_FEATURES}


@dataclass(frozen=True)
class DatasetLayout:
    """Which of the recognized CSV layouts a file uses."""

    variant: str
    labelled: bool
    with_dataset: bool

    @property
    def features(self) -> tuple[str, ...]:
        return _VARIANTS[self.variant]

    @property
    def columns(self) -> tuple[str, ...]:
        cols = self.features
        if self.labelled:
            cols = cols + (LABEL_COLUMN, ATTACK_COLUMN)
        if self.with_dataset:
            cols = cols + (DATASET_COLUMN,)
        return cols


def layout_for(header: list[str]) -> DatasetLayout:
    for variant in ("extended", "basic"):
        for labelled, with_dataset in ((True, True), (True, False), (False, False)):
            layout = DatasetLayout(variant, labelled, with_dataset)
            if list(layout.columns) == header:
                return layout
    raise SchemaError(f"unrecognized column layout: {header!r}")


@dataclass
class LoadedDataset:
    """A parsed flow CSV plus the layout it matched."""

    frame: pd.DataFrame
    layout: DatasetLayout

    def __len__(self) -> int:
        return len(self.frame)


def load_dataset(path: str) -> LoadedDataset:
    """Read a flow-record CSV, validating the header against known layouts."""
    try:
        frame = pd.read_csv(
            path,
            dtype={
                "IPV4_SRC_ADDR": str,
                "IPV4_DST_ADDR": str,
                ATTACK_COLUMN: str,
                DATASET_COLUMN: str,
            },
        )
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path}: empty file, no header") from None
    except pd.errors.ParserError as exc:
        raise SchemaError(f"{path}: {exc}") from None
    layout = layout_for(list(frame.columns))
    return LoadedDataset(frame, layout)

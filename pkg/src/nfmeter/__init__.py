"""Flow metering and intrusion-detection dataset construction toolkit.

Turns classic pcap captures into bidirectional flow records with a fixed
43-feature schema, labels them against ground-truth attack events, and
merges labelled datasets into combined corpora.
"""

from .csvio import CsvSchema, read_flows, write_flows
from .datasets import CategoryMapping, DistributionReport, merge, project_basic, stats
from .errors import (
    EmptyFlowError,
    NfmeterError,
    ParseError,
    SchemaError,
    SchemaMismatchError,
    TruncatedFileError,
    UnsupportedFormatError,
)
from .features import BASIC_FEATURES, FEATURES, FlowKey, FlowRecord, finalize
from .flows import FlowEvent, FlowTable
from .l7 import L7Table
from .labeling import LabelIndex, LabelSummary, label_dataset, label_flow, load_ground_truth
from .packets import CaptureReader, PacketRecord, SkipReason, decode_packet, open_capture
from .pipeline import ExtractStats, extract_capture, extract_many

__version__ = "0.1.0"

__all__ = [
    "BASIC_FEATURES",
    "CaptureReader",
    "CategoryMapping",
    "CsvSchema",
    "DistributionReport",
    "EmptyFlowError",
    "ExtractStats",
    "FEATURES",
    "FlowEvent",
    "FlowKey",
    "FlowRecord",
    "FlowTable",
    "L7Table",
    "LabelIndex",
    "LabelSummary",
    "NfmeterError",
    "PacketRecord",
    "ParseError",
    "SchemaError",
    "SchemaMismatchError",
    "SkipReason",
    "TruncatedFileError",
    "UnsupportedFormatError",
    "decode_packet",
    "extract_capture",
    "extract_many",
    "finalize",
    "label_dataset",
    "label_flow",
    "load_ground_truth",
    "merge",
    "open_capture",
    "project_basic",
    "read_flows",
    "stats",
    "write_flows",
    "__version__",
]

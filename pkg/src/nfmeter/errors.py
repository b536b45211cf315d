"""Exception types shared across the toolkit."""


class NfmeterError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedFormatError(NfmeterError):
    """Capture file is not classic pcap with an Ethernet link layer."""


class TruncatedFileError(NfmeterError):
    """Capture file ended in the middle of a record header or frame."""


class SchemaError(NfmeterError):
    """A CSV header does not match any recognized schema variant."""


class SchemaMismatchError(SchemaError):
    """Input datasets disagree on feature variant or column order."""


class ParseError(NfmeterError):
    """A CSV row could not be parsed; carries the 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyFlowError(NfmeterError):
    """finalize() was asked to produce a record from a packet-less flow."""

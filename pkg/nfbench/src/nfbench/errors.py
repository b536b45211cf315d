"""Exception taxonomy for the benchmark harness."""


class EvalError(Exception):
    """Base class for all harness errors."""


class SchemaError(EvalError):
    """The input CSV does not match a recognized flow-record layout."""


class EmptyDatasetError(EvalError):
    """The dataset has no rows to evaluate."""


class SingleClassError(EvalError):
    """The labels contain fewer than two classes, so nothing can be learned."""

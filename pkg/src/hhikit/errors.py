"""Exception hierarchy shared by all hhikit modules."""


class HhikitError(ValueError):
    """Base class for every error raised by hhikit."""


# concentration core

class ConcentrationError(HhikitError):
    pass


class InvalidSnapshot(ConcentrationError):
    pass


class EmptySnapshot(ConcentrationError):
    pass


class ResidualPresent(ConcentrationError):
    """Exact index requested on truncated data."""


class DegenerateTruncation(ConcentrationError):
    """Residual mass present but the smallest named share is zero."""


class InsufficientFirms(ConcentrationError):
    pass


class OutOfRange(ConcentrationError):
    pass


class UnknownFirm(ConcentrationError):
    pass


class InfeasibleGranularity(ConcentrationError):
    """Oracle chunk size exceeds the per-firm cap, so no completion exists."""


# dataset ingestion

class DatasetError(HhikitError):
    pass


class MalformedRow(DatasetError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateKey(MalformedRow):
    pass


class MultipleResiduals(MalformedRow):
    pass


class UnknownQuarter(DatasetError):
    pass


class ZeroTotal(DatasetError):
    pass


class NoNamedVendors(DatasetError):
    pass


# series analytics

class SeriesError(HhikitError):
    """A per-quarter failure, annotated with the offending quarter."""

    def __init__(self, quarter, cause):
        self.quarter = quarter
        self.cause = cause
        super().__init__(f"{quarter}: {type(cause).__name__}: {cause}")


class EmptySeries(HhikitError):
    pass

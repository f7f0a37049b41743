from typing import Iterable, Optional


class FolrException(Exception):
    """Base exception for all FOLR exceptions to inherit"""
    pass


class UsageError(FolrException):
    """Invalid arguments or flags were passed by the caller (CLI exit code 1)"""
    exit_code = 1


class ComponentNotFound(UsageError):
    """A requested basis kind, estimator or evaluation arm does not exist"""
    pass


class DataError(FolrException):
    """The input data is malformed, inconsistent or out of range (CLI exit code 2)"""
    exit_code = 2


class DomainError(DataError, ValueError):
    """A time point lies outside of a basis domain [0, T], or two bases have different domains"""
    pass


class DimensionError(DataError, ValueError):
    """Vector / matrix sizes disagree, or samples were expanded in different bases"""
    pass


class ParseError(DataError):
    """
    A file could not be parsed. ``line`` and ``field`` carry the location of the problem, when known.
    """
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line, self.field = line, field
        ctx = []
        if line is not None:
            ctx.append(f'line {line}')
        if field is not None:
            ctx.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(ctx)})" if ctx else message)


class FormatError(ParseError):
    """The file parsed, but its rows break the format contract (e.g. duplicate observations)"""
    pass


class ValidationError(DataError):
    """A loaded object breaks one of its invariants. The message names the invariant."""
    pass


class RangeError(ValidationError):
    """A class label lies outside of 1..K"""
    pass


class UnsupportedVersion(DataError):
    """A model file declares a ``format_version`` this release cannot read"""
    pass


class JoinError(DataError):
    """Curves and labels could not be joined on ``curve_id``. ``offenders`` lists the unmatched ids."""
    def __init__(self, message: str, offenders: Iterable = ()):
        self.offenders = list(offenders)
        super().__init__(f"{message}: {', '.join(str(o) for o in self.offenders)}" if self.offenders else message)


class ConfigurationError(DataError):
    """The data cannot support the requested evaluation, e.g. a class missing from every training fold"""
    pass


class NumericalError(FolrException):
    """A numerical procedure failed (CLI exit code 3)"""
    exit_code = 3


class EstimationError(NumericalError):
    """An estimate cannot be computed, e.g. a rank-deficient smoothing design or a singular Hessian"""
    pass

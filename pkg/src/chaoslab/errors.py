"""Exception hierarchy shared by every chaoslab module."""


class ChaosLabError(Exception):
    """Base class for all library errors."""


class DomainError(ChaosLabError, ValueError):
    """A numeric argument lies outside the map's valid domain."""


class FormatError(ChaosLabError, ValueError):
    """Malformed key, container header, or image file."""


class IntegrityError(ChaosLabError):
    """Decryption produced bytes outside the printable range."""


class PeriodNotFound(ChaosLabError):
    """Period search exhausted its iteration budget."""


class UndefinedCorrelation(ChaosLabError, ValueError):
    """Pearson correlation requested for a zero-variance sample."""

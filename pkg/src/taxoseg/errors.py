"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so raising the right type
matters: FormatError covers anything wrong *inside* an input file or a
mismatch between data files, RemoteServiceError covers annotation-service
failures, ConfigError covers bad parameters and missing files.
"""


class TaxosegError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(TaxosegError):
    """Invalid parameter combination or unreadable/missing input path."""


class FormatError(TaxosegError):
    """Malformed or internally inconsistent data file, or mismatched data."""


class RemoteServiceError(TaxosegError):
    """Annotation service unreachable or returned an unusable response."""

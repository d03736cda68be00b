"""Exception hierarchy.

The CLI maps these onto exit codes: :class:`ConfigError` is a usage problem (2),
:class:`EntrezError` covers network and fixture failures (3). Plain
:class:`OSError` is left alone and treated as an I/O failure (4).
"""

from __future__ import annotations


class PubtrendError(Exception):
    """Base class for all package errors."""


class ConfigError(PubtrendError, ValueError):
    """Invalid study configuration or command-line usage."""


# -- series math ---------------------------------------------------------------


class SeriesError(PubtrendError, ValueError):
    """Base class for errors in the normalization math."""


class EmptyIntersection(SeriesError):
    """The series passed to alignment share no common year."""


class YearMismatch(SeriesError):
    """Series that must cover the same years do not."""


class EmptySet(SeriesError):
    """A comparison set was built with no members."""


class InsufficientData(SeriesError):
    """Fewer than two defined values to score."""


class ZeroMean(SeriesError):
    """Defined values average to zero, so a coefficient of variation is undefined."""


# -- query building ------------------------------------------------------------


class InvalidTerm(PubtrendError, ValueError):
    """Search term is empty or carries a double quote."""


class InvalidYear(PubtrendError, ValueError):
    """Year outside 1000..9999."""


# -- fetching ------------------------------------------------------------------


class EntrezError(PubtrendError):
    """Something went wrong talking to E-utilities (or to a stand-in for it)."""


class TransportError(EntrezError):
    """The request never produced an HTTP response (DNS, connection, timeout)."""


class NonOkStatus(EntrezError):
    def __init__(self, status: int, url: str | None = None):
        self.status = status
        self.url = url
        where = f" for {url}" if url else ""
        super().__init__(f"HTTP {status}{where}")


class MalformedBody(EntrezError):
    """Response body has no usable esearchresult.count."""


class RetriesExhausted(EntrezError):
    def __init__(self, url: str, attempts: int, last_status: int | None):
        self.url = url
        self.attempts = attempts
        self.last_status = last_status
        super().__init__(
            f"gave up after {attempts} attempts (last status {last_status}): {url}"
        )


class ReplayMiss(EntrezError):
    def __init__(self, url: str):
        self.url = url
        super().__init__(f"no recorded response for {url}")


class FixtureError(EntrezError):
    """A fixture file could not be read."""

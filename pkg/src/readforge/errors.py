"""Exception hierarchy shared by all readforge modules."""

from __future__ import annotations


class ReadforgeError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ReadforgeError):
    """Project config file is missing, unreadable, or malformed."""


class EmptyText(ReadforgeError):
    """A text source contained no segments after parsing."""


class EmptyHistory(ReadforgeError):
    """Nothing to compile: the reading history has no entries."""


class HistoryMiss(ReadforgeError):
    """A history entry refers to a text the compiler does not have."""


class DuplicateText(ReadforgeError):
    """A text id would appear twice in the reading history."""


class UnknownText(ReadforgeError):
    """A text id is not declared in the project config."""


class UnknownLemma(ReadforgeError):
    """A lemma is absent from the index it was looked up in."""


class NotInHistory(ReadforgeError):
    """A displayed word has no history count; signals a compiler bug."""


class MalformedManifest(ReadforgeError):
    """A resource manifest is not JSON or has the wrong shape."""


class RelativeWithoutBase(ReadforgeError):
    """A manifest holds a relative locator but declares no base_url."""


class MissingResource(ReadforgeError):
    """A resource id was found in none of the loaded manifests."""


class FetchFailure(ReadforgeError):
    """A remote fetch failed; carries the HTTP status when one exists."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class BadPackage(ReadforgeError):
    """A remote text package descriptor is invalid."""


class OutputIoError(ReadforgeError):
    """Writing the compiled site to disk failed."""

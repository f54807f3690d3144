"""Shared exception base so callers (and the CLI) can catch one type."""


class PmodelError(Exception):
    """Base class for every domain error raised by this package."""

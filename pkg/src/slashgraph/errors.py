"""Exception types shared across the package."""


class SlashGraphError(Exception):
    """Base class for all package errors."""


class InvalidGraphError(SlashGraphError, ValueError):
    """The edge list does not describe a valid (s-t) graph."""


class NotAMorphismError(SlashGraphError, ValueError):
    """A vertex map fails to carry directed edges to directed edges."""


class InvalidMeasureError(SlashGraphError, ValueError):
    """Masses are negative, mis-sized, or fail a required normalisation."""


class NonGeodesicError(SlashGraphError, ValueError):
    """An edge length exceeds the shortest-path distance between its endpoints."""

    def __init__(self, message: str, edge: int):
        super().__init__(message)
        self.edge = edge


class DomainError(SlashGraphError, ValueError):
    """A numeric argument lies outside the range where a formula is valid."""


class ResourceCapError(SlashGraphError, RuntimeError):
    """A configured size cap would be exceeded."""

"""Shared exception types."""


class VerificationError(AssertionError):
    """A mathematical verification failed; the computed structure is wrong."""

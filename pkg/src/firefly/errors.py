"""
Exception hierarchy for the firefly library.

Library code raises these; the CLI maps them onto process exit codes
(``ConfigurationError`` -> 2, ``UnknownTargetError`` -> 3).
"""
from __future__ import annotations


class FireflyError(Exception):
    """Base class for every error raised by the library."""


class DimensionError(FireflyError, ValueError):
    """Vectors or bounds of incompatible length were combined."""


class ConfigurationError(FireflyError, ValueError):
    """Invalid parameters, realizations or experiment settings."""


class UnknownTargetError(FireflyError, LookupError):
    """A test function or experiment target name is not registered."""

"""Exception types shared across the package."""

from __future__ import annotations


class RingsysError(Exception):
    """Base class for all package-specific errors."""


class DescriptorMismatch(RingsysError):
    """Two values from different rings were combined."""


class ElementSyntaxError(RingsysError):
    """An element literal could not be parsed."""


class ShapeError(RingsysError):
    """Matrix dimensions are inconsistent with the requested operation."""


class UnsupportedRing(RingsysError):
    """The operation needs decidable membership, which this ring lacks."""


class NotReachable(RingsysError):
    """The reachability chain does not fill the state module."""


class NotLocallyBrunovsky(RingsysError):
    """The system is outside the class the signature map classifies."""


class OrbitSizeError(RingsysError):
    """The exhaustive orbit search would exceed the configured bound."""


class SystemFileError(RingsysError):
    """A system file failed validation; message carries the location."""

"""Exception types shared across the package."""

from __future__ import annotations


class EmwaveError(Exception):
    """Base class for all package-specific errors."""


class InvalidDirectionError(EmwaveError):
    """A direction vector is zero or not normalizable."""


class EmptyAmplitudeError(EmwaveError):
    """An amplitude has no grid nodes to sum over."""


class InvalidScaleError(EmwaveError):
    """A scale parameter is zero (only nonzero scales label wavelets)."""


class SingularKernelError(EmwaveError):
    """Kernel evaluation hit the singular set.

    Carries the complex time ``tau`` and the radius ``r`` at which the
    denominator vanished.
    """

    def __init__(self, tau: complex, r: float):
        self.tau = tau
        self.r = r
        super().__init__(
            f"kernel denominator vanished at tau={tau!r}, r={r!r} "
            "(reachable only when the combined scale is zero)"
        )


class GridMismatchError(EmwaveError):
    """Two objects that must share a grid were built on different grids."""


class BudgetExceededError(EmwaveError):
    """A requested computation exceeds its documented cost budget."""


class NonFiniteSampleError(EmwaveError):
    """A user-supplied sampler returned a non-finite value.

    Carries the line parameter ``tau`` at which the sample was taken.
    """

    def __init__(self, tau: float, value: complex):
        self.tau = tau
        self.value = value
        super().__init__(f"sampler returned non-finite value {value!r} at tau={tau!r}")


class ConfigError(EmwaveError):
    """A scenario configuration failed validation.

    Carries the JSON-path of the offending entry.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"config error at {path}: {message}")

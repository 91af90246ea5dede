"""Closed-form spherical wavelets and their reproducing kernel.

The analytic continuation of a field to complex time is an inner product
against a family of wavelets labelled by a center y and a nonzero scale s
(the sign of s selects the frequency sheet).  Both the wavelets and their
reproducing kernel evaluate in closed rational form:

    K(x, t, sigma; y, s) = (2 theta(sigma s) / pi^2)
                           * (3 tau^2 - r^2) / (tau^2 + r^2)^3,

with tau = s + sigma + i t and r = |x - y|; the wavelet itself is the
sigma = 0 case (gate factor 2 theta(0) = 1).  Only tau^2 appears, so no
branch cuts arise and plain complex polynomial arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmwaveError, InvalidScaleError, SingularKernelError
from .fieldcore import ConePoint

__all__ = [
    "WaveletLabel",
    "eval_kernel",
    "eval_wavelet",
    "scaling_check",
    "wavelet_momentum",
]

PI_SQ = np.pi**2
_SINGULAR_CUTOFF = 1e-30


@dataclass(frozen=True)
class WaveletLabel:
    """Label (y, s) of one wavelet, with optional evaluation offsets.

    ``y`` is the spatial center; ``s`` is the nonzero scale whose sign
    selects the frequency sheet; ``t`` and ``sigma`` are optional real-time
    and imaginary-time offsets used where a full complex-time label is
    needed.  The kernel against another label of scale s' vanishes unless
    ``sigma * s' >= 0``.
    """

    y: np.ndarray
    s: float
    t: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.shape != (3,) or not np.all(np.isfinite(y)):
            raise EmwaveError(f"wavelet center must be a finite 3-vector, got {self.y!r}")
        if self.s == 0.0 or not np.isfinite(self.s):
            raise InvalidScaleError("wavelet scale must be nonzero and finite")
        object.__setattr__(self, "y", y)


def _gate2(x: float) -> float:
    """2 theta(x) with theta(0) = 1/2."""
    if x > 0.0:
        return 2.0
    if x < 0.0:
        return 0.0
    return 1.0


def eval_kernel(x, t, sigma: float, y, s: float):
    """Reproducing kernel between labels (x, t - i sigma) and (y, -i s).

    Evaluates ``(2 theta(sigma s) / pi^2) (3 tau^2 - r^2) / (tau^2 + r^2)^3``
    with ``tau = s + sigma + i t`` and ``r = |x - y|``.  ``x`` may be a
    single 3-vector or an array of them (broadcasting over ``t`` as well);
    scalars in, scalar out.

    Raises
    ------
    SingularKernelError
        If ``|tau^2 + r^2|`` falls below 1e-30 (reachable only when
        ``sigma + s = 0``).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scalar = x.ndim == 1 and np.ndim(t) == 0
    r = np.linalg.norm(np.atleast_2d(x) - y[None, :], axis=-1)
    if x.ndim == 1:
        r = r[0]
    tau = (s + sigma) + 1j * np.asarray(t)
    tau_sq = tau * tau
    r_sq = r * r
    den = tau_sq + r_sq
    if np.any(np.abs(den) < _SINGULAR_CUTOFF):
        idx = np.argmin(np.abs(np.atleast_1d(den)))
        bad_tau = np.atleast_1d(tau)[idx if np.ndim(tau) else 0]
        bad_r = np.atleast_1d(r)[idx if np.ndim(r) else 0]
        raise SingularKernelError(complex(bad_tau), float(bad_r))
    value = _gate2(sigma * s) * (3.0 * tau_sq - r_sq) / (PI_SQ * den**3)
    return complex(value) if scalar else value


def eval_wavelet(label: WaveletLabel, x, t):
    """Wavelet value e_{y,-is}(x, t) in closed rational form.

    Equal to `eval_kernel` with ``sigma = 0`` (gate factor 1):
    ``(3 tau^2 - r^2) / (pi^2 (tau^2 + r^2)^3)`` with ``tau = s + i t``.
    The packet is localized in the ball ``|x - y| <= sqrt(3) |s|`` at
    ``t = 0``, where its real zero sits at ``r = sqrt(3) |s|``.
    """
    return eval_kernel(x, t, 0.0, label.y, label.s)


def scaling_check(label: WaveletLabel, x, t) -> tuple[complex, complex]:
    """Both sides of the dilation covariance identity.

    The left side is ``e_{y,-is}(x, t)``; the right side is
    ``s^-4 e_{y/s,-i}(x/s, t/s)``, evaluated through `eval_wavelet`.  The
    two agree to relative 1e-12 (the identity is exact in real
    arithmetic; only rounding separates the sides).
    """
    s = label.s
    lhs = eval_wavelet(label, x, t)
    unit = WaveletLabel(label.y / s, 1.0)
    rhs = s**-4.0 * eval_wavelet(unit, np.asarray(x, dtype=float) / s, t / s)
    return lhs, rhs


def wavelet_momentum(label: WaveletLabel, q: ConePoint) -> complex:
    """Momentum-space representative of the wavelet at a cone point.

    For the label (y, s) at label time t this is

        omega^2 * 2 theta(p0 s) * exp(i p0 t - p0 s) * exp(-i p . y),

    the conjugate of the evaluation map's integrand density.  The sheet
    gate kills cone points whose frequency sign opposes the sign of s; at
    y = 0, s = 1 on the positive sheet it reduces to ``2 omega^2 e^-omega``.
    """
    omega = q.omega
    p0 = q.p0
    gate = _gate2(p0 * label.s)
    if gate == 0.0:
        return 0.0 + 0.0j
    phase = np.exp(1j * p0 * label.t - p0 * label.s - 1j * float(q.p @ label.y))
    return complex(gate * omega**2 * phase)

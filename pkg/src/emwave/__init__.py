"""Electromagnetic wavelet analysis/synthesis toolkit.

Free Maxwell fields are represented by helicity amplitudes on the double
light cone, extended to complex time, expanded in closed-form spherical
wavelets, and reconstructed from their wavelet coefficients.  Every fast
code path has an independent brute-force quadrature oracle in
:mod:`emwave.oracle`.
"""

from __future__ import annotations

__version__ = "0.1.0"

"""Numerical tolerances shared by every module.

All thresholds live here so that a single record controls domain checks,
removable-singularity handling and orbit truncation.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    boundary: float = 1e-12
    """Slack allowed when checking ``|z| <= 1`` or ``|xi| == 1``."""

    zero_margin: float = 1e-12
    """Zeros of a Blaschke product must satisfy ``|alpha| < 1 - zero_margin``."""

    rotation: float = 1e-14
    """Allowed deviation of ``|rotation|`` from 1."""

    underflow: float = 1e-300
    """Orbit values below this modulus are flushed to exactly 0."""

    removable: float = 1e-8
    """Below this ``|f^n(z)|`` the ratio ``f^k(z)/f^n(z)`` is replaced by its limit."""

    decay_residual: float = 1e-2
    """RMS residual accepted for the geometric fit of ``log|f^n(z)|``."""

    max_iterations: int = 10_000

    quadrature_bandwidth: int = 64
    """Minimum ``M * (1 - |z|)`` before the Poisson quadrature warns."""

    max_poisson_radius: float = 1.0 - 2.0 ** -24


TOL = Tolerances()

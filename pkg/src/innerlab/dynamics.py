"""Iteration of Blaschke products and the geometry of their orbits.

Covers iterates ``f^n``, hyperbolic derivatives and their multiplicativity
along orbits, the Schwarz-type majorant of ``|f(z)|``, fitted exponential
decay constants for orbits near the attracting fixed point 0, hitting times
and the Königs normalisation ``f^n / f'(0)^n``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .core import (DomainError, FiniteBlaschkeProduct, NumericalDegeneracyError,
                   _as_points, _check_closed_disc, _check_open_disc, blaschke_derivative,
                   blaschke_eval)
from .tolerances import TOL


class DecayFitError(RuntimeError):
    """No geometric decay regime could be identified from the probe orbits."""


class NonTerminationError(RuntimeError):
    """An orbit did not enter the target disc within the iteration budget."""


@dataclass(frozen=True)
class DecayConstants:
    """Constants with ``|f^n(z)| <= c0**n |z| / r0`` whenever ``|z| <= r0``."""

    r0: float
    c0: float
    source: str = "fitted"
    superattracting: bool = False

    def __post_init__(self):
        if not (0.0 < self.r0 < 1.0 and 0.0 < self.c0 < 1.0):
            raise ValueError(f"decay constants must lie in (0, 1): r0={self.r0}, c0={self.c0}")
        if self.source not in ("fitted", "prescribed"):
            raise ValueError(f"unknown source {self.source!r}")

    def bound(self, z, n):
        """Right-hand side ``c0**n |z| / r0``."""
        with np.errstate(under="ignore"):
            return self.c0 ** np.asarray(n, dtype=float) * np.abs(z) / self.r0

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class OrbitRecord:
    start: complex
    values: np.ndarray

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.values)


def iterate(f: FiniteBlaschkeProduct, n: int, z, n_max: int = TOL.max_iterations):
    """``f^n(z)``; ``f^0`` is the identity.  Accepts scalars or arrays.

    Values whose modulus drops below ``TOL.underflow`` are set to exactly 0.
    """
    if n < 0 or n > n_max:
        raise ValueError(f"iteration count must lie in [0, {n_max}], got {n}")
    pts, scalar = _as_points(z)
    _check_closed_disc(pts)
    flat = np.ascontiguousarray(pts.ravel())
    outr = np.empty(flat.shape[0])
    outi = np.empty(flat.shape[0])
    _kernels.iterate_points(np.ascontiguousarray(flat.real), np.ascontiguousarray(flat.imag),
                            *f._kernel_args(), int(n), TOL.underflow, outr, outi)
    out = (outr + 1j * outi).reshape(pts.shape)
    return complex(out) if scalar else out


def orbit(f: FiniteBlaschkeProduct, z, n_max: int):
    """Stack ``f^0(z), ..., f^{n_max}(z)`` along a new leading axis."""
    pts, scalar = _as_points(z)
    _check_closed_disc(pts)
    out = np.empty((n_max + 1,) + pts.shape, dtype=complex)
    out[0] = pts
    for n in range(1, n_max + 1):
        out[n] = iterate(f, 1, out[n - 1])
    if scalar:
        return OrbitRecord(complex(pts), out.ravel())
    return out


def hyperbolic_derivative(f: FiniteBlaschkeProduct, z):
    """``(1 - |z|^2) |f'(z)| / (1 - |f(z)|^2)`` on the open disc."""
    pts, scalar = _as_points(z)
    _check_open_disc(pts)
    fz = blaschke_eval(f, pts)
    den = 1.0 - np.abs(fz) ** 2
    if np.any(den <= 0.0):
        raise NumericalDegeneracyError("|f(z)| evaluated to 1 inside the disc")
    out = (1.0 - np.abs(pts) ** 2) * np.abs(blaschke_derivative(f, pts)) / den
    return float(out) if scalar else out


def iterate_derivative(f: FiniteBlaschkeProduct, n: int, z):
    """``(f^n)'(z)`` as the product of ``f'`` along the orbit."""
    pts, scalar = _as_points(z)
    w = pts.copy()
    d = np.ones_like(pts)
    for _ in range(n):
        d = d * blaschke_derivative(f, w)
        w = blaschke_eval(f, w)
    return complex(d) if scalar else d


def hyperbolic_derivative_iterate(f: FiniteBlaschkeProduct, n: int, z, method: str = "chain"):
    """Hyperbolic derivative of ``f^n``.

    ``method="direct"`` differentiates ``f^n`` itself; ``method="chain"``
    multiplies the hyperbolic derivatives of ``f`` at ``z, f(z), ...,
    f^{n-1}(z)``.
    """
    if n < 1 or n > 1000:
        raise ValueError("n must lie in [1, 1000]")
    pts, scalar = _as_points(z)
    _check_open_disc(pts)
    if method == "direct":
        fn = iterate(f, n, pts)
        den = 1.0 - np.abs(fn) ** 2
        if np.any(den <= 0.0):
            raise NumericalDegeneracyError("|f^n(z)| evaluated to 1 inside the disc")
        out = (1.0 - np.abs(pts) ** 2) * np.abs(iterate_derivative(f, n, pts)) / den
    elif method == "chain":
        out = np.ones(pts.shape)
        w = pts
        for _ in range(n):
            out = out * hyperbolic_derivative(f, w)
            w = blaschke_eval(f, w)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if scalar else out


def schwarz_majorant(f: FiniteBlaschkeProduct, x):
    """``psi(x) = x (x + |f'(0)|) / (1 + |f'(0)| x)``, which dominates ``|f(z)|`` at ``|z| = x``."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x >= 1)):
        raise DomainError("majorant argument must lie in [0, 1)")
    lam = abs(f.derivative_at_zero)
    out = x * (x + lam) / (1.0 + lam * x)
    return float(out) if out.ndim == 0 else out


def boundary_contraction_constant(f: FiniteBlaschkeProduct, r: float) -> float:
    """``c = (1 + |f'(0)| r) / (1 + r)``, so ``1 - |z| <= c (1 - |f(z)|)`` for ``|z| >= r``."""
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    return (1.0 + abs(f.derivative_at_zero) * r) / (1.0 + r)


def _geometric_fit(orbits, n_max, residual_tol):
    """Least-squares slope of ``log|f^n(z)|`` against ``n`` over the decay regime.

    Leading iterates are dropped until the RMS residual falls below
    ``residual_tol``; returns ``(slope, residual)`` or ``None``.
    """
    best = None
    slopes = []
    for traj in orbits:
        mod = np.abs(traj[1:])
        n = np.arange(1, len(traj))
        keep = (mod >= TOL.underflow) & (mod <= 0.5)
        n, y = n[keep], np.log(mod[keep])
        start = 0
        fitted = None
        while len(n) - start >= 4:
            A = np.vstack([n[start:], np.ones(len(n) - start)]).T
            coef, *_ = np.linalg.lstsq(A, y[start:], rcond=None)
            resid = y[start:] - A @ coef
            rms = float(np.sqrt(np.mean(resid ** 2)))
            if rms <= residual_tol:
                fitted = (coef[0], rms)
                break
            start += max(1, (len(n) - start) // 8)
        if fitted is None:
            return None
        slopes.append(fitted)
    if not slopes:
        return None
    slope = float(np.median([s for s, _ in slopes]))
    best = max(r for _, r in slopes)
    return slope, best


def _doubling_regime(orbits):
    """True when ``log|f^{n+1}| / log|f^n|`` stays >= 2 along every orbit."""
    for traj in orbits:
        mod = np.abs(traj)
        ok = (mod > TOL.underflow) & (mod < 1.0)
        logs = np.log(mod[ok])
        if len(logs) < 2:
            continue
        ratios = logs[1:] / logs[:-1]
        if np.any(ratios < 2.0 - 1e-9):
            return False
    return True


def estimate_decay_constants(f: FiniteBlaschkeProduct, probes, n_max: int = 2000,
                             residual_tol: float = TOL.decay_residual,
                             safety: float = 1.05) -> DecayConstants:
    """Fit ``(r0, c0)`` with ``|f^n(z)| <= c0**n |z| / r0`` on the probe orbits.

    For ``f'(0) != 0`` the rate ``c0`` is the exponential of the fitted slope
    of ``log|f^n(z)|`` and ``1/r0`` is the largest observed ratio
    ``|f^n(z)| / (c0**n |z|)`` inflated by ``safety``, capped so that
    ``r0`` does not exceed the largest probe modulus.  Orbits with
    doubling exponents (``f'(0) = 0``) are flagged as superattracting and get
    ``c0 = r0 = max |probe|``.
    """
    probes = np.atleast_1d(np.asarray(probes, dtype=complex)).ravel()
    if probes.size == 0:
        raise ValueError("at least one probe is required")
    if np.any(np.abs(probes) > 0.5):
        raise DomainError("probes must satisfy |z| <= 1/2")
    probes = probes[probes != 0]
    if probes.size == 0:
        raise DecayFitError("all probes are at the fixed point 0")
    orbits = orbit(f, probes, n_max).T
    # drop probes that land exactly on a preimage of 0
    alive = np.all(orbits[:, 1:2] != 0, axis=1)
    orbits = orbits[alive]
    fit = _geometric_fit(orbits, n_max, residual_tol)
    if fit is None:
        if _doubling_regime(orbits):
            r = float(np.max(np.abs(probes)))
            return DecayConstants(r0=r, c0=r, source="fitted", superattracting=True)
        raise DecayFitError("no geometric decay regime detected")
    c0 = float(np.exp(fit[0]))
    if not 0.0 < c0 < 1.0:
        raise DecayFitError(f"fitted rate {c0} is not in (0, 1)")
    n = np.arange(1, orbits.shape[1])[None, :]
    mod = np.abs(orbits[:, 1:])
    live = mod > TOL.underflow
    with np.errstate(divide="ignore"):
        log_ratio = np.log(mod) - n * np.log(c0) - np.log(np.abs(orbits[:, :1]))
    k = float(np.exp(np.max(log_ratio[live]))) * safety
    r0 = min(1.0 / k, float(np.max(np.abs(probes))))
    return DecayConstants(r0=r0, c0=c0, source="fitted")


def hitting_time(f: FiniteBlaschkeProduct, z: complex, r0: float,
                 n_max: int = TOL.max_iterations) -> int:
    """Least ``l >= 1`` with ``|f^l(z)| <= r0``."""
    z = complex(z)
    _check_open_disc(np.asarray(z))
    if not 0.0 < r0 < 1.0:
        raise DomainError("r0 must lie in (0, 1)")
    w = z
    for n in range(1, n_max + 1):
        w = blaschke_eval(f, w)
        if abs(w) <= r0:
            return n
    raise NonTerminationError(f"orbit of {z} did not reach |w| <= {r0} in {n_max} steps")


def koenigs_approx(f: FiniteBlaschkeProduct, z, n: int):
    """``f^n(z) / f'(0)**n``, the depth-``n`` approximant of the Königs function."""
    lam = f.derivative_at_zero
    if lam == 0:
        raise ValueError("the Königs function needs f'(0) != 0")
    if n < 1:
        raise ValueError("n must be positive")
    pts, scalar = _as_points(z)
    if np.any(np.abs(pts) > 0.5):
        raise DomainError("Königs approximants are taken on |z| <= 1/2")
    out = iterate(f, n, pts) / lam ** n
    return complex(out) if scalar else out

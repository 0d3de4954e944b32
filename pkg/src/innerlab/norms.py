"""Norms and integral functionals of ``F = sum a_n f^n``.

Closed forms rest on one fact: for ``k >= n`` the boundary integral of
``conj(f^n) f^k`` against the Poisson kernel at ``z`` equals
``f^k(z) / f^n(z)`` (the value at ``z`` of the analytic function
``f^{k-n}(w)/w`` composed with ``f^n``).  At ``z = 0`` this is
``f'(0)^{k-n}``, giving the Toeplitz Gram form of ``{f^n}`` in ``H^2``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (Arc, BoundaryGrid, DiskGrid, DomainError, FiniteBlaschkeProduct,
                   _check_circle, _check_open_disc, blaschke_derivative, blaschke_eval)
from .dynamics import DecayConstants, estimate_decay_constants, orbit
from .series import (CoefficientSequence, FieldOfValues, _coefficients, direct_partial_sum,
                     grid_points, synthesize_partial_sums)
from .tolerances import TOL


class QuadratureResolutionWarning(UserWarning):
    """The Poisson kernel is narrower than the boundary grid can resolve."""


def _check_generator(lam):
    lam = complex(lam)
    if not abs(lam) < 1.0:
        raise DomainError(f"|f'(0)| must be < 1, got {abs(lam)}")
    return lam


# ---------------------------------------------------------------- H^2 / L^p

@dataclass(frozen=True)
class GramForm:
    """Gram matrix ``G[n, k] = <f^k, f^n> = lam**(k-n)`` (``k >= n``) of the iterates."""

    generator: complex
    dimension: int

    def __post_init__(self):
        object.__setattr__(self, "generator", _check_generator(self.generator))
        if self.dimension < 1:
            raise ValueError("dimension must be positive")

    def entry(self, n: int, k: int) -> complex:
        if k >= n:
            return self.generator ** (k - n)
        return np.conj(self.generator) ** (n - k)

    def matrix(self) -> np.ndarray:
        idx = np.arange(self.dimension)
        diff = idx[None, :] - idx[:, None]
        up = self.generator ** np.maximum(diff, 0)
        lo = np.conj(self.generator) ** np.maximum(-diff, 0)
        return np.where(diff >= 0, up, lo)

    def quadratic_form(self, a) -> float:
        a = _coefficients(a, self.dimension)
        return norm_l2_gram(a, self.generator)


def _gram_cross(a, lam):
    """``sum_{n<k} conj(a_n) a_k lam**(k-n)``."""
    L = a.size
    if L <= 100:
        d = np.arange(L)[None, :] - np.arange(L)[:, None]
        G = np.where(d > 0, lam ** np.maximum(d, 0), 0.0)
        return complex(np.conj(a) @ G @ a)
    # S_k = sum_{n<k} conj(a_n) lam**(k-n) obeys S_{k+1} = lam (S_k + conj(a_k))
    s = 0j
    total = 0j
    for k in range(L):
        total += a[k] * s
        s = lam * (s + np.conj(a[k]))
    return total


def norm_l2_gram(a, lam) -> float:
    """``||sum a_n f^n||_2^2`` from the Gram form with generator ``lam = f'(0)``.

    The same value is obtained for any block ``a_M..a_N`` since the Gram
    entries depend only on ``k - n``.
    """
    lam = _check_generator(lam)
    a = _coefficients(a, None)
    return float(np.sum(np.abs(a) ** 2) + 2.0 * _gram_cross(a, lam).real)


def l2_comparison_bounds(lam) -> tuple[float, float]:
    """Constants ``(1-|lam|)/(1+|lam|)`` and ``(1+|lam|)/(1-|lam|)`` bracketing ``||F||_2^2 / sum|a_n|^2``."""
    r = abs(_check_generator(lam))
    return (1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r)


def norm_lp_quadrature(values, p: float, return_error: bool = False):
    """``(int |F|^p dm)^{1/p}`` by equal-weight quadrature on a boundary grid.

    With ``return_error=True`` also returns ``|I_M - I_{M/2}|``, the
    difference between the integral on the full grid and on every other
    point, as an estimate of the quadrature error in ``int |F|^p``.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    v = values.values if isinstance(values, FieldOfValues) else np.asarray(values)
    mod = np.abs(v) ** p
    integral = float(np.mean(mod))
    norm = integral ** (1.0 / p)
    if not return_error:
        return norm
    err = abs(integral - float(np.mean(mod[::2]))) if v.size > 1 else math.inf
    return norm, err


# ---------------------------------------------------------- Poisson variance

def _block_orbit(f, z, offset, length):
    """``f^n(z)`` for ``n = offset .. offset+length-1``; shape ``(len(z), length)``."""
    pts = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    orb = orbit(f, pts, offset + length - 1)
    return orb[offset:].T


def poisson_variance_closed(f: FiniteBlaschkeProduct, a, z, offset: int = 1):
    """``int |F(xi) - F(z)|^2 P(z, xi) dm(xi)`` in closed form, ``F = sum a_n f^n``.

    ``a`` holds the coefficients of ``f^offset, f^(offset+1), ...``.  The
    value is ``A + 2 Re B`` with ``A = sum |a_n|^2 (1 - |f^n(z)|^2)`` and
    ``B = sum_{n<k} conj(a_n) a_k c_{k,n}``,
    ``c_{k,n} = f^k(z) (1 - |f^n(z)|^2) / f^n(z)``.  When
    ``|f^n(z)| < TOL.removable`` the ratio takes its limit ``f'(0)**(k-n)``.
    """
    if offset < 1:
        raise ValueError("offset must be >= 1")
    a = _coefficients(a, None)
    pts = np.asarray(z, dtype=complex)
    _check_open_disc(pts)
    L = a.size
    if L == 0:
        return 0.0 if pts.ndim == 0 else np.zeros(pts.shape)
    lam = f.derivative_at_zero
    W = _block_orbit(f, pts, offset, L)
    gap = 1.0 - np.abs(W) ** 2
    A = gap @ (np.abs(a) ** 2)
    B = np.zeros(W.shape[0], dtype=complex)
    for n in range(L - 1):
        wn = W[:, n]
        small = np.abs(wn) < TOL.removable
        safe = np.where(small, 1.0, wn)
        ratio = W[:, n + 1:] / safe[:, None]
        limit = lam ** np.arange(1, L - n)
        ratio = np.where(small[:, None], limit[None, :], ratio)
        B += np.conj(a[n]) * gap[:, n] * (ratio @ a[n + 1:])
    out = A + 2.0 * B.real
    return float(out[0]) if pts.ndim == 0 else out.reshape(pts.shape)


def poisson_variance_matrix(f: FiniteBlaschkeProduct, z, offset: int, length: int) -> np.ndarray:
    """Hermitian ``V(z)`` with ``a^H V a`` the Poisson variance of ``sum a_n f^n``.

    ``V[n, n] = 1 - |f^n(z)|^2`` and ``V[n, k] = c_{k,n}`` for ``k > n``.
    Returns shape ``(len(z), length, length)``.
    """
    pts = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    _check_open_disc(pts)
    lam = f.derivative_at_zero
    W = _block_orbit(f, pts, offset, length)
    gap = 1.0 - np.abs(W) ** 2
    small = np.abs(W) < TOL.removable
    safe = np.where(small, 1.0, W)
    V = np.zeros((pts.size, length, length), dtype=complex)
    for n in range(length):
        V[:, n, n] = gap[:, n]
        if n + 1 < length:
            ratio = W[:, n + 1:] / safe[:, n, None]
            limit = lam ** np.arange(1, length - n)
            ratio = np.where(small[:, n, None], limit[None, :], ratio)
            V[:, n, n + 1:] = gap[:, n, None] * ratio
            V[:, n + 1:, n] = np.conj(V[:, n, n + 1:])
    return V


def poisson_variance_quadrature(f: FiniteBlaschkeProduct, a, z, grid: BoundaryGrid,
                                offset: int = 1, return_error: bool = False):
    """Quadrature of ``|F(xi) - F(z)|^2 P(z, xi)`` on ``grid``.

    Warns with :class:`QuadratureResolutionWarning` when
    ``M (1 - |z|) < TOL.quadrature_bandwidth``.  With ``return_error=True``
    also returns the two-grid difference against the even sub-grid.
    """
    a = _coefficients(a, None)
    pts = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    _check_open_disc(pts)
    if np.any(np.abs(pts) > TOL.max_poisson_radius):
        raise DomainError("|z| exceeds 1 - 2**-24; the Poisson kernel cannot be resolved")
    M = grid.size
    if np.any(M * (1.0 - np.abs(pts)) < TOL.quadrature_bandwidth):
        warnings.warn(f"M (1 - |z|) < {TOL.quadrature_bandwidth}: Poisson kernel under-resolved",
                      QuadratureResolutionWarning, stacklevel=2)
    full = np.concatenate([np.zeros(offset - 1, dtype=complex), a])
    if full.size == 0:
        vals = np.zeros(M, dtype=complex)
        Fz = np.zeros(pts.size, dtype=complex)
    else:
        vals = synthesize_partial_sums(f, full, grid)[-1].values
        Fz = direct_partial_sum(f, full, pts)
    xi = grid.points
    out = np.empty(pts.size)
    err = np.empty(pts.size)
    for i, (zz, fz) in enumerate(zip(pts, Fz)):
        P = (1.0 - abs(zz) ** 2) / np.abs(xi - zz) ** 2
        integrand = np.abs(vals - fz) ** 2 * P
        out[i] = np.mean(integrand)
        err[i] = abs(out[i] - np.mean(integrand[::2]))
    scalar = np.ndim(z) == 0
    res = float(out[0]) if scalar else out.reshape(np.shape(z))
    if return_error:
        return res, (float(err[0]) if scalar else err.reshape(np.shape(z)))
    return res


def variance_majorant(f: FiniteBlaschkeProduct, a, z, offset: int = 1):
    """``sum |a_n|^2 (1 - |f^n(z)|^2)``, the quantity bounding the Poisson variance up to a constant."""
    a = _coefficients(a, None)
    pts = np.asarray(z, dtype=complex)
    if a.size == 0:
        return 0.0 if pts.ndim == 0 else np.zeros(pts.shape)
    W = _block_orbit(f, pts, offset, a.size)
    out = (1.0 - np.abs(W) ** 2) @ (np.abs(a) ** 2)
    return float(out[0]) if pts.ndim == 0 else out.reshape(pts.shape)


@dataclass(frozen=True)
class BMOEstimate:
    """Sup of the Poisson variance over sampled ``z`` (a lower bound for ``||F||^2_BMOA``).

    ``ratio_sup`` is the largest observed ``variance / variance_majorant``,
    the measured constant of the variance bound, and ``upper_bound`` is
    ``ratio_sup * sum |a_n|^2``.
    """

    value: float
    argmax: complex
    ratio_sup: float
    l2_mass: float
    upper_bound: float

    def to_json(self) -> dict:
        return {"value": self.value, "argmax": [self.argmax.real, self.argmax.imag],
                "ratio_sup": self.ratio_sup, "l2_mass": self.l2_mass,
                "upper_bound": self.upper_bound}


def bmo_norm_estimate(f: FiniteBlaschkeProduct, a, zgrid) -> BMOEstimate:
    """Poisson-variance sup over ``zgrid`` together with the origin."""
    a = _coefficients(a, None)
    zs = grid_points(zgrid)
    if zs.size == 0:
        raise ValueError("zgrid is empty")
    pts = np.concatenate([[0j], zs])
    var = poisson_variance_closed(f, a, pts)
    maj = variance_majorant(f, a, pts)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(maj > 0, var / maj, 0.0)
    i = int(np.argmax(var))
    mass = float(np.sum(np.abs(a) ** 2))
    rsup = float(np.max(ratio))
    return BMOEstimate(float(var[i]), complex(pts[i]), rsup, mass, rsup * mass)


def harmonic_measure(z: complex, indicator, grid: BoundaryGrid) -> float:
    """``w(z, E)``: Poisson integral of the indicator of ``E`` sampled on ``grid``."""
    z = complex(z)
    _check_open_disc(np.asarray(z))
    ind = np.asarray(indicator, dtype=float)
    if ind.shape != (grid.size,):
        raise ValueError("indicator must have one entry per grid point")
    P = (1.0 - abs(z) ** 2) / np.abs(grid.points - z) ** 2
    return float(np.clip(np.mean(ind * P), 0.0, 1.0))


def arc_harmonic_measure(z: complex, arc: Arc) -> float:
    """Closed form of ``w(z, I)`` for an arc: ``theta/pi - m(I)`` with ``theta`` the angle ``I`` subtends at ``z``."""
    z = complex(z)
    _check_open_disc(np.asarray(z))
    if arc.length >= 1.0:
        return 1.0
    a = np.exp(1j * arc.start_angle)
    b = np.exp(1j * arc.end_angle)
    theta = np.angle((b - z) / (a - z)) % (2.0 * np.pi)
    return float(theta / np.pi - arc.length)


# ------------------------------------------------------------------ Dirichlet

def _dirichlet_guard(L, N):
    if L * math.log(N) > 500 * math.log(2.0):
        raise OverflowError(f"N**n exceeds 2**500 for a prefix of length {L} and degree {N}")


def dirichlet_closed(f: FiniteBlaschkeProduct, a) -> float:
    """``(1/pi) int |F'|^2 dA = sum |a_n|^2 N^n + 2 Re sum_{n<k} conj(a_n) a_k N^n f'(0)^{k-n}``."""
    a = _coefficients(a, None)
    N = f.degree
    lam = f.derivative_at_zero
    _dirichlet_guard(a.size, N)
    w = float(N) ** np.arange(1, a.size + 1)
    diag = float(np.sum(np.abs(a) ** 2 * w))
    # S_k = sum_{n<k} conj(a_n) N^n lam**(k-n)
    s = 0j
    cross = 0j
    for k in range(a.size):
        cross += a[k] * s
        s = lam * (s + np.conj(a[k]) * w[k])
    return diag + 2.0 * cross.real


def weighted_mass(f: FiniteBlaschkeProduct, a) -> float:
    """``sum |a_n|^2 N^n``."""
    a = _coefficients(a, None)
    _dirichlet_guard(a.size, f.degree)
    return float(np.sum(np.abs(a) ** 2 * float(f.degree) ** np.arange(1, a.size + 1)))


def taylor_coefficients(f: FiniteBlaschkeProduct, a, degree: int, radius: float,
                        grid: BoundaryGrid) -> np.ndarray:
    """``c_0 .. c_D`` of ``F = sum a_n f^n`` from samples on ``|z| = radius``.

    ``c_m = r**-m (1/M) sum_j F(r xi_j) xi_j**-m``, computed with one FFT.
    """
    if not 0.0 < radius < 1.0:
        raise DomainError("radius must lie in (0, 1)")
    if grid.size < 4 * degree:
        raise ValueError(f"grid size {grid.size} must be at least 4 * degree = {4 * degree}")
    if degree * -math.log(radius) > math.log(np.finfo(float).max):
        raise OverflowError(f"radius**-{degree} overflows; use a larger radius")
    pts = radius * grid.points
    vals = synthesize_partial_sums(f, a, pts)[-1].values
    spectrum = np.fft.fft(vals) / grid.size
    m = np.arange(degree + 1)
    return spectrum[: degree + 1] * radius ** (-m.astype(float))


def taylor_reconstruction_residual(f: FiniteBlaschkeProduct, a, coeffs, radius: float,
                                   n_points: int = 257) -> float:
    """Max ``|sum c_m z^m - F(z)|`` over ``n_points`` points on ``|z| = radius``."""
    pts = radius * np.exp(2j * np.pi * (np.arange(n_points) + 0.5) / n_points)
    approx = np.polynomial.polynomial.polyval(pts, np.asarray(coeffs))
    exact = direct_partial_sum(f, a, pts)
    return float(np.max(np.abs(approx - exact)))


def dirichlet_coefficient_oracle(coeffs) -> float:
    """``sum_{m>=1} m |c_m|^2``."""
    c = np.asarray(coeffs, dtype=complex)
    with np.errstate(over="ignore"):
        return float(np.sum(np.arange(c.size) * np.abs(c) ** 2))


@dataclass(frozen=True)
class SymbolBounds:
    """Range of the Toeplitz symbol ``t(xi) = (1 - rho^2) / |1 - mu xi|^2``, ``mu = lam N^{-1/2}``.

    ``cfN = (1 + rho)/(1 - rho)`` brackets the Dirichlet norm between
    ``sum |a_n|^2 N^n / cfN`` and ``cfN * sum |a_n|^2 N^n``.
    """

    t_min: float
    t_max: float
    cfN: float
    rho: float


def toeplitz_symbol(lam, N: int, xi):
    lam = _check_generator(lam)
    xi = np.asarray(xi, dtype=complex)
    _check_circle(xi)
    mu = lam / math.sqrt(N)
    return (1.0 - abs(mu) ** 2) / np.abs(1.0 - mu * xi) ** 2


def toeplitz_symbol_bounds(lam, N: int, check=None) -> SymbolBounds:
    """Extremes of the symbol; optionally assert the Dirichlet sandwich for ``check = (f, a)``."""
    if N < 2:
        raise ValueError("degree must be at least 2")
    rho = abs(_check_generator(lam)) / math.sqrt(N)
    out = SymbolBounds((1.0 - rho) / (1.0 + rho), (1.0 + rho) / (1.0 - rho),
                       (1.0 + rho) / (1.0 - rho), rho)
    if check is not None:
        f, a = check
        d = dirichlet_closed(f, a)
        w = weighted_mass(f, a)
        tol = 1e-12 * max(1.0, w)
        if not (w / out.cfN - tol <= d <= out.cfN * w + tol):
            raise AssertionError(f"Dirichlet sandwich violated: {w / out.cfN} <= {d} <= {out.cfN * w}")
    return out


# ---------------------------------------------------------------------- Bloch

@dataclass(frozen=True)
class BlochEstimate:
    """Sup of ``(1 - |z|^2) |F_N'(z)|`` over the sampled points.

    ``truncation_bound`` dominates the contribution of the terms ``n > N``
    at every sampled point; it is ``inf`` when some ``f^N(z)`` has not yet
    entered the disc where the decay constants apply.
    """

    value: float
    argmax: complex
    truncation_bound: float


_DEFAULT_PROBES = 0.5 * np.exp(2j * np.pi * np.arange(8) / 8) * np.array([1, 0.6] * 4)


def bloch_norm_estimate(f: FiniteBlaschkeProduct, a, zgrid, N: int | None = None,
                        decay: DecayConstants | None = None) -> BlochEstimate:
    """Bloch seminorm of ``F_N`` sampled on ``zgrid``.

    ``(f^n)'`` is accumulated as the product of ``f'`` along the orbit.  The
    tail ``sum_{n>N}`` is bounded by Cauchy's estimate on the disc of radius
    ``r0/2`` around ``f^N(z)``, where ``|f^m| <= c0**m`` holds, giving
    ``(1-|z|^2) |(f^N)'(z)| sup_{n>N}|a_n| (2/r0) c0/(1-c0)``.
    """
    seq = a
    a = _coefficients(a, N)
    pts = grid_points(zgrid)
    _check_open_disc(pts)
    w = pts.copy()
    d = np.ones_like(pts)
    deriv = np.zeros_like(pts)
    for c in a:
        d = d * blaschke_derivative(f, w)
        w = blaschke_eval(f, w)
        deriv = deriv + c * d
    weight = 1.0 - np.abs(pts) ** 2
    vals = weight * np.abs(deriv)
    i = int(np.argmax(vals))
    if isinstance(seq, CoefficientSequence):
        sup_tail = seq.sup_tail(a.size)
    else:
        sup_tail = 0.0
    if sup_tail == 0.0:
        trunc = 0.0
    else:
        if decay is None:
            decay = estimate_decay_constants(f, _DEFAULT_PROBES)
        if np.all(np.abs(w) <= decay.r0 / 2):
            trunc = float(np.max(weight * np.abs(d)) * sup_tail * (2.0 / decay.r0)
                          * decay.c0 / (1.0 - decay.c0))
        else:
            trunc = math.inf
    return BlochEstimate(float(vals[i]), complex(pts[i]), trunc)

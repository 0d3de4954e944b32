"""Disc geometry, finite Blaschke products, the Poisson kernel, arcs and grids.

A finite Blaschke product is stored as its zero list plus a unimodular
rotation,

    f(z) = rotation * prod_k (z - alpha_k) / (1 - conj(alpha_k) z),

and is required to fix the origin and to have degree at least two, so it is
an inner function with ``f(0) = 0`` that is not a rotation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels
from .tolerances import TOL

ComplexLike = Union[complex, float, np.ndarray]


class DomainError(ValueError):
    """A point lies outside the region where an operation is defined."""


class NumericalDegeneracyError(ArithmeticError):
    """A quantity that is positive in exact arithmetic evaluated to <= 0."""


def _as_points(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _check_closed_disc(z, what="z"):
    if np.any(~np.isfinite(z)):
        raise DomainError(f"{what} must be finite")
    if np.any(np.abs(z) > 1.0 + TOL.boundary):
        raise DomainError(f"{what} lies outside the closed unit disc")


def _check_open_disc(z, what="z"):
    if np.any(~np.isfinite(z)):
        raise DomainError(f"{what} must be finite")
    if np.any(np.abs(z) >= 1.0):
        raise DomainError(f"{what} must lie in the open unit disc")


def _check_circle(xi, what="xi"):
    if np.any(np.abs(np.abs(xi) - 1.0) > TOL.boundary):
        raise DomainError(f"{what} must lie on the unit circle")


@dataclass(frozen=True)
class FiniteBlaschkeProduct:
    """Finite Blaschke product with a zero at the origin and degree >= 2.

    Parameters
    ----------
    zeros : tuple of complex
        Zeros in the open disc, repeated according to multiplicity.  At
        least one of them must be 0.
    rotation : complex
        Unimodular constant factor.
    """

    zeros: tuple
    rotation: complex = 1.0 + 0.0j

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "rotation", complex(self.rotation))
        problems = self.violations(zs, self.rotation)
        if problems:
            raise ValueError("; ".join(problems))

    @staticmethod
    def violations(zeros, rotation) -> list[str]:
        """Return every invariant the given parameters break (empty if valid)."""
        out = []
        for a in zeros:
            if not abs(a) < 1.0 - TOL.zero_margin:
                out.append(f"zero {a!r} must satisfy |alpha| < 1")
        if not any(a == 0 for a in zeros):
            out.append("f(0) must be 0: no zero at the origin")
        if len(zeros) < 2:
            out.append("degree must be at least 2 (degree 1 is a rotation)")
        if abs(abs(rotation) - 1.0) > TOL.rotation:
            out.append(f"rotation {rotation!r} must have modulus 1")
        return out

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def derivative_at_zero(self) -> complex:
        """``f'(0)``; zero unless the origin is a simple zero."""
        n_origin = sum(1 for a in self.zeros if a == 0)
        if n_origin > 1:
            return 0j
        val = self.rotation
        for a in self.zeros:
            if a != 0:
                val *= -a
        return complex(val)

    @property
    def is_monomial(self) -> bool:
        return all(a == 0 for a in self.zeros)

    def __call__(self, z):
        return blaschke_eval(self, z)

    def _kernel_args(self):
        zs = np.array(self.zeros, dtype=complex)
        return (np.ascontiguousarray(zs.real), np.ascontiguousarray(zs.imag),
                self.rotation.real, self.rotation.imag)

    def to_json(self) -> dict:
        return {
            "zeros": [[a.real, a.imag] for a in self.zeros],
            "rotation": [self.rotation.real, self.rotation.imag],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteBlaschkeProduct":
        zeros = tuple(complex(re, im) for re, im in obj["zeros"])
        rot = obj.get("rotation", [1.0, 0.0])
        return cls(zeros, complex(rot[0], rot[1]))


def monomial(degree: int = 2) -> FiniteBlaschkeProduct:
    return FiniteBlaschkeProduct((0,) * degree)


def default_test_functions() -> dict[str, FiniteBlaschkeProduct]:
    """The three reference maps used across the verification suites.

    ``f1 = z^2`` (superattracting), ``f2 = z (z - 1/2)/(1 - z/2)`` with
    ``f2'(0) = -1/2``, and a degree-3 product with zeros ``0, 0.4, -0.3i``.
    """
    return {
        "f1": monomial(2),
        "f2": FiniteBlaschkeProduct((0, 0.5)),
        "f3": FiniteBlaschkeProduct((0, 0.4, -0.3j)),
    }


def blaschke_eval(f: FiniteBlaschkeProduct, z: ComplexLike):
    """Evaluate ``f`` on the closed disc (scalar or array input)."""
    pts, scalar = _as_points(z)
    _check_closed_disc(pts)
    flat = np.ascontiguousarray(pts.ravel())
    outr = np.empty(flat.shape[0])
    outi = np.empty(flat.shape[0])
    _kernels.iterate_points(np.ascontiguousarray(flat.real), np.ascontiguousarray(flat.imag),
                            *f._kernel_args(), 1, 0.0, outr, outi)
    out = (outr + 1j * outi).reshape(pts.shape)
    return complex(out) if scalar else out


def blaschke_derivative(f: FiniteBlaschkeProduct, z: ComplexLike):
    """``f'(z)`` by the product rule over the Möbius factors."""
    pts, scalar = _as_points(z)
    _check_closed_disc(pts)
    factors = []
    derivs = []
    for a in f.zeros:
        den = 1.0 - np.conj(a) * pts
        factors.append((pts - a) / den)
        derivs.append((1.0 - abs(a) ** 2) / den ** 2)
    total = np.zeros_like(pts)
    for k in range(len(factors)):
        term = derivs[k]
        for j, fac in enumerate(factors):
            if j != k:
                term = term * fac
        total = total + term
    out = f.rotation * total
    return complex(out) if scalar else out


def pseudohyperbolic_distance(z: ComplexLike, w: ComplexLike):
    """``rho(z, w) = |z - w| / |1 - conj(w) z|`` for points of the open disc."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    _check_open_disc(z)
    _check_open_disc(w, "w")
    out = np.abs(z - w) / np.abs(1.0 - np.conj(w) * z)
    return float(out) if out.ndim == 0 else out


def poisson_kernel(z: complex, xi: ComplexLike):
    """``P(z, xi) = (1 - |z|^2) / |xi - z|^2``."""
    z = complex(z)
    _check_open_disc(np.asarray(z))
    xi = np.asarray(xi, dtype=complex)
    _check_circle(xi)
    out = (1.0 - abs(z) ** 2) / np.abs(xi - z) ** 2
    return float(out) if out.ndim == 0 else out


def _wrap_angle(theta: float) -> float:
    """Normalize an angle to ``(-pi, pi]``."""
    t = math.remainder(theta, 2.0 * math.pi)
    return math.pi if t == -math.pi else t


@dataclass(frozen=True)
class Arc:
    """Subarc of the unit circle.

    ``length`` is the normalized measure ``m(I)`` in ``(0, 1]``; the arc
    spans ``2*pi*length`` radians centred at ``center_angle``.
    """

    center_angle: float
    length: float

    def __post_init__(self):
        if not 0.0 < self.length <= 1.0:
            raise ValueError(f"arc length must lie in (0, 1], got {self.length}")
        object.__setattr__(self, "center_angle", _wrap_angle(float(self.center_angle)))

    @property
    def start_angle(self) -> float:
        return self.center_angle - math.pi * self.length

    @property
    def end_angle(self) -> float:
        return self.center_angle + math.pi * self.length

    def scaled(self, c: float) -> "Arc":
        """The concentric arc ``cI`` with ``m(cI) = c m(I)``."""
        if c <= 0 or c * self.length > 1.0 + 1e-15:
            raise ValueError(f"{c}I is not an arc: c*m(I) = {c * self.length}")
        return Arc(self.center_angle, min(1.0, c * self.length))

    def contains(self, xi) -> np.ndarray:
        """Membership of boundary points in the closed arc."""
        ang = np.angle(np.asarray(xi, dtype=complex)) - self.center_angle
        ang = np.abs(np.remainder(ang + np.pi, 2.0 * np.pi) - np.pi)
        return ang <= np.pi * self.length + 1e-15

    def to_json(self) -> dict:
        return {"center_angle": self.center_angle, "length": self.length}

    @classmethod
    def from_json(cls, obj: dict) -> "Arc":
        return cls(obj["center_angle"], obj["length"])


def point_of_arc(arc: Arc) -> complex:
    """``z(I) = (1 - m(I)) * xi`` with ``xi`` the centre of ``I``."""
    return (1.0 - arc.length) * cmath.exp(1j * arc.center_angle)


def arc_of_point(z: complex) -> Arc:
    """``I(z)``: the arc centred at ``z/|z|`` with ``m(I) = 1 - |z|``."""
    z = complex(z)
    if not 0.0 < abs(z) < 1.0:
        raise DomainError("I(z) is defined only for 0 < |z| < 1")
    return Arc(cmath.phase(z), 1.0 - abs(z))


def arc_point_correspondence(direction: str, value):
    """Dispatch between :func:`point_of_arc` and :func:`arc_of_point`."""
    if direction == "point_of_arc":
        return point_of_arc(value)
    if direction == "arc_of_point":
        return arc_of_point(value)
    raise ValueError(f"unknown direction {direction!r}")


def dyadic_children(arc: Arc, n: int) -> list[Arc]:
    """The ``2**n`` pairwise disjoint subarcs of equal length partitioning ``arc``."""
    if not 0 <= n <= 40:
        raise ValueError("dyadic generation must satisfy 0 <= n <= 40")
    if n == 0:
        return [arc]
    k = 2 ** n
    child = arc.length / k
    start = arc.start_angle
    width = 2.0 * math.pi * child
    return [Arc(start + (i + 0.5) * width, child) for i in range(k)]


class BoundaryGrid:
    """``M`` equispaced points on the circle with uniform weights ``1/M``.

    ``M`` must be a power of two so that sub-grids (every other point) and
    FFTs are available.
    """

    def __init__(self, size: int):
        size = int(size)
        if size < 1 or size & (size - 1):
            raise ValueError(f"grid size must be a power of two, got {size}")
        self.size = size

    def __repr__(self):
        return f"BoundaryGrid(size={self.size})"

    def __len__(self):
        return self.size

    @property
    def turns(self) -> np.ndarray:
        """Exact dyadic fractions ``j/M``."""
        return np.arange(self.size, dtype=float) / self.size

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * self.turns

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.size, 1.0 / self.size)

    def integrate(self, values) -> float | complex:
        """Trapezoid (equal-weight) quadrature against normalized measure ``m``."""
        values = np.asarray(values)
        if values.shape[-1] != self.size:
            raise ValueError("values do not match the grid size")
        return np.sum(values, axis=-1) / self.size


class DiskGrid:
    """Radius ladder ``r_j = 1 - 2**-j`` times equispaced angles.

    ``j`` runs from ``j_min`` to ``j_max`` in increments of ``j_step``;
    :meth:`refined` halves the step and doubles the angular density.
    """

    def __init__(self, j_min: float = 1, j_max: float = 9, angles_per_radius: int = 64,
                 j_step: float = 1.0):
        if angles_per_radius < 1:
            raise ValueError("angles_per_radius must be positive")
        if j_step <= 0 or j_max < j_min or j_min <= 0:
            raise ValueError("invalid radius ladder")
        self.j_min = j_min
        self.j_max = j_max
        self.j_step = j_step
        self.angles_per_radius = int(angles_per_radius)

    def __repr__(self):
        return (f"DiskGrid(j_min={self.j_min}, j_max={self.j_max}, "
                f"angles_per_radius={self.angles_per_radius}, j_step={self.j_step})")

    @property
    def exponents(self) -> np.ndarray:
        count = int(round((self.j_max - self.j_min) / self.j_step)) + 1
        return self.j_min + self.j_step * np.arange(count)

    @property
    def radii(self) -> np.ndarray:
        return 1.0 - 2.0 ** (-self.exponents)

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angles_per_radius) / self.angles_per_radius

    @property
    def points(self) -> np.ndarray:
        """Array of shape ``(n_radii, angles_per_radius)``."""
        return self.radii[:, None] * np.exp(1j * self.angles)[None, :]

    def refined(self) -> "DiskGrid":
        return DiskGrid(self.j_min, self.j_max, 2 * self.angles_per_radius, self.j_step / 2)

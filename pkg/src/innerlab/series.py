"""Coefficient sequences and partial sums ``F_N = sum_{n<=N} a_n f^n`` on grids.

The evaluation engine streams over ``n`` with one live iterate per grid
point, so memory stays ``O(grid)`` however deep the truncation.  Snapshots
of the running sum are taken at requested checkpoints.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import zeta

from . import _kernels
from .core import BoundaryGrid, DiskGrid, FiniteBlaschkeProduct, _check_closed_disc
from .dynamics import DecayConstants, iterate
from .tolerances import TOL

SIGN_MODELS = ("plus", "rademacher")


@dataclass(frozen=True)
class CoefficientSequence:
    """The coefficients ``a_1, a_2, ...``.

    ``kind="explicit"`` lists finitely many values (all later terms are 0).
    ``kind="power_law"`` is the infinite sequence
    ``a_n = scale * n**(-exponent) * sign_n`` where the signs are all ``+1``
    or independent fair ``+-1`` drawn from a PCG64 generator seeded through
    ``numpy.random.SeedSequence(seed)``; ``length`` is the default
    truncation.
    """

    kind: str
    values: tuple = ()
    scale: float = 1.0
    exponent: float = 1.0
    sign_model: str = "plus"
    seed: int = 0
    length: int | None = None

    def __post_init__(self):
        if self.kind == "explicit":
            object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
            if self.length is None:
                object.__setattr__(self, "length", len(self.values))
        elif self.kind == "power_law":
            if self.sign_model not in SIGN_MODELS:
                raise ValueError(f"sign_model must be one of {SIGN_MODELS}")
            if self.length is None:
                raise ValueError("power_law sequences need a truncation length")
        else:
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.length < 1 and not (self.kind == "explicit" and not self.values):
            raise ValueError("length must be positive")

    @classmethod
    def explicit(cls, values) -> "CoefficientSequence":
        return cls("explicit", tuple(np.asarray(values, dtype=complex).ravel()))

    @classmethod
    def power_law(cls, exponent: float, length: int, scale: float = 1.0,
                  sign_model: str = "plus", seed: int = 0) -> "CoefficientSequence":
        return cls("power_law", scale=scale, exponent=exponent, sign_model=sign_model,
                   seed=seed, length=length)

    def _signs(self, n: int) -> np.ndarray:
        if self.sign_model == "plus":
            return np.ones(n)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed)))
        # one double per draw keeps prefixes consistent across lengths
        return np.where(rng.random(n) < 0.5, -1.0, 1.0)

    def prefix(self, n: int | None = None) -> np.ndarray:
        """``(a_1, ..., a_n)`` as a complex array."""
        n = self.length if n is None else int(n)
        if self.kind == "explicit":
            out = np.zeros(n, dtype=complex)
            vals = np.asarray(self.values, dtype=complex)[:n]
            out[: len(vals)] = vals
            return out
        idx = np.arange(1, n + 1, dtype=float)
        return (self.scale * idx ** (-self.exponent) * self._signs(n)).astype(complex)

    @property
    def is_l2(self) -> bool:
        return self.kind == "explicit" or self.exponent > 0.5

    @property
    def is_l1(self) -> bool:
        return self.kind == "explicit" or self.exponent > 1.0

    def l2_mass(self, n: int | None = None) -> float:
        return float(np.sum(np.abs(self.prefix(n)) ** 2))

    def l2_tail(self, n: int) -> float:
        """``sum_{m > n} |a_m|^2``."""
        if self.kind == "explicit":
            vals = np.asarray(self.values, dtype=complex)[n:]
            return float(np.sum(np.abs(vals) ** 2))
        if not self.is_l2:
            raise ValueError(f"a_n ~ n^-{self.exponent} is not square summable")
        return float(self.scale ** 2 * zeta(2.0 * self.exponent, n + 1))

    def sup_tail(self, n: int) -> float:
        """``sup_{m > n} |a_m|`` (requires a bounded sequence)."""
        if self.kind == "explicit":
            vals = np.abs(np.asarray(self.values, dtype=complex)[n:])
            return float(vals.max()) if vals.size else 0.0
        if self.exponent < 0:
            raise ValueError("power law with negative exponent is unbounded")
        return float(self.scale * (n + 1) ** (-self.exponent))

    def to_json(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "values": [[v.real, v.imag] for v in self.values]}
        return {"kind": "power_law", "scale": self.scale, "exponent": self.exponent,
                "sign_model": self.sign_model, "seed": self.seed, "length": self.length}

    @classmethod
    def from_json(cls, obj: dict) -> "CoefficientSequence":
        if obj["kind"] == "explicit":
            return cls("explicit", tuple(complex(re, im) for re, im in obj["values"]))
        return cls("power_law", scale=obj.get("scale", 1.0), exponent=obj["exponent"],
                   sign_model=obj.get("sign_model", "plus"), seed=obj.get("seed", 0),
                   length=obj["length"])


@dataclass
class FieldOfValues:
    """Values of ``F_N`` at a set of points."""

    points: np.ndarray
    values: np.ndarray
    N: int
    grid: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.points.shape != self.values.shape:
            raise ValueError("one value per grid point is required")

    @property
    def angles(self) -> np.ndarray:
        if isinstance(self.grid, BoundaryGrid):
            return self.grid.angles
        return np.remainder(np.angle(self.points), 2.0 * np.pi)

    def to_csv(self, path) -> None:
        """Columns ``angle, re, im``; ``.`` decimal separator, LF line endings."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["angle", "re", "im"])
            for t, v in zip(self.angles, self.values):
                w.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])

    def to_binary(self, path) -> None:
        """Little-endian records ``(angle: f64, re: f64, im: f64)``."""
        rec = np.empty((self.values.size, 3), dtype="<f8")
        rec[:, 0] = self.angles
        rec[:, 1] = self.values.real
        rec[:, 2] = self.values.imag
        Path(path).write_bytes(rec.tobytes())

    @staticmethod
    def read_binary(path) -> np.ndarray:
        """Inverse of :meth:`to_binary`: an ``(M, 3)`` float array."""
        return np.frombuffer(Path(path).read_bytes(), dtype="<f8").reshape(-1, 3)


def grid_points(grid) -> np.ndarray:
    if isinstance(grid, (BoundaryGrid, DiskGrid)):
        return np.ascontiguousarray(grid.points.ravel())
    return np.ascontiguousarray(np.asarray(grid, dtype=complex).ravel())


def _coefficients(a, n):
    if isinstance(a, CoefficientSequence):
        return a.prefix(n)
    arr = np.asarray(a, dtype=complex).ravel()
    if n is None:
        return arr
    out = np.zeros(n, dtype=complex)
    out[: min(n, arr.size)] = arr[:n]
    return out


def synthesize_partial_sums(f: FiniteBlaschkeProduct, a, grid, N: int | None = None,
                            checkpoints=()) -> list[FieldOfValues]:
    """Partial sums of ``sum a_n f^n`` on ``grid`` at each checkpoint.

    Parameters
    ----------
    f : FiniteBlaschkeProduct
    a : CoefficientSequence or array-like
        Coefficients ``a_1, a_2, ...``.
    grid : BoundaryGrid, DiskGrid or array of points in the closed disc
    N : int, optional
        Truncation; defaults to the coefficient length.
    checkpoints : iterable of int
        Truncation levels ``1 <= c <= N`` at which to snapshot; ``N`` is
        always included.

    Returns
    -------
    list of FieldOfValues
        One snapshot per checkpoint in increasing order.
    """
    coeffs = _coefficients(a, N)
    N = coeffs.size
    if N < 1:
        raise ValueError("truncation N must be positive")
    cps = sorted(set(int(c) for c in checkpoints) | {N})
    if cps[0] < 1 or cps[-1] > N:
        raise ValueError(f"checkpoints must lie in [1, {N}]")
    pts = grid_points(grid)
    if pts.size == 0:
        raise ValueError("grid is empty")
    _check_closed_disc(pts, "grid point")
    cp = np.asarray(cps, dtype=np.int64)
    outr = np.zeros((len(cps), pts.size))
    outi = np.zeros((len(cps), pts.size))
    ar = np.ascontiguousarray(coeffs.real)
    ai = np.ascontiguousarray(coeffs.imag)
    if isinstance(grid, BoundaryGrid) and f.is_monomial:
        cum = np.concatenate([[0], np.cumsum(coeffs)])
        phase = (math.atan2(f.rotation.imag, f.rotation.real) / (2 * math.pi)) % 1.0
        _kernels.stream_monomial_turns(grid.turns, float(f.degree), phase, ar, ai,
                                       np.ascontiguousarray(cum.real),
                                       np.ascontiguousarray(cum.imag), cp, outr, outi)
    else:
        _kernels.stream_partial_sums(np.ascontiguousarray(pts.real), np.ascontiguousarray(pts.imag),
                                     *f._kernel_args(), ar, ai, cp, TOL.underflow, outr, outi)
    vals = outr + 1j * outi
    return [FieldOfValues(pts, vals[c], n, grid) for c, n in enumerate(cps)]


def partial_sum(f: FiniteBlaschkeProduct, a, grid, N: int | None = None) -> FieldOfValues:
    """Convenience wrapper returning only ``F_N``."""
    return synthesize_partial_sums(f, a, grid, N)[-1]


def direct_partial_sum(f: FiniteBlaschkeProduct, a, points, N: int | None = None) -> np.ndarray:
    """``sum_n a_n f^n(z)`` by explicit iteration (no streaming)."""
    coeffs = _coefficients(a, N)
    pts = np.asarray(points, dtype=complex)
    total = np.zeros_like(pts)
    w = pts
    for c in coeffs:
        w = iterate(f, 1, w)
        total = total + c * w
    return total


def tail_bound(a: CoefficientSequence, N: int, decay: DecayConstants) -> float:
    """``(1 - c0^2)^{-1/2} (sum_{n>N} |a_n|^2)^{1/2}``.

    Dominates ``sum_{n>N} |a_n| |f^n(z)|`` at points with ``|f^N(z)| <= r0``.
    """
    tail = a.l2_tail(N)
    return float(math.sqrt(tail) / math.sqrt(1.0 - decay.c0 ** 2))

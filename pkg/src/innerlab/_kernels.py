"""Compiled grid kernels.

Every kernel works on split real/imaginary float64 arrays.  One Blaschke
step over a block of points is defined once in :func:`_step_block` and
shared by the iteration kernel and the streaming partial-sum kernel, so a
streamed orbit is bit-for-bit the orbit obtained by applying the map
repeatedly.

Points are processed in blocks and the loop over zeros sits outside the loop
over the block.  Per-point orbits are serial dependency chains, and this
ordering lets the compiler vectorize across independent points.

Orbits that start on the unit circle are renormalised to modulus one after
every step.  Exterior points escape under iteration, so without this the
rounding error in ``|w|`` grows geometrically along boundary orbits.
"""
import math
import os

import numba
import numpy as np
from numba import njit, prange

_BLOCK = 512

if "NUMBA_THREADING_LAYER" not in os.environ:
    # the bundled TBB is too old for numba; skip probing it
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


def configure_threads():
    """Apply the ``INNERLAB_THREADS`` cap to the compiled kernels."""
    raw = os.environ.get("INNERLAB_THREADS")
    if not raw:
        return numba.get_num_threads()
    n = max(1, min(int(raw), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


@njit(inline="always")
def _circle_flags(wr, wi, circ):
    """Mark points on the circle; returns 0 (none), 1 (all) or 2 (mixed)."""
    L = wr.shape[0]
    k = 0
    for j in range(L):
        on = abs(wr[j] * wr[j] + wi[j] * wi[j] - 1.0) <= 4e-12
        circ[j] = on
        if on:
            k += 1
    if k == 0:
        return 0
    return 1 if k == L else 2


@njit(inline="always")
def _step_block(wr, wi, zr, zi, rr, ri, flush, circ, mode, nr, ni, dr, di):
    """Replace ``w`` by ``f(w)`` in place for every point of the block."""
    L = wr.shape[0]
    for j in range(L):
        nr[j] = rr
        ni[j] = ri
        dr[j] = 1.0
        di[j] = 0.0
    for k in range(zr.shape[0]):
        ar = zr[k]
        ai = zi[k]
        for j in range(L):
            x = wr[j]
            y = wi[j]
            xr = x - ar
            xi = y - ai
            t = nr[j] * xr - ni[j] * xi
            ni[j] = nr[j] * xi + ni[j] * xr
            nr[j] = t
            yr = 1.0 - (ar * x + ai * y)
            yi = ai * x - ar * y
            t = dr[j] * yr - di[j] * yi
            di[j] = dr[j] * yi + di[j] * yr
            dr[j] = t
    f2 = flush * flush
    for j in range(L):
        s = 1.0 / (dr[j] * dr[j] + di[j] * di[j])
        x = (nr[j] * dr[j] + ni[j] * di[j]) * s
        y = (ni[j] * dr[j] - nr[j] * di[j]) * s
        m = x * x + y * y
        if mode == 1 or (mode == 2 and circ[j]):
            q = 1.0 / math.sqrt(m)
            x *= q
            y *= q
        elif m < f2:
            x = 0.0
            y = 0.0
        wr[j] = x
        wi[j] = y


@njit(parallel=True, cache=True)
def iterate_points(pr, pi, zr, zi, rr, ri, n, flush, outr, outi):
    M = pr.shape[0]
    nb = (M + _BLOCK - 1) // _BLOCK
    for b in prange(nb):
        lo = b * _BLOCK
        hi = min(M, lo + _BLOCK)
        L = hi - lo
        wr = pr[lo:hi].copy()
        wi = pi[lo:hi].copy()
        circ = np.empty(L, dtype=np.bool_)
        nr = np.empty(L)
        ni = np.empty(L)
        dr = np.empty(L)
        di = np.empty(L)
        mode = _circle_flags(wr, wi, circ)
        for _ in range(n):
            _step_block(wr, wi, zr, zi, rr, ri, flush, circ, mode, nr, ni, dr, di)
        outr[lo:hi] = wr
        outi[lo:hi] = wi


@njit(parallel=True, cache=True)
def stream_partial_sums(pr, pi, zr, zi, rr, ri, ar, ai, checkpoints, flush, outr, outi):
    """Accumulate ``F_n = sum_{m<=n} a_m f^m`` keeping one live iterate per point.

    ``outr``/``outi`` have shape ``(len(checkpoints), M)``; row ``c`` receives
    ``F_{checkpoints[c]}``.
    """
    M = pr.shape[0]
    N = ar.shape[0]
    nb = (M + _BLOCK - 1) // _BLOCK
    for b in prange(nb):
        lo = b * _BLOCK
        hi = min(M, lo + _BLOCK)
        L = hi - lo
        wr = pr[lo:hi].copy()
        wi = pi[lo:hi].copy()
        Fr = np.zeros(L)
        Fi = np.zeros(L)
        circ = np.empty(L, dtype=np.bool_)
        nr = np.empty(L)
        ni = np.empty(L)
        dr = np.empty(L)
        di = np.empty(L)
        mode = _circle_flags(wr, wi, circ)
        c = 0
        for n in range(N):
            _step_block(wr, wi, zr, zi, rr, ri, flush, circ, mode, nr, ni, dr, di)
            cr = ar[n]
            ci = ai[n]
            for j in range(L):
                Fr[j] += cr * wr[j] - ci * wi[j]
                Fi[j] += cr * wi[j] + ci * wr[j]
            if c < checkpoints.shape[0] and checkpoints[c] == n + 1:
                outr[c, lo:hi] = Fr
                outi[c, lo:hi] = Fi
                c += 1


@njit(parallel=True, cache=True)
def stream_monomial_turns(t0, degree, phase, ar, ai, cum_r, cum_i, checkpoints, outr, outi):
    """Streaming sums for ``f(z) = e^{2 pi i phase} z^degree`` on boundary points.

    Points are carried as turns ``t`` (``xi = e^{2 pi i t}``) and advanced by
    ``t -> degree*t + phase (mod 1)``, which is exact for dyadic turns and a
    power-of-two degree.  Once an orbit reaches a fixed turn the remaining
    terms are added in one step from the coefficient prefix sums ``cum``.
    """
    M = t0.shape[0]
    N = ar.shape[0]
    C = checkpoints.shape[0]
    twopi = 2.0 * math.pi
    for j in prange(M):
        t = t0[j]
        Fr = 0.0
        Fi = 0.0
        c = 0
        n = 0
        while n < N:
            tn = (degree * t + phase) % 1.0
            wr = math.cos(twopi * tn)
            wi = math.sin(twopi * tn)
            Fr += ar[n] * wr - ai[n] * wi
            Fi += ar[n] * wi + ai[n] * wr
            n += 1
            if c < C and checkpoints[c] == n:
                outr[c, j] = Fr
                outi[c, j] = Fi
                c += 1
            if tn == t:
                while c < C:
                    k = checkpoints[c]
                    sr = cum_r[k] - cum_r[n]
                    si = cum_i[k] - cum_i[n]
                    outr[c, j] = Fr + sr * wr - si * wi
                    outi[c, j] = Fi + sr * wi + si * wr
                    c += 1
                break
            t = tn

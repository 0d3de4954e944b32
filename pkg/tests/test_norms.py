import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import blaschke_products, disc_point
from innerlab.core import Arc, BoundaryGrid, DiskGrid, DomainError, monomial
from innerlab.norms import (GramForm, QuadratureResolutionWarning, arc_harmonic_measure,
                            bloch_norm_estimate, bmo_norm_estimate, dirichlet_closed,
                            dirichlet_coefficient_oracle, harmonic_measure, l2_comparison_bounds,
                            norm_l2_gram, norm_lp_quadrature, poisson_variance_closed,
                            poisson_variance_matrix, poisson_variance_quadrature,
                            taylor_coefficients, taylor_reconstruction_residual,
                            toeplitz_symbol, toeplitz_symbol_bounds, variance_majorant,
                            weighted_mass)
from innerlab.series import CoefficientSequence, direct_partial_sum, partial_sum

coeffs = st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                  min_size=1, max_size=10)
generators = st.builds(lambda r, t: r * np.exp(2j * np.pi * t), st.floats(0, 0.95), st.floats(0, 1))


def gram_double_sum(a, lam):
    """sum_{n,k} conj(a_n) a_k <f^k, f^n> with <f^k, f^n> = lam^(k-n) for k >= n."""
    total = 0j
    for n in range(len(a)):
        for k in range(len(a)):
            g = lam ** (k - n) if k >= n else np.conj(lam) ** (n - k)
            total += np.conj(a[n]) * a[k] * g
    return total.real


@given(coeffs, generators)
def test_gram_matches_double_sum(a, lam):
    assert norm_l2_gram(a, lam) == pytest.approx(gram_double_sum(a, lam), rel=1e-10, abs=1e-10)


@given(coeffs, generators)
def test_gram_sandwich(a, lam):
    lo, hi = l2_comparison_bounds(lam)
    s = float(np.sum(np.abs(a) ** 2))
    g = norm_l2_gram(a, lam)
    assert lo * s - 1e-9 * s <= g <= hi * s + 1e-9 * s


def test_gram_simple_values():
    assert norm_l2_gram([1, 1], 0) == 2
    assert norm_l2_gram([1, 1], -0.5) == 1
    assert norm_l2_gram([], 0.3) == 0
    m = GramForm(0.5, 3).matrix()
    assert np.allclose(m, m.conj().T) and m[0, 2] == 0.25


def test_gram_long_prefix_uses_consistent_recurrence():
    rng = np.random.default_rng(0)
    a = rng.normal(size=300) + 1j * rng.normal(size=300)
    g = norm_l2_gram(a, -0.5 + 0.2j)
    want = GramForm(-0.5 + 0.2j, 300).quadratic_form(a)
    assert g == pytest.approx(want, rel=1e-12)


@given(coeffs)
def test_gram_equals_quadrature_for_monomial(a):
    # every |F|^2 for z^2 has trigonometric degree below the grid size
    grid = BoundaryGrid(2 ** (len(a) + 2))
    q = norm_lp_quadrature(partial_sum(monomial(2), a, grid), 2) ** 2
    assert q == pytest.approx(norm_l2_gram(a, 0), rel=1e-12, abs=1e-12)


def test_gram_equals_quadrature_at_shallow_depth(maps):
    rng = np.random.default_rng(2)
    a = rng.normal(size=4) + 1j * rng.normal(size=4)
    for name in ("f2", "f3"):
        lam = maps[name].derivative_at_zero
        q = norm_lp_quadrature(partial_sum(maps[name], a, BoundaryGrid(2 ** 14)), 2) ** 2
        assert q == pytest.approx(norm_l2_gram(a, lam), rel=1e-10)


def test_lp_quadrature():
    assert norm_lp_quadrature(np.full(8, 2 + 0j), 3) == pytest.approx(2.0)
    n, err = norm_lp_quadrature(np.exp(2j * np.pi * np.arange(16) / 16), 2, return_error=True)
    assert n == pytest.approx(1) and err < 1e-15
    with pytest.raises(ValueError):
        norm_lp_quadrature(np.ones(4), 0)


@given(blaschke_products(max_extra=2), coeffs, disc_point(0.8))
def test_poisson_variance_matrix_is_the_closed_form(f, a, z):
    V = poisson_variance_matrix(f, np.array([z]), 1, len(a))[0]
    a = np.asarray(a)
    assert np.allclose(V, V.conj().T)
    q = float(np.real(a.conj() @ V @ a))
    c = poisson_variance_closed(f, a, z)
    assert q == pytest.approx(c, rel=1e-9, abs=1e-9)
    assert c >= -1e-10


@given(blaschke_products(max_extra=2), coeffs)
def test_variance_at_origin_is_the_l2_norm(f, a):
    assert poisson_variance_closed(f, a, 0) == pytest.approx(
        norm_l2_gram(a, f.derivative_at_zero), rel=1e-10, abs=1e-10)


def test_poisson_closed_matches_quadrature_at_shallow_depth(maps):
    rng = np.random.default_rng(3)
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    zs = np.array([0.3 + 0.2j, -0.5, 0.7j])
    for f in maps.values():
        c = poisson_variance_closed(f, a, zs)
        q = poisson_variance_quadrature(f, a, zs, BoundaryGrid(2 ** 14))
        assert np.allclose(q, c, rtol=1e-9)


def test_poisson_offset_blocks(maps):
    f = maps["f2"]
    a = np.array([1.0, -2.0, 0.5j])
    z = 0.4 - 0.3j
    full = np.concatenate([[0, 0], a])
    assert poisson_variance_closed(f, a, z, offset=3) == pytest.approx(
        poisson_variance_closed(f, full, z), rel=1e-12)


def test_single_term_variance(maps):
    # a = (1): variance is 1 - |f(z)|^2
    for f in maps.values():
        z = 0.6 + 0.3j
        assert poisson_variance_closed(f, [1], z) == pytest.approx(1 - abs(f(z)) ** 2, rel=1e-12)


def test_quadrature_guards(maps):
    with pytest.warns(QuadratureResolutionWarning):
        poisson_variance_quadrature(maps["f2"], [1], 0.99, BoundaryGrid(1024))
    with pytest.raises(DomainError):
        poisson_variance_quadrature(maps["f2"], [1], 1 - 2.0 ** -30, BoundaryGrid(1024))


def test_bmo_estimate(maps):
    f = maps["f2"]
    a = CoefficientSequence.power_law(0.75, 16).prefix()
    est = bmo_norm_estimate(f, a, DiskGrid(1, 6, 32))
    assert est.value >= norm_l2_gram(a, -0.5) - 1e-12
    assert est.value <= est.upper_bound + 1e-12
    maj = variance_majorant(f, a, 0.0)
    assert maj == pytest.approx(np.sum(np.abs(a) ** 2))


def test_harmonic_measure():
    grid = BoundaryGrid(2 ** 14)
    upper = (grid.angles > 0) & (grid.angles < np.pi)
    assert harmonic_measure(0, upper, grid) == pytest.approx(0.5, abs=1e-3)
    arc = Arc(np.pi / 2, 0.5)
    z = 0.5
    assert harmonic_measure(z, arc.contains(grid.points), grid) == pytest.approx(
        arc_harmonic_measure(z, arc), abs=1e-3)
    assert arc_harmonic_measure(0, Arc(1.0, 0.2)) == pytest.approx(0.2)


def test_dirichlet_values(maps):
    assert dirichlet_closed(maps["f1"], [1, 0.5]) == 3
    assert dirichlet_closed(maps["f2"], [1, 1]) == pytest.approx(4)
    assert dirichlet_closed(maps["f2"], [1]) == pytest.approx(2)
    a = np.array([1, -1j, 2, 0.5])
    assert dirichlet_closed(maps["f1"], a) == weighted_mass(maps["f1"], a)
    with pytest.raises(OverflowError):
        dirichlet_closed(maps["f1"], np.ones(600))


@given(blaschke_products(max_extra=2), coeffs)
def test_dirichlet_sandwich(f, a):
    sb = toeplitz_symbol_bounds(f.derivative_at_zero, f.degree, check=(f, a))
    assert sb.t_min * sb.t_max == pytest.approx(1)


def test_dirichlet_matches_taylor_oracle_at_low_degree(maps):
    a = [1, -0.5, 0.25j]
    for name in ("f1", "f2"):
        f = maps[name]
        c = taylor_coefficients(f, a, 256, 0.9, BoundaryGrid(2 ** 12))
        assert taylor_reconstruction_residual(f, a, c, 0.85) < 1e-10
        assert dirichlet_coefficient_oracle(c) == pytest.approx(dirichlet_closed(f, a), rel=1e-6)


def test_taylor_guards(maps):
    with pytest.raises(ValueError):
        taylor_coefficients(maps["f2"], [1], 64, 0.9, BoundaryGrid(128))
    with pytest.raises(DomainError):
        taylor_coefficients(maps["f2"], [1], 8, 1.0, BoundaryGrid(64))


def test_toeplitz_symbol_range():
    lam, N = -0.5, 2
    sb = toeplitz_symbol_bounds(lam, N)
    assert sb.cfN == pytest.approx(2.0938363213560542)
    t = toeplitz_symbol(lam, N, BoundaryGrid(4096).points)
    assert t.min() == pytest.approx(sb.t_min, rel=1e-6) and t.max() == pytest.approx(sb.t_max, rel=1e-6)
    assert np.mean(t) == pytest.approx(1.0)


def test_bloch_of_monomial():
    # (1 - r^2) 2r peaks at r = 1/sqrt(3) with value 4/(3 sqrt 3)
    grid = DiskGrid(0.5, 12, 16, 0.01)
    est = bloch_norm_estimate(monomial(2), [1], grid)
    assert est.value == pytest.approx(4 / (3 * math.sqrt(3)), rel=1e-4)
    assert est.truncation_bound == 0


def test_bloch_truncation_bound(maps):
    seq = CoefficientSequence.power_law(0.0, 60)
    est = bloch_norm_estimate(maps["f2"], seq, DiskGrid(1, 4, 16), 60)
    assert 0 < est.truncation_bound < 1e-6
    short = bloch_norm_estimate(maps["f2"], seq, DiskGrid(1, 8, 16), 2)
    assert short.truncation_bound == math.inf

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import blaschke_products, brute_blaschke, disc_point
from innerlab.core import DomainError, monomial
from innerlab.dynamics import (DecayConstants, DecayFitError, NonTerminationError,
                               boundary_contraction_constant, estimate_decay_constants,
                               hitting_time, hyperbolic_derivative, hyperbolic_derivative_iterate,
                               iterate, iterate_derivative, koenigs_approx, orbit,
                               schwarz_majorant)


@given(blaschke_products(), disc_point(0.99), st.integers(0, 8))
def test_iterate_matches_repeated_product(f, z, n):
    w = z
    for _ in range(n):
        w = brute_blaschke(f, w)
    assert abs(iterate(f, n, z) - w) <= 1e-11


def test_monomial_iterate_is_exact():
    assert iterate(monomial(2), 3, 0.5) == 0.5 ** 8
    assert iterate(monomial(2), 0, 0.5 + 0.1j) == 0.5 + 0.1j


def test_iterate_preserves_the_circle(maps):
    xi = np.exp(2j * np.pi * np.linspace(0, 1, 97))
    for f in maps.values():
        assert np.max(np.abs(np.abs(iterate(f, 40, xi)) - 1)) < 1e-12


def test_iterate_limits():
    with pytest.raises(ValueError):
        iterate(monomial(), -1, 0.1)
    with pytest.raises(DomainError):
        iterate(monomial(), 1, 2.0)


def test_orbit_stacks_iterates(maps):
    z = np.array([0.3, -0.2 + 0.5j])
    orb = orbit(maps["f3"], z, 5)
    assert orb.shape == (6, 2)
    for n in range(6):
        assert np.allclose(orb[n], iterate(maps["f3"], n, z), atol=0, rtol=0)
    rec = orbit(maps["f2"], 0.4, 3)
    assert rec.values.shape == (4,) and rec.moduli[0] == 0.4


@given(blaschke_products(), disc_point(0.9), st.integers(1, 6))
def test_iterate_derivative_matches_finite_difference(f, z, n):
    h = 1e-6
    fd = (iterate(f, n, z + h) - iterate(f, n, z - h)) / (2 * h)
    assert abs(iterate_derivative(f, n, z) - fd) <= 1e-4 * max(1.0, abs(fd))


@given(blaschke_products(), disc_point(0.95), st.integers(1, 20))
def test_chain_rule_for_hyperbolic_derivative(f, z, n):
    d = hyperbolic_derivative_iterate(f, n, z, "direct")
    c = hyperbolic_derivative_iterate(f, n, z, "chain")
    assert abs(d - c) <= 1e-10
    assert c <= 1 + 1e-12  # Schwarz-Pick


def test_hyperbolic_derivative_of_monomial():
    # (1-r^2) 2r / (1-r^4) = 2r / (1+r^2)
    r = 0.6
    assert hyperbolic_derivative(monomial(), r) == pytest.approx(2 * r / (1 + r * r), rel=1e-15)


@given(blaschke_products(), disc_point(0.999))
def test_schwarz_majorant_dominates(f, z):
    assert abs(f(z)) <= schwarz_majorant(f, abs(z)) + 1e-12


@given(blaschke_products(), st.floats(0.05, 0.95), disc_point(0.999))
def test_boundary_contraction(f, r, z):
    if abs(z) < r:
        return
    c = boundary_contraction_constant(f, r)
    assert 1 - abs(z) <= c * (1 - abs(f(z))) + 1e-12


def test_decay_constants_rates(maps):
    rng = np.random.default_rng(1)
    probes = 0.45 * np.sqrt(rng.random(32)) * np.exp(2j * np.pi * rng.random(32))
    dc = estimate_decay_constants(maps["f2"], probes)
    assert abs(dc.c0 - 0.5) < 1e-3
    z = dc.r0 * np.exp(2j * np.pi * rng.random(1000)) * np.sqrt(rng.random(1000))
    orb = orbit(maps["f2"], z, 40)
    for n in range(1, 41):
        assert np.all(np.abs(orb[n]) <= dc.bound(z, n) + 1e-15)
    sup = estimate_decay_constants(maps["f1"], probes)
    assert sup.superattracting


def test_decay_errors(maps):
    with pytest.raises(DomainError):
        estimate_decay_constants(maps["f2"], [0.7])
    with pytest.raises(DecayFitError):
        estimate_decay_constants(maps["f2"], [0.0])
    with pytest.raises(ValueError):
        DecayConstants(r0=1.5, c0=0.5)


def test_hitting_time_and_koenigs(maps):
    assert hitting_time(maps["f1"], 0.9, 0.5) == 3  # .81, .656, .43
    with pytest.raises(NonTerminationError):
        hitting_time(maps["f1"], 0.9, 0.5, n_max=2)
    # Koenigs approximants converge geometrically
    z = 0.3 + 0.1j
    k20, k40 = koenigs_approx(maps["f2"], z, 20), koenigs_approx(maps["f2"], z, 40)
    assert abs(k20 - k40) < 1e-5
    with pytest.raises(ValueError):
        koenigs_approx(maps["f1"], z, 3)

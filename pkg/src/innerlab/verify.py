"""Verification suites: every identity and inequality as a pass/fail report.

Each check is a function of an :class:`~innerlab.config.ExperimentConfig`
and a private random stream derived from ``(config.seed, check_id)``, so
reports do not depend on which other checks run or in what order.

Identity checks report ``bound = 0`` and ``margin = -error``; inequality
checks report the smallest slack.  A report passes when
``margin >= -tolerance`` unless the check states extra conditions, which are
listed in ``measured`` and ``notes``.
"""
from __future__ import annotations

import logging
import math
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from .core import (Arc, BoundaryGrid, DiskGrid, DomainError, NumericalDegeneracyError,
                   default_test_functions)
from .dynamics import (DecayFitError, boundary_contraction_constant, estimate_decay_constants,
                       hyperbolic_derivative_iterate, iterate, orbit, schwarz_majorant)
from .norms import (bloch_norm_estimate, bmo_norm_estimate, dirichlet_closed,
                    dirichlet_coefficient_oracle, l2_comparison_bounds, norm_l2_gram,
                    norm_lp_quadrature, poisson_variance_closed, poisson_variance_matrix,
                    poisson_variance_quadrature, taylor_coefficients,
                    taylor_reconstruction_residual, toeplitz_symbol_bounds, weighted_mass)
from .series import CoefficientSequence, synthesize_partial_sums

log = logging.getLogger(__name__)

SUITES = ("identities", "inequalities", "experiments")


class ExperimentSetupError(ValueError):
    """The configured inputs make an experiment meaningless."""


# failures of the mathematics under test, reported rather than raised
_CHECK_FAILURES = (DomainError, OverflowError, DecayFitError, NumericalDegeneracyError,
                   ExperimentSetupError)


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return _finite(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass
class VerificationReport:
    check_id: str
    suite: str
    label: str
    config_digest: str
    measured: dict
    bound: float
    margin: float
    tolerance: float
    passed: bool
    seed: int
    runtime: float
    series: dict = field(default_factory=dict)
    norms: list = field(default_factory=list)
    notes: str = ""

    def to_json(self) -> dict:
        """JSON-safe dict; non-finite floats become the strings ``inf``/``-inf``/``nan``."""
        return _clean({
            "check_id": self.check_id,
            "suite": self.suite,
            "label": self.label,
            "config_digest": self.config_digest,
            "measured": dict(sorted(self.measured.items())),
            "bound": self.bound,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "seed": self.seed,
            "runtime": self.runtime,
            "series": {k: [list(p) for p in v] for k, v in sorted(self.series.items())},
            "norms": self.norms,
            "notes": self.notes,
        })


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    label: str
    func: object
    defaults: dict


CHECKS: dict[str, Check] = {}


def register(check_id, suite, label="hard", **defaults):
    def deco(func):
        CHECKS[check_id] = Check(check_id, suite, label, func, defaults)
        return func
    return deco


class Context:
    """What a check sees: the config, merged parameters and its own random stream."""

    def __init__(self, cfg, check: Check):
        self.cfg = cfg
        self.params = {**check.defaults, **cfg.params.get(check.check_id, {})}
        self.tolerance = float(cfg.tolerances.get(check.check_id, self.params.get("tolerance", 0.0)))
        seq = np.random.SeedSequence([cfg.seed, zlib.crc32(check.check_id.encode())])
        self.rng = np.random.Generator(np.random.PCG64(seq))

    def map(self, name):
        if name == "configured":
            return self.cfg.blaschke
        return default_test_functions()[name]

    def maps(self, names):
        out = {}
        for n in names:
            f = self.map(n)
            if f not in out.values():
                out[n] = f
        return out

    def complex_prefix(self, length):
        return self.rng.normal(size=length) + 1j * self.rng.normal(size=length)

    def disc_points(self, n, r_min=0.0, r_max=1.0):
        """Uniform by area on ``r_min <= |z| < r_max``."""
        u = self.rng.random(n)
        r = np.sqrt(r_min ** 2 + u * (r_max ** 2 - r_min ** 2))
        return r * np.exp(2j * np.pi * self.rng.random(n))


# ---------------------------------------------------------------- identities

@register("gram_identity", "identities", prefixes=100, length=12, grid_size=2 ** 16,
          map="configured", tolerance=1e-10)
def _gram_identity(ctx):
    p = ctx.params
    f = ctx.map(p["map"])
    grid = BoundaryGrid(p["grid_size"])
    errs, two_grid = [], []
    for _ in range(p["prefixes"]):
        a = ctx.complex_prefix(p["length"])
        field_ = synthesize_partial_sums(f, a, grid)[-1]
        q, e = norm_lp_quadrature(field_, 2, return_error=True)
        g = norm_l2_gram(a, f.derivative_at_zero)
        errs.append(abs(q ** 2 - g) / g)
        two_grid.append(e / g)
    err = max(errs)
    return {"measured": {"max_relative_error": err, "median_relative_error": float(np.median(errs)),
                         "max_two_grid_estimate": max(two_grid)},
            "bound": 0.0, "margin": -err}


@register("poisson_variance_identity", "identities", length=10, grid_size=2 ** 16,
          points=[[0.3, 0.2], [-0.5, 0.0], [0.0, 0.7]], map="configured", tolerance=1e-9)
def _poisson_variance_identity(ctx):
    p = ctx.params
    f = ctx.map(p["map"])
    a = ctx.complex_prefix(p["length"])
    zs = np.array([complex(x, y) for x, y in p["points"]])
    closed = poisson_variance_closed(f, a, zs)
    quad, est = poisson_variance_quadrature(f, a, zs, BoundaryGrid(p["grid_size"]), return_error=True)
    rel = np.abs(quad - closed) / np.abs(closed)
    measured = {"max_relative_error": float(rel.max())}
    for z, r, e in zip(zs, rel, est):
        measured[f"relative_error[{z.real:+g}{z.imag:+g}i]"] = float(r)
        measured[f"two_grid_estimate[{z.real:+g}{z.imag:+g}i]"] = float(e)
    return {"measured": measured, "bound": 0.0, "margin": -float(rel.max())}


@register("poisson_reproducing", "identities", point=[0.3, 0.2], depth=2, grid_size=2 ** 16,
          map="configured", tolerance=1e-10)
def _poisson_reproducing(ctx):
    p = ctx.params
    f = ctx.map(p["map"])
    z = complex(*p["point"])
    grid = BoundaryGrid(p["grid_size"])
    g = iterate(f, p["depth"], grid.points)
    P = (1 - abs(z) ** 2) / np.abs(grid.points - z) ** 2
    quad = complex(grid.integrate(g * P))
    exact = iterate(f, p["depth"], z)
    err = abs(quad - exact) / abs(exact)
    return {"measured": {"relative_error": err}, "bound": 0.0, "margin": -err}


@register("chain_rule", "identities", points=1000, max_depth=20, maps=["f1", "f2", "f3", "configured"],
          tolerance=1e-10)
def _chain_rule(ctx):
    p = ctx.params
    z = ctx.disc_points(p["points"])
    measured = {}
    worst = 0.0
    for name, f in ctx.maps(p["maps"]).items():
        err = 0.0
        for n in range(1, p["max_depth"] + 1):
            d = hyperbolic_derivative_iterate(f, n, z, "direct")
            c = hyperbolic_derivative_iterate(f, n, z, "chain")
            err = max(err, float(np.max(np.abs(d - c))))
        measured[f"max_abs_difference[{name}]"] = err
        worst = max(worst, err)
    return {"measured": measured, "bound": 0.0, "margin": -worst}


@register("dirichlet_three_way", "identities", length=10, radius=0.9, grid_size=2 ** 18,
          degree=2 ** 12, maps=["f1", "configured"], tolerance=1e-6, sandwich_tolerance=1e-12)
def _dirichlet_three_way(ctx):
    """Closed form against the Taylor oracle, the symbol sandwich and the monomial case."""
    p = ctx.params
    measured, notes = {}, []
    worst = 0.0
    ok = True
    for name, f in ctx.maps(p["maps"]).items():
        a = ctx.complex_prefix(p["length"])
        closed = dirichlet_closed(f, a)
        w = weighted_mass(f, a)
        sb = toeplitz_symbol_bounds(f.derivative_at_zero, f.degree)
        sandwich = min(closed - w / sb.cfN, sb.cfN * w - closed) / w
        measured[f"closed[{name}]"] = closed
        measured[f"sandwich_margin[{name}]"] = sandwich
        ok &= sandwich >= -p["sandwich_tolerance"]
        if f.derivative_at_zero == 0:
            measured[f"monomial_exact_difference[{name}]"] = closed - w
            ok &= closed == w
        try:
            coeffs = taylor_coefficients(f, a, p["degree"], p["radius"], BoundaryGrid(p["grid_size"]))
            oracle = dirichlet_coefficient_oracle(coeffs)
            resid = taylor_reconstruction_residual(f, a, coeffs, p["radius"] * 0.95)
            rel = abs(oracle - closed) / closed if math.isfinite(oracle) else math.inf
            measured[f"oracle[{name}]"] = oracle
            measured[f"reconstruction_residual[{name}]"] = resid
        except OverflowError as exc:
            rel = math.inf
            notes.append(f"{name}: {exc}")
        measured[f"relative_error[{name}]"] = rel
        worst = max(worst, rel)
    ok &= worst <= ctx.tolerance
    return {"measured": measured, "bound": 0.0, "margin": -worst, "passed": ok,
            "notes": "; ".join(notes)}


@register("zero_coefficients", "identities", length=8, grid_size=2 ** 10, map="configured",
          tolerance=0.0)
def _zero_coefficients(ctx):
    p = ctx.params
    f = ctx.map(p["map"])
    a = np.zeros(p["length"], dtype=complex)
    grid = BoundaryGrid(p["grid_size"])
    vals = [norm_l2_gram(a, f.derivative_at_zero),
            norm_lp_quadrature(synthesize_partial_sums(f, a, grid)[-1], 2) ** 2,
            poisson_variance_closed(f, a, 0.3 + 0.2j),
            poisson_variance_quadrature(f, a, 0.3 + 0.2j, grid),
            dirichlet_closed(f, a)]
    worst = max(abs(v) for v in vals)
    return {"measured": {"max_abs_value": worst}, "bound": 0.0, "margin": -worst}


# -------------------------------------------------------------- inequalities

@register("l2_sandwich", "inequalities", prefixes=100, length=12, map="configured", tolerance=1e-12)
def _l2_sandwich(ctx):
    p = ctx.params
    f = ctx.map(p["map"])
    lo, hi = l2_comparison_bounds(f.derivative_at_zero)
    margin = math.inf
    for _ in range(p["prefixes"]):
        a = ctx.complex_prefix(p["length"])
        s = float(np.sum(np.abs(a) ** 2))
        g = norm_l2_gram(a, f.derivative_at_zero)
        margin = min(margin, (g - lo * s) / s, (hi * s - g) / s)
    return {"measured": {"lower_constant": lo, "upper_constant": hi, "min_relative_slack": margin},
            "bound": 0.0, "margin": margin}


@register("boundary_contraction", "inequalities", samples=100_000, radius=0.5,
          maps=["f1", "f2", "f3", "configured"], tolerance=1e-12)
def _boundary_contraction(ctx):
    p = ctx.params
    measured = {}
    margin = math.inf
    for name, f in ctx.maps(p["maps"]).items():
        c = boundary_contraction_constant(f, p["radius"])
        z = ctx.disc_points(p["samples"], p["radius"], 1.0)
        slack = c * (1 - np.abs(f(z))) - (1 - np.abs(z))
        measured[f"constant[{name}]"] = c
        measured[f"min_slack[{name}]"] = float(slack.min())
        margin = min(margin, float(slack.min()))
    return {"measured": measured, "bound": 0.0, "margin": margin}


@register("schwarz_majorant", "inequalities", samples=100_000,
          maps=["f1", "f2", "f3", "configured"], tolerance=1e-12)
def _schwarz_majorant(ctx):
    p = ctx.params
    measured = {}
    margin = math.inf
    for name, f in ctx.maps(p["maps"]).items():
        z = ctx.disc_points(p["samples"])
        fz = np.abs(f(z))
        s1 = float(np.min(schwarz_majorant(f, np.abs(z)) - fz))
        s2 = float(np.min(np.abs(z) - fz))
        measured[f"majorant_slack[{name}]"] = s1
        measured[f"schwarz_slack[{name}]"] = s2
        margin = min(margin, s1, s2)
    return {"measured": measured, "bound": 0.0, "margin": margin}


@register("superattracting_power_bound", "inequalities", samples=100_000, max_depth=10,
          maps=["f1", "configured"], tolerance=1e-12)
def _superattracting_power_bound(ctx):
    p = ctx.params
    measured = {}
    margin = math.inf
    maps = {k: f for k, f in ctx.maps(p["maps"]).items() if f.derivative_at_zero == 0}
    if not maps:
        raise ExperimentSetupError("no configured map has f'(0) = 0")
    for name, f in maps.items():
        z = ctx.disc_points(p["samples"])
        orb = orbit(f, z, p["max_depth"])
        worst = math.inf
        for n in range(1, p["max_depth"] + 1):
            slack = np.abs(z) ** (2 ** n) - np.abs(orb[n])
            worst = min(worst, float(slack.min()))
        measured[f"min_slack[{name}]"] = worst
        margin = min(margin, worst)
    return {"measured": measured, "bound": 0.0, "margin": margin}


@register("decay_constants", "inequalities", probes=64, holdout=100_000, max_depth=50,
          rate_tolerance=0.05, maps=["f1", "f2", "f3", "configured"], tolerance=1e-12)
def _decay_constants(ctx):
    """Fit ``(r0, c0)`` on probe orbits and test the bound on fresh points."""
    p = ctx.params
    measured = {}
    margin = math.inf
    ok = True
    for name, f in ctx.maps(p["maps"]).items():
        probes = ctx.disc_points(p["probes"], 0.05, 0.5)
        dc = estimate_decay_constants(f, probes)
        z = ctx.disc_points(p["holdout"], 0.0, dc.r0)
        orb = orbit(f, z, p["max_depth"])
        worst = math.inf
        for n in range(1, p["max_depth"] + 1):
            worst = min(worst, float(np.min(dc.bound(z, n) - np.abs(orb[n]))))
        measured[f"r0[{name}]"] = dc.r0
        measured[f"c0[{name}]"] = dc.c0
        measured[f"superattracting[{name}]"] = float(dc.superattracting)
        measured[f"min_slack[{name}]"] = worst
        lam = abs(f.derivative_at_zero)
        if lam > 0:
            dev = abs(dc.c0 - lam)
            measured[f"rate_deviation[{name}]"] = dev
            ok &= dev <= p["rate_tolerance"]
        else:
            ok &= dc.superattracting
        margin = min(margin, worst)
    ok &= margin >= -ctx.tolerance
    return {"measured": measured, "bound": 0.0, "margin": margin, "passed": ok}


@register("paley_zygmund", "inequalities", truncations=[4, 16, 64], grid_size=2 ** 16,
          levels=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9], map="configured", tolerance=1e-9)
def _paley_zygmund(ctx):
    p = ctx.params
    f = ctx.map(p["map"])
    Ns = sorted(p["truncations"])
    a = ctx.complex_prefix(Ns[-1])
    fields = synthesize_partial_sums(f, a, BoundaryGrid(p["grid_size"]), checkpoints=Ns)
    measured, series = {}, {}
    margin = math.inf
    for fld in fields:
        Z = np.abs(fld.values) ** 2
        m1 = float(np.mean(Z))
        m2 = float(np.mean(Z ** 2))
        pts = []
        for lam in p["levels"]:
            share = float(np.mean(Z > lam * m1))
            floor = (1 - lam) ** 2 * m1 ** 2 / m2
            pts.append((lam, share - floor))
            margin = min(margin, share - floor)
        series[f"slack_N{fld.N}"] = pts
        measured[f"min_slack[N={fld.N}]"] = min(s for _, s in pts)
    return {"measured": measured, "bound": 0.0, "margin": margin, "series": series}


@register("block_lower_bound", "inequalities", blocks=[[5, 15], [10, 30]],
          epsilons=[0.3, 0.1, 0.03, 0.01], assert_epsilon=0.01, samples=20_000,
          map="configured", tolerance=1e-9)
def _block_lower_bound(ctx):
    """Poisson variance of a block ``a_M..a_N`` against half its H^2 floor.

    The minimum over all coefficient vectors is the smallest eigenvalue of
    the variance matrix ``V(z)``, so each probe is checked for every
    coefficient choice at once.  A seeded coefficient block is reported as
    well.
    """
    p = ctx.params
    f = ctx.map(p["map"])
    lam = abs(f.derivative_at_zero)
    floor = 0.5 * (1 - lam) / (1 + lam)
    measured, series, notes = {}, {}, []
    margin = math.inf
    threshold = math.inf
    for M, N in p["blocks"]:
        L = N - M + 1
        z = ctx.disc_points(p["samples"])
        wM = np.abs(iterate(f, M, z))
        ev = np.linalg.eigvalsh(poisson_variance_matrix(f, z, M, L))[:, 0]
        a = ctx.complex_prefix(L)
        ratio = poisson_variance_closed(f, a, z, offset=M) / float(np.sum(np.abs(a) ** 2))
        held = 0.0
        pts = []
        for eps in sorted(p["epsilons"], reverse=True):
            sel = wM <= eps
            if not sel.any():
                notes.append(f"block ({M},{N}): no probe with |f^M(z)| <= {eps}")
                continue
            m = float(ev[sel].min()) - floor
            pts.append((eps, m))
            measured[f"min_eigen_slack[{M},{N}][eps={eps}]"] = m
            measured[f"probes[{M},{N}][eps={eps}]"] = int(sel.sum())
            if m >= -ctx.tolerance:
                held = max(held, eps)
            if eps == p["assert_epsilon"]:
                margin = min(margin, m)
                measured[f"seeded_block_slack[{M},{N}]"] = float(ratio[sel].min()) - floor
        series[f"eigen_slack_{M}_{N}"] = pts
        measured[f"empirical_epsilon[{M},{N}]"] = held
        threshold = min(threshold, held)
    measured["empirical_epsilon"] = threshold
    measured["floor"] = floor
    if not math.isfinite(margin):
        notes.append(f"no probes at epsilon {p['assert_epsilon']}")
        margin = -math.inf
    return {"measured": measured, "bound": floor, "margin": margin, "series": series,
            "notes": "; ".join(notes)}


@register("variance_constant", "inequalities", stability=0.25, map="configured", tolerance=0.0)
def _variance_constant(ctx):
    """Measured constant in ``variance <= C sum |a_n|^2 (1 - |f^n(z)|^2)``, and its stability."""
    p = ctx.params
    f = ctx.map(p["map"])
    a = ctx.cfg.coefficients.prefix(ctx.cfg.N)
    grid = ctx.cfg.disk()
    est = bmo_norm_estimate(f, a, grid)
    ref = bmo_norm_estimate(f, a, grid.refined())
    change = abs(ref.ratio_sup - est.ratio_sup) / est.ratio_sup
    lo, _ = l2_comparison_bounds(f.derivative_at_zero)
    measured = {"ratio_sup": est.ratio_sup, "ratio_sup_refined": ref.ratio_sup,
                "relative_change": change, "bmoa_lower": est.value,
                "bmoa_lower_refined": ref.value, "l2_mass": est.l2_mass}
    sandwich = est.value - lo * est.l2_mass
    measured["lower_sandwich_slack"] = sandwich
    norms = [{"name": "bmoa_squared", "value": ref.value, "lower_bound": ref.value,
              "upper_bound": ref.upper_bound, "error_estimate": abs(ref.value - est.value)}]
    ok = math.isfinite(est.ratio_sup) and change <= p["stability"] and sandwich >= 0
    return {"measured": measured, "bound": p["stability"], "margin": p["stability"] - change,
            "passed": ok, "norms": norms}


@register("lp_constant", "inequalities", exponents=[1.0, 4.0], prefixes=20, length=8,
          grid_size=2 ** 14, stability=0.25, map="configured", tolerance=0.0)
def _lp_constant(ctx):
    """Measured ``C(p, f)`` with ``C^-1 ||a||_2 <= ||F||_p <= C ||a||_2``."""
    p = ctx.params
    f = ctx.map(p["map"])
    prefixes = [ctx.complex_prefix(p["length"]) for _ in range(p["prefixes"])]
    measured = {}
    margin = math.inf
    for q in p["exponents"]:
        consts = []
        for M in (p["grid_size"], 2 * p["grid_size"]):
            grid = BoundaryGrid(M)
            r = []
            for a in prefixes:
                nrm = norm_lp_quadrature(synthesize_partial_sums(f, a, grid)[-1], q)
                r.append(nrm / math.sqrt(float(np.sum(np.abs(a) ** 2))))
            consts.append(max(max(r), 1.0 / min(r)))
        change = abs(consts[1] - consts[0]) / consts[0]
        measured[f"constant[p={q:g}]"] = consts[0]
        measured[f"constant_refined[p={q:g}]"] = consts[1]
        measured[f"relative_change[p={q:g}]"] = change
        margin = min(margin, p["stability"] - change)
    return {"measured": measured, "bound": p["stability"], "margin": margin}


@register("dirichlet_sandwich", "inequalities", prefixes=100, length=10,
          maps=["f1", "f2", "f3", "configured"], tolerance=1e-12)
def _dirichlet_sandwich(ctx):
    p = ctx.params
    measured = {}
    margin = math.inf
    for name, f in ctx.maps(p["maps"]).items():
        worst = math.inf
        for _ in range(p["prefixes"]):
            a = ctx.complex_prefix(p["length"])
            sb = toeplitz_symbol_bounds(f.derivative_at_zero, f.degree)
            d = dirichlet_closed(f, a)
            w = weighted_mass(f, a)
            worst = min(worst, (d - w / sb.cfN) / w, (sb.cfN * w - d) / w)
        measured[f"cfN[{name}]"] = sb.cfN
        measured[f"symbol_product_error[{name}]"] = abs(sb.t_min * sb.t_max - 1)
        measured[f"min_relative_slack[{name}]"] = worst
        margin = min(margin, worst, -abs(sb.t_min * sb.t_max - 1))
    return {"measured": measured, "bound": 0.0, "margin": margin}


@register("bloch_constant", "inequalities", prefixes=8, length=30, stability=0.25,
          map="configured", tolerance=0.0)
def _bloch_constant(ctx):
    """Measured ``C`` in ``||F||_B <= C sup |a_n|`` on sign sequences, and its stability."""
    p = ctx.params
    f = ctx.map(p["map"])
    grid = ctx.cfg.disk()
    seqs = [np.ones(p["length"])]
    seqs += [np.where(ctx.rng.random(p["length"]) < 0.5, -1.0, 1.0) for _ in range(p["prefixes"] - 1)]
    consts = []
    norms = []
    for g in (grid, grid.refined()):
        vals = [bloch_norm_estimate(f, a, g, len(a)).value / np.max(np.abs(a)) for a in seqs]
        consts.append(max(vals))
    change = abs(consts[1] - consts[0]) / consts[0]
    norms.append({"name": "bloch_all_ones", "value": float(consts[1]), "lower_bound": float(consts[1]),
                  "upper_bound": math.inf, "error_estimate": abs(consts[1] - consts[0])})
    return {"measured": {"constant": consts[0], "constant_refined": consts[1],
                         "relative_change": change},
            "bound": p["stability"], "margin": p["stability"] - change, "norms": norms}


# ---------------------------------------------------------------- experiments

@register("convergence", "experiments", map="configured", l2_exponent=0.75, l2_truncation=2 ** 12,
          l2_grid_size=2 ** 20, l2_decrease=2.0, divergent_exponent=0.5,
          divergent_truncations=[2 ** 8, 2 ** 10], divergent_grid_size=2 ** 16,
          bracket_slack=0.05, tolerance=1e-10)
def _convergence(ctx):
    """Square-summable versus divergent coefficients.

    Square-summable regime: the quadrature mean of ``|F_2N - F_N|^2``
    against the Gram form of the block, at ``N/4, N/2, N``.  Divergent
    regime: ``s_N^2`` against the harmonic sum within the ``[1/3, 3]``
    bracket (widened by ``bracket_slack``) and a positive Paley-Zygmund
    floor ``s_N^4 / (4 ||F_N||_4^4)`` on the measure of ``{|F_N|^2 > s_N^2/2}``.
    """
    p = ctx.params
    f = ctx.map(p["map"])
    lam = f.derivative_at_zero
    measured, series = {}, {}
    N = p["l2_truncation"]
    levels = [N // 4, N // 2, N]
    a = CoefficientSequence.power_law(p["l2_exponent"], 2 * N).prefix()
    cps = sorted(set(levels + [2 * n for n in levels]))
    fields = {fl.N: fl.values for fl in
              synthesize_partial_sums(f, a, BoundaryGrid(p["l2_grid_size"]), checkpoints=cps)}
    quad, gram = [], []
    for n in levels:
        q = float(np.mean(np.abs(fields[2 * n] - fields[n]) ** 2))
        g = norm_l2_gram(a[n:2 * n], lam)
        quad.append((n, q))
        gram.append((n, g))
        measured[f"block_quadrature[N={n}]"] = q
        measured[f"block_gram[N={n}]"] = g
        measured[f"block_relative_error[N={n}]"] = abs(q - g) / g
    err = measured[f"block_relative_error[N={N}]"]
    decrease = quad[0][1] / quad[-1][1]
    measured["block_decrease_factor"] = decrease
    measured["block_decrease_factor_gram"] = gram[0][1] / gram[-1][1]
    series["block_quadrature"] = quad
    series["block_gram"] = gram

    Ns = sorted(p["divergent_truncations"])
    b = CoefficientSequence.power_law(p["divergent_exponent"], Ns[-1]).prefix()
    dfields = synthesize_partial_sums(f, b, BoundaryGrid(p["divergent_grid_size"]), checkpoints=Ns)
    lo, hi = l2_comparison_bounds(lam)
    bracket_ok, floor_ok = True, True
    s_prev = 0.0
    grows = True
    for fl in dfields:
        n = fl.N
        s2 = norm_l2_gram(b[:n], lam)
        H = float(np.sum(np.abs(b[:n]) ** 2))
        inside = lo * H * (1 - p["bracket_slack"]) <= s2 <= hi * H * (1 + p["bracket_slack"])
        Z = np.abs(fl.values) ** 2
        m2 = float(np.mean(Z))
        floor = 0.25 * m2 ** 2 / float(np.mean(Z ** 2))
        share = float(np.mean(Z > 0.5 * m2))
        measured[f"s_squared[N={n}]"] = s2
        measured[f"harmonic_sum[N={n}]"] = H
        measured[f"s_squared_over_harmonic[N={n}]"] = s2 / H
        measured[f"pz_floor[N={n}]"] = floor
        measured[f"pz_measure[N={n}]"] = share
        measured[f"measure_half_s[N={n}]"] = float(np.mean(np.abs(fl.values) > 0.5 * math.sqrt(s2)))
        bracket_ok &= inside
        floor_ok &= floor > 0 and share >= floor
        grows &= s2 > s_prev
        s_prev = s2
    measured["divergent_bracket_holds"] = float(bracket_ok)
    measured["divergent_floor_positive"] = float(floor_ok)
    measured["divergent_s_grows"] = float(grows)
    ok = err <= ctx.tolerance and decrease >= p["l2_decrease"] and bracket_ok and floor_ok and grows
    return {"measured": measured, "bound": 0.0, "margin": -err, "passed": ok, "series": series}


@register("unboundedness_signature", "experiments", label="signature", map="f1", exponent=1.0,
          ladder=[2 ** 12, 2 ** 16, 2 ** 20], truncation_ratio=0.25, arc=[0.0, 1.0], tolerance=0.0)
def _unboundedness(ctx):
    """Grid maxima of ``|F_N|`` on an arc along a refinement ladder with ``N = M/4``.

    Strict growth is a signature of essential unboundedness, not a proof.
    """
    p = ctx.params
    f = ctx.map(p["map"])
    seq = CoefficientSequence.power_law(p["exponent"], 1)
    if seq.is_l1:
        raise ExperimentSetupError("coefficients are summable: F is bounded and the experiment is void")
    arc = Arc(*p["arc"])
    sub = Arc(arc.center_angle, arc.length / 2)
    maxima, measured = [], {}
    sub_ok = True
    for M in p["ladder"]:
        N = int(M * p["truncation_ratio"])
        grid = BoundaryGrid(M)
        vals = np.abs(synthesize_partial_sums(f, seq.prefix(N), grid)[-1].values)
        on = arc.contains(grid.points)
        top = float(vals[on].max())
        top_sub = float(vals[sub.contains(grid.points)].max())
        sub_ok &= top >= top_sub
        maxima.append((M, top))
        measured[f"max_abs[M={M}]"] = top
        measured[f"max_abs_subarc[M={M}]"] = top_sub
    diffs = [b[1] - a[1] for a, b in zip(maxima, maxima[1:])]
    margin = min(diffs)
    measured["subarc_monotone"] = float(sub_ok)
    return {"measured": measured, "bound": 0.0, "margin": margin, "passed": margin > 0 and sub_ok,
            "series": {"grid_max": maxima}, "notes": "strict growth required (margin > 0)"}


@register("vmoa_decay", "experiments", map="configured", ratio=0.5, length=60, j_min=6, j_max=14,
          angles=64, final_fraction=0.05, allowed_exceptions=1, tolerance=0.0)
def _vmoa_decay(ctx):
    """Max Poisson variance over circles ``|z| = 1 - 2^-j``, expected to vanish as ``j`` grows."""
    p = ctx.params
    f = ctx.map(p["map"])
    a = p["ratio"] ** np.arange(1, p["length"] + 1)
    mass = float(np.sum(a ** 2))
    ang = np.exp(2j * np.pi * np.arange(p["angles"]) / p["angles"])
    pts = []
    for j in range(p["j_min"], p["j_max"] + 1):
        v = poisson_variance_closed(f, a, (1 - 2.0 ** -j) * ang)
        pts.append((j, float(np.max(v))))
    ups = sum(1 for x, y in zip(pts, pts[1:]) if y[1] >= x[1])
    final = pts[-1][1] / mass
    margin = p["final_fraction"] - final
    measured = {"final_fraction": final, "non_decreasing_steps": ups, "l2_mass": mass}
    ok = margin >= 0 and ups <= p["allowed_exceptions"]
    return {"measured": measured, "bound": p["final_fraction"], "margin": margin, "passed": ok,
            "series": {"max_variance": pts}}


# -------------------------------------------------------------------- runners

def run_check(cfg, check_id: str) -> VerificationReport:
    check = CHECKS[check_id]
    ctx = Context(cfg, check)
    t0 = time.perf_counter()
    try:
        out = check.func(ctx)
    except _CHECK_FAILURES as exc:
        out = {"measured": {}, "bound": math.nan, "margin": -math.inf, "passed": False,
               "notes": f"{type(exc).__name__}: {exc}"}
    elapsed = time.perf_counter() - t0
    log.info("%s finished in %.2f s", check_id, elapsed)
    margin = float(out["margin"]) + 0.0  # no negative zero
    passed = out.get("passed", margin >= -ctx.tolerance)
    return VerificationReport(
        check_id=check_id, suite=check.suite, label=check.label, config_digest=cfg.digest(),
        measured={k: float(v) for k, v in out["measured"].items()}, bound=float(out["bound"]),
        margin=margin, tolerance=ctx.tolerance, passed=bool(passed), seed=cfg.seed,
        runtime=elapsed if cfg.record_runtime else 0.0, series=out.get("series", {}),
        norms=out.get("norms", []), notes=out.get("notes", ""))


def suite_checks(suite: str, cfg=None) -> list[str]:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    ids = [c for c, chk in CHECKS.items() if suite == "all" or chk.suite == suite]
    if cfg is not None and cfg.checks is not None:
        ids = [c for c in ids if c in cfg.checks]
    return sorted(ids)


def run_suite(cfg, suite: str = "all") -> list[VerificationReport]:
    """Run every selected check of ``suite``; reports are sorted by ``check_id``."""
    return [run_check(cfg, c) for c in suite_checks(suite, cfg)]


def verify_exact_identities(cfg) -> list[VerificationReport]:
    return run_suite(cfg, "identities")


def verify_inequalities(cfg) -> list[VerificationReport]:
    return run_suite(cfg, "inequalities")


def convergence_experiment(cfg) -> VerificationReport:
    return run_check(cfg, "convergence")


def unboundedness_experiment(cfg) -> VerificationReport:
    return run_check(cfg, "unboundedness_signature")


def vmoa_decay_experiment(cfg) -> VerificationReport:
    return run_check(cfg, "vmoa_decay")


def all_hard_checks_pass(reports) -> bool:
    return all(r.passed for r in reports if r.label != "signature")

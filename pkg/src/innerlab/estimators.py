"""scikit-learn style wrappers.

:class:`IteratedSeriesTransformer` maps points ``z`` to the iterates
``f(z), ..., f^N(z)`` as real features.  ``F = sum a_n f^n`` is linear in
those features, so a linear regressor fitted on them recovers coefficients
from sampled values of ``F``.  :class:`DecayRateEstimator` fits the
geometric decay constants of the orbits near the fixed point.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import FiniteBlaschkeProduct, default_test_functions
from .dynamics import estimate_decay_constants, orbit


def _map(blaschke):
    if isinstance(blaschke, FiniteBlaschkeProduct):
        return blaschke
    return default_test_functions()[blaschke]


def _points(X) -> np.ndarray:
    """Complex points from a complex column or a ``(re, im)`` pair of columns."""
    X = np.asarray(X)
    if np.iscomplexobj(X):
        return X.reshape(len(X), -1)[:, 0].astype(complex)
    X = X.astype(float)
    if X.ndim != 2 or X.shape[1] != 2:
        raise ValueError(f"expected complex values or an (n, 2) real array, got shape {X.shape}")
    return X[:, 0] + 1j * X[:, 1]


class IteratedSeriesTransformer(TransformerMixin, BaseEstimator):
    """Features ``[Re f^1, ..., Re f^N, Im f^1, ..., Im f^N]`` of each point."""

    def __init__(self, blaschke="f2", n_terms=16):
        self.blaschke = blaschke
        self.n_terms = n_terms

    def fit(self, X, y=None):
        if int(self.n_terms) < 1:
            raise ValueError("n_terms must be positive")
        self.map_ = _map(self.blaschke)
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "map_")
        orb = orbit(self.map_, _points(X), int(self.n_terms))[1:].T
        return np.hstack([orb.real, orb.imag])

    def get_feature_names_out(self, input_features=None):
        n = int(self.n_terms)
        return np.array([f"re_f{k}" for k in range(1, n + 1)] + [f"im_f{k}" for k in range(1, n + 1)])


class DecayRateEstimator(BaseEstimator):
    """Fit ``(r0, c0)`` with ``|f^n(z)| <= c0**n |z| / r0`` from probe points ``|z| <= 1/2``."""

    def __init__(self, blaschke="f2", n_max=2000, safety=1.05):
        self.blaschke = blaschke
        self.n_max = n_max
        self.safety = safety

    def fit(self, X, y=None):
        dc = estimate_decay_constants(_map(self.blaschke), _points(X), self.n_max, safety=self.safety)
        self.constants_ = dc
        self.r0_ = dc.r0
        self.c0_ = dc.c0
        self.superattracting_ = dc.superattracting
        return self

    def predict(self, X, n=1):
        """Upper bound on ``|f^n(z)|`` for each point."""
        check_is_fitted(self, "constants_")
        return self.constants_.bound(_points(X), n)

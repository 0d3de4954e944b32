import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.linear_model import LinearRegression
from sklearn.pipeline import make_pipeline

from innerlab.estimators import DecayRateEstimator, IteratedSeriesTransformer
from innerlab.series import direct_partial_sum


def sample(n, radius, seed=0):
    rng = np.random.default_rng(seed)
    return radius * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def test_pipeline_recovers_real_coefficients(maps):
    z = sample(300, 0.9)
    a = np.array([1.0, -0.5, 0.25, 2.0])
    F = direct_partial_sum(maps["f3"], a, z)
    X = np.c_[z.real, z.imag]
    pipe = make_pipeline(IteratedSeriesTransformer("f3", 4), LinearRegression(fit_intercept=False))
    pipe.fit(X, F.real)
    assert np.allclose(pipe[-1].coef_[:4], a, atol=1e-8)


def test_transformer_features(maps):
    t = IteratedSeriesTransformer(maps["f1"], 3).fit(np.array([[0.5, 0.0]]))
    assert np.allclose(t.transform(np.array([0.5 + 0j])), [[0.25, 0.0625, 0.00390625, 0, 0, 0]])
    assert list(t.get_feature_names_out())[:2] == ["re_f1", "re_f2"]
    with pytest.raises(NotFittedError):
        IteratedSeriesTransformer().transform(np.zeros((1, 2)))
    with pytest.raises(ValueError):
        IteratedSeriesTransformer(n_terms=0).fit(np.zeros((1, 2)))


def test_decay_estimator():
    z = sample(32, 0.45, 1)
    est = DecayRateEstimator("f2").fit(np.c_[z.real, z.imag])
    assert abs(est.c0_ - 0.5) < 1e-3 and not est.superattracting_
    assert np.all(est.predict(z, 3) == est.c0_ ** 3 * np.abs(z) / est.r0_)
    assert clone(est).get_params() == est.get_params()

import json

import pytest
from hypothesis import given, strategies as st

from innerlab.config import ConfigError, ExperimentConfig, config_from_dict, load_config
from innerlab.series import CoefficientSequence


def test_defaults_round_trip():
    cfg = ExperimentConfig()
    assert config_from_dict(cfg.to_json()) == cfg
    assert cfg.N == 32 and cfg.blaschke.derivative_at_zero == -0.5


@given(st.sampled_from(["f1", "f2", "f3"]), st.floats(0.51, 2.0), st.integers(1, 64),
       st.integers(0, 2 ** 32), st.sampled_from(["plus", "rademacher"]))
def test_round_trip(name, s, length, seed, signs):
    obj = {"blaschke": name,
           "coefficients": CoefficientSequence.power_law(s, length, 1.0, signs, seed).to_json(),
           "boundary_grid": {"size": 1024}, "seed": seed, "checkpoints": [1, length],
           "checks": ["chain_rule"], "tolerances": {"chain_rule": 1e-9}}
    cfg = config_from_dict(obj)
    again = config_from_dict(json.loads(json.dumps(cfg.to_json())))
    assert again == cfg and again.digest() == cfg.digest()


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"blaschke": {"zeros": [[0, 0], [0.4, 0]]}, "seed": 7}))
    cfg = load_config(p)
    assert cfg.seed == 7 and cfg.blaschke.degree == 2


@pytest.mark.parametrize("obj,fragment", [
    ({"blaschke": {"zeros": [[0.5, 0], [0.2, 0]]}}, "f(0) must be 0"),
    ({"blaschke": {"zeros": [[0, 0], [0.2, 0]], "rotation": [0.9, 0]}}, "modulus 1"),
    ({"blaschke": {"zeros": [[0, 0], [1.2, 0]]}}, "|alpha| < 1"),
    ({"blaschke": {"zeros": [[0, 0]]}}, "degree must be at least 2"),
    ({"boundary_grid": {"size": 1000}}, "power of two"),
    ({"checks": ["no_such_check"]}, "unknown check"),
    ({"bogus": 1}, "schema"),
    ({"seed": -1}, "schema"),
])
def test_invalid_configs(obj, fragment):
    with pytest.raises(ConfigError) as info:
        config_from_dict(obj)
    assert any(fragment in v for v in info.value.violations)


def test_every_violation_is_listed():
    with pytest.raises(ConfigError) as info:
        config_from_dict({"blaschke": {"zeros": [[0.5, 0]], "rotation": [0.9, 0]}})
    assert len(info.value.violations) == 3


def test_parse_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="parse"):
        load_config(p)
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.json")

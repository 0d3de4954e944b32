"""Experiment configuration: JSON loading, schema validation and digests."""
from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from .core import FiniteBlaschkeProduct, default_test_functions
from .series import CoefficientSequence


class ConfigError(ValueError):
    """A configuration failed validation; ``violations`` lists every problem."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.violations))


def load_schema() -> dict:
    text = resources.files("innerlab").joinpath("schema/config.schema.json").read_text()
    return json.loads(text)


def _default_coefficients():
    return CoefficientSequence.power_law(0.75, 32, sign_model="rademacher", seed=0)


def _default_disk():
    return {"j_min": 1, "j_max": 9, "j_step": 1, "angles_per_radius": 64}


@dataclass
class ExperimentConfig:
    blaschke: FiniteBlaschkeProduct = field(default_factory=lambda: default_test_functions()["f2"])
    coefficients: CoefficientSequence = field(default_factory=_default_coefficients)
    boundary_size: int = 2 ** 16
    disk_grid: dict = field(default_factory=_default_disk)
    truncation: int | None = None
    checkpoints: tuple = ()
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    checks: tuple | None = None
    params: dict = field(default_factory=dict)
    record_runtime: bool = False
    outputs: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.truncation if self.truncation is not None else self.coefficients.length

    def to_json(self) -> dict:
        out = {
            "blaschke": self.blaschke.to_json(),
            "coefficients": self.coefficients.to_json(),
            "boundary_grid": {"size": self.boundary_size},
            "disk_grid": dict(self.disk_grid),
            "checkpoints": list(self.checkpoints),
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
            "params": copy.deepcopy(self.params),
            "record_runtime": self.record_runtime,
            "outputs": dict(self.outputs),
        }
        if self.truncation is not None:
            out["truncation"] = self.truncation
        if self.checks is not None:
            out["checks"] = list(self.checks)
        return out

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form (sorted keys, no whitespace)."""
        body = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(body.encode()).hexdigest()

    def disk(self):
        from .core import DiskGrid
        d = {**_default_disk(), **self.disk_grid}
        return DiskGrid(d["j_min"], d["j_max"], d["angles_per_radius"], d["j_step"])


def _parse_blaschke(obj, problems):
    if isinstance(obj, str):
        return default_test_functions()[obj]
    zeros = [complex(re, im) for re, im in obj["zeros"]]
    rot = obj.get("rotation", [1.0, 0.0])
    rot = complex(rot[0], rot[1])
    bad = FiniteBlaschkeProduct.violations(zeros, rot)
    if bad:
        problems.extend(f"blaschke: {p}" for p in bad)
        return None
    return FiniteBlaschkeProduct(tuple(zeros), rot)


def config_from_dict(obj: dict) -> ExperimentConfig:
    """Validate ``obj`` against the schema and the domain invariants."""
    from .verify import CHECKS

    validator = jsonschema.Draft202012Validator(load_schema())
    problems = []
    for err in sorted(validator.iter_errors(obj), key=lambda e: list(map(str, e.absolute_path))):
        where = "/".join(map(str, err.absolute_path)) or "<root>"
        problems.append(f"schema: {where}: {err.message}")
    if problems:
        raise ConfigError(problems)

    cfg = ExperimentConfig()
    if "blaschke" in obj:
        f = _parse_blaschke(obj["blaschke"], problems)
        if f is not None:
            cfg.blaschke = f
    if "coefficients" in obj:
        try:
            cfg.coefficients = CoefficientSequence.from_json(obj["coefficients"])
        except ValueError as exc:
            problems.append(f"coefficients: {exc}")
    if "boundary_grid" in obj:
        M = obj["boundary_grid"]["size"]
        if M & (M - 1):
            problems.append(f"boundary_grid: size {M} is not a power of two")
        cfg.boundary_size = M
    if "disk_grid" in obj:
        d = {**_default_disk(), **obj["disk_grid"]}
        if d["j_max"] < d["j_min"]:
            problems.append("disk_grid: j_max must be >= j_min")
        cfg.disk_grid = dict(obj["disk_grid"])
    cfg.truncation = obj.get("truncation")
    cfg.checkpoints = tuple(obj.get("checkpoints", ()))
    if cfg.checkpoints:
        if list(cfg.checkpoints) != sorted(cfg.checkpoints):
            problems.append("checkpoints must be sorted")
        if max(cfg.checkpoints) > cfg.N:
            problems.append(f"checkpoints must not exceed the truncation {cfg.N}")
    for key in ("tolerances", "params"):
        for name in obj.get(key, {}):
            if name not in CHECKS:
                problems.append(f"{key}: unknown check {name!r}")
    cfg.tolerances = dict(obj.get("tolerances", {}))
    cfg.params = copy.deepcopy(obj.get("params", {}))
    if "checks" in obj:
        for name in obj["checks"]:
            if name not in CHECKS:
                problems.append(f"checks: unknown check {name!r}")
        cfg.checks = tuple(obj["checks"])
    cfg.seed = obj.get("seed", 0)
    cfg.record_runtime = obj.get("record_runtime", False)
    cfg.outputs = dict(obj.get("outputs", {}))
    if problems:
        raise ConfigError(problems)
    return cfg


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON configuration file.

    Raises ``OSError`` when the file cannot be read and :class:`ConfigError`
    for malformed JSON or any validation failure.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"parse: {exc}"]) from None
    if not isinstance(obj, dict):
        raise ConfigError(["schema: <root>: configuration must be a JSON object"])
    return config_from_dict(obj)

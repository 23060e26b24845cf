"""Run-configuration parsing with strict schema validation.

Configs are JSON documents.  Unknown keys are rejected at every level with
the offending field path, because a silently ignored typo in a physics
sweep wastes hours.  Complex numbers never appear in configs; fractions may
be written as strings like "1/2".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .correlations import Partition
from .errors import ConfigError
from .models import FAMILIES, ModelSpec
from .pipeline import dual_momentum_partition
from .spectra import OCCUPATION_POLICIES

__all__ = ["RunConfig", "Tolerances", "load_config", "parse_config"]

_KNOWN_TOLERANCES = ("clamp", "midgap", "defective", "fit_imag", "oracle")


@dataclass
class Tolerances:
    clamp: float = 1e-12
    midgap: float = 0.05
    defective: float = 1e12
    fit_imag: float = 1e-6
    oracle: float = 1e-8

    def override(self, name: str, value: float) -> None:
        if name not in _KNOWN_TOLERANCES:
            raise ConfigError(f"unknown tolerance {name!r}; "
                              f"known: {_KNOWN_TOLERANCES}", "tolerances")
        setattr(self, name, float(value))


def _require_keys(d: dict, required, optional, path: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"expected an object, got {type(d).__name__}", path)
    for k in required:
        if k not in d:
            raise ConfigError(f"missing required key {k!r}", path)
    allowed = set(required) | set(optional)
    unknown = [k for k in d if k not in allowed]
    if unknown:
        raise ConfigError(f"unknown keys {unknown}; allowed: {sorted(allowed)}",
                          path)


def _parse_fraction(value, path: str) -> Fraction:
    try:
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value).limit_denominator(10 ** 9)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"not a valid fraction: {value!r} ({exc})", path)


def _parse_model(d: dict, path: str) -> ModelSpec:
    _require_keys(d, ("family", "params"), ("bc",), path)
    family = d["family"]
    if family not in FAMILIES:
        raise ConfigError(f"unknown family {family!r}; known: {sorted(FAMILIES)}",
                          f"{path}.family")
    try:
        return ModelSpec(family, dict(d["params"]), d.get("bc", "periodic"))
    except ValueError as exc:
        raise ConfigError(str(exc), f"{path}.params")


_PARTITION_TYPES = ("half", "central_half", "range", "indices", "dual_half",
                    "size_scan")


def parse_partition(d: dict, n_total: int, path: str):
    """One partition spec -> Partition, or a list for type size_scan."""
    _require_keys(d, ("type",), ("space", "start", "stop", "indices", "p",
                                 "min", "max", "step"), path)
    space = d.get("space", "position")
    kind = d["type"]
    if kind not in _PARTITION_TYPES:
        raise ConfigError(f"unknown partition type {kind!r}; "
                          f"known: {_PARTITION_TYPES}", f"{path}.type")
    try:
        if kind == "half":
            return Partition.half(n_total, space)
        if kind == "central_half":
            return Partition.central_half(n_total, space)
        if kind == "range":
            return Partition.contiguous(int(d["start"]), int(d["stop"]),
                                        n_total, space)
        if kind == "indices":
            return Partition(space, tuple(int(i) for i in d["indices"]), n_total)
        if kind == "dual_half":
            return dual_momentum_partition(n_total, int(d["p"]))
        lo = int(d.get("min", 4))
        hi = int(d.get("max", n_total - 4))
        step = int(d.get("step", 1))
        return [Partition.contiguous(0, la, n_total, space)
                for la in range(lo, hi + 1, step)]
    except KeyError as exc:
        raise ConfigError(f"missing key {exc} for type {kind!r}", path)


@dataclass
class RunConfig:
    """Validated run configuration shared by the CLI subcommands."""

    model: ModelSpec | None
    filling: Fraction
    policy: str
    partitions: list = field(default_factory=list)
    renyi: tuple = (2,)
    sweep: dict | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    fit: dict | None = None
    dynamics: dict | None = None
    oracle: dict | None = None
    raw: dict = field(default_factory=dict, repr=False)

    def canonical_json(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))


_TOP_KEYS = ("model", "filling", "policy", "partitions", "renyi", "sweep",
             "tolerances", "fit", "dynamics", "oracle")


def parse_config(doc: dict) -> RunConfig:
    _require_keys(doc, (), _TOP_KEYS, "config")
    model = _parse_model(doc["model"], "config.model") if "model" in doc else None

    filling = _parse_fraction(doc.get("filling", "1/2"), "config.filling")
    if not 0 < filling <= 1:
        raise ConfigError(f"filling must be in (0, 1], got {filling}",
                          "config.filling")

    policy = doc.get("policy", "real_part")
    if policy not in OCCUPATION_POLICIES:
        raise ConfigError(f"unknown policy {policy!r}; "
                          f"known: {OCCUPATION_POLICIES}", "config.policy")

    renyi = tuple(int(n) for n in doc.get("renyi", [2]))
    for n in renyi:
        if n < 2:
            raise ConfigError(f"Renyi orders must be >= 2, got {n}",
                              "config.renyi")

    sweep = None
    if "sweep" in doc:
        _require_keys(doc["sweep"], ("parameter", "values"), (), "config.sweep")
        values = doc["sweep"]["values"]
        if not isinstance(values, list) or not values:
            raise ConfigError("sweep values must be a nonempty list",
                              "config.sweep.values")
        seen, dedup = set(), []
        for v in values:
            if not isinstance(v, (int, float)) or v != v or v in (float("inf"), float("-inf")):
                raise ConfigError(f"sweep value {v!r} not a finite number",
                                  "config.sweep.values")
            if v not in seen:
                seen.add(v)
                dedup.append(v)
        param = doc["sweep"]["parameter"]
        if model is not None and param not in FAMILIES[model.family][0]:
            raise ConfigError(
                f"sweep parameter {param!r} not a parameter of family "
                f"{model.family!r}", "config.sweep.parameter")
        sweep = {"parameter": param, "values": dedup}

    tolerances = Tolerances()
    for name, value in doc.get("tolerances", {}).items():
        tolerances.override(name, value)

    fit = None
    if "fit" in doc:
        _require_keys(doc["fit"], ("geometry", "length"), ("window",),
                      "config.fit")
        if doc["fit"]["geometry"] not in ("chord", "open_log"):
            raise ConfigError("geometry must be 'chord' or 'open_log'",
                              "config.fit.geometry")
        fit = dict(doc["fit"])

    dynamics = None
    if "dynamics" in doc:
        _require_keys(doc["dynamics"], ("t_grid",),
                      ("initial_state", "partition"), "config.dynamics")
        tg = doc["dynamics"]["t_grid"]
        if isinstance(tg, dict):
            _require_keys(tg, ("start", "stop", "num"), (),
                          "config.dynamics.t_grid")
        state = doc["dynamics"].get("initial_state", "domain_wall")
        if state not in ("domain_wall", "staggered", "hermitian_ground"):
            raise ConfigError(f"unknown initial state {state!r}",
                              "config.dynamics.initial_state")
        dynamics = dict(doc["dynamics"])

    oracle = None
    if "oracle" in doc:
        _require_keys(doc["oracle"], (),
                      ("n_modes", "n_cases", "subsystem", "seed"),
                      "config.oracle")
        oracle = dict(doc["oracle"])

    partitions = []
    if "partitions" in doc:
        if model is None:
            raise ConfigError("partitions require a model", "config.partitions")
        dim = model.build().dim
        for i, p in enumerate(doc["partitions"]):
            got = parse_partition(p, dim, f"config.partitions[{i}]")
            partitions.extend(got if isinstance(got, list) else [got])

    return RunConfig(model=model, filling=filling, policy=policy,
                     partitions=partitions, renyi=renyi, sweep=sweep,
                     tolerances=tolerances, fit=fit, dynamics=dynamics,
                     oracle=oracle, raw=doc)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", path)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: "
                          f"{exc.msg}", path)
    return parse_config(doc)

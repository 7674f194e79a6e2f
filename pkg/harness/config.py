"""Experiment and walk-study configs, parsed strictly from JSON or YAML."""

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml

from baselines.base import Algorithm
from baselines.filters import get_filter
from mcsolve.splitting import DEFAULT_ABSORB, ProbabilityScheme, SchemeKind
from mcsolve.walks import MAX_STEPS
from sigmodel.models import InputKind, InputModel, Plant
from utils.errors import ConfigError, WienerMCError

DEFAULT_LADDER = (2, 4, 8, 16, 32, 64)


class CorrelationKind(str, Enum):
    EXACT = "exact"
    EMPIRICAL = "empirical"


class WalksPolicy(str, Enum):
    LADDER = "ladder"    # walks per unknown = ladder point
    FIXED = "fixed"      # same walk count at every ladder point


@dataclass(frozen=True)
class AlgorithmSpec:
    algorithm: Algorithm
    params: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class McmcSettings:
    scheme: SchemeKind = SchemeKind.UNIFORM
    walks_policy: WalksPolicy = WalksPolicy.LADDER
    walks: int = 1000
    absorb: float = DEFAULT_ABSORB
    max_steps: int = MAX_STEPS
    force: bool = False

    @property
    def probability_scheme(self) -> ProbabilityScheme:
        return ProbabilityScheme(kind=self.scheme, absorb=self.absorb)

    def walks_at(self, ladder_point: int) -> int:
        return ladder_point if self.walks_policy is WalksPolicy.LADDER else self.walks


@dataclass(frozen=True)
class CorrelationSource:
    kind: CorrelationKind = CorrelationKind.EXACT
    n_samples: Optional[int] = None


@dataclass(frozen=True)
class ExperimentConfig:
    plant_h: Tuple[float, ...]
    input_model: InputModel
    algorithms: Tuple[AlgorithmSpec, ...]
    seed: int
    iteration_ladder: Tuple[int, ...] = DEFAULT_LADDER
    mcmc: McmcSettings = McmcSettings()
    correlation_source: CorrelationSource = CorrelationSource()

    @property
    def plant(self) -> Plant:
        return Plant(h=self.plant_h)

    def to_dict(self) -> Dict[str, Any]:
        return _plain(asdict(self))


@dataclass(frozen=True)
class WalkStudyConfig:
    r: Tuple[float, ...]
    b: Tuple[float, ...]
    walk_ladder: Tuple[int, ...]
    seeds: Tuple[int, ...]
    scheme: SchemeKind = SchemeKind.UNIFORM
    absorb: float = DEFAULT_ABSORB
    max_steps: int = MAX_STEPS

    @property
    def probability_scheme(self) -> ProbabilityScheme:
        return ProbabilityScheme(kind=self.scheme, absorb=self.absorb)


def _plain(value):
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def read_document(path) -> Dict[str, Any]:
    """Load a JSON (.json) or YAML document from disk."""
    path = Path(path)
    try:
        with open(path, "r") as f:
            doc = json.load(f) if path.suffix.lower() == ".json" else yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config ({e})") from e
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"{path}: malformed config ({e})") from e
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return doc


def _section(doc: Any, name: str, allowed: set, required: set = frozenset()) -> Dict[str, Any]:
    if not isinstance(doc, dict):
        raise ConfigError(f"{name}: expected a mapping, got {type(doc).__name__}")
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"{name}: unknown field(s) {sorted(unknown)}")
    missing = set(required) - set(doc)
    if missing:
        raise ConfigError(f"{name}: missing field(s) {sorted(missing)}")
    return doc


def _float(value: Any, name: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a number, got {value!r}") from None


def _int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    return value


def _floats(value: Any, name: str) -> Tuple[float, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name}: expected a non-empty list of numbers")
    return tuple(_float(v, f"{name}[{k}]") for k, v in enumerate(value))


def _ints(value: Any, name: str) -> Tuple[int, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name}: expected a non-empty list of integers")
    return tuple(_int(v, f"{name}[{k}]") for k, v in enumerate(value))


def _enum(cls, value: Any, name: str):
    try:
        return cls(str(value).lower())
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise ConfigError(f"{name}: {value!r} is not one of {choices}") from None


def _ladder(value: Any, name: str) -> Tuple[int, ...]:
    ladder = _ints(value, name)
    if any(t < 1 for t in ladder) or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ConfigError(f"{name}: must be positive and strictly increasing, got {list(ladder)}")
    return ladder


def parse_experiment(doc: Dict[str, Any]) -> ExperimentConfig:
    top = _section(doc, "config",
                   {"plant_h", "input_model", "algorithms", "iteration_ladder", "mcmc", "seed",
                    "correlation_source"},
                   {"plant_h", "input_model", "algorithms", "seed"})

    im = _section(top["input_model"], "input_model", {"kind", "ar_coefficient", "variance"}, {"kind"})
    try:
        input_model = InputModel(
            kind=_enum(InputKind, im["kind"], "input_model.kind"),
            ar_coefficient=_float(im.get("ar_coefficient", 0.0), "input_model.ar_coefficient"),
            variance=_float(im.get("variance", 1.0), "input_model.variance"),
        )
        plant_h = Plant(h=_floats(top["plant_h"], "plant_h")).h
    except WienerMCError as e:
        raise ConfigError(str(e)) from e

    if not isinstance(top["algorithms"], list) or not top["algorithms"]:
        raise ConfigError("algorithms: expected a non-empty list")
    algorithms = []
    for k, entry in enumerate(top["algorithms"]):
        name = f"algorithms[{k}]"
        entry = _section(entry, name, {"algorithm", "params"}, {"algorithm"})
        algorithm = _enum(Algorithm, entry["algorithm"], f"{name}.algorithm")
        if algorithm is Algorithm.MCMC:
            if "params" in entry:
                raise ConfigError(f"{name}: mcmc takes no params; use the mcmc section")
            algorithms.append(AlgorithmSpec(algorithm=algorithm))
            continue
        params = entry.get("params") or {}
        if not isinstance(params, dict):
            raise ConfigError(f"{name}.params: expected a mapping")
        params = {p: _float(v, f"{name}.params.{p}") for p, v in params.items()}
        try:
            get_filter(algorithm).validate(params)
        except WienerMCError as e:
            raise ConfigError(f"{name}.params: {e}") from e
        algorithms.append(AlgorithmSpec(algorithm=algorithm, params=params))
    tags = [a.algorithm for a in algorithms]
    if len(set(tags)) != len(tags):
        raise ConfigError("algorithms: each algorithm may appear once")

    mc = _section(top.get("mcmc") or {}, "mcmc",
                  {"scheme", "walks_policy", "walks", "absorb", "max_steps", "force"})
    force = mc.get("force", False)
    if not isinstance(force, bool):
        raise ConfigError("mcmc.force: expected true or false")
    mcmc = McmcSettings(
        scheme=_enum(SchemeKind, mc.get("scheme", "uniform"), "mcmc.scheme"),
        walks_policy=_enum(WalksPolicy, mc.get("walks_policy", "ladder"), "mcmc.walks_policy"),
        walks=_int(mc.get("walks", 1000), "mcmc.walks"),
        absorb=_float(mc.get("absorb", DEFAULT_ABSORB), "mcmc.absorb"),
        max_steps=_int(mc.get("max_steps", MAX_STEPS), "mcmc.max_steps"),
        force=force,
    )
    if not 0.0 < mcmc.absorb < 1.0:
        raise ConfigError(f"mcmc.absorb must lie in (0, 1), got {mcmc.absorb}")
    if mcmc.walks < 1 or mcmc.max_steps < 1:
        raise ConfigError("mcmc.walks and mcmc.max_steps must be >= 1")

    cs = _section(top.get("correlation_source") or {"kind": "exact"}, "correlation_source",
                  {"kind", "n_samples"}, {"kind"})
    source = CorrelationSource(
        kind=_enum(CorrelationKind, cs["kind"], "correlation_source.kind"),
        n_samples=_int(cs["n_samples"], "correlation_source.n_samples") if "n_samples" in cs else None,
    )
    if source.kind is CorrelationKind.EMPIRICAL and (source.n_samples is None or source.n_samples < 1):
        raise ConfigError("correlation_source: empirical mode needs n_samples >= 1")

    return ExperimentConfig(
        plant_h=plant_h,
        input_model=input_model,
        algorithms=tuple(algorithms),
        seed=_int(top["seed"], "seed"),
        iteration_ladder=_ladder(top.get("iteration_ladder", list(DEFAULT_LADDER)), "iteration_ladder"),
        mcmc=mcmc,
        correlation_source=source,
    )


def parse_walk_study(doc: Dict[str, Any]) -> WalkStudyConfig:
    top = _section(doc, "config",
                   {"r", "b", "walk_ladder", "seeds", "scheme", "absorb", "max_steps"},
                   {"r", "b", "walk_ladder", "seeds"})
    study = WalkStudyConfig(
        r=_floats(top["r"], "r"),
        b=_floats(top["b"], "b"),
        walk_ladder=_ladder(top["walk_ladder"], "walk_ladder"),
        seeds=_ints(top["seeds"], "seeds"),
        scheme=_enum(SchemeKind, top.get("scheme", "uniform"), "scheme"),
        absorb=_float(top.get("absorb", DEFAULT_ABSORB), "absorb"),
        max_steps=_int(top.get("max_steps", MAX_STEPS), "max_steps"),
    )
    if len(study.r) != len(study.b):
        raise ConfigError(f"r and b lengths differ: {len(study.r)} vs {len(study.b)}")
    if not 0.0 < study.absorb < 1.0:
        raise ConfigError(f"absorb must lie in (0, 1), got {study.absorb}")
    return study


def load_experiment(path) -> ExperimentConfig:
    return parse_experiment(read_document(path))


def load_walk_study(path) -> WalkStudyConfig:
    return parse_walk_study(read_document(path))

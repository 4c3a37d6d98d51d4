"""Run configuration: one TOML document plus ``section.key=value`` overrides."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from patchmol.assemble.config import AggregatorConfig
from patchmol.errors import PatchmolError
from patchmol.evalx.admet import AdmetRules
from patchmol.evalx.frechet import FDConfig
from patchmol.evalx.pareto import ParetoConfig
from patchmol.qpatch.config import QuantumConfig
from patchmol.train.config import TrainConfig
from patchmol.train.reward import RewardConfig


class ConfigError(PatchmolError, ValueError):
    """Unreadable, unknown or out-of-range configuration."""


@dataclass(frozen=True)
class PathsConfig:
    reference: str = ""
    latents: str = ""
    checkpoint: str = ""
    out_dir: str = "out"


@dataclass(frozen=True)
class GenerateConfig:
    n: int = 1000
    mode: str = "descriptor"
    batch: int = 256

    def __post_init__(self):
        if self.n < 1 or self.batch < 1:
            raise ValueError("n and batch must be >= 1")
        if self.mode not in ("descriptor", "random-latent"):
            raise ValueError("mode must be 'descriptor' or 'random-latent'")


@dataclass(frozen=True)
class EvaluateConfig:
    which: tuple = ("vun", "properties", "diversity", "audit", "scaffolds", "fd", "admet")
    pair_budget: int = 50_000


@dataclass(frozen=True)
class StressConfig:
    window: int = 512


@dataclass(frozen=True)
class CalibrateConfig:
    quantile: float = 0.05
    n_latents: int = 256


SECTIONS = {
    "paths": PathsConfig,
    "quantum": QuantumConfig,
    "aggregator": AggregatorConfig,
    "train": TrainConfig,
    "reward": RewardConfig,
    "fd": FDConfig,
    "pareto": ParetoConfig,
    "admet": AdmetRules,
    "generate": GenerateConfig,
    "evaluate": EvaluateConfig,
    "stress": StressConfig,
    "calibrate": CalibrateConfig,
}


@dataclass(frozen=True)
class RunConfig:
    """Every module config plus the global seed.

    The global ``seed`` overrides ``train.seed`` so one number drives a run.
    """

    seed: int = 0
    paths: PathsConfig = field(default_factory=PathsConfig)
    quantum: QuantumConfig = field(default_factory=QuantumConfig)
    aggregator: AggregatorConfig = field(default_factory=AggregatorConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    reward: RewardConfig = field(default_factory=RewardConfig)
    fd: FDConfig = field(default_factory=FDConfig)
    pareto: ParetoConfig = field(default_factory=ParetoConfig)
    admet: AdmetRules = field(default_factory=AdmetRules)
    generate: GenerateConfig = field(default_factory=GenerateConfig)
    evaluate: EvaluateConfig = field(default_factory=EvaluateConfig)
    stress: StressConfig = field(default_factory=StressConfig)
    calibrate: CalibrateConfig = field(default_factory=CalibrateConfig)

    def to_dict(self) -> dict:
        out: dict = {"seed": self.seed}
        for name in SECTIONS:
            sec = getattr(self, name)
            out[name] = sec.to_dict() if hasattr(sec, "to_dict") else dataclasses.asdict(sec)
        return json.loads(json.dumps(out, default=list))

    def hash(self) -> str:
        """sha256 of the canonical JSON form; paths are excluded so moved files hash alike."""
        d = self.to_dict()
        d.pop("paths")
        text = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_override(text: str) -> tuple[list[str], object]:
    """``a.b=value`` to (["a", "b"], value); the value is read as TOML, else kept as a string."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not key=value")
    key, raw = text.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"override {text!r} has an empty key")
    try:
        value = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return key.split("."), value


def _apply(doc: dict, path: list[str], value) -> None:
    node = doc
    for k in path[:-1]:
        node = node.setdefault(k, {})
        if not isinstance(node, dict):
            raise ConfigError(f"{'.'.join(path)} descends into a scalar")
    node[path[-1]] = value


def build_config(doc: dict) -> RunConfig:
    unknown = set(doc) - set(SECTIONS) - {"seed"}
    if unknown:
        raise ConfigError(f"unknown config sections {sorted(unknown)}")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("seed must be a non-negative integer")
    kwargs: dict = {"seed": seed}
    for name, cls in SECTIONS.items():
        sec = dict(doc.get(name, {}))
        if not isinstance(doc.get(name, {}), dict):
            raise ConfigError(f"[{name}] must be a table")
        known = {f.name for f in dataclasses.fields(cls)}
        bad = set(sec) - known
        if bad:
            raise ConfigError(f"unknown keys in [{name}]: {sorted(bad)}")
        if name == "train":
            sec["seed"] = seed
        for k, v in list(sec.items()):
            if isinstance(v, list):
                sec[k] = tuple(v)
        try:
            kwargs[name] = cls(**sec)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[{name}]: {exc}") from exc
    return RunConfig(**kwargs)


def load_config(path: str | Path | None = None, overrides=()) -> RunConfig:
    """Read a TOML file (optional), apply overrides, validate every section."""
    doc: dict = {}
    if path:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file {p} does not exist")
        try:
            doc = tomllib.loads(p.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{p}: {exc}") from exc
    for text in overrides:
        keys, value = parse_override(text)
        _apply(doc, keys, value)
    return build_config(doc)

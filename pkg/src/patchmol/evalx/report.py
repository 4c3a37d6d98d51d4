"""Structured metric report with a versioned JSON schema."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from patchmol import __version__
from patchmol.chem.descriptors import compute_descriptors
from patchmol.chem.fingerprint import fingerprint_matrix
from patchmol.chem.io import try_mol
from patchmol.errors import PatchmolError
from patchmol.evalx.admet import AdmetRules, admet_fast_pass
from patchmol.evalx.audit import aromatic_ring_audit, scaffold_counts
from patchmol.evalx.frechet import FDConfig, frechet_distance
from patchmol.evalx.similarity import as_fingerprints, diversity_mean_tanimoto
from patchmol.evalx.vun import vun_metrics
from patchmol.train.reward import validate_good_at_chem

SCHEMA_VERSION = 1
METRIC_SETS = ("vun", "properties", "diversity", "audit", "scaffolds", "fd", "admet")

# Required keys per block; fraction-valued keys are checked against [0, 1].
_BLOCK_KEYS = {
    "vun": ("validity", "uniqueness", "novelty", "n_generated", "n_valid", "n_unique", "n_novel"),
    "properties": ("mean_qed", "mean_sa", "mean_logp", "good_at_chem", "good_at_chem_fraction", "n"),
    "diversity": ("diversity", "n"),
    "audit": ("pct_with_aromatic", "mean_aromatic_rings", "mean_rings", "mean_aromatic_atoms", "n"),
    "scaffolds": ("n_scaffolds", "n_acyclic"),
    "fd": ("fd", "pca_components", "sample_size", "shrinkage"),
    "admet": ("lipinski", "veber", "egan", "all", "n"),
}
_FRACTIONS = {
    "vun": ("validity", "uniqueness", "novelty"),
    "properties": ("good_at_chem_fraction",),
    "diversity": ("diversity",),
    "admet": ("lipinski", "veber", "egan", "all"),
}


class SchemaError(PatchmolError, ValueError):
    """A report document does not conform to the schema."""


def config_hash(cfg: dict) -> str:
    """sha256 over the canonical JSON form of a config mapping."""
    text = json.dumps(cfg, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _clean(v):
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return f if math.isfinite(f) else None
    if isinstance(v, np.bool_):
        return bool(v)
    return v


@dataclass
class MetricsReport:
    """Metric blocks plus provenance (config hash, seed, tool version).

    Blocks that raised are listed in ``errors`` instead of ``metrics``.
    """

    seed: int
    config_hash: str
    metrics: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return _clean(
            {
                "schema_version": self.schema_version,
                "provenance": {
                    "config_hash": self.config_hash,
                    "seed": self.seed,
                    "tool_version": self.tool_version,
                },
                "metrics": self.metrics,
                "errors": self.errors,
            }
        )

    def to_json(self) -> str:
        doc = self.to_dict()
        validate_report(doc)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MetricsReport":
        doc = json.loads(text)
        validate_report(doc)
        p = doc["provenance"]
        return cls(
            seed=p["seed"],
            config_hash=p["config_hash"],
            metrics=doc["metrics"],
            errors=doc["errors"],
            tool_version=p["tool_version"],
            schema_version=doc["schema_version"],
        )

    def csv_rows(self) -> str:
        """Flat ``block,key,value`` extract of the scalar metrics."""
        lines = ["block,key,value"]
        for block in sorted(self.metrics):
            for k, v in sorted(self.metrics[block].items()):
                if isinstance(v, (int, float, bool, str)) or v is None:
                    lines.append(f"{block},{k},{'' if v is None else v}")
        return "\n".join(lines) + "\n"


def validate_report(doc: dict) -> None:
    """Raise SchemaError unless ``doc`` matches the report schema."""
    if not isinstance(doc, dict):
        raise SchemaError("report must be an object")
    for k in ("schema_version", "provenance", "metrics", "errors"):
        if k not in doc:
            raise SchemaError(f"missing key {k!r}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {doc['schema_version']}")
    prov = doc["provenance"]
    for k, typ in (("config_hash", str), ("seed", int), ("tool_version", str)):
        if not isinstance(prov.get(k), typ):
            raise SchemaError(f"provenance.{k} missing or mistyped")
    for name, block in doc["metrics"].items():
        if name not in _BLOCK_KEYS:
            raise SchemaError(f"unknown metric block {name!r}")
        missing = [k for k in _BLOCK_KEYS[name] if k not in block]
        if missing:
            raise SchemaError(f"block {name!r} lacks {missing}")
        for k in _FRACTIONS.get(name, ()):
            v = block[k]
            if v is not None and not 0.0 <= v <= 1.0:
                raise SchemaError(f"{name}.{k}={v} outside [0, 1]")
        for k, v in block.items():
            if k.startswith("n") and isinstance(v, int) and v < 0:
                raise SchemaError(f"{name}.{k} is negative")
    for name in doc["errors"]:
        if name not in _BLOCK_KEYS:
            raise SchemaError(f"unknown error block {name!r}")


def _mean(xs) -> float | None:
    return float(np.mean(xs)) if len(xs) else None


def evaluate_suite(
    gen_smiles,
    ref_smiles,
    which=METRIC_SETS,
    *,
    seed: int = 0,
    cfg_hash: str = "",
    fd_cfg: FDConfig = FDConfig(),
    admet_rules: AdmetRules = AdmetRules(),
    pair_budget: int = 50_000,
) -> MetricsReport:
    """Run the selected metric blocks on generated vs reference SMILES.

    A block that raises a package error is recorded under ``errors`` and the
    remaining blocks still run.
    """
    which = list(dict.fromkeys(which))
    unknown = [w for w in which if w not in METRIC_SETS]
    if unknown:
        raise ValueError(f"unknown metric sets {unknown}")
    gen_smiles = list(gen_smiles)
    ref_smiles = list(ref_smiles)
    mols = [m for m in (try_mol(s) for s in gen_smiles) if m is not None]
    report = MetricsReport(seed=seed, config_hash=cfg_hash)
    cache: dict = {}

    def descs():
        if "d" not in cache:
            cache["d"] = [compute_descriptors(m) for m in mols]
        return cache["d"]

    def run(name):
        if name == "vun":
            return vun_metrics(gen_smiles, ref_smiles).to_dict()
        if name == "properties":
            d = descs()
            g = validate_good_at_chem(d, total=len(gen_smiles))
            return {
                "mean_qed": _mean([x.qed for x in d]),
                "mean_sa": _mean([x.sa for x in d]),
                "mean_logp": _mean([x.logp for x in d]),
                "good_at_chem": g.count,
                "good_at_chem_fraction": g.fraction,
                "n": len(d),
            }
        if name == "diversity":
            return {
                "diversity": diversity_mean_tanimoto(mols, pair_budget=pair_budget, seed=seed),
                "n": len(mols),
                "pair_budget": pair_budget,
            }
        if name == "audit":
            return aromatic_ring_audit(mols, descs()).to_dict()
        if name == "scaffolds":
            return scaffold_counts(mols)
        if name == "fd":
            ref = [m for m in (try_mol(s) for s in ref_smiles) if m is not None]
            a = fingerprint_matrix(as_fingerprints(mols))
            b = fingerprint_matrix(as_fingerprints(ref))
            return {
                "fd": frechet_distance(a, b, fd_cfg, seed=seed),
                **fd_cfg.to_dict(),
            }
        if name == "admet":
            _, summary = admet_fast_pass(descs(), admet_rules)
            return summary
        raise AssertionError(name)

    for name in which:
        try:
            report.metrics[name] = run(name)
        except PatchmolError as exc:
            report.errors[name] = f"{type(exc).__name__}: {exc}"
    return report

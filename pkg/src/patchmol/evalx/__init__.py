"""Evaluation metrics for generated molecule sets."""

from patchmol.evalx.admet import AdmetResult, AdmetRules, admet_fast_pass, admet_flags
from patchmol.evalx.audit import AromaticAudit, aromatic_ring_audit, scaffold_counts
from patchmol.evalx.calibration import MonotoneMap, logp_quantile_calibration, pool_adjacent_violators
from patchmol.evalx.frechet import FDConfig, fit_pca, frechet_distance, frechet_from_stats, gaussian_stats
from patchmol.evalx.pareto import ParetoConfig, in_window, non_dominated, pareto_front
from patchmol.evalx.report import (
    METRIC_SETS,
    SCHEMA_VERSION,
    MetricsReport,
    SchemaError,
    config_hash,
    evaluate_suite,
    validate_report,
)
from patchmol.evalx.similarity import (
    StressCurves,
    diversity_mean_tanimoto,
    maxmin_diverse_select,
    rolling_tanimoto_stress,
)
from patchmol.evalx.stats import SpearmanResult, spearman, spearman_audit
from patchmol.evalx.vun import VUN, vun_metrics

__all__ = [
    "AdmetResult",
    "AdmetRules",
    "AromaticAudit",
    "FDConfig",
    "METRIC_SETS",
    "MetricsReport",
    "MonotoneMap",
    "ParetoConfig",
    "SCHEMA_VERSION",
    "SchemaError",
    "SpearmanResult",
    "StressCurves",
    "VUN",
    "admet_fast_pass",
    "admet_flags",
    "aromatic_ring_audit",
    "config_hash",
    "diversity_mean_tanimoto",
    "evaluate_suite",
    "fit_pca",
    "frechet_distance",
    "frechet_from_stats",
    "gaussian_stats",
    "in_window",
    "logp_quantile_calibration",
    "maxmin_diverse_select",
    "non_dominated",
    "pareto_front",
    "pool_adjacent_violators",
    "rolling_tanimoto_stress",
    "scaffold_counts",
    "spearman",
    "spearman_audit",
    "validate_report",
    "vun_metrics",
]

"""Command-line entry point.

Every subcommand reads one TOML config (``--config``) with ``--set
section.key=value`` overrides and writes its artifacts atomically under
``paths.out_dir``. Wall-clock information goes only to ``run_meta.json`` so
that all other outputs are byte-reproducible.

Exit codes: 0 success, 2 usage or config error, 3 missing artifact,
4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import platform
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from patchmol import __version__
from patchmol.assemble.pipeline import calibrate_tau
from patchmol.blob import atomic_write_text, load_blob
from patchmol.chem.descriptors import compute_descriptors
from patchmol.chem.io import read_smiles_file
from patchmol.config import ConfigError, RunConfig, load_config
from patchmol.evalx.admet import admet_fast_pass
from patchmol.evalx.audit import aromatic_ring_audit, scaffold_counts
from patchmol.evalx.pareto import pareto_front
from patchmol.evalx.report import METRIC_SETS, evaluate_suite
from patchmol.evalx.similarity import rolling_tanimoto_stress
from patchmol.generate import (
    DESCRIPTOR_FEATURES,
    PROPERTY_COLUMNS,
    decode_latents,
    feature_matrix,
    quantile_grid,
)
from patchmol.train.checkpoint import (
    latent_prior_sample,
    load_checkpoint,
    save_checkpoint,
    write_best_marker,
)
from patchmol.train.loop import build_corpus, run_training
from patchmol.train.reward import select_checkpoint

log = logging.getLogger("patchmol")

EXIT_OK, EXIT_USAGE, EXIT_MISSING, EXIT_INTERNAL = 0, 2, 3, 4


class MissingArtifact(FileNotFoundError):
    """A required input file or checkpoint does not exist."""


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(round(float(v), 10))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _provenance(cfg: RunConfig) -> dict:
    return {"config_hash": cfg.hash(), "seed": cfg.seed, "tool_version": __version__}


def _require(path: str, role: str) -> Path:
    if not path:
        raise ConfigError(f"no {role} path configured")
    p = Path(path)
    if not p.exists():
        raise MissingArtifact(f"{role} {p} does not exist")
    return p


def _read_smiles(path: str, role: str):
    sf = read_smiles_file(_require(path, role))
    if sf.skipped:
        log.warning("%s: skipped %d unparsable line(s)", role, len(sf.skipped))
    return sf


def _read_lines(path: str, role: str) -> list[str]:
    text = _require(path, role).read_text(encoding="utf-8")
    return [ln.split()[0] for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def _load_latents(path: str) -> np.ndarray:
    p = _require(path, "latent matrix")
    if p.suffix.lower() == ".csv":
        return np.loadtxt(p, delimiter=",", ndmin=2)
    tensors, _ = load_blob(p)
    if "latents" not in tensors:
        raise ConfigError(f"{p} has no 'latents' tensor")
    return tensors["latents"]


def _write_meta(out: Path, command: str, cfg: RunConfig, started: float, extra: dict | None = None):
    meta = {
        "command": command,
        "started_unix": started,
        "finished_unix": time.time(),
        "python": platform.python_version(),
        **_provenance(cfg),
        **(extra or {}),
    }
    atomic_write_text(out / "run_meta.json", _json(meta))


def cmd_generate(cfg: RunConfig, out: Path) -> dict:
    gcfg = cfg.generate
    ckpt = load_checkpoint(_require(cfg.paths.checkpoint, "checkpoint"))
    rng = np.random.default_rng([cfg.seed, 11])
    targets = None
    if gcfg.mode == "descriptor":
        if ckpt.conditioner is None:
            raise MissingArtifact("descriptor mode needs a conditioner in the checkpoint")
        ref = _read_smiles(cfg.paths.reference, "reference corpus")
        feats = feature_matrix([compute_descriptors(m) for m in ref.mols])
        targets = quantile_grid(feats, gcfg.n, cfg.seed)
        gen = ckpt.generator(cfg.aggregator)
    decoded = []
    for start in range(0, gcfg.n, gcfg.batch):
        stop = min(start + gcfg.batch, gcfg.n)
        if targets is not None:
            decoded += gen.generate(targets[start:stop], rng)[1]
        else:
            z = latent_prior_sample(ckpt, stop - start, rng)
            decoded += decode_latents(ckpt.head, z, cfg.aggregator)

    ok = [d for d in decoded if d.ok]
    atomic_write_text(out / "generated.smi", "".join(d.smiles + "\n" for d in ok))
    rows = []
    for i, d in enumerate(decoded):
        p = d.descriptors
        rows.append((i, d.smiles or "", int(not d.ok), d.route, d.score,
                     *(getattr(p, c) if p else None for c in PROPERTY_COLUMNS)))
    atomic_write_text(out / "scores.csv", _csv(("index", "smiles", "failed", "route", "score", *PROPERTY_COLUMNS), rows))
    if targets is not None:
        cols = [DESCRIPTOR_FEATURES.index(c) for c in PROPERTY_COLUMNS]
        trows = []
        for i, d in enumerate(decoded):
            t = targets[i, cols]
            a = [getattr(d.descriptors, c) for c in PROPERTY_COLUMNS] if d.ok else [None] * 3
            trows.append((i, *t, *a))
        header = ("index", *(f"target_{c}" for c in PROPERTY_COLUMNS), *(f"achieved_{c}" for c in PROPERTY_COLUMNS))
        atomic_write_text(out / "targets.csv", _csv(header, trows))
    unique = len({d.smiles for d in ok})
    summary = {
        "mode": gcfg.mode,
        "attempts": len(decoded),
        "successes": len(ok),
        "failures": len(decoded) - len(ok),
        "unique": unique,
        "uniqueness": unique / len(ok) if ok else 0.0,
        "provenance": _provenance(cfg),
    }
    if targets is not None and ok:
        qi = DESCRIPTOR_FEATURES.index("qed")
        summary["qed_mae"] = float(np.mean([abs(d.descriptors.qed - targets[i, qi]) for i, d in enumerate(decoded) if d.ok]))
    atomic_write_text(out / "summary.json", _json(summary))
    if not ok:
        raise RuntimeError("no generation attempt succeeded")
    return summary


def cmd_train(cfg: RunConfig, out: Path) -> dict:
    ref = _read_smiles(cfg.paths.reference, "reference corpus")
    if not ref.mols:
        raise ConfigError("reference corpus has no usable molecules")
    latents = _load_latents(cfg.paths.latents) if cfg.paths.latents else None
    corpus = build_corpus(ref.mols, cfg.quantum.latent_dim, cfg.seed, latents)
    ckroot = out / "checkpoints"
    metrics_rows: list = []
    header = None

    def on_epoch(state, m):
        nonlocal header
        d = asdict(m)
        header = header or list(d)
        metrics_rows.append([d[k] for k in header])
        atomic_write_text(out / "metrics.csv", _csv(header, metrics_rows))
        save_checkpoint(ckroot / f"epoch_{m.epoch:03d}", state, state.checkpoints[-1])
        log.info("epoch %d: critic %.4f good@chem %.3f", m.epoch, m.holdout_critic_mse, m.good_at_chem)

    state = run_training(corpus, cfg.train, cfg.quantum, cfg.aggregator, cfg.reward, on_epoch)
    best = select_checkpoint(state.checkpoints)
    write_best_marker(ckroot, f"epoch_{best.epoch:03d}", best)
    log_lines = [f"skipped_lines={len(ref.skipped)}", f"molecules={corpus.size}",
                 f"epochs={cfg.train.epochs}", f"best_epoch={best.epoch}"]
    log_lines += [f"skipped line {n}: {text}" for n, text in ref.skipped]
    atomic_write_text(out / "train.log", "\n".join(log_lines) + "\n")
    return {"best_epoch": best.epoch, "skipped_lines": len(ref.skipped), "epochs": cfg.train.epochs}


def cmd_evaluate(cfg: RunConfig, out: Path, gen_file: str, ref_file: str, which) -> dict:
    gen = _read_lines(gen_file, "generated file")
    ref = _read_lines(ref_file or cfg.paths.reference, "reference file")
    report = evaluate_suite(
        gen, ref, which, seed=cfg.seed, cfg_hash=cfg.hash(), fd_cfg=cfg.fd,
        admet_rules=cfg.admet, pair_budget=cfg.evaluate.pair_budget,
    )
    atomic_write_text(out / "report.json", report.to_json())
    atomic_write_text(out / "report.csv", report.csv_rows())
    for name, err in report.errors.items():
        log.warning("metric %s failed: %s", name, err)
    return {"blocks": sorted(report.metrics), "errors": sorted(report.errors)}


def cmd_stress(cfg: RunConfig, out: Path, gen_file: str) -> dict:
    sf = _read_smiles(gen_file, "generated file")
    curves = rolling_tanimoto_stress(sf.mols, cfg.stress.window)
    rows = zip(range(1, len(sf.mols) + 1), curves.rolling_mean, curves.unique_smiles, curves.unique_scaffolds)
    atomic_write_text(out / "stress.csv", _csv(("step", "rolling_mean", "unique_smiles", "unique_scaffolds"), rows))
    summary = {
        "window": curves.window,
        "n": len(sf.mols),
        "final_rolling_mean": curves.rolling_mean[-1] if curves.rolling_mean else None,
        "final_unique_smiles": curves.unique_smiles[-1] if curves.unique_smiles else 0,
        "final_unique_scaffolds": curves.unique_scaffolds[-1] if curves.unique_scaffolds else 0,
        "provenance": _provenance(cfg),
    }
    atomic_write_text(out / "stress.json", _json(summary))
    return summary


def _props(sf):
    return [compute_descriptors(m) for m in sf.mols]


def cmd_pareto(cfg: RunConfig, out: Path, gen_file: str) -> dict:
    sf = _read_smiles(gen_file, "generated file")
    ds = _props(sf)
    pts = [(d.qed, d.sa, d.logp) for d in ds]
    free = pareto_front(pts, cfg.pareto)
    cons = pareto_front(pts, cfg.pareto, constrained=True)
    fs, cs = set(free), set(cons)
    rows = [(i, sf.smiles[i], *pts[i], int(i in fs), int(i in cs)) for i in range(len(pts))]
    atomic_write_text(out / "pareto.csv", _csv(("index", "smiles", "qed", "sa", "logp", "front", "constrained_front"), rows))
    summary = {"front": free, "constrained_front": cons, "window": cfg.pareto.to_dict(), "provenance": _provenance(cfg)}
    atomic_write_text(out / "pareto.json", _json(summary))
    return summary


def cmd_admet(cfg: RunConfig, out: Path, gen_file: str) -> dict:
    sf = _read_smiles(gen_file, "generated file")
    flags, summary = admet_fast_pass(_props(sf), cfg.admet)
    rows = [(i, sf.smiles[i], f.lipinski_violations, int(f.lipinski), int(f.veber), int(f.egan))
            for i, f in enumerate(flags)]
    atomic_write_text(out / "admet.csv", _csv(("index", "smiles", "lipinski_violations", "lipinski", "veber", "egan"), rows))
    doc = {**summary, "rules": cfg.admet.to_dict(), "provenance": _provenance(cfg)}
    atomic_write_text(out / "admet.json", _json(doc))
    return summary


def cmd_audit(cfg: RunConfig, out: Path, gen_file: str, ref_file: str) -> dict:
    sets = {"generated": _read_smiles(gen_file, "generated file")}
    if ref_file:
        sets["reference"] = _read_smiles(ref_file, "reference file")
    doc = {name: {**aromatic_ring_audit(sf.mols).to_dict(), **scaffold_counts(sf.mols)} for name, sf in sets.items()}
    doc["provenance"] = _provenance(cfg)
    atomic_write_text(out / "audit.json", _json(doc))
    return doc


def cmd_calibrate_tau(cfg: RunConfig, out: Path, patches_file: str) -> dict:
    if patches_file:
        from patchmol.assemble.batch import load_patches

        patches = load_patches(_require(patches_file, "patch file"))
    else:
        ckpt = load_checkpoint(_require(cfg.paths.checkpoint, "checkpoint"))
        z = latent_prior_sample(ckpt, cfg.calibrate.n_latents, np.random.default_rng([cfg.seed, 13]))
        patches = ckpt.head.patches(z)
    tau = calibrate_tau(patches, cfg.calibrate.quantile, cfg.aggregator.eps_act)
    doc = {"tau": tau, "quantile": cfg.calibrate.quantile, "n_patches": int(len(patches)), "provenance": _provenance(cfg)}
    atomic_write_text(out / "tau.json", _json(doc))
    return doc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config entry, e.g. train.epochs=3 (repeatable)")
    common.add_argument("--out", help="output directory (overrides paths.out_dir)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="patchmol", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"patchmol {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="decode molecules from a checkpoint")
    g.add_argument("--n", type=int)
    g.add_argument("--mode", choices=("descriptor", "random-latent"))
    g.add_argument("--checkpoint")
    sub.add_parser("train", parents=[common], help="warm-up and adversarial training")
    e = sub.add_parser("evaluate", parents=[common], help="metric report for a SMILES file")
    e.add_argument("--gen", required=True)
    e.add_argument("--ref")
    e.add_argument("--which", help=f"comma-separated subset of {','.join(METRIC_SETS)}")
    for name, helptext in (("stress", "rolling-similarity mode-collapse curves"),
                           ("pareto", "QED/SA/logP Pareto fronts"),
                           ("admet", "Lipinski, Veber and Egan pass rates")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--gen", required=True)
    a = sub.add_parser("audit", parents=[common], help="aromatic ring and scaffold audit")
    a.add_argument("--gen", required=True)
    a.add_argument("--ref")
    c = sub.add_parser("calibrate-tau", parents=[common], help="bond threshold from patch distances")
    c.add_argument("--patches")
    c.add_argument("--checkpoint")
    return p


def _overrides(args) -> list[str]:
    extra = list(args.set)
    if args.out:
        extra.append(f"paths.out_dir={json.dumps(args.out)}")
    for flag, key in (("n", "generate.n"), ("mode", "generate.mode"), ("checkpoint", "paths.checkpoint")):
        v = getattr(args, flag, None)
        if v is not None:
            extra.append(f"{key}={json.dumps(v)}")
    if getattr(args, "which", None):
        items = [w.strip() for w in args.which.split(",") if w.strip()]
        extra.append(f"evaluate.which={json.dumps(items)}")
    return extra


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)
    started = time.time()
    try:
        cfg = load_config(args.config, _overrides(args))
        unknown = [w for w in cfg.evaluate.which if w not in METRIC_SETS]
        if unknown:
            raise ConfigError(f"unknown metric sets {unknown}")
        out = Path(cfg.paths.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        cmd = args.command
        if cmd == "generate":
            result = cmd_generate(cfg, out)
        elif cmd == "train":
            result = cmd_train(cfg, out)
        elif cmd == "evaluate":
            result = cmd_evaluate(cfg, out, args.gen, args.ref, cfg.evaluate.which)
        elif cmd == "stress":
            result = cmd_stress(cfg, out, args.gen)
        elif cmd == "pareto":
            result = cmd_pareto(cfg, out, args.gen)
        elif cmd == "admet":
            result = cmd_admet(cfg, out, args.gen)
        elif cmd == "audit":
            result = cmd_audit(cfg, out, args.gen, args.ref)
        else:
            result = cmd_calibrate_tau(cfg, out, args.patches)
        _write_meta(out, cmd, cfg, started, {"result": result})
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"missing artifact: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except Exception as exc:  # noqa: BLE001 - report and map to the internal-error code
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

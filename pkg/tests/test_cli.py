import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from patchmol.assemble.batch import save_patches
from patchmol.assemble.fixtures import hexagon_patch, triangle_patch
from patchmol.chem.corpus import toy_corpus
from patchmol.cli import run

TINY = """seed = 3
[quantum]
n_qubits = 4
n_layers = 1
latent_dim = 4
[train]
epochs = {epochs}
batch_size = 8
top_k = 4
steps_per_epoch = 1
conditioner_pretrain_steps = 5
disc_warmup_epochs = 1
n_validation = 8
holdout_size = 8
disc_hidden = 8
[generate]
n = 30
"""


def _setup(root, epochs=1, bad_lines=()):
    root.mkdir(parents=True, exist_ok=True)
    ref = root / "ref.smi"
    lines = toy_corpus(30, seed=2)
    for k, text in bad_lines:
        lines.insert(k, text)
    ref.write_text("\n".join(lines) + "\n")
    cfg = root / "run.toml"
    cfg.write_text(TINY.format(epochs=epochs))
    return cfg, ref


def _args(cfg, ref, out, *extra):
    return ["--config", str(cfg), "--set", f'paths.reference="{ref}"', "--out", str(out), *extra]


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    cfg, ref = _setup(root, bad_lines=[(4, "C1CC(")])
    out = root / "train"
    assert run(["train", *_args(cfg, ref, out)]) == 0
    return root, cfg, ref, out


def test_train_outputs(trained):
    _, _, _, out = trained
    rows = list(csv.DictReader((out / "metrics.csv").open()))
    assert [r["epoch"] for r in rows] == ["0", "1"]
    assert (out / "checkpoints" / "epoch_000" / "head.pmtb").exists()
    best = json.loads((out / "checkpoints" / "best.json").read_text())
    assert best["directory"] in ("epoch_000", "epoch_001")
    log = (out / "train.log").read_text()
    assert "skipped_lines=1" in log and "C1CC(" in log


def test_zero_epochs_warmup_only(tmp_path):
    cfg, ref = _setup(tmp_path, epochs=0)
    assert run(["train", *_args(cfg, ref, tmp_path / "o")]) == 0
    rows = list(csv.DictReader((tmp_path / "o" / "metrics.csv").open()))
    assert [r["epoch"] for r in rows] == ["0"]


def test_generate_byte_identical_and_modes(trained, tmp_path):
    root, cfg, ref, out = trained
    ck = str(out / "checkpoints")
    outs = []
    for k in range(2):
        o = tmp_path / f"g{k}"
        assert run(["generate", *_args(cfg, ref, o), "--checkpoint", ck]) == 0
        outs.append(o)
    for name in ("generated.smi", "scores.csv", "targets.csv", "summary.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    summary = json.loads((outs[0] / "summary.json").read_text())
    assert summary["attempts"] == 30 and "qed_mae" in summary
    o = tmp_path / "rl"
    assert run(["generate", *_args(cfg, ref, o), "--checkpoint", ck, "--mode", "random-latent", "--n", "10"]) == 0
    assert not (o / "targets.csv").exists()
    assert json.loads((o / "summary.json").read_text())["attempts"] == 10


def test_analysis_commands(trained, tmp_path):
    _, cfg, ref, _ = trained
    gen = tmp_path / "gen.smi"
    gen.write_text("\n".join(toy_corpus(25, seed=9)) + "\n")
    base = _args(cfg, ref, tmp_path / "a")
    assert run(["evaluate", *base, "--gen", str(gen), "--which", "vun,audit", "--set", "fd.pca_components=4"]) == 0
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    assert set(report["metrics"]) == {"vun", "audit"}
    assert run(["evaluate", *base, "--gen", str(ref), "--which", "vun"]) == 0
    assert json.loads((tmp_path / "a" / "report.json").read_text())["metrics"]["vun"]["novelty"] == 0.0
    assert run(["stress", *base, "--gen", str(gen), "--set", "stress.window=4"]) == 0
    assert run(["pareto", *base, "--gen", str(gen)]) == 0
    assert run(["admet", *base, "--gen", str(gen)]) == 0
    assert run(["audit", *base, "--gen", str(gen)]) == 0
    for name in ("stress.csv", "pareto.json", "admet.json", "audit.json", "run_meta.json"):
        assert (tmp_path / "a" / name).exists()


def test_calibrate_tau(trained, tmp_path):
    _, cfg, ref, _ = trained
    patches = tmp_path / "p.pmtb"
    save_patches(patches, np.stack([hexagon_patch(), triangle_patch()]))
    assert run(["calibrate-tau", *_args(cfg, ref, tmp_path / "t"), "--patches", str(patches)]) == 0
    assert json.loads((tmp_path / "t" / "tau.json").read_text())["tau"] > 0


def test_exit_codes(trained, tmp_path):
    _, cfg, ref, _ = trained
    base = _args(cfg, ref, tmp_path / "x")
    assert run(["generate", *base, "--checkpoint", str(tmp_path / "missing")]) == 3
    assert run(["evaluate", *base, "--gen", str(tmp_path / "nope.smi")]) == 3
    assert run(["generate", "--bogus"]) == 2
    assert run(["train", *base, "--set", "train.no_such_key=1"]) == 2
    assert run(["evaluate", *base, "--gen", str(ref), "--which", "vun,nope"]) == 2
    assert run(["train", *base, "--set", "train.top_k=99"]) == 2


def test_set_override_changes_hash(trained, tmp_path):
    _, cfg, ref, _ = trained
    gen = tmp_path / "g.smi"
    gen.write_text("CCO\nc1ccccc1\n")
    hashes = []
    for seed in (3, 4):
        o = tmp_path / f"s{seed}"
        assert run(["evaluate", *_args(cfg, ref, o), "--gen", str(gen), "--which", "vun", "--set", f"seed={seed}"]) == 0
        doc = json.loads((o / "report.json").read_text())
        hashes.append(doc["provenance"]["config_hash"])
        assert doc["provenance"]["seed"] == seed
    assert hashes[0] != hashes[1]


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "patchmol.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("patchmol")

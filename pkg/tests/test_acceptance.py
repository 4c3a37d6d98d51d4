"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL <detail>`` line; the
lines are also collected and repeated in the terminal summary.
"""

import itertools
import json
import time

import numpy as np
import pytest

from patchmol.assemble import AggregatorConfig, assemble_molecule
from patchmol.assemble.fixtures import hexagon_patch, triangle_patch
from patchmol.chem import canonical_smiles, mol_from_smiles, parse_smiles, sanitize
from patchmol.chem.corpus import toy_corpus
from patchmol.chem.fingerprint import morgan_fingerprint, tanimoto
from patchmol.cli import run as cli_run
from patchmol.errors import GenerationFailure
from patchmol.evalx import (
    aromatic_ring_audit,
    diversity_mean_tanimoto,
    frechet_distance,
    frechet_from_stats,
    FDConfig,
    maxmin_diverse_select,
    pareto_front,
    rolling_tanimoto_stress,
    spearman_audit,
)
from patchmol.generate import Generator, decode_latents, quantile_grid
from patchmol.nets import rank_latent_axes
from patchmol.qpatch import QuantumConfig, simulate_expectations
from patchmol.qpatch.circuit import run_circuit
from patchmol.qpatch.gradients import shift_gradients
from patchmol.train import TrainConfig, build_corpus, head_digest, normalize_rewards, run_training, select_checkpoint, warmup_lambda
from patchmol.train.loop import build_head
from patchmol.train.reward import reward_terms

from oracles import (
    expectations,
    maxmin_brute,
    mean_pairwise,
    pareto_brute,
    pearson,
    spearman_brute,
    tanimoto_bits,
)

RESULTS: list[str] = []


def report(n: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_simulator_exactness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst, worst_norm = 0.0, 0.0
    for k in range(1000):
        n = 1 + k % 4
        layers = rng.integers(0, 4)
        th = rng.uniform(-np.pi, np.pi, n)
        al = rng.uniform(-np.pi, np.pi, (layers, n, 3))
        worst = max(worst, float(np.max(np.abs(simulate_expectations(th, al) - expectations(th, al)))))
        _, norms = run_circuit(th, al, record_norms=True)
        worst_norm = max(worst_norm, float(np.max(np.abs(np.asarray(norms) - 1.0))))
    dt = time.perf_counter() - t0
    report(1, worst < 1e-10 and worst_norm < 1e-12 and dt < 10,
           f"max|dev|={worst:.1e} max|norm-1|={worst_norm:.1e} time={dt:.1f}s")


def test_02_parameter_shift_identity():
    rng = np.random.default_rng(2)
    h, worst = 1e-4, 0.0
    for k in range(100):
        n, layers = 1 + k % 4, k % 3
        th = rng.uniform(-np.pi, np.pi, n)
        al = rng.uniform(-np.pi, np.pi, (layers, n, 3))
        up = rng.normal(size=n)
        d_th, d_al = shift_gradients(th, al, up)

        def f(t, a):
            return simulate_expectations(t, a) @ up

        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            fd = (f(th + e, al) - f(th - e, al)) / (2 * h)
            worst = max(worst, abs(d_th[i] - fd) / max(1.0, abs(fd)))
        for idx in np.ndindex(al.shape):
            e = np.zeros_like(al)
            e[idx] = h
            fd = (f(th, al + e) - f(th, al - e)) / (2 * h)
            worst = max(worst, abs(d_al[idx] - fd) / max(1.0, abs(fd)))
    single = max(
        abs(shift_gradients(np.array([t]), np.zeros((0, 1, 3)), np.ones(1))[0][0] + np.sin(t))
        for t in np.linspace(-np.pi, np.pi, 37)
    )
    report(2, worst < 1e-6 and single < 1e-10, f"max rel dev={worst:.1e} |d<Z>/dθ+sinθ|={single:.1e}")


def test_03_aggregator_validity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    cfg = AggregatorConfig()
    n, failures, invalid = 10_000, 0, 0
    for _ in range(n):
        h = rng.uniform(0.0, 1.0, (48, 16))
        try:
            m = assemble_molecule(h, cfg)
        except GenerationFailure:
            failures += 1
            continue
        try:
            sanitize(m)
        except Exception:  # noqa: BLE001 - any sanitize error counts as a violation
            invalid += 1
    dt = time.perf_counter() - t0
    report(3, invalid == 0 and failures / n < 0.01 and dt < 300,
           f"sanitize failures={invalid} failure rate={failures / n:.4f} time={dt:.0f}s")


def test_04_golden_assembly():
    hexes = {canonical_smiles(assemble_molecule(hexagon_patch())) for _ in range(10)}
    tris = {canonical_smiles(assemble_molecule(triangle_patch())) for _ in range(10)}
    report(4, hexes == {"c1ccccc1"} and tris == {"C1CC1"}, f"hexagon={sorted(hexes)} triangle={sorted(tris)}")


def _bits(fp):
    return {i for i in range(fp.width) if fp.value >> i & 1}


def test_05_metric_oracles():
    rng = np.random.default_rng(5)
    smiles = toy_corpus(60, seed=5)
    mols = [mol_from_smiles(s) for s in smiles]
    fps = [morgan_fingerprint(m) for m in mols]
    bits = [_bits(f) for f in fps]
    checks = {}
    sim = [[tanimoto_bits(a, b) for b in bits] for a in bits]
    checks["tanimoto"] = all(
        abs(tanimoto(fps[i], fps[j]) - sim[i][j]) <= 1e-12 for i in range(60) for j in range(60)
    )
    checks["diversity"] = abs(diversity_mean_tanimoto(fps) - (1 - mean_pairwise(sim))) <= 1e-12
    pts = [tuple(p) for p in rng.random((200, 3))]
    checks["pareto"] = pareto_front(pts) == pareto_brute(pts)
    curves = rolling_tanimoto_stress(mols[:40], window=8)
    checks["rolling"] = all(
        abs(curves.rolling_mean[t] - mean_pairwise([r[max(0, t - 7): t + 1] for r in sim[max(0, t - 7): t + 1]])) <= 1e-12
        for t in range(1, 40)
    )
    lat = rng.integers(0, 20, 200).astype(float)
    props = np.column_stack([rng.integers(0, 9, 200), rng.random(200), lat + rng.integers(0, 3, 200)])
    audit = spearman_audit(lat, props)
    checks["spearman"] = all(
        abs(audit[name].rho - spearman_brute(lat, props[:, j])) <= 1e-12 for j, name in enumerate(("qed", "sa", "logp"))
    )
    Z, Y = rng.normal(size=(200, 8)), rng.normal(size=(200, 3))
    scores = [max(abs(pearson(Z[:, i], Y[:, j])) for j in range(3)) for i in range(8)]
    checks["rank_latent_axes"] = rank_latent_axes(Z, Y, 8) == sorted(range(8), key=lambda i: (-scores[i], i))
    dist = [[1 - s for s in row] for row in sim]
    checks["maxmin"] = all(maxmin_diverse_select(fps, 15, s) == maxmin_brute(dist, 15, s) for s in range(0, 60, 7))
    failed = [k for k, ok in checks.items() if not ok]
    report(5, not failed, f"{len(checks)} oracles checked, mismatches={failed or 'none'}")


def test_06_frechet():
    rng = np.random.default_rng(6)
    p1 = np.where(np.arange(128) < 64, 0.4, 0.05)
    p2 = np.where(np.arange(128) < 64, 0.05, 0.4)

    def pop(p, n=400):
        return (rng.random((n, 128)) < p).astype(float)

    a1, a2, b1, b2 = pop(p1), pop(p1), pop(p2), pop(p2)
    cfg = FDConfig(pca_components=32)
    self_fd = frechet_distance(a1, a1, cfg)
    uni = frechet_from_stats([0.0], [[1.0]], [1.0], [[4.0]])
    intra = (frechet_distance(a1, a2, cfg), frechet_distance(b1, b2, cfg))
    cross = frechet_distance(b1, a2, cfg)
    ok = self_fd <= 1e-8 and abs(uni - 2.0) <= 1e-8 and max(intra) < cross
    report(6, ok, f"FD(A,A)={self_fd:.1e} univariate={uni:.12f} intra={intra[0]:.3f}/{intra[1]:.3f} cross={cross:.3f}")


def test_07_reward_algebra():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        q, sa, lp = rng.uniform(0, 1), rng.uniform(1, 10), rng.uniform(-5, 10)
        na, nh = int(rng.integers(1, 80)), int(rng.integers(0, 15))
        want = (1.6 * q - 0.45 * max(sa - 4.5, 0) / 5.5 - 0.25 * max(lp - 3.8, 0) / 5.2
                - 0.02 * max(na - 30, 0) / 20 + 0.03 * min(nh, 5))
        worst = max(worst, abs(reward_terms(q, sa, lp, na, nh) - want))
    bounded = all(np.all(np.abs(normalize_rewards(rng.standard_cauchy(64) * 100)) <= 3.0) for _ in range(200))
    w = (warmup_lambda(0, 2.0, 40), warmup_lambda(40, 2.0, 40), warmup_lambda(20, 2.0, 40))
    report(7, worst <= 1e-12 and bounded and w == (0.0, 2.0, 1.0),
           f"max reward dev={worst:.1e} bounded={bounded} warmup(0,T,T/2)={w}")


TOY_CFG = TrainConfig(batch_size=32, top_k=8, epochs=20, steps_per_epoch=4, seed=0)


@pytest.fixture(scope="module")
def toy_run():
    corpus = build_corpus([mol_from_smiles(s) for s in toy_corpus(200, seed=0)], QuantumConfig().latent_dim, 0)
    digests = []
    t0 = time.perf_counter()
    state = run_training(corpus, TOY_CFG, on_epoch=lambda s, m: digests.append(head_digest(s.head)))
    return corpus, state, digests, time.perf_counter() - t0


def test_08_toy_adversarial_run(toy_run):
    _, state, digests, dt = toy_run
    h = state.history
    mse0, mse_end = h[0].holdout_critic_mse, h[-1].holdout_critic_mse
    best = select_checkpoint(state.checkpoints)
    frozen = len(set(digests)) == 1
    ok = mse_end <= 0.5 * mse0 and best.good_at_chem >= h[0].good_at_chem and frozen and dt < 900
    report(8, ok, f"critic MSE {mse0:.3f}->{mse_end:.3f} Good@chem epoch0={h[0].good_at_chem:.3f} "
                  f"selected(epoch {best.epoch})={best.good_at_chem:.3f} head frozen={frozen} time={dt:.0f}s")


def test_09_throughput(toy_run):
    corpus, state, _, _ = toy_run
    gen: Generator = state.generator
    x = quantile_grid(corpus.features, 1000, 0)
    t0 = time.perf_counter()
    _, dec = gen.generate(x, np.random.default_rng(9))
    dt = time.perf_counter() - t0
    ok_smiles = [d.smiles for d in dec if d.ok]
    uniq = len(set(ok_smiles)) / len(ok_smiles)
    report(9, dt < 60 and uniq > 0.9, f"1000 attempts in {dt:.1f}s valid={len(ok_smiles)} uniqueness={uniq:.3f}")


def test_10_head_parity():
    cfg = QuantumConfig()
    z = np.random.default_rng(10).normal(size=(150, cfg.latent_dim))
    agg = AggregatorConfig()
    blocks = {}
    for kind in ("quantum", "classical"):
        head = build_head(cfg, TrainConfig(head=kind), z)
        assert head.patches(z[:2]).shape == (2, cfg.n_nodes, cfg.f_node)
        mols = [d.mol for d in decode_latents(head, z, agg) if d.ok]
        blocks[head.kind] = aromatic_ring_audit(mols).to_dict()
    ok = set(blocks) == {"quantum", "classical"} and all(b["n"] > 0 for b in blocks.values())
    summary = " ".join(f"{k}: n={b['n']} pct_AR={b['pct_with_aromatic']:.1f}" for k, b in blocks.items())
    report(10, ok, summary)


CANON_SET = [
    "c1ccccc1", "C1CCCCC1", "c1ccncc1", "Oc1ccccc1", "CC(C)(C)O", "OC(=O)CC(N)=O", "C1CC2CC12",
    "FC(F)(F)C=O", "CC1=CC(=O)NC1", "C=CC(=C)C=O", "O=C1CCCO1", "CN(C)C(C)=O", "C1=NCCN1", "C=C1COC1C=O",
    "CC1CCN(N)C1", "OCC(O)CO", "C1=COCC1", "CC(=O)OC=C", "C1OC2CC12", "NC(=N)NC=O",
]


def test_11_canonicalization():
    bad = []
    for smi in CANON_SET:
        g = mol_from_smiles(smi)
        assert g.n_atoms <= 7
        ref = canonical_smiles(g)
        if any(canonical_smiles(g.permuted(list(p))) != ref for p in itertools.permutations(range(g.n_atoms))):
            bad.append(smi)
        if canonical_smiles(sanitize(parse_smiles(ref))) != ref:
            bad.append(smi + " (round trip)")
    report(11, not bad, f"{len(CANON_SET)} molecules, all permutations, failures={bad or 'none'}")


def test_12_reproducibility(tmp_path):
    ref = tmp_path / "ref.smi"
    ref.write_text("\n".join(toy_corpus(40, seed=12)) + "\n")
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        "seed = 12\n[train]\nepochs = 1\nbatch_size = 8\ntop_k = 4\nsteps_per_epoch = 1\n"
        "conditioner_pretrain_steps = 5\ndisc_warmup_epochs = 1\nn_validation = 8\nholdout_size = 8\n"
        "[generate]\nn = 60\n[fd]\npca_components = 8\n"
    )
    bodies = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        base = ["--config", str(cfg), "--set", f'paths.reference="{ref}"', "--out", str(out)]
        codes = (
            cli_run(["train", *base]),
            cli_run(["generate", *base, "--checkpoint", str(out / "checkpoints")]),
            cli_run(["evaluate", *base, "--gen", str(out / "generated.smi")]),
        )
        assert codes == (0, 0, 0)
        bodies.append(((out / "generated.smi").read_bytes(), (out / "report.json").read_bytes(),
                       (out / "metrics.csv").read_bytes()))
    same = bodies[0] == bodies[1]
    n_smi = len(bodies[0][0].splitlines())
    json.loads(bodies[0][1])
    report(12, same, f"two runs byte-identical={same} ({n_smi} SMILES, report {len(bodies[0][1])} bytes)")

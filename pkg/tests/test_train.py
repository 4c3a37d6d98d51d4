import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from patchmol.chem import mol_from_smiles
from patchmol.chem.corpus import toy_corpus
from patchmol.chem.descriptors import Descriptors
from patchmol.errors import EmptyList, ShapeMismatch
from patchmol.qpatch.config import QuantumConfig
from patchmol.train import (
    CheckpointMeta,
    RewardConfig,
    TrainConfig,
    build_corpus,
    chemistry_reward,
    conditioner_objective,
    head_digest,
    load_checkpoint,
    normalize_rewards,
    run_training,
    save_checkpoint,
    select_checkpoint,
    select_topk,
    validate_good_at_chem,
    warmup_lambda,
)
from patchmol.train.reward import reward_terms


def _d(qed=0.5, sa=4.0, logp=3.0, atoms=20, hetero=2):
    return Descriptors(qed, logp, sa, 0.0, 0.0, 0, 0, 0, 0.0, atoms, hetero, 0, 0, 0)


def test_reward_examples():
    assert chemistry_reward(_d()) == pytest.approx(0.86, abs=1e-12)
    assert chemistry_reward(_d(sa=10.0, hetero=0)) == pytest.approx(0.35, abs=1e-12)
    assert chemistry_reward(_d(0.0, 4.5, 3.8, 30, 5)) == pytest.approx(0.15, abs=1e-12)


@given(
    st.floats(0, 1), st.floats(1, 10), st.floats(-5, 10), st.integers(1, 80), st.integers(0, 20)
)
def test_reward_single_expression(qed, sa, logp, atoms, hetero):
    want = (
        1.6 * qed
        - 0.45 * max(sa - 4.5, 0) / 5.5
        - 0.25 * max(logp - 3.8, 0) / 5.2
        - 0.02 * max(atoms - 30, 0) / 20
        + 0.03 * min(hetero, 5)
    )
    assert abs(reward_terms(qed, sa, logp, atoms, hetero) - want) <= 1e-12


def test_normalize_examples():
    assert normalize_rewards([0, 1, 2, 3, 100]).tolist() == [-2, -1, 0, 1, 3]
    assert normalize_rewards([0.7] * 5).tolist() == [0.0] * 5


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=50))
def test_normalize_bounds_and_median(rs):
    z = normalize_rewards(rs)
    assert np.all(np.abs(z) <= 3.0)
    r = np.asarray(rs)
    mad = np.median(np.abs(r - np.median(r)))
    if mad > 1e-6:
        assert abs(np.median((r - np.median(r)) / mad)) < 1e-12


def test_warmup_examples():
    assert warmup_lambda(0, 1.0, 20) == 0.0
    assert warmup_lambda(20, 1.0, 20) == 1.0
    assert warmup_lambda(100, 2.5, 20) == 2.5
    assert warmup_lambda(10, 1.0, 20) == 0.5


@given(st.floats(0, 50), st.floats(0, 50))
def test_warmup_monotone(a, b):
    lo, hi = sorted((a, b))
    assert warmup_lambda(lo, 1.0, 20) <= warmup_lambda(hi, 1.0, 20)
    assert abs(warmup_lambda(20 - 1e-9, 1.0, 20) - 1.0) < 1e-12


def test_topk_examples():
    assert select_topk([3, 1, 2], 3) == [0, 2, 1]
    assert select_topk([0.1, 0.9, 0.5, 0.7], 2) == [1, 3]
    assert select_topk([1.0] * 6, 3) == [0, 1, 2]


def test_objective_examples():
    assert conditioner_objective([0.2, 0.2], [5.0, 1.0], 1.0, 0.0) == pytest.approx(-0.2)
    assert conditioner_objective([0.1, 0.3], [1.0, 1.0], 1.0, 0.5) == pytest.approx(-0.7)
    assert conditioner_objective(np.zeros(4), np.zeros(4), 1.0, 1.0) == 0.0
    with pytest.raises(ShapeMismatch):
        conditioner_objective([0.1], [1.0, 2.0], 1.0, 1.0)


def test_good_at_chem_strict():
    assert validate_good_at_chem([_d(0.6, 4.0, 3.0)]).fraction == 1.0
    assert validate_good_at_chem([_d(0.5, 4.0, 3.0)]).fraction == 0.0
    assert validate_good_at_chem([_d(0.6, 5.0, 3.0), _d(0.6, 4.0, 5.0)]).count == 0
    assert validate_good_at_chem([]).fraction == 0.0
    mixed = validate_good_at_chem([_d(0.6), None])
    assert mixed.fraction == 0.5 and mixed.mean_qed == 0.6


def test_select_checkpoint_examples():
    a = CheckpointMeta(0.3, 0.5, 4.0, 2.0, 1, 0)
    assert select_checkpoint([a]) is a
    b = CheckpointMeta(0.3, 0.6, 4.0, 2.0, 2, 0)
    assert select_checkpoint([a, b]) is b
    c = CheckpointMeta(0.3, 0.5, 4.2, 2.0, 3, 0)
    d = CheckpointMeta(0.3, 0.5, 4.6, 2.0, 4, 0)
    assert select_checkpoint([d, c]) is c
    e = CheckpointMeta(0.3, 0.5, 4.0, 2.0, 7, 0)
    assert select_checkpoint([e, a]) is a
    with pytest.raises(EmptyList):
        select_checkpoint([])


def test_config_invariants():
    with pytest.raises(ValueError):
        TrainConfig(batch_size=4, top_k=8)
    with pytest.raises(ValueError):
        TrainConfig(warmup_steps=0)
    with pytest.raises(ValueError):
        RewardConfig(clip_bound=0)


SMALL = TrainConfig(
    batch_size=8, top_k=4, epochs=2, steps_per_epoch=1, n_validation=8, holdout_size=8,
    conditioner_pretrain_steps=5, disc_warmup_epochs=1, disc_hidden=8, seed=3,
)
QCFG = QuantumConfig(n_qubits=4, n_layers=1, latent_dim=4)


@pytest.fixture(scope="module")
def small_run():
    corpus = build_corpus([mol_from_smiles(s) for s in toy_corpus(24, seed=1)], QCFG.latent_dim, 3)
    return corpus, run_training(corpus, SMALL, QCFG)


def test_training_freezes_head_and_is_reproducible(small_run):
    corpus, state = small_run
    first = run_training(corpus, SMALL.__class__(**{**SMALL.to_dict(), "epochs": 0}), QCFG)
    assert head_digest(first.head) == head_digest(state.head)
    assert len(first.history) == 1 and len(state.history) == 3
    again = run_training(corpus, SMALL, QCFG)
    assert [m.to_dict() for m in again.history] == [m.to_dict() for m in state.history]
    m = state.history[-1]
    assert m.attempts == SMALL.batch_size and 0 <= m.failures <= m.attempts
    assert all(math.isfinite(v) for v in m.to_dict().values())


def test_checkpoint_round_trip(small_run, tmp_path):
    corpus, state = small_run
    meta = state.checkpoints[-1]
    save_checkpoint(tmp_path / "epoch_002", state, meta)
    ck = load_checkpoint(tmp_path / "epoch_002")
    assert ck.meta == meta
    assert ck.head.to_bytes() == state.head.to_bytes()
    x = corpus.features[:4]
    a = ck.generator(state.generator.agg).generate(x, np.random.default_rng(0))
    b = state.generator.generate(x, np.random.default_rng(0))
    assert np.array_equal(a[0], b[0])

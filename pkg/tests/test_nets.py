import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from patchmol.chem import mol_from_smiles as parse_smiles
from patchmol.chem.graph import from_edges
from patchmol.errors import DegenerateInput, EmptyBatch, EmptyGraph, ShapeMismatch
from patchmol.nets import (
    EMAState,
    Layer,
    DenseNet,
    conditioner_forward,
    conditioner_train_step,
    critic_fit_batch,
    critic_loss,
    discriminator_forward,
    discriminator_logits,
    discriminator_train_step,
    ema_update,
    init_conditioner,
    init_critic,
    init_dense,
    init_discriminator,
    latent_axis_scores,
    rank_latent_axes,
)
from patchmol.nets.conditioner import critic_input_grad
from patchmol.nets.dense import mse
from patchmol.nets.discriminator import (
    PARAM_NAMES,
    bce_with_logits,
    discriminator_grads,
    edge_features,
    make_batch,
    node_features,
    zero_discriminator,
)

from oracles import pearson


def _scalar_mlp(net, x):
    h = list(x)
    for layer in net.layers:
        w, b = layer.w, layer.b
        out = []
        for j in range(w.shape[1]):
            s = b[j]
            for i in range(w.shape[0]):
                s += h[i] * w[i, j]
            if layer.activation == "relu":
                s = max(s, 0.0)
            elif layer.activation == "sigmoid":
                s = 1.0 / (1.0 + math.exp(-s))
            out.append(s)
        h = out
    return np.array(h)


def test_conditioner_zero_weights_gives_last_bias():
    net = init_dense((5, 512, 256, 3), ("relu", "relu", "identity"), 0)
    b3 = np.array([0.1, -0.2, 0.3])
    net = net.with_params([np.zeros_like(p) for p in net.params()[:-1]] + [b3])
    assert np.array_equal(conditioner_forward(np.ones((2, 5)), net), np.tile(b3, (2, 1)))


def test_identity_layer_passthrough():
    net = DenseNet((Layer(np.eye(4), np.zeros(4)),))
    x = np.arange(8.0).reshape(2, 4)
    assert np.array_equal(conditioner_forward(x, net), x)


@given(st.integers(0, 2**31))
def test_dense_forward_matches_scalar_oracle(seed):
    rng = np.random.default_rng(seed)
    net = init_dense((6, 9, 7, 3), ("relu", "sigmoid", "identity"), rng)
    net = net.with_params([p + rng.normal(0, 0.1, p.shape) for p in net.params()])
    x = rng.normal(size=(4, 6))
    got = net.forward(x)
    for r in range(4):
        assert np.allclose(got[r], _scalar_mlp(net, x[r]), atol=1e-12, rtol=0)


def test_shape_errors():
    net = init_dense((3, 4, 2), ("relu", "identity"), 0)
    with pytest.raises(ShapeMismatch):
        net.forward(np.zeros((2, 5)))
    with pytest.raises(ShapeMismatch):
        conditioner_train_step(net, np.zeros((2, 3)), np.zeros((3, 2)), 0.1)
    with pytest.raises(ShapeMismatch):
        critic_fit_batch(init_critic(3, 0), np.zeros((2, 3)), np.zeros(3), 0.1)


def _fd(f, params, h=1e-4):
    out = []
    for k, p in enumerate(params):
        g = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            plus = [q.copy() for q in params]
            minus = [q.copy() for q in params]
            plus[k][idx] += h
            minus[k][idx] -= h
            g[idx] = (f(plus) - f(minus)) / (2 * h)
        out.append(g)
    return out


def _off_kinks(cache, margin=1e-3):
    # central differences are invalid within the step of a relu kink
    return all(np.abs(a).min() > margin for _, a, _, _ in cache[:-1])


def _close(a, b, rel=1e-4, abs_=1e-7):
    return all(np.allclose(x, y, rtol=rel, atol=abs_) for x, y in zip(a, b))


@given(st.integers(0, 2**31))
def test_dense_gradient_matches_fd(seed):
    rng = np.random.default_rng(seed)
    net = init_dense((4, 6, 5, 2), ("relu", "relu", "identity"), rng)
    # nonzero biases keep pre-activations off the relu kink
    net = net.with_params([p + rng.normal(0, 0.1, p.shape) for p in net.params()])
    x = rng.normal(size=(5, 4))
    y = rng.normal(size=(5, 2))
    out, cache = net.forward_cache(x)
    assume(_off_kinks(cache))
    grads, _ = net.backward(cache, mse(out, y)[1])
    fd = _fd(lambda ps: mse(net.with_params(ps).forward(x), y)[0], [p.copy() for p in net.params()])
    assert _close(grads, fd, 1e-5, 1e-8)


def test_linear_closed_form_gradient():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(10, 3))
    y = rng.normal(size=(10, 1))
    w = rng.normal(size=(3, 1))
    net = DenseNet((Layer(w, np.zeros(1)),))
    out, cache = net.forward_cache(X)
    grads, _ = net.backward(cache, mse(out, y)[1])
    assert np.allclose(grads[0], 2 / 10 * X.T @ (X @ w - y), atol=1e-14)


def test_conditioner_step_zero_loss_when_fit():
    net = init_dense((3, 4, 2), ("relu", "identity"), 1)
    x = np.random.default_rng(0).normal(size=(5, 3))
    new, loss, _ = conditioner_train_step(net, x, net.forward(x), 0.5)
    assert loss == 0.0
    assert all(np.array_equal(a, b) for a, b in zip(new.params(), net.params()))


def test_conditioner_step_reduces_loss_and_dropout_inference_deterministic():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(32, 4))
    cond = init_conditioner(x, (0, 2), np.zeros(5), np.ones(5), seed=0, hidden=(16, 8))
    xs = cond.standardize(x)
    z = xs[:, :2] * 0.5
    loss0 = mse(conditioner_forward(xs, cond), z)[0]
    for _ in range(30):
        cond, _, _ = conditioner_train_step(cond, xs, z, 0.05, rng)
    assert mse(conditioner_forward(xs, cond), z)[0] < loss0
    assert np.array_equal(conditioner_forward(xs, cond), conditioner_forward(xs, cond))
    full = cond.full_latent(conditioner_forward(xs, cond), np.random.default_rng(1))
    assert full.shape == (32, 5) and np.array_equal(full[:, [0, 2]], conditioner_forward(xs, cond))


def test_critic_loss_example():
    critic = DenseNet((Layer(np.zeros((1, 1)), np.zeros(1)),))
    z = np.array([[0.0], [1.0]])
    critic = critic.with_params([np.ones((1, 1)), np.zeros(1)])
    assert critic_loss(critic, z, [1.0, 1.0]) == 0.5
    assert critic_loss(critic, z, [0.0, 1.0]) == 0.0
    _, loss, _ = critic_fit_batch(critic, z, np.array([1.0, 1.0]), 0.1)
    assert loss == 0.5


@given(st.integers(0, 2**31))
def test_critic_gradients_match_fd(seed):
    rng = np.random.default_rng(seed)
    critic = init_critic(4, int(rng.integers(1000)), hidden=(6, 5))
    critic = critic.with_params([p + rng.normal(0, 0.1, p.shape) for p in critic.params()])
    z = rng.normal(size=(6, 4))
    t = rng.normal(size=6)
    out, cache = critic.forward_cache(z)
    assume(_off_kinks(cache))
    grads, _ = critic.backward(cache, mse(out[:, 0], t)[1][:, None])
    fd = _fd(lambda ps: critic_loss(critic.with_params(ps), z, t), [p.copy() for p in critic.params()])
    assert _close(grads, fd, 1e-5, 1e-8)
    dv = rng.normal(size=6)
    dz = critic_input_grad(critic, z, dv)
    fdz = _fd(lambda zs: float(dv @ critic.forward(zs[0])[:, 0]), [z.copy()])[0]
    assert np.allclose(dz, fdz, rtol=1e-5, atol=1e-8)


def test_ranking_examples():
    rng = np.random.default_rng(0)
    Y = rng.normal(size=(30, 2))
    Z = rng.normal(size=(30, 4)) * 0.1
    Z[:, 2] = Y[:, 1]
    Z[:, 1] = 3.0
    scores = latent_axis_scores(Z, Y)
    assert rank_latent_axes(Z, Y, 1) == [2] and scores[2] == pytest.approx(1.0, abs=1e-12)
    assert scores[1] == 0.0
    with pytest.raises(DegenerateInput):
        rank_latent_axes(Z[:2], Y[:2], 1)


@given(st.integers(0, 2**31), st.floats(0.01, 100), st.floats(-10, 10))
def test_ranking_oracle_and_scale_invariance(seed, scale, shift):
    rng = np.random.default_rng(seed)
    Z = rng.normal(size=(50, 8))
    Y = rng.normal(size=(50, 3))
    want = [max(abs(pearson(Z[:, i], Y[:, j])) for j in range(3)) for i in range(8)]
    assert np.allclose(latent_axis_scores(Z, Y), want, atol=1e-12)
    Y2 = Y.copy()
    Y2[:, 1] = scale * Y2[:, 1] + shift
    assert np.allclose(latent_axis_scores(Z, Y2), latent_axis_scores(Z, Y), atol=1e-12)
    assert rank_latent_axes(Z, Y2, 8) == rank_latent_axes(Z, Y, 8)


def test_ema_examples():
    live = [np.ones(3)]
    s = EMAState.start([np.zeros(3)], 0.9)
    s = ema_update(ema_update(s, live), live)
    assert np.allclose(s.shadow[0], 0.19, atol=1e-15)
    assert np.array_equal(ema_update(EMAState.start([np.zeros(3)], 1.0), live).shadow[0], np.zeros(3))
    assert np.array_equal(ema_update(EMAState.start([np.zeros(3)], 0.0), live).shadow[0], np.ones(3))
    with pytest.raises(ShapeMismatch):
        ema_update(s, [np.ones(2)])


def _layer_oracle(x, eps, we, w, b, g, ef):
    n = len(x)
    out = []
    for u in range(n):
        m = (1 + eps) * x[u]
        for k, bond in enumerate(g.bonds):
            for a, c in ((bond.i, bond.j), (bond.j, bond.i)):
                if c == u:
                    m = m + np.maximum(x[a] + ef[k] @ we, 0.0)
        a_ = m @ w + b
        y = (a_ - a_.mean()) / math.sqrt(a_.var() + 1e-5)
        out.append(np.maximum(y, 0.0))
    return np.array(out)


def _disc_oracle(disc, g):
    p = disc.params
    x, ef = node_features(g), edge_features(g)
    h1 = _layer_oracle(x, p["eps"][0], p["we1"], p["w1"], p["b1"], g, ef)
    h2 = _layer_oracle(h1, p["eps"][1], p["we2"], p["w2"], p["b2"], g, ef)
    q = np.maximum(h2.mean(axis=0) @ p["v1"] + p["c1"], 0.0)
    return float(q @ p["v2"][:, 0] + p["c2"][0])


def test_discriminator_zero_weights_head_bias():
    assert discriminator_forward(parse_smiles("CCO"), zero_discriminator(4, 0.7)) == 0.7


def test_discriminator_features_two_atoms():
    g = parse_smiles("CO")
    assert node_features(g).tolist() == [[6, 4, 1, 0, 0, 3], [8, 2, 1, 0, 0, 1]]
    assert edge_features(g).tolist() == [[1, 0, 0, 0]]


@pytest.mark.parametrize("smi", ["CO", "c1ccccc1O", "CC(=O)N", "C"])
def test_discriminator_matches_loop_oracle(smi):
    disc = init_discriminator(5, hidden=6)
    g = parse_smiles(smi)
    assert discriminator_forward(g, disc) == pytest.approx(_disc_oracle(disc, g), abs=1e-10)


def test_discriminator_permutation_invariance():
    disc = init_discriminator(2, hidden=8)
    g = parse_smiles("CC(=O)Nc1ccc(O)cc1")
    ref = discriminator_forward(g, disc)
    rng = np.random.default_rng(0)
    for _ in range(100):
        assert discriminator_forward(g.permuted(rng.permutation(g.n_atoms)), disc) == ref


def test_bce_examples():
    loss, _ = bce_with_logits(np.zeros(1), np.array([0.9]))
    assert loss == pytest.approx(math.log(2), abs=1e-15)
    loss, grad = bce_with_logits(np.array([50.0, -50.0]), np.array([0.9, 0.1]))
    floor = 0.9 * math.log1p(math.exp(-10)) + 0.1 * (10 + math.log1p(math.exp(-10)))
    assert loss == pytest.approx(floor, abs=1e-12)
    assert np.array_equal(grad, np.zeros(2))


def test_discriminator_grads_match_fd():
    disc = init_discriminator(3, hidden=4)
    graphs = [parse_smiles("CCO"), parse_smiles("C1CC1"), parse_smiles("N")]
    t = np.array([0.9, 0.1, 0.9])
    batch = make_batch(graphs)

    def loss(ps):
        return bce_with_logits(discriminator_logits(disc.with_param_list(ps), batch), t)[0]

    _, dl = bce_with_logits(discriminator_logits(disc, batch), t)
    grads = discriminator_grads(disc, batch, dl)
    fd = _fd(loss, [p.copy() for p in disc.param_list()])
    for name, a, b in zip(PARAM_NAMES, grads, fd):
        assert np.allclose(a, b, rtol=1e-4, atol=1e-7), name


def test_discriminator_train_step_and_errors():
    disc = init_discriminator(0, hidden=8)
    ema = EMAState.start(disc.param_list(), 0.9)
    real, fake = [parse_smiles("c1ccccc1")], [parse_smiles("CCCC")]
    new, loss, ema2, _ = discriminator_train_step(disc, real, fake, 0.01, ema=ema)
    assert loss > 0 and new.param_list()[2] is not disc.param_list()[2]
    for s, e, live in zip(ema2.shadow, ema.shadow, new.param_list()):
        assert np.allclose(s, 0.9 * e + 0.1 * live)
    with pytest.raises(EmptyBatch):
        discriminator_train_step(disc, [], fake, 0.01)
    with pytest.raises(EmptyGraph):
        discriminator_forward(from_edges([], []), disc)

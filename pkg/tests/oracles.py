"""Independent brute-force reference implementations used by the tests."""

import itertools
import math

import numpy as np

I2 = np.eye(2, dtype=complex)
Z2 = np.diag([1.0, -1.0]).astype(complex)


def rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(t):
    return np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)])


def on_qubit(gate, q, n):
    """Full 2^n operator with qubit 0 as the most significant bit."""
    out = np.array([[1.0 + 0j]])
    for k in range(n):
        out = np.kron(out, gate if k == q else I2)
    return out


def cnot(control, target, n):
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bits = [(i >> (n - 1 - k)) & 1 for k in range(n)]
        if bits[control]:
            bits[target] ^= 1
        j = sum(b << (n - 1 - k) for k, b in enumerate(bits))
        m[j, i] = 1.0
    return m


def circuit_unitary(theta_in, alpha):
    n = len(theta_in)
    u = np.eye(2**n, dtype=complex)
    for q in range(n):
        u = on_qubit(ry(theta_in[q]), q, n) @ u
    for layer in alpha:
        for q in range(n):
            u = on_qubit(rz(layer[q][2]) @ ry(layer[q][1]) @ rx(layer[q][0]), q, n) @ u
        if n > 1:
            for q in range(n):
                u = cnot(q, (q + 1) % n, n) @ u
    return u


def expectations(theta_in, alpha):
    n = len(theta_in)
    psi = circuit_unitary(theta_in, alpha)[:, 0]
    return np.array([np.real(np.conj(psi) @ on_qubit(Z2, q, n) @ psi) for q in range(n)])


def patch_scalar(z, w_in, b_in, alpha, w_post, b_post, n_nodes, f_node):
    """Straight-line loops for the encode, simulate and readout path."""
    n = len(b_in)
    theta = [b_in[q] + sum(z[i] * w_in[i][q] for i in range(len(z))) for q in range(n)]
    g = expectations(theta, alpha)
    out = []
    for j in range(n_nodes * f_node):
        a = b_post[j] + sum(g[q] * w_post[q][j] for q in range(n))
        out.append(1.0 / (1.0 + math.exp(-a)))
    return np.array(out).reshape(n_nodes, f_node)


def dominates(p, q):
    """p dominates q under (maximise x0, minimise x1, minimise x2)."""
    ge = p[0] >= q[0] and p[1] <= q[1] and p[2] <= q[2]
    gt = p[0] > q[0] or p[1] < q[1] or p[2] < q[2]
    return ge and gt


def pareto_brute(points):
    return [i for i, p in enumerate(points) if not any(dominates(q, p) for j, q in enumerate(points) if j != i)]


def tanimoto_bits(a, b):
    a, b = set(a), set(b)
    u = len(a | b)
    return len(a & b) / u if u else 1.0


def average_ranks(x):
    x = list(x)
    order = sorted(range(len(x)), key=lambda i: x[i])
    ranks = [0.0] * len(x)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and x[order[j + 1]] == x[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def pearson(x, y):
    mx, my = sum(x) / len(x), sum(y) / len(y)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        return 0.0
    return sxy / math.sqrt(sxx * syy)


def spearman_brute(x, y):
    return pearson(average_ranks(x), average_ranks(y))


def maxmin_brute(dist, k, seed):
    """Greedy farthest-point with explicit min over the selected set."""
    chosen = [seed]
    while len(chosen) < k:
        best, best_val = None, -1.0
        for i in range(len(dist)):
            if i in chosen:
                continue
            v = min(dist[i][j] for j in chosen)
            if v > best_val:
                best, best_val = i, v
        chosen.append(best)
    return chosen


def mean_pairwise(sim):
    n = len(sim)
    vals = [sim[i][j] for i, j in itertools.combinations(range(n), 2)]
    return sum(vals) / len(vals)

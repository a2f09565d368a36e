"""Shared oracles and random generators.

The oracles here are deliberately naive (explicit loops, dense Kronecker
products) so that they share no code path with the package.
"""

import itertools

import numpy as np
import pytest

H1 = np.array([[1.0, 1.0], [1.0, -1.0]])
PAULI = {
    "I": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
SPIN = {
    (0, 0): PAULI["I"],
    (0, 1): PAULI["x"],
    (1, 0): PAULI["z"],
    (1, 1): np.array([[0, 1], [-1, 0]], dtype=complex),
}

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, label, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"AC{key:<2} {'PASS' if ok else 'FAIL'}  {label}  {detail}")


def bits_of(v, n):
    return [(v >> (n - 1 - r)) & 1 for r in range(n)]


def dense_kron(mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def hadamard_matrix(n):
    return dense_kron([H1] * n).real


def spin_element(j, k, n):
    return dense_kron([SPIN[(a, b)] for a, b in zip(bits_of(j, n), bits_of(k, n))])


def naive_spin_table(rho):
    """``s[j,k] = tr(S[j,k]^dagger rho)`` by dense products."""
    d = rho.shape[0]
    n = d.bit_length() - 1
    s = np.empty((d, d), dtype=complex)
    for j in range(d):
        for k in range(d):
            s[j, k] = np.trace(spin_element(j, k, n).conj().T @ rho)
    return s


def naive_partial_transpose(rho, subset, n):
    """Swap row/column bits on the qubits in ``subset`` (1-based), entry by entry."""
    d = 1 << n
    mask = 0
    for q in subset:
        mask |= 1 << (n - q)
    out = np.empty_like(rho)
    for r in range(d):
        for c in range(d):
            r2 = (r & ~mask) | (c & mask)
            c2 = (c & ~mask) | (r & mask)
            out[r2, c2] = rho[r, c]
    return out


def random_density(rng, n, rank=None):
    d = 1 << n
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return m / np.trace(m).real


def random_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2


def random_ball(rng, size=None):
    """Uniform in the unit ball."""
    v = rng.normal(size=(size or 1, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v *= rng.random((size or 1, 1)) ** (1 / 3)
    return v if size else v[0]


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def bloch_matrix(m):
    return 0.5 * (PAULI["I"] + m[0] * PAULI["x"] + m[1] * PAULI["y"] + m[2] * PAULI["z"])


def random_product_mixture(rng, n, terms):
    w = rng.dirichlet(np.ones(terms))
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for p in w:
        out += p * dense_kron([bloch_matrix(random_ball(rng)) for _ in range(n)])
    return out


def all_proper_subsets(n):
    return [c for size in range(1, n) for c in itertools.combinations(range(1, n + 1), size)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

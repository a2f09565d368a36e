"""Acceptance criteria, one test each.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria". Run just this file with
``pytest tests/test_acceptance.py``.
"""

import itertools

import numpy as np
from conftest import (
    ACCEPTANCE,
    PAULI,
    dense_kron,
    hadamard_matrix,
    random_density,
    random_hermitian,
    random_product_mixture,
    spin_element,
)

from qsep.bases import (
    CoefficientTable,
    basis_element,
    density_from_spin,
    hermitian_spin_coefficients,
    spin_from_adjusted,
    spin_from_density,
    spin_norm1,
)
from qsep.criteria import (
    antidiagonal_necessary,
    cauchy_schwarz_bipartite,
    mu_bound,
    peres_battery,
    peres_test,
    random_neighborhood_check,
    sharpness_decision,
    spin_norm_sufficient,
)
from qsep.decompose import (
    product_decomposition,
    spin_norm_decomposition,
    verify_decomposition,
    werner_decomposition,
)
from qsep.families import ProductSpec, SharpnessSpec, WernerSpec, sharpness_state, werner, werner_threshold
from qsep.linalg import DensityMatrix, proper_subsets


def record(num, label, failures, detail=""):
    ok = not failures
    ACCEPTANCE[num] = (ok, label, detail if ok else f"{len(failures)} failure(s), first: {failures[0]}")
    print(f"AC{num} {'PASS' if ok else 'FAIL'}  {label}  {ACCEPTANCE[num][2]}")
    assert ok, failures[:5]


def hermitize(m):
    return (m + m.conj().T) / 2


def passes_necessary(rho):
    n = rho.n
    return (
        antidiagonal_necessary(rho).passed
        and all(cauchy_schwarz_bipartite(rho, c).passed for c in range(1, n))
        and all(r.passed for r in peres_battery(rho).values())
    )


def test_ac1_werner_threshold():
    failures = []
    for n in (2, 3, 4, 5):
        s = werner_threshold(n)
        spec = WernerSpec.make(n, s)
        res = verify_decomposition(werner_decomposition(spec), werner(spec), 1e-10)
        if not res.passed:
            failures.append(f"n={n}: certificate deviation {res.max_deviation}")
        above = werner(WernerSpec.make(n, s + 1e-6))
        if antidiagonal_necessary(above).passed:
            failures.append(f"n={n}: antidiagonal passes above threshold")
        if n <= 4 and all(r.passed for r in peres_battery(above).values()):
            failures.append(f"n={n}: every Peres cut passes above threshold")
    record(1, "Werner threshold", failures, "n=2..5 certified at threshold, witnessed at +1e-6")


def test_ac2_werner_spin_norm():
    failures = []
    for n in range(2, 7):
        got = spin_norm1(werner(WernerSpec.make(n, werner_threshold(n))))
        want = ((1 << n) - 1) / ((1 << (n - 1)) + 1)
        if abs(got - want) > 1e-12:
            failures.append(f"n={n}: {got} vs {want}")
    for n, want in ((2, 1.0), (3, 1.4)):
        got = spin_norm1(werner(WernerSpec.make(n, werner_threshold(n))))
        if abs(got - want) > 1e-12:
            failures.append(f"n={n}: {got} vs {want}")
    record(2, "Werner spin norm at threshold", failures, "(2^n-1)/(2^(n-1)+1) for n=2..6")


def test_ac3_sharpness_grid():
    failures = []
    grid = np.linspace(-1 / 8, 1 / 8, 21)
    for c, d in itertools.product(grid, grid):
        spec = SharpnessSpec(3, float(c), float(d))
        rho = sharpness_state(spec)
        norm = spin_norm1(rho)
        if abs(norm - (1 + 4 * abs(c - d))) > 1e-12:
            failures.append(f"c={c}, d={d}: norm {norm}")
        dec = sharpness_decision(spec)
        if (dec.verdict == "fail") != (abs(c - d) > 1e-12):
            failures.append(f"c={c}, d={d}: decision {dec.verdict}")
        bad = [t for t in proper_subsets(3) if not peres_test(rho, t).passed]
        if bad:
            failures.append(f"c={c}, d={d}: Peres fails on {bad}")
        if c == d and not verify_decomposition(spin_norm_decomposition(rho), rho, 1e-10).passed:
            failures.append(f"c=d={c}: certificate rejected")
    record(3, "sharpness at n=3", failures, "21x21 grid, iff c=d, Peres silent everywhere")


def test_ac4_product_certificates():
    rng = np.random.default_rng(4)
    failures = []
    for trial in range(200):
        n = int(rng.integers(1, 5))
        vecs = [tuple(v / np.linalg.norm(v)) for v in rng.normal(size=(n, 3))]
        spec = ProductSpec(vecs, int(rng.choice([1, -1])))
        dec = product_decomposition(spec)
        corr = dense_kron([v[0] * PAULI["x"] + v[1] * PAULI["y"] + v[2] * PAULI["z"] for v in vecs])
        target = (np.eye(1 << n) + spec.sign * corr) / (1 << n)
        dev = np.max(np.abs(dec.reassemble() - target))
        if dev > 1e-12 or len(dec) != 1 << (n - 1):
            failures.append(f"trial {trial}: n={n}, {len(dec)} terms, deviation {dev}")
            continue
        if not passes_necessary(DensityMatrix(hermitize(dec.reassemble()))):
            failures.append(f"trial {trial}: reassembly fails a necessary criterion")
    record(4, "product certificates", failures, "200 specs, n<=4, 2^(n-1) terms")


def test_ac5_spin_norm_certificates():
    rng = np.random.default_rng(5)
    failures = []
    for trial in range(100):
        n = int(rng.integers(1, 4))
        d = 1 << n
        # real Pauli-product coefficients h, with s = (-i)^(j.k) h
        h = rng.normal(size=(d, d)) * (rng.random((d, d)) < 0.5)
        h[0, 0] = 0.0
        if not h.any():
            h[0, 1] = 1.0
        target = 1.0 if trial % 10 == 0 else float(rng.random())
        h *= target / np.abs(h).sum()
        m = np.eye(d, dtype=complex) / d
        for j, k in zip(*np.nonzero(h)):
            twist = (-1j) ** bin(int(j) & int(k)).count("1")
            m = m + h[j, k] * twist * spin_element(int(j), int(k), n) / d
        rho = DensityMatrix(hermitize(m))
        dec = spin_norm_decomposition(rho)
        res = verify_decomposition(dec, rho, 1e-10)
        if not res.passed:
            failures.append(f"trial {trial}: deviation {res.max_deviation}, {res.violations[:1]}")
        if abs(dec.weights[0] - (1 - target)) > 1e-12:
            failures.append(f"trial {trial}: identity weight {dec.weights[0]} vs {1 - target}")
    record(5, "spin-norm certificates", failures, "100 states with norm <= 1, n<=3")


def test_ac6_transform():
    rng = np.random.default_rng(6)
    failures = []
    for trial in range(100):
        n = trial % 4 + 1
        d = 1 << n
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        fast = spin_from_adjusted(CoefficientTable(n, "adjusted", a)).values
        err = np.max(np.abs(fast - hadamard_matrix(n) @ a))
        if err > 1e-13:
            failures.append(f"trial {trial}: FWHT error {err}")
        rho = DensityMatrix(random_density(rng, n))
        err = np.max(np.abs(density_from_spin(spin_from_density(rho)).mat - rho.mat))
        if err > 1e-12:
            failures.append(f"trial {trial}: round trip error {err}")
    for n in (1, 2, 3):
        d = 1 << n
        labels = [format(v, f"0{n}b") for v in range(d)]
        stack = np.array([basis_element("spin", j, k).matrix.ravel() for j in labels for k in labels]).T
        gram = stack.conj().T @ stack
        if not np.array_equal(gram, d * np.eye(d * d)):
            failures.append(f"n={n}: spin basis not orthogonal")
    record(6, "transform correctness", failures, "FWHT vs H^[n], round trip, orthonormality n<=3")


def test_ac7_reality():
    rng = np.random.default_rng(7)
    failures = []
    for trial in range(100):
        n = trial % 4 + 1
        h = random_hermitian(rng, 1 << n)
        j = np.arange(1 << n)[:, None]
        k = np.arange(1 << n)[None, :]
        table = spin_from_adjusted(CoefficientTable(n, "adjusted", h[j, j ^ k]))
        imag = np.max(np.abs(hermitian_spin_coefficients(table).imag))
        if imag >= 1e-12:
            failures.append(f"trial {trial}: imaginary part {imag}")
    record(7, "twisted spin coefficients real", failures, "100 Hermitian inputs, n<=4")


def test_ac8_necessary_soundness():
    rng = np.random.default_rng(8)
    failures = []
    for trial in range(1000):
        n = trial % 3 + 2
        rho = DensityMatrix(random_product_mixture(rng, n, int(rng.integers(1, 7))))
        if not passes_necessary(rho):
            failures.append(f"trial {trial}: n={n}")
    record(8, "necessary conditions sound", failures, "1000 product mixtures, zero false positives")


def test_ac9_neighborhood_implies_spin_norm():
    rng = np.random.default_rng(9)
    failures = []
    hits = 0
    for trial in range(300):
        n = trial % 3 + 1
        d = 1 << n
        eps = 10.0 ** rng.uniform(-3, 0)
        rho = DensityMatrix(hermitize((1 - eps) * np.eye(d) / d + eps * random_density(rng, n)))
        if random_neighborhood_check(rho).passed:
            hits += 1
            if not spin_norm_sufficient(rho).passed:
                failures.append(f"trial {trial}: neighborhood passes but spin norm fails")
    if hits < 20:
        failures.append(f"only {hits} states inside the neighborhood")
    # n = 2 boundary: all 15 Pauli-product coefficients at 1/15
    m = np.eye(4, dtype=complex)
    for j, k in itertools.product(range(4), repeat=2):
        if (j, k) != (0, 0):
            m = m + (1 / 15) * (-1j) ** bin(j & k).count("1") * spin_element(j, k, 2)
    edge = DensityMatrix(hermitize(m / 4))
    nb, sn = random_neighborhood_check(edge), spin_norm_sufficient(edge)
    if not (nb.passed and sn.passed and abs(nb.witness["bound"] - 1 / 15) < 1e-15):
        failures.append(f"boundary 1/15: neighborhood {nb.verdict}, spin norm {sn.verdict}")
    if abs(spin_norm1(edge) - 1.0) > 1e-12:
        failures.append(f"boundary state norm {spin_norm1(edge)}")
    record(9, "neighborhood implies spin norm", failures, f"{hits} neighborhood states, 1/15 boundary exercised")


def test_ac10_mu_bound():
    failures = []
    for n in range(2, 7):
        up = np.zeros(1 << (n - 1))
        up[0] = 1.0
        b = mu_bound(n, up, np.zeros_like(up))
        if abs(b - werner_threshold(n)) > 1e-15:
            failures.append(f"n={n}: {b} vs {werner_threshold(n)}")
    record(10, "mu bound equals Werner threshold", failures, "n=2..6")

import numpy as np
import pytest
from conftest import random_density, random_product_mixture
from hypothesis import given, settings
from hypothesis import strategies as st

from qsep.criteria import (
    CriterionResult,
    PlanarAngleProfile,
    _result,
    angle_trace,
    antidiagonal_necessary,
    cauchy_schwarz_bipartite,
    diagonal_family_necessary,
    mu_bound,
    mu_sufficient,
    peres_battery,
    peres_test,
    random_neighborhood_check,
    sharpness_decision,
    spin_norm_sufficient,
)
from qsep.decompose import spin_norm_decomposition
from qsep.families import (
    DiagonalFamilySpec,
    SharpnessSpec,
    WernerSpec,
    diagonal_family,
    ghz_projector,
    werner,
    werner_threshold,
)
from qsep.linalg import DensityMatrix, maximally_mixed
from qsep.bits import BitIndex


def test_peres_detects_bell_state():
    res = peres_test(ghz_projector("00"), [1])
    assert res.verdict == "fail"
    assert res.margin == pytest.approx(-0.5, abs=1e-15)
    assert res.witness == {"subset": [1]}


def test_peres_jacobi_matches_lapack(rng):
    rho = DensityMatrix(random_density(rng, 3))
    for t in [(1,), (2, 3)]:
        a = peres_test(rho, t).margin
        b = peres_test(rho, t, method="jacobi").margin
        assert abs(a - b) < 1e-13


def test_peres_battery_order_and_threads(rng):
    rho = DensityMatrix(random_density(rng, 4))
    serial = peres_battery(rho)
    threaded = peres_battery(rho, jobs=4)
    assert list(serial) == list(threaded)
    assert [r.margin for r in serial.values()] == [r.margin for r in threaded.values()]
    assert list(peres_battery(rho, [(3,), (2, 1)])) == [(3,), (1, 2)]


def test_cauchy_schwarz_witness_on_bell_state():
    res = cauchy_schwarz_bipartite(ghz_projector("00"), 1)
    assert res.verdict == "fail"
    assert res.margin == pytest.approx(-0.5)
    w = res.witness
    assert {w["j"], w["k"]} == {"01", "10"}
    assert {w["row"], w["col"]} == {"00", "11"}


def test_cauchy_schwarz_brute_force(rng):
    # min over j != k of sqrt(rho_jj rho_kk) - |rho[j1 k2, k1 j2]|, looped
    n, cut = 3, 2
    rho = DensityMatrix(random_density(rng, n, rank=2))
    m = rho.mat
    d2 = 1 << (n - cut)
    best = np.inf
    for j in range(8):
        for k in range(8):
            if j == k:
                continue
            j1, j2 = divmod(j, d2)
            k1, k2 = divmod(k, d2)
            gap = np.sqrt(m[j, j].real * m[k, k].real) - abs(m[j1 * d2 + k2, k1 * d2 + j2])
            best = min(best, gap)
    assert cauchy_schwarz_bipartite(rho, cut).margin == pytest.approx(best, abs=1e-15)


def test_cauchy_schwarz_rejects_bad_cut():
    with pytest.raises(ValueError):
        cauchy_schwarz_bipartite(maximally_mixed(2), 2)


def test_antidiagonal_witness_for_ghz():
    res = antidiagonal_necessary(ghz_projector("000"))
    assert res.verdict == "fail"
    assert res.witness["j"] == "001"
    assert res.margin == pytest.approx(-0.5)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_diagonal_margin_is_twice_antidiagonal(rng, n):
    half = 1 << (n - 1)
    for _ in range(20):
        w = rng.dirichlet(np.ones(2 * half) * 0.5)
        spec = DiagonalFamilySpec(n, w[:half], w[half:])
        fam = diagonal_family_necessary(spec)
        anti = antidiagonal_necessary(diagonal_family(spec))
        assert fam.verdict == anti.verdict
        assert fam.margin == pytest.approx(2 * anti.margin, abs=1e-15)


def test_depolarization_invariant_flag():
    res = diagonal_family_necessary(DiagonalFamilySpec(2, [0.55, 0.15], [0.15, 0.15]))
    assert res.witness["depolarization_invariant"]
    assert "no certificate" in res.witness["note"]


def test_random_neighborhood_weaker_than_spin_norm():
    rho = werner(WernerSpec.make(2, 1 / 3))
    assert random_neighborhood_check(rho).verdict == "fail"
    assert spin_norm_sufficient(rho).verdict == "pass"


def test_mu_bound_reduces_to_werner_threshold():
    for n in range(2, 7):
        up = np.zeros(1 << (n - 1))
        up[0] = 1.0
        assert mu_bound(n, up, np.zeros_like(up)) == pytest.approx(werner_threshold(n), abs=1e-15)
    assert mu_sufficient(3, 0.1, [1, 0, 0, 0], [0, 0, 0, 0]).passed
    assert not mu_sufficient(3, 0.3, [1, 0, 0, 0], [0, 0, 0, 0]).passed


def test_sharpness_decision_three_qubits():
    res = sharpness_decision(SharpnessSpec(3, 0.0625, -0.0625))
    assert res.verdict == "fail"
    assert res.witness["spin_norm"] == pytest.approx(1.5, abs=1e-12)
    assert res.witness["peres_all_pass"]
    assert res.witness["certificate"] is None
    assert not res.witness["angle_trace"]["constraint_holds"]

    res = sharpness_decision(SharpnessSpec(3, 0.03, 0.03))
    assert res.verdict == "pass"
    trace = res.witness["angle_trace"]
    assert trace["constraint_holds"]
    assert trace["max_residue_000"] < 1e-12 and trace["max_residue_001"] < 1e-12
    assert trace["implied"] == pytest.approx([0.03, 0.03], abs=1e-15)


@pytest.mark.parametrize("n", [4, 5])
def test_sharpness_spin_norm_general_n(n):
    res = sharpness_decision(SharpnessSpec(n, 0.02, -0.01))
    assert res.witness["spin_norm"] == pytest.approx(1 + 2 ** (n - 1) * 0.03, abs=1e-12)
    assert "angle_trace" not in res.witness


def test_planar_profile_rejects_z_components():
    dec = spin_norm_decomposition(maximally_mixed(2))
    with pytest.raises(ValueError):
        PlanarAngleProfile.from_decomposition(dec)
    with pytest.raises(ValueError):
        angle_trace(SharpnessSpec(4, 0, 0))
    assert PlanarAngleProfile(np.array([1.0]), np.array([[0.0, 0.0, 0.0]])).coherence(BitIndex.from_str("000")) == 1 / 8


@pytest.mark.parametrize("n", [2, 3, 4])
def test_necessary_conditions_hold_on_product_mixtures(rng, n):
    for _ in range(10):
        rho = DensityMatrix(random_product_mixture(rng, n, 4))
        assert antidiagonal_necessary(rho).passed
        assert all(cauchy_schwarz_bipartite(rho, c).passed for c in range(1, n))
        assert all(r.passed for r in peres_battery(rho).values())


@settings(max_examples=60, deadline=None)
@given(st.floats(-1, 1), st.floats(0, 0.1))
def test_verdict_tracks_margin(margin, tol):
    r = _result("x", margin, tol)
    assert isinstance(r, CriterionResult)
    assert r.passed == (margin >= -tol)


def test_werner_peres_margins():
    assert peres_test(werner(WernerSpec.make(2, 0.5)), [2]).margin == pytest.approx(-0.125, abs=1e-15)
    edge = peres_test(werner(WernerSpec.make(2, 1 / 3)), [2])
    assert edge.passed and abs(edge.margin) < 1e-10


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cauchy_schwarz_on_maximally_mixed(n):
    for cut in range(1, n):
        assert cauchy_schwarz_bipartite(maximally_mixed(n), cut).margin == pytest.approx(1 / (1 << n))


def test_antidiagonal_tracks_werner_threshold():
    for n in (2, 3, 4):
        s = werner_threshold(n)
        assert antidiagonal_necessary(werner(WernerSpec.make(n, s))).passed
        assert not antidiagonal_necessary(werner(WernerSpec.make(n, s + 1e-9))).passed
    for j in ("000", "010", "011"):
        assert antidiagonal_necessary(ghz_projector(j)).margin == pytest.approx(-0.5)

"""Separability tests.

Necessary conditions (a failure witnesses that the state is not fully
separable): :func:`peres_test`, :func:`cauchy_schwarz_bipartite`,
:func:`antidiagonal_necessary`, :func:`diagonal_family_necessary`.

Sufficient conditions (a failure is inconclusive): :func:`spin_norm_sufficient`,
:func:`random_neighborhood_check`, :func:`mu_sufficient`.

Exact decision for one family: :func:`sharpness_decision`.

Every test returns a :class:`CriterionResult` whose ``margin`` is signed:
nonnegative means the condition holds, with the magnitude as slack.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .bases import spin_from_density, spin_norm1
from .bits import BitIndex
from .decompose import SeparableDecomposition, spin_norm_decomposition
from .families import DiagonalFamilySpec, SharpnessSpec, WeightsLike, sharpness_state
from .linalg import DensityMatrix, hermitian_eigenvalues, partial_transpose, proper_subsets

PERES_TOLERANCE = 1e-10
NECESSARY_TOLERANCE = 1e-12
SUFFICIENT_TOLERANCE = 1e-12

ASSERTED_NO_CERTIFICATE = "asserted sufficient; no certificate construction"


@dataclass(frozen=True)
class CriterionResult:
    name: str
    verdict: str
    margin: float
    tolerance: float
    witness: Optional[dict] = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _result(name: str, margin: float, tol: float, witness: Optional[dict] = None) -> CriterionResult:
    margin = float(margin)
    return CriterionResult(name, "pass" if margin >= -tol else "fail", margin, tol, witness)


def _bits(v: int, n: int) -> str:
    return str(BitIndex.from_int(int(v), n))


def _scaled(tol: float, rho: DensityMatrix) -> float:
    return tol * float(np.max(np.abs(rho.mat)))


def peres_test(
    rho: DensityMatrix, subset: Iterable[int], tol: float = PERES_TOLERANCE, method: str = "lapack"
) -> CriterionResult:
    """Smallest eigenvalue of the partial transpose on ``subset`` (1-based qubits)."""
    subset = tuple(subset)
    pt = partial_transpose(rho, subset)
    eigs = hermitian_eigenvalues(pt, method=method)
    return _result("peres", eigs[0], tol, {"subset": list(subset)})


def peres_battery(
    rho: DensityMatrix,
    subsets: Optional[Sequence[Sequence[int]]] = None,
    tol: float = PERES_TOLERANCE,
    jobs: int = 1,
) -> dict[tuple[int, ...], CriterionResult]:
    """:func:`peres_test` on each subset (default: every proper subset), in input order."""
    subsets = [tuple(sorted(t)) for t in (subsets if subsets is not None else proper_subsets(rho.n))]
    if jobs > 1 and len(subsets) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda t: peres_test(rho, t, tol), subsets))
    else:
        results = [peres_test(rho, t, tol) for t in subsets]
    return dict(zip(subsets, results))


def cauchy_schwarz_bipartite(rho: DensityMatrix, cut: int, tol: float = NECESSARY_TOLERANCE) -> CriterionResult:
    """Check ``sqrt(rho[j,j] rho[k,k]) >= |<j1 k2|rho|k1 j2>|`` for all ``j != k``.

    ``j = j1 j2`` splits after the first ``cut`` qubits. The witness is the
    pair attaining the smallest margin. Tolerance is ``tol`` times the largest
    matrix entry.
    """
    n = rho.n
    if not 1 <= cut < n:
        raise ValueError(f"cut must lie in [1, {n - 1}], got {cut}")
    d = rho.dim
    d1, d2 = 1 << cut, 1 << (n - cut)
    diag = np.clip(np.diag(rho.mat).real, 0.0, None)
    lhs = np.sqrt(np.outer(diag, diag))
    # cross[j1, j2, k1, k2] = rho[(j1, k2), (k1, j2)]
    cross = np.abs(rho.mat.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1)).reshape(d, d)
    gap = lhs - cross
    np.fill_diagonal(gap, np.inf)
    flat = int(np.argmin(gap))
    j, k = divmod(flat, d)
    j1, j2 = divmod(j, d2)
    k1, k2 = divmod(k, d2)
    witness = {
        "cut": cut,
        "j": _bits(j, n),
        "k": _bits(k, n),
        "row": _bits(j1 * d2 + k2, n),
        "col": _bits(k1 * d2 + j2, n),
    }
    return _result("cauchy_schwarz", gap[j, k], _scaled(tol, rho), witness)


def antidiagonal_necessary(rho: DensityMatrix, tol: float = NECESSARY_TOLERANCE) -> CriterionResult:
    """``min_j sqrt(rho[j,j] rho[jbar,jbar]) - max_u |rho[u, ubar]|``."""
    n, d = rho.n, rho.dim
    diag = np.clip(np.diag(rho.mat).real, 0.0, None)
    idx = np.arange(d)
    lhs = np.sqrt(diag * diag[idx ^ (d - 1)])
    anti = np.abs(rho.mat[idx, idx ^ (d - 1)])
    j = int(np.argmin(lhs))
    u = int(np.argmax(anti))
    witness = {"j": _bits(j, n), "u": _bits(u, n)}
    return _result("antidiagonal", lhs[j] - anti[u], _scaled(tol, rho), witness)


def diagonal_family_necessary(spec: DiagonalFamilySpec, tol: float = NECESSARY_TOLERANCE) -> CriterionResult:
    """``min_j (t+[j] + t-[j]) - max_u |t+[u] - t-[u]|`` on GHZ-diagonal weights.

    Equals twice the :func:`antidiagonal_necessary` margin of the state.
    """
    total = spec.tplus + spec.tminus
    diff = np.abs(spec.tplus - spec.tminus)
    j = int(np.argmin(total))
    u = int(np.argmax(diff))
    witness = {"j": _bits(j, spec.n), "u": _bits(u, spec.n)}
    if spec.is_depolarization_invariant():
        witness["depolarization_invariant"] = True
        witness["note"] = ASSERTED_NO_CERTIFICATE
    return _result("diagonal_family", total[j] - diff[u], tol, witness)


def spin_norm_sufficient(rho: DensityMatrix, tol: float = SUFFICIENT_TOLERANCE) -> CriterionResult:
    """``1 - ||rho||_1``; passing guarantees a certificate from :func:`spin_norm_decomposition`."""
    norm = spin_norm1(rho)
    return _result("spin_norm", 1.0 - norm, tol, {"spin_norm": norm})


def random_neighborhood_check(rho: DensityMatrix, tol: float = SUFFICIENT_TOLERANCE) -> CriterionResult:
    """Every ``|s[j,k]|``, ``(j,k) != (0,0)``, at most ``1 / (4**n - 1)``."""
    n = rho.n
    mags = np.abs(spin_from_density(rho).values)
    mags[0, 0] = 0.0
    flat = int(np.argmax(mags))
    j, k = divmod(flat, rho.dim)
    bound = 1.0 / ((1 << (2 * n)) - 1)
    witness = {"j": _bits(j, n), "k": _bits(k, n), "bound": bound}
    return _result("random_neighborhood", bound - mags[j, k], tol, witness)


def mu_bound(n: int, uplus: WeightsLike, uminus: WeightsLike) -> float:
    u = DiagonalFamilySpec(n, uplus, uminus)
    spread = float(np.sum(np.abs(u.tplus - u.tminus)))
    return 1.0 / (1 + (1 << (n - 1)) * spread)


def mu_sufficient(
    n: int, s: float, uplus: WeightsLike, uminus: WeightsLike, tol: float = SUFFICIENT_TOLERANCE
) -> CriterionResult:
    """``(1 + 2**(n-1) sum_j |u+[j] - u-[j]|)**-1 - s``."""
    bound = mu_bound(n, uplus, uminus)
    return _result("mu", bound - s, tol, {"bound": bound})


@dataclass(frozen=True)
class PlanarAngleProfile:
    """Angles ``theta[a, r]`` in ``[0, 2 pi)`` of x-y plane Bloch vectors, per term and qubit."""

    weights: np.ndarray
    angles: np.ndarray

    @classmethod
    def from_decomposition(cls, dec: SeparableDecomposition, tol: float = 1e-12) -> "PlanarAngleProfile":
        keep = dec.weights > 0
        b = dec.bloch[keep]
        if b.size and (np.max(np.abs(b[..., 2])) > tol or np.max(np.abs(np.linalg.norm(b, axis=2) - 1)) > tol):
            raise ValueError("all Bloch vectors must be unit vectors in the x-y plane")
        angles = np.mod(np.arctan2(b[..., 1], b[..., 0]), 2 * math.pi)
        return cls(dec.weights[keep], angles)

    def phase_sums(self, j: BitIndex) -> np.ndarray:
        """``sum_r (-1)**j_r theta[a, r]`` for every term ``a``."""
        signs = np.array([1 - 2 * x for x in j.bits])
        return self.angles @ signs

    def coherence(self, j: BitIndex) -> float:
        """``rho[j, jbar]`` implied by the profile (real part)."""
        return float(np.sum(self.weights * np.cos(self.phase_sums(j))) / (1 << j.n))


def _angle_residue(x: np.ndarray) -> float:
    r = np.mod(x, 2 * math.pi)
    return float(np.max(np.minimum(r, 2 * math.pi - r))) if r.size else 0.0


def angle_trace(spec: SharpnessSpec, dec: Optional[SeparableDecomposition] = None) -> dict:
    """Explain the ``n = 3`` decision through the phase constraints on a certificate.

    With ``rho[000,111] = rho[001,110] = 1/8`` every term must satisfy
    ``t1 + t2 + t3 = 0`` and ``t1 + t2 - t3 = 0 (mod 2 pi)``, which forces
    ``rho[010,101] = rho[011,100]``. For ``c == d`` the spin-norm certificate
    is profiled and the constraints are checked; otherwise the violated
    equality is reported.
    """
    if spec.n != 3:
        raise ValueError("angle trace is only available for n = 3")
    trace = {"required_equal": ["010,101", "011,100"], "values": [spec.c, spec.d]}
    if dec is None:
        trace["constraint_holds"] = False
        return trace
    prof = PlanarAngleProfile.from_decomposition(dec)
    trace["constraint_holds"] = True
    trace["terms"] = int(prof.weights.size)
    trace["max_residue_000"] = _angle_residue(prof.phase_sums(BitIndex.from_str("000")))
    trace["max_residue_001"] = _angle_residue(prof.phase_sums(BitIndex.from_str("001")))
    trace["implied"] = [prof.coherence(BitIndex.from_str("010")), prof.coherence(BitIndex.from_str("011"))]
    return trace


def sharpness_decision(spec: SharpnessSpec, tol: float = NECESSARY_TOLERANCE) -> CriterionResult:
    """Exact decision for the two-coherence family: fully separable iff ``c == d``.

    ``margin = -|c - d|``. The witness records the spin 1-norm next to its
    closed form ``1 + 2**(n-1) |c - d|``, whether every Peres test
    passes, the spin-norm certificate when separable, and for ``n = 3`` an
    angle-constraint trace.
    """
    rho = sharpness_state(spec)
    gap = abs(spec.c - spec.d)
    norm = spin_norm1(rho)
    peres = peres_battery(rho)
    witness = {
        "spin_norm": norm,
        "peres_all_pass": all(r.passed for r in peres.values()),
        "peres_min_margin": min(r.margin for r in peres.values()),
    }
    witness["expected_spin_norm"] = 1.0 + (1 << (spec.n - 1)) * gap
    dec = spin_norm_decomposition(rho) if gap <= tol else None
    witness["certificate"] = dec
    if spec.n == 3:
        witness["angle_trace"] = angle_trace(spec, dec)
    return _result("sharpness", 0.0 - gap, tol, witness)

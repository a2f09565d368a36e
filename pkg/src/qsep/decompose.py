"""Explicit full-separability certificates.

A certificate is a convex combination of ``n``-fold products of single-qubit
states ``(I + m . sigma) / 2`` with Bloch vectors ``|m| <= 1``. All the
constructions here rest on one identity: for unit vectors ``m_1..m_a``,

    (I + sign * sigma_m1 (x) ... (x) sigma_ma) / 2**a

is the uniform mixture of the ``2**(a-1)`` products ``(x)_r P(eps_r m_r)``
whose sign pattern ``eps`` has product ``sign``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .bases import SPIN_AXIS, hermitian_spin_coefficients, spin_from_density
from .bits import BitIndex, popcount
from .errors import ArgumentError, NotCertifiableError
from .families import (
    DiagonalFamilySpec,
    ProductSpec,
    WernerSpec,
    WeightsLike,
    werner_threshold,
)
from .linalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix

WEIGHT_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-12

AXES = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


@dataclass(frozen=True)
class SeparableDecomposition:
    """Weights ``p[a]`` and Bloch vectors ``bloch[a, r, :]`` of a product mixture."""

    n: int
    weights: np.ndarray
    bloch: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float).reshape(-1)
        b = np.array(self.bloch, dtype=float)
        if b.size == 0:
            b = b.reshape(0, self.n, 3)
        if b.shape != (w.shape[0], self.n, 3):
            raise ArgumentError(f"bloch array must have shape ({w.shape[0]}, {self.n}, 3), got {b.shape}")
        w.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bloch", b)

    def __len__(self) -> int:
        return self.weights.shape[0]

    def terms(self):
        for p, vecs in zip(self.weights, self.bloch):
            yield float(p), [tuple(float(x) for x in v) for v in vecs]

    def violations(self, tol: float = WEIGHT_TOLERANCE) -> list[str]:
        out = []
        for a in np.nonzero(self.weights < 0)[0]:
            out.append(f"term {a}: negative weight {self.weights[a]!r}")
        norms = np.linalg.norm(self.bloch, axis=2)
        for a, r in zip(*np.nonzero(norms > 1 + NORM_TOLERANCE)):
            out.append(f"term {a}, qubit {r + 1}: Bloch norm {norms[a, r]!r} exceeds 1")
        total = float(self.weights.sum())
        if abs(total - 1.0) > tol:
            out.append(f"weights sum to {total!r}, not 1")
        return out

    def reassemble(self) -> np.ndarray:
        """``sum_a p[a] (x)_r (I + m[a,r] . sigma) / 2``."""
        b = self.bloch
        single = 0.5 * (
            I2[None, None]
            + b[..., 0, None, None] * SIGMA_X
            + b[..., 1, None, None] * SIGMA_Y
            + b[..., 2, None, None] * SIGMA_Z
        )
        t = len(self)
        out = np.ones((t, 1, 1), dtype=complex)
        for r in range(self.n):
            f = single[:, r]
            out = np.einsum("tab,tcd->tacbd", out, f).reshape(t, out.shape[1] * 2, out.shape[2] * 2)
        return np.tensordot(self.weights, out, axes=1) if t else np.zeros((1 << self.n,) * 2, complex)


class _Builder:
    """Accumulates certificate terms in order."""

    def __init__(self, n: int):
        self.n = n
        self.weights: list[float] = []
        self.bloch: list[np.ndarray] = []

    def add(self, weight: float, vectors: np.ndarray) -> None:
        self.weights.append(weight)
        self.bloch.append(vectors)

    def add_signed_products(self, weight: float, vectors: Sequence[Optional[np.ndarray]], sign: int) -> None:
        """Expand ``weight * (I + sign * (x)_r sigma_{v_r}) / 2**n`` into product terms.

        ``None`` entries are identity slots and get the zero Bloch vector.
        """
        active = [r for r, v in enumerate(vectors) if v is not None]
        if not active:
            raise ArgumentError("bracket needs at least one non-identity factor")
        patterns = _sign_patterns(len(active), sign)
        share = weight / len(patterns)
        for eps in patterns:
            vecs = np.zeros((self.n, 3))
            for e, r in zip(eps, active):
                vecs[r] = e * vectors[r]
            self.add(share, vecs + 0.0)

    def build(self) -> SeparableDecomposition:
        return SeparableDecomposition(self.n, np.array(self.weights), np.array(self.bloch).reshape(-1, self.n, 3))


def _sign_patterns(a: int, sign: int) -> list[tuple[int, ...]]:
    # unwinds rho(M_a) = [rho(M_{a-1}) (x) P+(m_a) + rho_flipped(M_{a-1}) (x) P-(m_a)] / 2
    if a == 1:
        return [(sign,)]
    return [p + (1,) for p in _sign_patterns(a - 1, sign)] + [
        p + (-1,) for p in _sign_patterns(a - 1, -sign)
    ]


def product_decomposition(spec: ProductSpec) -> SeparableDecomposition:
    """Certificate for ``(I + sign * sigma_m1 (x) ... (x) sigma_mn) / 2**n``.

    Returns ``2**(n-1)`` equally weighted pure products; the term ``a`` has
    vectors ``eps[a, r] * m_r`` with an even number of ``-1`` signs for the
    ``+`` state and an odd number for the ``-`` state.
    """
    b = _Builder(spec.n)
    b.add_signed_products(1.0, [np.array(v) for v in spec.vectors], spec.sign)
    return b.build()


def spin_norm_decomposition(rho: DensityMatrix, cutoff: float = 0.0) -> SeparableDecomposition:
    """Certificate for a state whose spin 1-norm is at most 1.

    The first term is the maximally mixed state with weight ``1 - norm``.
    Each spin coefficient ``(j, k) != (0, 0)`` with ``|s| > cutoff`` then
    contributes ``|s| (I + v P_jk) / 2**n``, where ``P_jk`` is the Pauli
    product ``(-i)**(j.k) S[j,k]`` and ``v`` the sign of ``i**(j.k) s[j,k]``.
    Coefficients are visited in row-major ``(j, k)`` order.

    Raises
    ------
    NotCertifiableError
        If the spin 1-norm exceeds ``1 + 1e-12``; ``.value`` holds the norm.
    """
    n = rho.n
    table = spin_from_density(rho)
    mags = np.abs(table.values)
    mags[0, 0] = 0.0
    norm = float(mags.sum())
    if norm > 1.0 + WEIGHT_TOLERANCE:
        raise NotCertifiableError(f"spin 1-norm {norm!r} exceeds 1", value=norm)
    signs = np.where(hermitian_spin_coefficients(table).real < 0, -1, 1)

    b = _Builder(n)
    b.add(max(0.0, 1.0 - norm), np.zeros((n, 3)))
    for j, k in zip(*np.nonzero(mags > cutoff)):
        jb = BitIndex.from_int(int(j), n).bits
        kb = BitIndex.from_int(int(k), n).bits
        vectors = [None if (ax := SPIN_AXIS[(x, y)]) is None else AXES[ax] for x, y in zip(jb, kb)]
        b.add_signed_products(float(mags[j, k]), vectors, int(signs[j, k]))
    return b.build()


def _ghz_coherence_terms(b: _Builder, n: int, weight_of: dict[int, float]) -> None:
    # sum_r w_r (I + S[r, 1...1]) / 2**n over even-parity r; S[r,1..1] = (-1)^(|r|/2) (x) {X, Y}
    for r, w in weight_of.items():
        if w == 0.0:
            continue
        bits = BitIndex.from_int(r, n).bits
        vectors = [AXES["y"] if x else AXES["x"] for x in bits]
        sign = (1 if w > 0 else -1) * (-1 if popcount(r) % 4 == 2 else 1)
        b.add_signed_products(abs(w), vectors, sign)


def _z_product(bits: Sequence[int]) -> np.ndarray:
    v = np.zeros((len(bits), 3))
    v[:, 2] = [1.0 - 2.0 * x for x in bits]
    return v


def werner_decomposition(spec: WernerSpec) -> SeparableDecomposition:
    """Certificate for a Werner state at or below the separability threshold.

    Terms, in order: the maximally mixed state with weight
    ``(1 - s) - s 2**(n-1)``; ``|0...0>`` and ``|1...1>`` with weight ``s/2``
    each; then, for each even-parity ``r``, the ``2**(n-1)`` products that
    make up ``s (I +- S[r, 1...1]) / 2**n``. A label ``j != 0`` is handled by
    conjugating with ``sigma_x`` on the qubits where ``j`` is 1.
    """
    n, s = spec.n, spec.s
    limit = werner_threshold(n)
    if s > limit + WEIGHT_TOLERANCE:
        raise NotCertifiableError(
            f"s = {s!r} exceeds the separability threshold 1/(2**{n - 1} + 1) = {limit!r}", value=s
        )
    half = 1 << (n - 1)
    b = _Builder(n)
    b.add(max(0.0, (1.0 - s) - s * half), np.zeros((n, 3)))
    b.add(s / 2, _z_product([0] * n))
    b.add(s / 2, _z_product([1] * n))
    _ghz_coherence_terms(b, n, {r: spec.sign * s for r in range(1 << n) if popcount(r) % 2 == 0})
    dec = b.build()
    return flip_qubits(dec, spec.j.bits) if spec.j.value else dec


def flip_qubits(dec: SeparableDecomposition, mask: Sequence[int]) -> SeparableDecomposition:
    """Conjugate every term by ``sigma_x`` on the qubits where ``mask`` is 1."""
    bloch = np.array(dec.bloch)
    for r, bit in enumerate(mask):
        if bit:
            bloch[:, r, 1:] *= -1
    return SeparableDecomposition(dec.n, dec.weights, bloch + 0.0)


def mu_coherences(n: int, uplus: WeightsLike, uminus: WeightsLike) -> dict[int, float]:
    """``c_r = sum_j (u+[j] - u-[j]) (-1)**(r.j)`` for even-parity ``r``."""
    u = DiagonalFamilySpec(n, uplus, uminus)
    delta = u.tplus - u.tminus
    out = {}
    for r in range(1 << n):
        if popcount(r) % 2 == 0:
            out[r] = float(sum(dv * (-1) ** popcount(r & j) for j, dv in enumerate(delta)))
    return out


def mu_decomposition(n: int, s: float, uplus: WeightsLike, uminus: WeightsLike) -> SeparableDecomposition:
    """Certificate for ``(1 - s) I / 2**n + s rho(u)``.

    The coherences of ``rho(u)`` are written as ``sum_r c_r S[r, 1...1] / 2**n``
    and each is offset by identity, as for Werner states. This succeeds
    whenever ``s (1 + sum_r |c_r|) <= 1``, which holds in particular when
    ``s <= 1 / (1 + 2**(n-1) sum_j |u+[j] - u-[j]|)``.
    """
    u = DiagonalFamilySpec(n, uplus, uminus)
    if not 0.0 <= s <= 1.0:
        raise ArgumentError(f"s must lie in [0, 1], got {s}")
    coh = mu_coherences(n, u.tplus, u.tminus)
    spread = sum(abs(c) for c in coh.values())
    w0 = (1.0 - s) - s * spread
    if w0 < -WEIGHT_TOLERANCE:
        raise NotCertifiableError(
            f"s = {s!r} exceeds the constructible bound {1.0 / (1.0 + spread)!r}", value=s
        )
    d = 1 << n
    b = _Builder(n)
    b.add(max(0.0, w0), np.zeros((n, 3)))
    for x in range(d):
        j = x if x < d // 2 else x ^ (d - 1)
        lam = (u.tplus[j] + u.tminus[j]) / 2
        if lam > 0:
            b.add(s * lam, _z_product(BitIndex.from_int(x, n).bits))
    _ghz_coherence_terms(b, n, {r: s * c for r, c in coh.items()})
    return b.build()


@dataclass(frozen=True)
class VerificationResult:
    passed: bool
    max_deviation: float
    violations: list = field(default_factory=list)


def verify_decomposition(
    dec: SeparableDecomposition, rho, tol: float = 1e-10
) -> VerificationResult:
    """Reassemble ``dec`` and compare it entrywise with ``rho``.

    Fails on any certificate invariant violation (negative weight, Bloch
    norm above 1, weights not summing to 1) or if the largest entry
    deviation exceeds ``tol``.
    """
    target = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if target.shape != (1 << dec.n, 1 << dec.n):
        raise ArgumentError(f"certificate is for n={dec.n}, state has shape {target.shape}")
    violations = dec.violations()
    dev = float(np.max(np.abs(dec.reassemble() - target)))
    return VerificationResult(not violations and dev <= tol, dev, violations)

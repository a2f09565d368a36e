"""Constructors for the GHZ, Werner, GHZ-diagonal and product state families.

GHZ-diagonal states are labelled by *canonical* indices ``j`` whose leading
bit is 0; ``j`` and its complement ``jbar`` index the same pair of GHZ
states ``(|j> +- |jbar>)/sqrt(2)``. Arrays of family weights are indexed by
the integer value of the canonical ``j``, i.e. ``0 .. 2**(n-1) - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np
import numpy.typing as npt

from .bits import BitIndex, IndexLike, as_index
from .errors import ArgumentError
from .linalg import (
    I2,
    DensityMatrix,
    kron_all,
    pauli_vector_matrix,
)

SignLike = Union[int, str]

FAMILY_TOLERANCE = 1e-12


def parse_sign(sign: SignLike) -> int:
    if sign in ("+", 1, "+1"):
        return 1
    if sign in ("-", -1, "-1"):
        return -1
    raise ArgumentError(f"sign must be '+' or '-', got {sign!r}")


def sign_str(sign: int) -> str:
    return "+" if sign > 0 else "-"


def canonical_index(j: IndexLike) -> BitIndex:
    j = as_index(j)
    if j.bits[0] != 0:
        raise ArgumentError(f"GHZ labels must have leading bit 0, got {j}")
    return j


def _check_n(n: int, minimum: int = 1) -> int:
    if not isinstance(n, (int, np.integer)) or not minimum <= n <= 16:
        raise ArgumentError(f"n must be an integer in [{minimum}, 16], got {n!r}")
    return int(n)


@dataclass(frozen=True)
class WernerSpec:
    """``W(s, j) = (1 - s) I / 2**n + s |Psi(j)><Psi(j)|``."""

    n: int
    s: float
    j: BitIndex
    sign: int = 1

    def __post_init__(self) -> None:
        _check_n(self.n, 2)
        j = canonical_index(self.j)
        if j.n != self.n:
            raise ArgumentError(f"index {j} has {j.n} bits, expected {self.n}")
        if not 0.0 <= self.s <= 1.0:
            raise ArgumentError(f"s must lie in [0, 1], got {self.s}")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "sign", parse_sign(self.sign))

    @classmethod
    def make(cls, n: int, s: float, j: IndexLike | None = None, sign: SignLike = "+") -> "WernerSpec":
        return cls(n, float(s), as_index(j) if j is not None else BitIndex.zeros(n), parse_sign(sign))


WeightsLike = Union[Mapping, Sequence[float], npt.ArrayLike]


def _weights(w: WeightsLike, n: int) -> np.ndarray:
    half = 1 << (n - 1)
    if isinstance(w, Mapping):
        out = np.zeros(half)
        for key, val in w.items():
            out[canonical_index(as_index(key, n)).value] = float(val)
        return out
    out = np.array(w, dtype=float).reshape(-1)
    if out.shape != (half,):
        raise ArgumentError(f"expected {half} weights for n={n}, got {out.shape[0]}")
    return out


@dataclass(frozen=True)
class DiagonalFamilySpec:
    """Weights ``t+[j], t-[j] >= 0`` on the GHZ projectors, summing to 1."""

    n: int
    tplus: np.ndarray
    tminus: np.ndarray

    def __post_init__(self) -> None:
        _check_n(self.n, 2)
        tp = _weights(self.tplus, self.n)
        tm = _weights(self.tminus, self.n)
        if np.any(tp < 0) or np.any(tm < 0):
            raise ArgumentError("family weights must be nonnegative")
        total = tp.sum() + tm.sum()
        if abs(total - 1.0) > FAMILY_TOLERANCE:
            raise ArgumentError(f"family weights must sum to 1, got {total!r}")
        tp.setflags(write=False)
        tm.setflags(write=False)
        object.__setattr__(self, "tplus", tp)
        object.__setattr__(self, "tminus", tm)

    def is_depolarization_invariant(self, tol: float = FAMILY_TOLERANCE) -> bool:
        """``t+[j] == t-[j]`` for every ``j`` except the all-zeros label."""
        return bool(np.all(np.abs(self.tplus[1:] - self.tminus[1:]) <= tol))


@dataclass(frozen=True)
class SharpnessSpec:
    """Constant-diagonal GHZ-diagonal states parametrized by two coherences.

    Over the canonical labels in ascending order, the first ``2**(n-2)``
    carry ``t+ = 2**(1-n), t- = 0``; the next ``2**(n-3)`` carry
    ``t+- = 2**-n +- c``; the remaining ``2**(n-3)`` carry ``2**-n +- d``.
    """

    n: int
    c: float
    d: float

    def __post_init__(self) -> None:
        _check_n(self.n, 3)
        bound = 1.0 / (1 << self.n)
        for name in ("c", "d"):
            v = getattr(self, name)
            if not -bound <= v <= bound:
                raise ArgumentError(f"{name} must lie in [-{bound}, {bound}], got {v}")

    def to_diagonal(self) -> DiagonalFamilySpec:
        n = self.n
        q = 1 << (n - 2)
        e = 1 << (n - 3)
        base = 1.0 / (1 << n)
        tp = np.empty(2 * q)
        tm = np.empty(2 * q)
        tp[:q], tm[:q] = 2 * base, 0.0
        tp[q:q + e], tm[q:q + e] = base + self.c, base - self.c
        tp[q + e:], tm[q + e:] = base + self.d, base - self.d
        return DiagonalFamilySpec(n, tp, tm)


@dataclass(frozen=True)
class ProductSpec:
    """Unit vectors ``m_1..m_n`` and a sign for ``(I + sign * sigma_m1 (x) ... ) / 2**n``."""

    vectors: tuple
    sign: int = 1

    def __post_init__(self) -> None:
        vecs = tuple(tuple(float(x) for x in v) for v in self.vectors)
        _check_n(len(vecs))
        for r, v in enumerate(vecs, start=1):
            if len(v) != 3:
                raise ArgumentError(f"vector {r} must have 3 components")
            if abs(np.linalg.norm(v) - 1.0) > FAMILY_TOLERANCE:
                raise ArgumentError(f"vector {r} is not a unit vector: |m| = {np.linalg.norm(v)!r}")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "sign", parse_sign(self.sign))

    @property
    def n(self) -> int:
        return len(self.vectors)


def ghz_projector(j: IndexLike, sign: SignLike = "+") -> DensityMatrix:
    """Projector onto ``(|j> + sign |jbar>)/sqrt(2)``; ``j`` needs leading bit 0."""
    j = canonical_index(j)
    sgn = parse_sign(sign)
    d = 1 << j.n
    a, b = j.value, j.complement().value
    m = np.zeros((d, d), dtype=complex)
    m[a, a] = m[b, b] = 0.5
    m[a, b] = m[b, a] = 0.5 * sgn
    return DensityMatrix(m)


def werner_threshold(n: int) -> float:
    """Largest mixing weight for which the ``n``-qubit Werner state is fully separable."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ArgumentError(f"werner_threshold needs an integer n >= 2, got {n!r}")
    return 1.0 / ((1 << (n - 1)) + 1)


def xor_conjugate(m: np.ndarray, j: int) -> np.ndarray:
    """``X^j m X^j``: conjugation by ``sigma_x`` on every qubit set in ``j``."""
    idx = np.arange(m.shape[0]) ^ j
    return m[np.ix_(idx, idx)]


def werner(spec: WernerSpec) -> DensityMatrix:
    n = spec.n
    d = 1 << n
    m = np.eye(d, dtype=complex) * ((1.0 - spec.s) / d)
    m[0, 0] += spec.s / 2
    m[d - 1, d - 1] += spec.s / 2
    m[0, d - 1] = m[d - 1, 0] = spec.sign * spec.s / 2
    return DensityMatrix(xor_conjugate(m, spec.j.value))


def werner_as_diagonal(spec: WernerSpec) -> DiagonalFamilySpec:
    """GHZ-diagonal weights of a Werner state."""
    half = 1 << (spec.n - 1)
    base = (1.0 - spec.s) / (1 << spec.n)
    tp = np.full(half, base)
    tm = np.full(half, base)
    (tp if spec.sign > 0 else tm)[spec.j.value] += spec.s
    return DiagonalFamilySpec(spec.n, tp, tm)


def _diagonal_matrix(n: int, tp: np.ndarray, tm: np.ndarray) -> np.ndarray:
    d = 1 << n
    j = np.arange(d >> 1)
    jbar = j ^ (d - 1)
    m = np.zeros((d, d), dtype=complex)
    m[j, j] = m[jbar, jbar] = (tp + tm) / 2
    m[j, jbar] = m[jbar, j] = (tp - tm) / 2
    return m


def diagonal_family(spec: DiagonalFamilySpec) -> DensityMatrix:
    """``sum_j t+[j] rho+(j) + t-[j] rho-(j)``."""
    return DensityMatrix(_diagonal_matrix(spec.n, spec.tplus, spec.tminus))


def sharpness_state(spec: SharpnessSpec) -> DensityMatrix:
    return diagonal_family(spec.to_diagonal())


def mu_spec(n: int, s: float, uplus: WeightsLike, uminus: WeightsLike) -> DiagonalFamilySpec:
    """GHZ-diagonal weights ``t+-[j] = (1 - s) / 2**n + s u+-[j]`` of the mixture below."""
    _check_mu(n, s)
    u = DiagonalFamilySpec(n, uplus, uminus)
    base = (1.0 - s) / (1 << n)
    return DiagonalFamilySpec(n, base + s * u.tplus, base + s * u.tminus)


def _check_mu(n: int, s: float) -> None:
    _check_n(n, 2)
    if not 0.0 <= s <= 1.0:
        raise ArgumentError(f"s must lie in [0, 1], got {s}")


def mu_state(n: int, s: float, uplus: WeightsLike, uminus: WeightsLike) -> DensityMatrix:
    """``(1 - s) I / 2**n + s rho(u)`` for GHZ-diagonal weights ``u``."""
    _check_mu(n, s)
    u = DiagonalFamilySpec(n, uplus, uminus)
    d = 1 << n
    m = np.eye(d, dtype=complex) * ((1.0 - s) / d) + s * _diagonal_matrix(n, u.tplus, u.tminus)
    return DensityMatrix(m)


def product_density(spec: ProductSpec) -> DensityMatrix:
    """``(I (x) ... (x) I + sign * sigma_m1 (x) ... (x) sigma_mn) / 2**n``."""
    n = spec.n
    corr = kron_all(pauli_vector_matrix(v) for v in spec.vectors)
    ident = kron_all([I2] * n)
    return DensityMatrix((ident + spec.sign * corr) / (1 << n))

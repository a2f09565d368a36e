"""Adjusted and spin operator bases and the Hadamard transform between them.

For one qubit the adjusted basis is ``A[j][k] = |j><j xor k|`` and the spin
basis is::

    S[0][0] = I    S[0][1] = sigma_x
    S[1][0] = sigma_z    S[1][1] = i sigma_y = [[0, 1], [-1, 0]]

so that ``S[j][k] = sum_r H[j][r] A[r][k]`` with ``H = [[1, 1], [1, -1]]``.
The ``n``-qubit elements are Kronecker products. Coefficient tables are
indexed ``values[j, k]`` with integer indices (qubit 1 = high bit).

A density matrix expands as::

    rho = sum_{j,k} a[j,k] A[j,k] = 2**-n sum_{j,k} s[j,k] S[j,k]

with ``a[j,k] = rho[j, j xor k]`` and ``s = H^[n] a`` along the ``j`` axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
import numpy.typing as npt

from .bits import BitIndex, IndexLike, as_index
from .errors import ArgumentError, ContractError, ReconstructionError, ValidationError
from .linalg import (
    DEFAULT_PSD_TOLERANCE,
    HERMITIAN_TOLERANCE,
    I2,
    SIGMA_X,
    SIGMA_Z,
    ComplexMatrix,
    DensityMatrix,
    hermitian_defect,
    kron_all,
)

Basis = Literal["adjusted", "spin"]

I_SIGMA_Y = np.array([[0, 1], [-1, 0]], dtype=complex)

SPIN_1Q = {(0, 0): I2, (0, 1): SIGMA_X, (1, 0): SIGMA_Z, (1, 1): I_SIGMA_Y}

# Pauli axis of (-i)^(j.k) S[j,k] on one qubit; None marks the identity slot.
SPIN_AXIS = {(0, 0): None, (0, 1): "x", (1, 0): "z", (1, 1): "y"}

_I_POWERS = np.array([1, 1j, -1, -1j])


def _adjusted_1q(j: int, k: int) -> ComplexMatrix:
    e = np.zeros((2, 2), dtype=complex)
    e[j, j ^ k] = 1
    return e


@dataclass(frozen=True)
class BasisElement:
    n: int
    kind: Basis
    j: BitIndex
    k: BitIndex
    matrix: ComplexMatrix


def basis_element(kind: Basis, j: IndexLike, k: IndexLike) -> BasisElement:
    """The ``n``-qubit adjusted or spin basis element ``(j, k)``."""
    j = as_index(j)
    k = as_index(k)
    if j.n != k.n:
        raise ArgumentError(f"index lengths differ: {j.n} vs {k.n}")
    if kind == "spin":
        factors = [SPIN_1Q[(a, b)] for a, b in zip(j.bits, k.bits)]
    elif kind == "adjusted":
        factors = [_adjusted_1q(a, b) for a, b in zip(j.bits, k.bits)]
    else:
        raise ArgumentError(f"unknown basis {kind!r}")
    m = kron_all(factors)
    m.setflags(write=False)
    return BasisElement(j.n, kind, j, k, m)


def _key(idx: Union[int, IndexLike], n: int) -> int:
    if isinstance(idx, (int, np.integer)):
        return int(idx)
    return as_index(idx, n).value


@dataclass(frozen=True)
class CoefficientTable:
    """A ``2**n x 2**n`` table of operator-basis coefficients.

    ``values[j, k]`` holds ``a[j,k]`` when ``basis == "adjusted"`` and
    ``s[j,k]`` when ``basis == "spin"``. Values are always complex.
    """

    n: int
    basis: Basis
    values: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        if self.basis not in ("adjusted", "spin"):
            raise ArgumentError(f"unknown basis {self.basis!r}")
        v = np.array(self.values, dtype=complex, copy=True)
        d = 1 << self.n
        if v.shape != (d, d):
            raise ArgumentError(f"table for n={self.n} must be {d}x{d}, got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, jk) -> complex:
        j, k = jk
        return complex(self.values[_key(j, self.n), _key(k, self.n)])

    def nonzero(self, cutoff: float = 0.0):
        """Yield ``(j, k, value)`` for entries with ``|value| > cutoff``, row-major."""
        rows, cols = np.nonzero(np.abs(self.values) > cutoff)
        for j, k in zip(rows, cols):
            yield int(j), int(k), complex(self.values[j, k])


def fwht(a: np.ndarray) -> np.ndarray:
    """In-place unnormalized Walsh-Hadamard transform along axis 0.

    Computes ``out[j] = sum_r (-1)**popcount(j & r) a[r]`` for every column
    independently with ``log2(len(a))`` butterfly passes. ``a`` must be a
    C-contiguous array whose first dimension is a power of two.
    """
    size = a.shape[0]
    if size & (size - 1):
        raise ArgumentError(f"length {size} is not a power of two")
    if not a.flags.c_contiguous:
        raise ArgumentError("fwht needs a C-contiguous array")
    tail = a.shape[1:]
    h = 1
    while h < size:
        v = a.reshape((size // (2 * h), 2, h) + tail)
        x = v[:, 0].copy()
        v[:, 0] += v[:, 1]
        v[:, 1] *= -1
        v[:, 1] += x
        h *= 2
    return a


def adjusted_from_density(rho: DensityMatrix) -> CoefficientTable:
    """``a[j, k] = rho[j, j xor k]``."""
    d = rho.dim
    j = np.arange(d)[:, None]
    k = np.arange(d)[None, :]
    return CoefficientTable(rho.n, "adjusted", rho.mat[j, j ^ k])


def spin_from_adjusted(table: CoefficientTable) -> CoefficientTable:
    if table.basis != "adjusted":
        raise ContractError(f"expected an adjusted-basis table, got {table.basis!r}")
    out = np.array(table.values, dtype=complex, order="C")
    fwht(out)
    return CoefficientTable(table.n, "spin", out)


def adjusted_from_spin(table: CoefficientTable) -> CoefficientTable:
    if table.basis != "spin":
        raise ContractError(f"expected a spin-basis table, got {table.basis!r}")
    out = np.array(table.values, dtype=complex, order="C")
    fwht(out)
    out /= 1 << table.n
    return CoefficientTable(table.n, "adjusted", out)


def spin_from_density(rho: DensityMatrix) -> CoefficientTable:
    return spin_from_adjusted(adjusted_from_density(rho))


def _matrix_from_adjusted(values: np.ndarray) -> ComplexMatrix:
    d = values.shape[0]
    j = np.arange(d)[:, None]
    k = np.arange(d)[None, :]
    m = np.empty((d, d), dtype=complex)
    m[j, j ^ k] = values
    return m


def density_from_adjusted(
    table: CoefficientTable, psd_tolerance: float = DEFAULT_PSD_TOLERANCE
) -> DensityMatrix:
    if table.basis != "adjusted":
        raise ContractError(f"expected an adjusted-basis table, got {table.basis!r}")
    return _validated(_matrix_from_adjusted(table.values), psd_tolerance)


def density_from_spin(
    table: CoefficientTable, psd_tolerance: float = DEFAULT_PSD_TOLERANCE
) -> DensityMatrix:
    """Reassemble ``rho = 2**-n sum s[j,k] S[j,k]`` and validate it.

    Anti-Hermitian rounding residue below ``1e-12`` is dropped by rebuilding
    the lower triangle from the upper one; anything larger, a trace other
    than one, or a negative eigenvalue raises ``ReconstructionError``.
    """
    return _validated(_matrix_from_adjusted(adjusted_from_spin(table).values), psd_tolerance)


def _validated(m: ComplexMatrix, psd_tolerance: float) -> DensityMatrix:
    defect = hermitian_defect(m)
    if defect > HERMITIAN_TOLERANCE:
        raise ReconstructionError("hermitian", f"reconstruction is not Hermitian (defect {defect:.3e})")
    upper = np.triu(m, 1)
    m = upper + upper.conj().T + np.diag(np.diag(m).real)
    try:
        return DensityMatrix(m, psd_tolerance)
    except ValidationError as exc:
        raise ReconstructionError(exc.invariant, f"reconstruction failed: {exc}", exc.location) from exc


def twist_powers(n: int) -> npt.NDArray[np.complex128]:
    """Table of ``i**popcount(j & k)``."""
    d = 1 << n
    j = np.arange(d)[:, None]
    k = np.arange(d)[None, :]
    counts = np.vectorize(lambda v: bin(v).count("1"))(j & k)
    return _I_POWERS[counts % 4]


def hermitian_spin_coefficients(table: CoefficientTable) -> npt.NDArray[np.complex128]:
    """``i**(j.k) s[j,k]``; real for Hermitian operators.

    These are the coefficients of ``rho`` on the Hermitian Pauli products
    ``(-i)**(j.k) S[j,k]`` (see :data:`SPIN_AXIS`).
    """
    if table.basis != "spin":
        raise ContractError(f"expected a spin-basis table, got {table.basis!r}")
    return table.values * twist_powers(table.n)


def spin_norm1(rho: DensityMatrix) -> float:
    """Sum of ``|s[j,k]|`` over all ``(j, k)`` except ``(0, 0)``."""
    s = np.abs(spin_from_density(rho).values)
    s[0, 0] = 0.0
    return float(s.sum())

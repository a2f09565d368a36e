"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Qubit 1 is the
most significant bit of a row/column index, so for ``n`` qubits the index
``r`` has bit ``r_q = (r >> (n - q)) & 1``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from .errors import ArgumentError, ContractError, SizeError, ValidationError

ComplexMatrix = npt.NDArray[np.complex128]

MAX_DIM = 1 << 16
DEFAULT_PSD_TOLERANCE = 1e-9
TRACE_TOLERANCE = 1e-12
HERMITIAN_TOLERANCE = 1e-12

JACOBI_TOLERANCE = 1e-14
JACOBI_MAX_SWEEPS = 100

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(a: npt.ArrayLike) -> ComplexMatrix:
    """Return ``a`` as a square ``complex128`` array, raising on bad shape."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ArgumentError(f"expected a non-empty square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise SizeError(f"dimension {m.shape[0]} exceeds {MAX_DIM}")
    return m


def num_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ArgumentError(f"dimension {dim} is not a power of two >= 2")
    return n


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product ``a (x) b``; qubits of ``a`` become the high-order bits."""
    a = as_matrix(a)
    b = as_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DIM:
        raise SizeError(f"kron result dimension {dim} exceeds {MAX_DIM}")
    return np.kron(a, b)


def kron_all(factors: Iterable[npt.ArrayLike]) -> ComplexMatrix:
    out = None
    for f in factors:
        out = as_matrix(f) if out is None else kron(out, f)
    if out is None:
        raise ArgumentError("kron_all needs at least one factor")
    return out


def hermitian_defect(m: ComplexMatrix) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def trace_inner(b: npt.ArrayLike, c: npt.ArrayLike) -> complex:
    """Trace inner product ``tr(B^dagger C)``."""
    b = np.asarray(b, dtype=complex)
    c = np.asarray(c, dtype=complex)
    if b.shape != c.shape or b.ndim != 2:
        raise ArgumentError(f"shape mismatch: {b.shape} vs {c.shape}")
    return complex(np.vdot(b, c))


@lru_cache(maxsize=None)
def _round_robin(m: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # circle-method schedule: m-1 rounds of m/2 disjoint pairs (m even)
    idx = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p = np.array([min(idx[i], idx[m - 1 - i]) for i in range(m // 2)])
        q = np.array([max(idx[i], idx[m - 1 - i]) for i in range(m // 2)])
        rounds.append((p, q))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return tuple(rounds)


def jacobi_eigenvalues(
    m: npt.ArrayLike,
    tol: float = JACOBI_TOLERANCE,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> npt.NDArray[np.float64]:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the ``dim/2`` rotations of a round touch disjoint rows and columns
    and can be applied together. Iteration stops once the off-diagonal
    Frobenius norm falls below ``tol`` times the matrix norm.

    Returns
    -------
    ndarray
        Real eigenvalues in ascending order.
    """
    a = as_matrix(m).copy()
    dim = a.shape[0]
    if dim == 1:
        return np.array([a[0, 0].real])
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(dim)
    padded = dim + (dim & 1)
    if padded != dim:
        a = np.pad(a, ((0, 1), (0, 1)))
    schedule = _round_robin(padded)

    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p, q in schedule:
            apq = a[p, q]
            mag = np.abs(apq)
            live = mag > 0.0
            safe = np.where(live, mag, 1.0)
            phase = np.where(live, apq / safe, 1.0)
            zeta = (a[q, q].real - a[p, p].real) / (2.0 * safe)
            with np.errstate(over="ignore"):
                t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            ph = np.conj(phase)
            # G = diag(1, ph) @ [[c, s], [-s, c]] on the (p, q) block
            g00, g01, g10, g11 = c, s, -s * ph, c * ph
            cp, cq = a[:, p], a[:, q]
            a[:, p] = cp * g00 + cq * g10
            a[:, q] = cp * g01 + cq * g11
            rp, rq = a[p, :], a[q, :]
            a[p, :] = np.conj(g00)[:, None] * rp + np.conj(g10)[:, None] * rq
            a[q, :] = np.conj(g01)[:, None] * rp + np.conj(g11)[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
    w = np.diag(a).real[:dim]
    return np.sort(w)


def hermitian_eigenvalues(m: npt.ArrayLike, method: str = "lapack") -> npt.NDArray[np.float64]:
    """Ascending real eigenvalues of a Hermitian matrix.

    ``method="lapack"`` calls ``numpy.linalg.eigvalsh``; ``method="jacobi"``
    uses :func:`jacobi_eigenvalues`. Raises ``ContractError`` if ``m`` is not
    Hermitian to within ``1e-12`` (relative to its largest entry).
    """
    a = as_matrix(m)
    bound = HERMITIAN_TOLERANCE * max(1.0, float(np.max(np.abs(a))))
    if hermitian_defect(a) > bound:
        raise ContractError("matrix is not Hermitian")
    if method == "lapack":
        return np.linalg.eigvalsh(a)
    if method == "jacobi":
        return jacobi_eigenvalues(a)
    raise ArgumentError(f"unknown eigensolver {method!r}")


def _as_array(rho) -> ComplexMatrix:
    return rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)


def normalize_subset(subset: Iterable[int], n: int) -> tuple[int, ...]:
    t = tuple(sorted(set(int(q) for q in subset)))
    if not t or len(t) == n:
        raise ArgumentError("subset must be a nonempty proper subset of the qubits")
    if t[0] < 1 or t[-1] > n:
        raise ArgumentError(f"qubit positions must lie in 1..{n}, got {t}")
    return t


def partial_transpose(rho, subset: Iterable[int]) -> ComplexMatrix:
    """Transpose the tensor factors of the qubits in ``subset`` (1-based).

    Entry ``(r, c)`` of the result is entry ``(r', c')`` of ``rho`` where
    ``r'`` and ``c'`` are ``r`` and ``c`` with their ``subset`` bits exchanged.
    """
    a = _as_array(rho)
    n = num_qubits(a.shape[0])
    t = normalize_subset(subset, n)
    tensor = a.reshape((2,) * (2 * n))
    for q in t:
        tensor = np.swapaxes(tensor, q - 1, n + q - 1)
    return np.ascontiguousarray(tensor.reshape(a.shape))


def proper_subsets(n: int) -> list[tuple[int, ...]]:
    """All nonempty proper qubit subsets, ordered by size then lexicographically."""
    from itertools import combinations

    out = []
    for size in range(1, n):
        out.extend(combinations(range(1, n + 1), size))
    return out


class DensityMatrix:
    """A validated ``n``-qubit density matrix.

    Validation rejects rather than repairs: the matrix must equal its
    conjugate transpose exactly, have trace 1 within ``1e-12`` and smallest
    eigenvalue at least ``-psd_tolerance``. The stored array is read-only.
    """

    __slots__ = ("_mat", "n", "psd_tolerance", "_eigs")

    def __init__(self, mat: npt.ArrayLike, psd_tolerance: float = DEFAULT_PSD_TOLERANCE):
        if psd_tolerance < 0:
            raise ArgumentError("psd_tolerance must be nonnegative")
        try:
            a = as_matrix(mat)
            n = num_qubits(a.shape[0])
        except ArgumentError as exc:
            raise ValidationError("shape", str(exc)) from exc
        a = np.array(a, dtype=complex, copy=True)
        bad = np.argwhere(a != a.conj().T)
        if bad.size:
            r, c = (int(x) for x in bad[0])
            raise ValidationError(
                "hermitian",
                f"not Hermitian: entry ({r}, {c}) = {a[r, c]} but ({c}, {r}) = {a[c, r]}",
                (r, c),
            )
        tr = float(np.trace(a).real)
        if abs(tr - 1.0) > TRACE_TOLERANCE:
            raise ValidationError("trace", f"trace is {tr!r}, expected 1")
        eigs = np.linalg.eigvalsh(a)
        if eigs[0] < -psd_tolerance:
            raise ValidationError(
                "psd", f"smallest eigenvalue {eigs[0]:.3e} below -{psd_tolerance:g}"
            )
        a.setflags(write=False)
        self._mat = a
        self._eigs = eigs
        self.n = n
        self.psd_tolerance = psd_tolerance

    @property
    def mat(self) -> ComplexMatrix:
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    def eigenvalues(self) -> npt.NDArray[np.float64]:
        return self._eigs.copy()

    def __array__(self, dtype=None, copy=None):
        return self._mat if dtype is None else self._mat.astype(dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self._mat, other._mat))

    def __hash__(self):
        return hash((self.n, self._mat.tobytes()))

    def __repr__(self) -> str:
        return f"DensityMatrix(n={self.n})"


def maximally_mixed(n: int) -> DensityMatrix:
    return DensityMatrix(np.eye(1 << n, dtype=complex) / (1 << n))


def pauli_vector_matrix(m: Sequence[float]) -> ComplexMatrix:
    """``m . sigma`` for a real 3-vector ``m``."""
    return m[0] * SIGMA_X + m[1] * SIGMA_Y + m[2] * SIGMA_Z


def bloch_state(m: Sequence[float]) -> ComplexMatrix:
    """Single-qubit operator ``(I + m . sigma) / 2``."""
    return (I2 + pauli_vector_matrix(m)) / 2

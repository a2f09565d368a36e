"""Fixed-width binary index vectors.

Bit 1 is the leftmost, most significant digit, so the integer value of
``BitIndex("011")`` is 3 and concatenation ``j1 + j2`` places ``j1`` in the
high-order positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

MAX_BITS = 16


@dataclass(frozen=True)
class BitIndex:
    """An ``n``-bit binary index ``j = j_1 j_2 ... j_n``.

    Parameters
    ----------
    bits : tuple of int
        Binary digits, most significant first.

    Examples
    --------
    >>> j = BitIndex.from_str("001")
    >>> j.complement()
    BitIndex('110')
    >>> j.value, j.parity()
    (1, 1)
    """

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if not 1 <= len(bits) <= MAX_BITS:
            raise ValueError(f"BitIndex length must be in [1, {MAX_BITS}], got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"BitIndex digits must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_int(cls, value: int, n: int) -> "BitIndex":
        if not 0 <= value < (1 << n):
            raise ValueError(f"{value} does not fit in {n} bits")
        return cls(tuple((value >> (n - 1 - r)) & 1 for r in range(n)))

    @classmethod
    def from_str(cls, text: str) -> "BitIndex":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def zeros(cls, n: int) -> "BitIndex":
        return cls((0,) * n)

    @classmethod
    def ones(cls, n: int) -> "BitIndex":
        return cls((1,) * n)

    @classmethod
    def all(cls, n: int) -> Iterator["BitIndex"]:
        """All ``2**n`` indices in ascending order."""
        for v in range(1 << n):
            yield cls.from_int(v, n)

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def value(self) -> int:
        v = 0
        for b in self.bits:
            v = (v << 1) | b
        return v

    def _check(self, other: "BitIndex") -> None:
        if other.n != self.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")

    def xor(self, other: "BitIndex") -> "BitIndex":
        self._check(other)
        return BitIndex(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    __xor__ = xor

    def complement(self) -> "BitIndex":
        return BitIndex(tuple(1 - b for b in self.bits))

    def parity(self) -> int:
        return sum(self.bits) & 1

    def weight(self) -> int:
        return sum(self.bits)

    def dot(self, other: "BitIndex") -> int:
        """Binary scalar product ``j . k``, not reduced mod 2."""
        self._check(other)
        return sum(a & b for a, b in zip(self.bits, other.bits))

    def concat(self, other: "BitIndex") -> "BitIndex":
        return BitIndex(self.bits + other.bits)

    __add__ = concat

    def split(self, cut: int) -> tuple["BitIndex", "BitIndex"]:
        if not 1 <= cut < self.n:
            raise ValueError(f"cut must be in [1, {self.n - 1}], got {cut}")
        return BitIndex(self.bits[:cut]), BitIndex(self.bits[cut:])

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __repr__(self) -> str:
        return f"BitIndex('{self}')"

    def __len__(self) -> int:
        return self.n


IndexLike = Union[BitIndex, str, Sequence[int]]


def as_index(j: IndexLike, n: int | None = None) -> BitIndex:
    """Coerce a bit string, digit sequence or ``BitIndex`` to ``BitIndex``."""
    if isinstance(j, BitIndex):
        out = j
    elif isinstance(j, str):
        out = BitIndex.from_str(j)
    else:
        out = BitIndex(tuple(j))
    if n is not None and out.n != n:
        raise ValueError(f"expected a {n}-bit index, got {out}")
    return out


def popcount(v: int) -> int:
    return bin(v).count("1")


def even_parity_indices(n: int) -> list[BitIndex]:
    """Indices of even weight, in ascending order. There are ``2**(n-1)`` of them."""
    return [j for j in BitIndex.all(n) if j.parity() == 0]

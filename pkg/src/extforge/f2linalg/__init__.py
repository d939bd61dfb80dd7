"""Exact linear algebra over the two-element field, bit-packed.

BitVector and BitMatrix expose coordinatewise contracts; the packed word
layout and the numba/numpy kernel split are internal. Values are treated
as immutable once handed out, so they are safe to share across threads.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .backend import impl, backend_name, warmup

__all__ = [
    "BitVector",
    "BitMatrix",
    "row_reduce",
    "kernel_basis",
    "solve",
    "backend_name",
    "warmup",
]


def _n_words(n: int) -> int:
    return max(1, (n + 63) >> 6)


class BitVector:
    """A vector over F2 of a fixed length."""

    __slots__ = ("length", "data")

    def __init__(self, length: int, data: Optional[np.ndarray] = None):
        self.length = length
        if data is None:
            data = np.zeros(_n_words(length), dtype=np.uint64)
        self.data = data

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        bits = list(bits)
        v = cls(len(bits))
        for j, b in enumerate(bits):
            if b & 1:
                impl.set_bit(v.data, j)
        return v

    @classmethod
    def unit(cls, length: int, j: int) -> "BitVector":
        v = cls(length)
        impl.set_bit(v.data, j)
        return v

    def get(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return impl.get_bit(self.data, j)

    def set_(self, j: int) -> None:
        impl.set_bit(self.data, j)

    def bits(self) -> list[int]:
        return [impl.get_bit(self.data, j) for j in range(self.length)]

    def support(self) -> list[int]:
        return [j for j in range(self.length) if impl.get_bit(self.data, j)]

    def is_zero(self) -> bool:
        return not self.data.any()

    def xor(self, other: "BitVector") -> "BitVector":
        return BitVector(self.length, self.data ^ other.data)

    def copy(self) -> "BitVector":
        return BitVector(self.length, self.data.copy())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.length == other.length
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.length, self.data.tobytes()))

    def __repr__(self) -> str:
        return "BitVector(%s)" % "".join(str(b) for b in self.bits())


class BitMatrix:
    """A rows x cols matrix over F2 with bit-packed rows."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[np.ndarray] = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            data = np.zeros((rows, _n_words(cols)), dtype=np.uint64)
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            impl.set_bit(m.data[i], i)
        return m

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: Optional[int] = None) -> "BitMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        m = cls(len(rows), cols)
        for i, r in enumerate(rows):
            for j, b in enumerate(r):
                if b & 1:
                    impl.set_bit(m.data[i], j)
        return m

    @classmethod
    def from_vectors(cls, vecs: list[BitVector], cols: int) -> "BitMatrix":
        m = cls(len(vecs), cols)
        for i, v in enumerate(vecs):
            m.data[i, : v.data.shape[0]] = v.data
        return m

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return impl.get_bit(self.data[i], j)

    def set_(self, i: int, j: int) -> None:
        impl.set_bit(self.data[i], j)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i].copy())

    def is_zero(self) -> bool:
        return not self.data.any()

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    def matvec(self, v: BitVector) -> BitVector:
        if v.length != self.cols:
            raise ValueError("dimension mismatch: %d columns vs vector length %d" % (self.cols, v.length))
        return BitVector(self.rows, impl.matvec(self.data, v.data, self.rows))

    def mul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = impl.matmul(self.data, other.data, self.rows, self.cols, _n_words(other.cols))
        return BitMatrix(self.rows, other.cols, out)

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows, impl.transpose(self.data, self.rows, self.cols))

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("dimension mismatch in stack")
        data = np.vstack([self.data, other.data])
        return BitMatrix(self.rows + other.rows, self.cols, data)

    def rank(self) -> int:
        r, _, _ = row_reduce(self)
        return r

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        lines = ["".join(str(self.get(i, j)) for j in range(self.cols)) for i in range(self.rows)]
        return "BitMatrix([%s])" % ", ".join(lines)


def row_reduce(m: BitMatrix):
    """Reduced row echelon form over F2.

    Returns (rank, pivot column list, reduced matrix); pivots are strictly
    increasing and chosen leftmost-first for determinism.
    """
    work = m.data.copy()
    rank, pivots = impl.rref(work, m.cols)
    return rank, [int(p) for p in pivots], BitMatrix(m.rows, m.cols, work)


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """A basis of {v : m v = 0}; its size is cols - rank."""
    work = m.data.copy()
    rank, pivots = impl.rref(work, m.cols)
    basis = impl.nullspace_from_rref(work, pivots, rank, m.cols)
    return [BitVector(m.cols, basis[i].copy()) for i in range(basis.shape[0])]


def solve(m: BitMatrix, b: BitVector) -> Optional[BitVector]:
    """One solution x of m x = b, or None if the system is inconsistent."""
    if b.length != m.rows:
        raise ValueError("dimension mismatch: %d rows vs vector length %d" % (m.rows, b.length))
    aug = BitMatrix(m.rows, m.cols + 1)
    aug.data[:, : m.data.shape[1]] = m.data
    for i in range(m.rows):
        if impl.get_bit(b.data, i):
            impl.set_bit(aug.data[i], m.cols)
    rank, pivots = impl.rref(aug.data, m.cols + 1)
    x = BitVector(m.cols)
    for i in range(rank):
        p = int(pivots[i])
        if p == m.cols:
            return None
        if impl.get_bit(aug.data[i], m.cols):
            impl.set_bit(x.data, p)
    return x

"""Numba-compiled kernels for packed GF(2) linear algebra.

Same contracts as the numpy backend; these are the hot paths for
resolution runs (row XOR sweeps and differential-matrix assembly).
"""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"

_ONE = np.uint64(1)


def n_words(ncols: int) -> int:
    return max(1, (ncols + 63) >> 6)


def get_bit(row: np.ndarray, j: int) -> int:
    return int((row[j >> 6] >> np.uint64(j & 63)) & _ONE)


def set_bit(row: np.ndarray, j: int) -> None:
    row[j >> 6] |= _ONE << np.uint64(j & 63)


def pack_bool(bits: np.ndarray) -> np.ndarray:
    nb = bits.shape[0]
    words = n_words(nb)
    padded = np.zeros(words * 64, dtype=np.uint8)
    padded[:nb] = bits.astype(np.uint8)
    return np.packbits(padded, bitorder="little").view(np.uint64)


def unpack_bool(row: np.ndarray, ncols: int) -> np.ndarray:
    return np.unpackbits(row.view(np.uint8), bitorder="little")[:ncols].astype(bool)


@njit(cache=True)
def _ctz(x):
    """Index of the lowest set bit of a nonzero uint64."""
    n = 0
    if x & np.uint64(0xFFFFFFFF) == np.uint64(0):
        n += 32
        x >>= np.uint64(32)
    if x & np.uint64(0xFFFF) == np.uint64(0):
        n += 16
        x >>= np.uint64(16)
    if x & np.uint64(0xFF) == np.uint64(0):
        n += 8
        x >>= np.uint64(8)
    if x & np.uint64(0xF) == np.uint64(0):
        n += 4
        x >>= np.uint64(4)
    if x & np.uint64(0x3) == np.uint64(0):
        n += 2
        x >>= np.uint64(2)
    if x & np.uint64(0x1) == np.uint64(0):
        n += 1
    return n


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _rref(mat, ncols):
    rows = mat.shape[0]
    words = mat.shape[1]
    pivots = np.empty(min(rows, ncols), dtype=np.int64)
    r = 0
    for col in range(ncols):
        if r >= rows:
            break
        w = col >> 6
        bit = _ONE << np.uint64(col & 63)
        p = -1
        for i in range(r, rows):
            if mat[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(words):
                tmp = mat[r, k]
                mat[r, k] = mat[p, k]
                mat[p, k] = tmp
        for i in range(rows):
            if i != r and (mat[i, w] & bit):
                for k in range(words):
                    mat[i, k] ^= mat[r, k]
        pivots[r] = col
        r += 1
    return r, pivots[:r]


def rref(mat: np.ndarray, ncols: int):
    rank, pivots = _rref(mat, ncols)
    return int(rank), pivots.copy()


@njit(cache=True)
def _nullspace(mat, pivots, rank, ncols, out):
    is_pivot = np.zeros(ncols, dtype=np.uint8)
    for i in range(rank):
        is_pivot[pivots[i]] = 1
    k = 0
    for f in range(ncols):
        if is_pivot[f]:
            continue
        out[k, f >> 6] |= _ONE << np.uint64(f & 63)
        fw = f >> 6
        fbit = _ONE << np.uint64(f & 63)
        for i in range(rank):
            if mat[i, fw] & fbit:
                p = pivots[i]
                out[k, p >> 6] |= _ONE << np.uint64(p & 63)
        k += 1
    return k


def nullspace_from_rref(mat: np.ndarray, pivots: np.ndarray, rank: int, ncols: int) -> np.ndarray:
    out = np.zeros((ncols - rank, n_words(ncols)), dtype=np.uint64)
    if ncols - rank > 0:
        _nullspace(mat, pivots, rank, ncols, out)
    return out


@njit(cache=True)
def _matvec(mat, vec, out):
    words = min(mat.shape[1], vec.shape[0])
    for i in range(mat.shape[0]):
        acc = np.uint64(0)
        for k in range(words):
            acc ^= mat[i, k] & vec[k]
        if _popcount(acc) & np.uint64(1):
            out[i >> 6] |= _ONE << np.uint64(i & 63)


def matvec(mat: np.ndarray, vec: np.ndarray, nrows: int) -> np.ndarray:
    out = np.zeros(n_words(nrows), dtype=np.uint64)
    if nrows:
        _matvec(mat, vec, out)
    return out


@njit(cache=True)
def _matmul(a, b, out):
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            if a[i, j >> 6] & (_ONE << np.uint64(j & 63)):
                for k in range(out.shape[1]):
                    out[i, k] ^= b[j, k]


def matmul(a: np.ndarray, b: np.ndarray, a_rows: int, inner: int, out_words: int) -> np.ndarray:
    out = np.zeros((a_rows, out_words), dtype=np.uint64)
    if a_rows and inner:
        _matmul(a[:a_rows], b[:inner, :out_words], out)
    return out


def transpose(mat: np.ndarray, nrows: int, ncols: int) -> np.ndarray:
    out = np.zeros((ncols, n_words(nrows)), dtype=np.uint64)
    if nrows and ncols:
        _transpose(mat, nrows, ncols, out)
    return out


@njit(cache=True)
def _transpose(mat, nrows, ncols, out):
    for i in range(nrows):
        for w in range(mat.shape[1]):
            m = mat[i, w]
            while m:
                b = _ctz(m)
                j = (w << 6) + b
                if j < ncols:
                    out[j, i >> 6] |= _ONE << np.uint64(i & 63)
                m &= m - np.uint64(1)


def alg_fold(mask: int, table: np.ndarray) -> int:
    return int(_alg_fold(np.uint64(mask), table))


@njit(cache=True)
def _alg_fold(mask, table):
    acc = np.uint64(0)
    m = mask
    while m:
        acc ^= table[_ctz(m)]
        m &= m - np.uint64(1)
    return acc


@njit(cache=True)
def _reduce_against(rows, ech, pivots):
    for j in range(rows.shape[0]):
        for i in range(ech.shape[0]):
            p = pivots[i]
            if rows[j, p >> 6] & (_ONE << np.uint64(p & 63)):
                for k in range(rows.shape[1]):
                    rows[j, k] ^= ech[i, k]


def reduce_against(rows: np.ndarray, ech: np.ndarray, pivots: np.ndarray) -> None:
    if rows.shape[0] and ech.shape[0]:
        _reduce_against(rows, ech, pivots)


@njit(cache=True)
def _build_image_rows(gidx, cidx, diff, table, row_of, out):
    ncols = gidx.shape[0]
    for c in range(ncols):
        g = gidx[c]
        a = cidx[c]
        for h in range(diff.shape[1]):
            m = diff[g, h]
            if m == np.uint64(0):
                continue
            acc = np.uint64(0)
            while m:
                acc ^= table[a, _ctz(m)]
                m &= m - np.uint64(1)
            while acc:
                b = _ctz(acc)
                r = row_of[h, b]
                if r >= 0:
                    out[c, r >> 6] ^= _ONE << np.uint64(r & 63)
                acc &= acc - np.uint64(1)


def build_image_rows(gidx, cidx, diff, table, row_of, out):
    if gidx.shape[0]:
        _build_image_rows(gidx, cidx, diff, table, row_of, out)
    return out


def warmup() -> None:
    """Trigger JIT compilation of every kernel on tiny inputs."""
    m = np.zeros((2, 1), dtype=np.uint64)
    m[0, 0] = np.uint64(3)
    r, p = rref(m.copy(), 2)
    nullspace_from_rref(m.copy(), p, r, 2)
    matvec(m, np.ones(1, dtype=np.uint64), 2)
    matmul(m, m, 2, 2, 1)
    transpose(m, 2, 2)
    alg_fold(1, np.zeros(64, dtype=np.uint64))
    reduce_against(m.copy(), m.copy(), np.zeros(2, dtype=np.int64))
    build_image_rows(
        np.zeros(1, dtype=np.int64),
        np.zeros(1, dtype=np.int64),
        np.ones((1, 1), dtype=np.uint64),
        np.zeros((64, 64), dtype=np.uint64),
        np.zeros((1, 64), dtype=np.int32),
        np.zeros((1, 1), dtype=np.uint64),
    )

"""Pure-numpy kernels for packed GF(2) linear algebra.

Matrices are row-major arrays of uint64 words; bit j of a row lives in
word j >> 6 at position j & 63 (little-endian within a word).
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

_ONE = np.uint64(1)


def n_words(ncols: int) -> int:
    return max(1, (ncols + 63) >> 6)


def get_bit(row: np.ndarray, j: int) -> int:
    return int((row[j >> 6] >> np.uint64(j & 63)) & _ONE)


def set_bit(row: np.ndarray, j: int) -> None:
    row[j >> 6] |= _ONE << np.uint64(j & 63)


def pack_bool(bits: np.ndarray) -> np.ndarray:
    """Pack a bool vector into little-endian uint64 words."""
    nb = bits.shape[0]
    words = n_words(nb)
    padded = np.zeros(words * 64, dtype=np.uint8)
    padded[:nb] = bits.astype(np.uint8)
    return np.packbits(padded, bitorder="little").view(np.uint64)


def unpack_bool(row: np.ndarray, ncols: int) -> np.ndarray:
    return np.unpackbits(row.view(np.uint8), bitorder="little")[:ncols].astype(bool)


def rref(mat: np.ndarray, ncols: int):
    """Reduce mat in place to reduced row echelon form.

    Pivot choice is leftmost nonzero column, first row wins.
    Returns (rank, pivot column array).
    """
    rows = mat.shape[0]
    r = 0
    pivots = []
    for col in range(ncols):
        if r >= rows:
            break
        w = col >> 6
        bit = _ONE << np.uint64(col & 63)
        hits = np.nonzero(mat[r:, w] & bit)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            mat[[r, p]] = mat[[p, r]]
        sel = (mat[:, w] & bit) != 0
        sel[r] = False
        if sel.any():
            mat[sel] ^= mat[r]
        pivots.append(col)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def nullspace_from_rref(mat: np.ndarray, pivots: np.ndarray, rank: int, ncols: int) -> np.ndarray:
    """Kernel basis vectors (packed rows) of the original matrix."""
    is_pivot = np.zeros(ncols, dtype=bool)
    if pivots.size:
        is_pivot[pivots] = True
    free = np.nonzero(~is_pivot)[0]
    out = np.zeros((free.size, n_words(ncols)), dtype=np.uint64)
    for k, f in enumerate(free):
        set_bit(out[k], int(f))
        for i in range(rank):
            if get_bit(mat[i], int(f)):
                set_bit(out[k], int(pivots[i]))
    return out


def matvec(mat: np.ndarray, vec: np.ndarray, nrows: int) -> np.ndarray:
    """Packed matrix times packed vector."""
    out = np.zeros(n_words(nrows), dtype=np.uint64)
    if nrows == 0 or mat.shape[1] == 0:
        return out
    par = (np.bitwise_count(mat[:nrows] & vec[None, : mat.shape[1]]).sum(axis=1) & 1).astype(bool)
    return pack_bool(par)[: out.shape[0]]


def matmul(a: np.ndarray, b: np.ndarray, a_rows: int, inner: int, out_words: int) -> np.ndarray:
    """C = A * B with A of shape a_rows x inner, B packed with out_words words."""
    out = np.zeros((a_rows, out_words), dtype=np.uint64)
    for i in range(a_rows):
        sel = unpack_bool(a[i], inner)
        idx = np.nonzero(sel)[0]
        if idx.size:
            out[i] = np.bitwise_xor.reduce(b[idx], axis=0)[:out_words]
    return out


def transpose(mat: np.ndarray, nrows: int, ncols: int) -> np.ndarray:
    grid = np.zeros((nrows, ncols), dtype=bool)
    for i in range(nrows):
        grid[i] = unpack_bool(mat[i], ncols)
    t = grid.T
    out = np.zeros((ncols, n_words(nrows)), dtype=np.uint64)
    for i in range(ncols):
        out[i] = pack_bool(t[i])
    return out


def alg_fold(mask: int, table: np.ndarray) -> int:
    """XOR of table[b] over the set bits b of mask (single-word algebra)."""
    acc = np.uint64(0)
    m = int(mask)
    while m:
        b = (m & -m).bit_length() - 1
        acc ^= table[b]
        m &= m - 1
    return int(acc)


def reduce_against(rows: np.ndarray, ech: np.ndarray, pivots: np.ndarray) -> None:
    """Reduce packed rows in place against an echelon (from rref) with known pivots."""
    for i in range(ech.shape[0]):
        p = int(pivots[i])
        w = p >> 6
        bit = _ONE << np.uint64(p & 63)
        sel = (rows[:, w] & bit) != 0
        if sel.any():
            rows[sel] ^= ech[i]


def build_image_rows(gidx, cidx, diff, table, row_of, out):
    """Images of free-module basis pairs under a differential, one packed row each.

    Row c of `out` is the image of (generator gidx[c]) * (algebra basis
    cidx[c]), packed over the target basis; diff[g][h] is the algebra mask
    of the h-component of d(generator g); row_of[h, b] maps a target pair
    to its position in the target basis.
    """
    ncols = gidx.shape[0]
    for c in range(ncols):
        g = int(gidx[c])
        a = int(cidx[c])
        for h in range(diff.shape[1]):
            m = int(diff[g, h])
            if m == 0:
                continue
            acc = 0
            while m:
                b = (m & -m).bit_length() - 1
                acc ^= int(table[a, b])
                m &= m - 1
            while acc:
                b = (acc & -acc).bit_length() - 1
                r = int(row_of[h, b])
                if r >= 0:
                    out[c, r >> 6] ^= _ONE << np.uint64(r & 63)
                acc &= acc - 1
    return out

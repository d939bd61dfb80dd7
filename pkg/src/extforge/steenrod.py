"""Finite subalgebras A(n) of the mod-2 Steenrod algebra in the Milnor basis.

A(n) has Milnor basis Sq(r_1, ..., r_{n+1}) with 0 <= r_i < 2^{n+2-i} and is
generated by Sq^1, Sq^2, ..., Sq^{2^n}. Because dim A(n) <= 64 for n <= 2,
an F2-linear combination of basis elements packs into a single 64-bit mask;
all multiplication tables are built once per profile and then read-only, so
concurrent reads are safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

__all__ = [
    "Algebra",
    "MilnorElt",
    "AlgebraElt",
    "enumerate_basis",
    "multiply",
    "milnor_to_generator_word",
    "algebra",
]

SUPPORTED_PROFILES = (0, 1, 2)

_WEIGHTS = (1, 3, 7, 15)  # degree of Sq(0,..,0,1) with the 1 in slot i


def _tuple_degree(r: tuple[int, ...]) -> int:
    return sum(ri * _WEIGHTS[i] for i, ri in enumerate(r))


def milnor_product_tuples(r: tuple[int, ...], s: tuple[int, ...]) -> set[tuple[int, ...]]:
    """Milnor's product formula: XOR-set of basis tuples in Sq(r) * Sq(s).

    Sums over matrices (x_ij) with row sums sum_j 2^j x_ij = r_i and column
    sums sum_i x_ij = s_j; a matrix contributes iff every diagonal's
    multinomial coefficient is odd (no binary carries along the diagonal).
    """
    m, n = len(r), len(s)
    results: set[tuple[int, ...]] = set()
    # rows[i] = entries x[i][0..n] for i = 0..m; x[0][j] filled at the end
    x = [[0] * (n + 1) for _ in range(m + 1)]

    def emit() -> None:
        tmax = m + n
        t = [0] * (tmax + 1)
        for i in range(m + 1):
            for j in range(n + 1):
                if i == 0 and j == 0:
                    continue
                t[i + j] += x[i][j]
        # coefficient mod 2: each diagonal's entries must have disjoint bits
        for k in range(1, tmax + 1):
            acc = 0
            for i in range(max(0, k - n), min(m, k) + 1):
                j = k - i
                if i == 0 and j == 0:
                    continue
                e = x[i][j]
                if acc & e:
                    return
                acc |= e
        while t and t[-1] == 0:
            t.pop()
        tt = tuple(t[1:])
        if tt in results:
            results.discard(tt)
        else:
            results.add(tt)

    def rec_row(i: int, cols_left: list[int]) -> None:
        if i > m:
            for j in range(1, n + 1):
                x[0][j] = cols_left[j - 1]
            emit()
            return

        def rec_col(j: int, rem: int) -> None:
            if j > n:
                x[i][0] = rem
                rec_row(i + 1, cols_left)
                return
            top = min(cols_left[j - 1], rem >> j)
            for v in range(top + 1):
                x[i][j] = v
                cols_left[j - 1] -= v
                rec_col(j + 1, rem - (v << j))
                cols_left[j - 1] += v
            x[i][j] = 0

        rec_col(1, r[i - 1])

    rec_row(1, list(s))
    return results


class Algebra:
    """Basis, degrees, and multiplication tables for one profile A(n)."""

    def __init__(self, n: int):
        if n not in SUPPORTED_PROFILES:
            raise ValueError("unsupported subalgebra profile A(%r); supported: A(0), A(1), A(2)" % (n,))
        self.n = n
        self.nvars = n + 1
        self.gen_degrees = tuple(2**k for k in range(n + 1))
        self.bounds = tuple(2 ** (n + 2 - i) for i in range(1, n + 2))

        basis: list[tuple[int, ...]] = []
        for r in self._profile_tuples():
            basis.append(r)
        basis.sort(key=lambda t: (_tuple_degree(t), t))
        self.basis = basis
        self.dim = len(basis)
        if self.dim > 64:
            raise AssertionError("profile too large for single-word masks")
        self.index = {t: i for i, t in enumerate(basis)}
        self.deg = np.array([_tuple_degree(t) for t in basis], dtype=np.int64)
        self.top_degree = int(self.deg.max())
        self.unit = 0  # all-zero tuple sorts first

        self._deg_slices: dict[int, tuple[int, int]] = {}
        for i, t in enumerate(basis):
            d = int(self.deg[i])
            start, count = self._deg_slices.get(d, (i, 0))
            self._deg_slices[d] = (start, count + 1)

        self.left_table = self._build_table()
        self.gen_index = tuple(self.index[self._pad((2**k,) + (0,) * n)] for k in range(n + 1))
        self._word_cache: dict[int, tuple[list[tuple[int, ...]], list[int], dict]] = {}
        self._decomp_cache: dict[int, list[int]] = {}
        self._antipode: Optional[list[int]] = None

    def _pad(self, t: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(t[: self.nvars]) + (0,) * (self.nvars - len(t))

    def _profile_tuples(self) -> Iterator[tuple[int, ...]]:
        def rec(i: int, acc: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
            if i == self.nvars:
                yield acc
                return
            for v in range(self.bounds[i]):
                yield from rec(i + 1, acc + (v,))

        yield from rec(0, ())

    def in_profile(self, t: tuple[int, ...]) -> bool:
        if len(t) > self.nvars and any(t[self.nvars :]):
            return False
        return all(v < b for v, b in zip(self._pad(t), self.bounds))

    def degree_dim(self, d: int) -> int:
        return self._deg_slices.get(d, (0, 0))[1]

    def degree_slice(self, d: int) -> tuple[int, int]:
        """(start index, count) of the degree-d block of the global basis."""
        return self._deg_slices.get(d, (0, 0))

    def basis_indices_of_degree(self, d: int) -> range:
        start, count = self.degree_slice(d)
        return range(start, start + count)

    def _build_table(self) -> np.ndarray:
        table = np.zeros((self.dim, self.dim), dtype=np.uint64)
        for a, ta in enumerate(self.basis):
            for b, tb in enumerate(self.basis):
                mask = 0
                for t in milnor_product_tuples(ta, tb):
                    if not self.in_profile(t):
                        raise AssertionError(
                            "product of in-profile elements left A(%d): %r * %r -> %r" % (self.n, ta, tb, t)
                        )
                    mask |= 1 << self.index[self._pad(t)]
                table[a, b] = mask
        return table

    def mul_masks(self, ma: int, mb: int) -> int:
        """Product of two F2-combinations given as basis masks."""
        out = 0
        a = ma
        while a:
            ia = (a & -a).bit_length() - 1
            b = mb
            row = self.left_table[ia]
            while b:
                ib = (b & -b).bit_length() - 1
                out ^= int(row[ib])
                b &= b - 1
            a &= a - 1
        return out

    def left_mul_mask(self, a: int, mb: int) -> int:
        """basis[a] * (mask mb)."""
        out = 0
        row = self.left_table[a]
        b = mb
        while b:
            ib = (b & -b).bit_length() - 1
            out ^= int(row[ib])
            b &= b - 1
        return out

    def sq_index(self, k: int) -> int:
        """Global index of the total square Sq^k = Sq(k); requires Sq(k) in profile."""
        t = self._pad((k,))
        if not self.in_profile(t):
            raise ValueError("Sq^%d is not in A(%d)" % (k, self.n))
        return self.index[t]

    # -- generator words ------------------------------------------------

    def _compositions(self, d: int) -> Iterator[tuple[int, ...]]:
        """Compositions of d into generator degrees, larger parts first."""
        if d == 0:
            yield ()
            return
        for g in sorted(self.gen_degrees, reverse=True):
            if g <= d:
                for rest in self._compositions(d - g):
                    yield (g,) + rest

    def word_mask(self, word: tuple[int, ...]) -> int:
        """Milnor expansion mask of the composition word Sq^{w0} Sq^{w1} ..."""
        mask = 1 << self.unit
        for g in reversed(word):
            k = g.bit_length() - 1
            mask = self.left_mul_mask(self.gen_index[k], mask)
        return mask

    def _word_basis(self, d: int):
        """Spanning words of degree d with rref bookkeeping for decompositions."""
        cached = self._word_cache.get(d)
        if cached is not None:
            return cached
        want = self.degree_dim(d)
        words: list[tuple[int, ...]] = []
        rows: list[tuple[int, int]] = []  # (mask, combo over kept words)
        pivots: dict[int, int] = {}  # pivot bit -> row position
        for w in self._compositions(d):
            mask = self.word_mask(w)
            combo = 1 << len(words)
            m, c = mask, combo
            while m:
                p = m.bit_length() - 1
                row = pivots.get(p)
                if row is None:
                    break
                m ^= rows[row][0]
                c ^= rows[row][1]
            if m:
                pivots[m.bit_length() - 1] = len(rows)
                rows.append((m, c))
                words.append(w)
                if len(rows) == want:
                    break
        if len(rows) != want:
            raise AssertionError("generator words failed to span A(%d) in degree %d" % (self.n, d))
        out = (words, rows, pivots)
        self._word_cache[d] = out
        return out

    def words_for_basis(self, b: int) -> list[tuple[int, ...]]:
        """An F2-sum of generator words whose Milnor expansion is basis[b]."""
        d = int(self.deg[b])
        words, rows, pivots = self._word_basis(d)
        m = 1 << b
        combo = 0
        while m:
            p = m.bit_length() - 1
            row = pivots[p]
            m ^= rows[row][0]
            combo ^= rows[row][1]
        out = []
        i = 0
        while combo:
            if combo & 1:
                out.append(words[i])
            combo >>= 1
            i += 1
        return out

    # -- decomposables and the antipode ---------------------------------

    def decomposable_reducer(self, d: int) -> list[int]:
        """RREF rows spanning the decomposables (A+ * A+) in degree d."""
        cached = self._decomp_cache.get(d)
        if cached is not None:
            return cached
        rows: list[int] = []
        for e in range(1, d):
            for a in self.basis_indices_of_degree(e):
                for b in self.basis_indices_of_degree(d - e):
                    m = _reduce_mask(int(self.left_table[a, b]), rows)
                    if m:
                        rows.append(m)
        self._decomp_cache[d] = rows
        return rows

    def reduce_mod_decomposables(self, mask: int, d: int) -> int:
        return _reduce_mask(mask, self.decomposable_reducer(d))

    def antipode_mask(self, b: int) -> int:
        """Mask of chi(basis[b]) for the canonical anti-automorphism chi."""
        if self._antipode is None:
            self._antipode = self._build_antipode()
        return self._antipode[b]

    def _build_antipode(self) -> list[int]:
        chi = [0] * self.dim
        chi[self.unit] = 1 << self.unit
        # process by increasing degree; chi(R) = sum over 0 != R1 <= R of
        # Sq(R1) * chi(R - R1), from the convolution identity with the
        # componentwise Milnor coproduct
        for b in range(self.dim):
            if b == self.unit:
                continue
            rb = self.basis[b]
            acc = 0
            for r1 in _sub_tuples(rb):
                if all(v == 0 for v in r1):
                    continue
                r2 = tuple(x - y for x, y in zip(rb, r1))
                i1 = self.index[r1]
                i2 = self.index[r2]
                acc ^= self.left_mul_mask(i1, chi[i2])
            chi[b] = acc
        return chi

    def mask_to_tuples(self, mask: int) -> list[tuple[int, ...]]:
        out = []
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            out.append(self.basis[i])
            m &= m - 1
        return out


def _reduce_mask(m: int, rows: list[int]) -> int:
    changed = True
    while m and changed:
        changed = False
        top = m.bit_length() - 1
        for r in rows:
            if r.bit_length() - 1 == top:
                m ^= r
                changed = True
                break
    return m


def _sub_tuples(r: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if not r:
        yield ()
        return
    for v in range(r[0] + 1):
        for rest in _sub_tuples(r[1:]):
            yield (v,) + rest


@lru_cache(maxsize=None)
def algebra(n: int) -> Algebra:
    """The shared, immutable Algebra instance for profile A(n)."""
    return Algebra(n)


# -- spec-facing element types ------------------------------------------


@dataclass(frozen=True)
class MilnorElt:
    """A Milnor basis element Sq(r_1, ..., r_{n+1}) of A(n)."""

    profile: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        alg = algebra(self.profile)
        padded = alg._pad(self.exponents)
        if not alg.in_profile(self.exponents):
            raise ValueError("exponents %r outside the A(%d) profile" % (self.exponents, self.profile))
        object.__setattr__(self, "exponents", padded)

    @property
    def degree(self) -> int:
        return _tuple_degree(self.exponents)

    def __repr__(self) -> str:
        return "Sq(%s)" % ",".join(str(v) for v in self.exponents)


@dataclass(frozen=True)
class AlgebraElt:
    """A homogeneous F2-linear combination of Milnor basis elements."""

    profile: int
    terms: frozenset[MilnorElt]

    def __post_init__(self):
        degs = {t.degree for t in self.terms}
        if len(degs) > 1:
            raise ValueError("AlgebraElt terms must be homogeneous, got degrees %r" % sorted(degs))

    @property
    def degree(self) -> Optional[int]:
        for t in self.terms:
            return t.degree
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(repr(t) for t in sorted(self.terms, key=lambda x: x.exponents))


def enumerate_basis(profile: int, degree: int) -> list[MilnorElt]:
    """All profile-admissible Milnor exponent tuples of one degree, lex order."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    alg = algebra(profile)
    out = [alg.basis[i] for i in alg.basis_indices_of_degree(degree)]
    return [MilnorElt(profile, t) for t in sorted(out)]


def multiply(a: MilnorElt, b: MilnorElt) -> AlgebraElt:
    """Product in A(n), via the Milnor matrix formula."""
    if a.profile != b.profile:
        raise ValueError("profile mismatch: A(%d) vs A(%d)" % (a.profile, b.profile))
    alg = algebra(a.profile)
    mask = int(alg.left_table[alg.index[a.exponents], alg.index[b.exponents]])
    terms = frozenset(MilnorElt(a.profile, t) for t in alg.mask_to_tuples(mask))
    return AlgebraElt(a.profile, terms)


def milnor_to_generator_word(b: MilnorElt) -> list[tuple[int, ...]]:
    """An F2-sum of words in Sq^1, Sq^2, Sq^4 expanding to b.

    Each word is a tuple of generator degrees, leftmost factor first; the
    expansion is re-checked against the Milnor product before returning.
    """
    alg = algebra(b.profile)
    words = alg.words_for_basis(alg.index[b.exponents])
    acc = 0
    for w in words:
        acc ^= alg.word_mask(w)
    if acc != 1 << alg.index[b.exponents]:
        raise AssertionError("generator-word re-expansion mismatch for %r" % (b,))
    return words

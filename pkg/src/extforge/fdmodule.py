"""Finite-dimensional graded modules over A(n) with generator-action matrices.

A module stores one matrix per algebra generator Sq^{2^k} per degree; the
action of an arbitrary Milnor basis element is recovered through generator
words. Infinite objects (stunted projective spaces and their tensors) are
represented as finite windows; consumers of charts apply the stability rule
from the resolution layer to pick safe windows.

Modules are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as _np

from .arith2 import binom_mod2
from .f2linalg import BitMatrix, BitVector, kernel_basis
from .steenrod import Algebra, algebra

__all__ = [
    "FDModule",
    "ModuleMap",
    "ActionReport",
    "trivial_module",
    "stunted_rp",
    "stunted_cp",
    "tensor",
    "suspend",
    "dualize",
    "regular_module",
    "named_module",
    "submodule_generated",
    "quotient",
    "kernel_module",
    "verify_action",
]

NAMED_MODULES = ("M10", "A2//A1", "A2//E2", "A2/Sq1", "A2/Sq2")


class FDModule:
    """A bounded graded A(n)-module given by basis labels and action matrices."""

    def __init__(self, alg: Algebra, basis: Sequence[tuple[str, int]], name: str = "?"):
        self.algebra = alg
        self.name = name
        self.labels = [lab for lab, _ in basis]
        self.degrees = [d for _, d in basis]
        self.dim = len(self.labels)
        self._by_degree: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            self._by_degree.setdefault(d, []).append(i)
        self._pos: dict[int, int] = {}
        for d, idxs in self._by_degree.items():
            for p, i in enumerate(idxs):
                self._pos[i] = p
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._label_index) != self.dim:
            raise ValueError("duplicate basis labels in module %r" % name)
        self._gen_mats: list[dict[int, BitMatrix]] = [dict() for _ in alg.gen_degrees]
        self._milnor_memo: dict[tuple[int, int], BitMatrix] = {}
        # set when the module is a low truncation of a semi-infinite object;
        # chart consumers must then supply a trusted stem range
        self.truncated_below = False

    # -- basis bookkeeping ----------------------------------------------

    @property
    def min_degree(self) -> Optional[int]:
        return min(self._by_degree) if self._by_degree else None

    @property
    def max_degree(self) -> Optional[int]:
        return max(self._by_degree) if self._by_degree else None

    def degrees_present(self) -> list[int]:
        return sorted(self._by_degree)

    def dim_at(self, d: int) -> int:
        return len(self._by_degree.get(d, ()))

    def basis_at(self, d: int) -> list[int]:
        return list(self._by_degree.get(d, ()))

    def labels_at(self, d: int) -> list[str]:
        return [self.labels[i] for i in self.basis_at(d)]

    def find(self, label: str) -> tuple[int, int]:
        """(degree, position within that degree) of a basis label."""
        i = self._label_index[label]
        return self.degrees[i], self._pos[i]

    def unit_vector(self, label: str) -> tuple[int, BitVector]:
        d, p = self.find(label)
        return d, BitVector.unit(self.dim_at(d), p)

    def vector_from_labels(self, labels: Iterable[str]) -> tuple[int, BitVector]:
        labels = list(labels)
        d, p = self.find(labels[0])
        v = BitVector(self.dim_at(d))
        for lab in labels:
            dd, pp = self.find(lab)
            if dd != d:
                raise ValueError("labels span several degrees: %r" % labels)
            v.set_(pp)
        return d, v

    def describe_vector(self, d: int, v: BitVector) -> str:
        idxs = self.basis_at(d)
        terms = [self.labels[idxs[p]] for p in v.support()]
        return " + ".join(terms) if terms else "0"

    # -- action ----------------------------------------------------------

    def _set_gen_matrix(self, k: int, d: int, mat: BitMatrix) -> None:
        if not mat.is_zero():
            self._gen_mats[k][d] = mat

    def gen_matrix(self, k: int, d: int) -> BitMatrix:
        """Action matrix of Sq^{2^k} from degree d to degree d + 2^k."""
        mat = self._gen_mats[k].get(d)
        if mat is None:
            g = self.algebra.gen_degrees[k]
            return BitMatrix.zeros(self.dim_at(d + g), self.dim_at(d))
        return mat

    def milnor_matrix(self, c: int, d: int) -> BitMatrix:
        """Action matrix of the Milnor basis element with global index c."""
        alg = self.algebra
        if c == alg.unit:
            return BitMatrix.identity(self.dim_at(d))
        key = (c, d)
        hit = self._milnor_memo.get(key)
        if hit is not None:
            return hit
        dc = int(alg.deg[c])
        nrows = self.dim_at(d + dc)
        acc = BitMatrix.zeros(nrows, self.dim_at(d))
        for word in alg.words_for_basis(c):
            mat = None
            dd = d
            for g in reversed(word):
                k = g.bit_length() - 1
                step = self.gen_matrix(k, dd)
                mat = step if mat is None else step.mul(mat)
                dd += g
            acc.data ^= mat.data
        self._milnor_memo[key] = acc
        return acc

    def sq_matrix(self, k: int, d: int) -> BitMatrix:
        """Action matrix of the total square Sq^k from degree d."""
        if k == 0:
            return BitMatrix.identity(self.dim_at(d))
        return self.milnor_matrix(self.algebra.sq_index(k), d)

    def mask_matrix(self, mask: int, d: int) -> BitMatrix:
        """Action of an algebra element given as a basis mask (homogeneous)."""
        alg = self.algebra
        mat = None
        m = mask
        while m:
            c = (m & -m).bit_length() - 1
            step = self.milnor_matrix(c, d)
            mat = step if mat is None else BitMatrix(step.rows, step.cols, step.data ^ mat.data)
            m &= m - 1
        if mat is None:
            raise ValueError("zero algebra element has no well-defined degree")
        return mat

    def __repr__(self) -> str:
        return "FDModule(%s, dim=%d, degrees [%s, %s] over A(%d))" % (
            self.name,
            self.dim,
            self.min_degree,
            self.max_degree,
            self.algebra.n,
        )


@dataclass
class ModuleMap:
    """A degree-shifting linear map between modules, given degreewise."""

    source: FDModule
    target: FDModule
    shift: int
    mats: dict[int, BitMatrix] = field(default_factory=dict)

    def matrix(self, d: int) -> BitMatrix:
        mat = self.mats.get(d)
        if mat is None:
            return BitMatrix.zeros(self.target.dim_at(d + self.shift), self.source.dim_at(d))
        return mat

    def apply(self, d: int, v: BitVector) -> BitVector:
        return self.matrix(d).matvec(v)

    def commutes_with_action(self, degrees: Optional[Iterable[int]] = None) -> list[tuple]:
        """Degrees where f(Sq^g x) != Sq^g f(x); empty list means the map commutes."""
        failures = []
        src = self.source
        tgt = self.target
        degs = list(degrees) if degrees is not None else src.degrees_present()
        for k, g in enumerate(src.algebra.gen_degrees):
            for d in degs:
                lhs = self.matrix(d + g).mul(src.gen_matrix(k, d))
                rhs = tgt.gen_matrix(k, d + self.shift).mul(self.matrix(d))
                if lhs != rhs:
                    failures.append((d, g))
        return failures


@dataclass
class ActionReport:
    """Result of checking that generator matrices define a true A(n)-action."""

    passed: bool
    checked_pairs: int
    failures: list[tuple] = field(default_factory=list)

    def first_failure(self):
        return self.failures[0] if self.failures else None


def verify_action(m: FDModule, degrees: Optional[Iterable[int]] = None) -> ActionReport:
    """Check multiplicativity of the action on (generator, basis) pairs.

    If phi(g) phi(b) = phi(g b) for every algebra generator g and Milnor
    basis element b, the generator matrices extend to a well-defined action
    of the whole algebra, so every Milnor element acts identically through
    any two generator-word decompositions.
    """
    alg = m.algebra
    degs = list(degrees) if degrees is not None else m.degrees_present()
    failures = []
    checked = 0
    for b in range(alg.dim):
        db = int(alg.deg[b])
        for k, g in enumerate(alg.gen_degrees):
            mask = int(alg.left_table[alg.gen_index[k], b])
            for d in degs:
                if m.dim_at(d) == 0:
                    continue
                checked += 1
                lhs = m.gen_matrix(k, d + db).mul(m.milnor_matrix(b, d))
                if mask:
                    rhs = m.mask_matrix(mask, d)
                else:
                    rhs = BitMatrix.zeros(m.dim_at(d + db + g), m.dim_at(d))
                if lhs != rhs:
                    bad = _first_mismatch(lhs, rhs)
                    failures.append((d, alg.basis[alg.gen_index[k]], alg.basis[b], bad))
    return ActionReport(passed=not failures, checked_pairs=checked, failures=failures)


def _first_mismatch(a: BitMatrix, b: BitMatrix):
    for i in range(a.rows):
        for j in range(a.cols):
            if a.get(i, j) != b.get(i, j):
                return (i, j)
    return None


# -- constructors ------------------------------------------------------


def trivial_module(profile: int = 2, degree: int = 0) -> FDModule:
    """The one-dimensional module Z2 concentrated in one degree."""
    m = FDModule(algebra(profile), [("1", degree)], name="Z2" if degree == 0 else "Z2[%d]" % degree)
    return m


def stunted_rp(lo: int, hi: int, profile: int = 2) -> FDModule:
    """Cohomology of a stunted real projective space window.

    Basis x^i for lo <= i <= hi with Sq^k x^i = binom(i, k) x^{i+k} mod 2;
    negative i uses the all-ones 2-adic tail rule.
    """
    if lo > hi:
        raise ValueError("stunted_rp requires lo <= hi")
    alg = algebra(profile)
    m = FDModule(alg, [("x^%d" % i, i) for i in range(lo, hi + 1)], name="P[%d..%d]" % (lo, hi))
    for k, g in enumerate(alg.gen_degrees):
        for i in range(lo, hi + 1 - g):
            if binom_mod2(i, g):
                mat = BitMatrix.zeros(1, 1)
                mat.set_(0, 0)
                m._set_gen_matrix(k, i, mat)
    return m


def stunted_cp(lo: int, hi: int, profile: int = 2) -> FDModule:
    """Cohomology of a stunted complex projective space window.

    Indices are cohomological degrees of cells, all even; odd squares act
    as zero and Sq^{2k} x^{2m} = binom(m, k) x^{2m+2k} mod 2.
    """
    if lo % 2 or hi % 2:
        raise ValueError("stunted_cp requires even degree bounds, got [%d, %d]" % (lo, hi))
    if lo > hi:
        raise ValueError("stunted_cp requires lo <= hi")
    alg = algebra(profile)
    m = FDModule(alg, [("x^%d" % i, i) for i in range(lo, hi + 1, 2)], name="CP[%d..%d]" % (lo, hi))
    for k, g in enumerate(alg.gen_degrees):
        if g % 2:
            continue
        for i in range(lo, hi + 1 - g, 2):
            if binom_mod2(i // 2, g // 2):
                mat = BitMatrix.zeros(1, 1)
                mat.set_(0, 0)
                m._set_gen_matrix(k, i, mat)
    return m


def tensor(
    a: FDModule,
    b: FDModule,
    lo: Optional[int] = None,
    hi: Optional[int] = None,
) -> FDModule:
    """Tensor product with the Cartan action, optionally windowed by degree."""
    if a.algebra is not b.algebra:
        raise ValueError("tensor factors must share a profile")
    alg = a.algebra
    pairs: list[tuple[int, int, int]] = []  # (degree, ia, ib)
    for ia in range(a.dim):
        da = a.degrees[ia]
        for ib in range(b.dim):
            d = da + b.degrees[ib]
            if lo is not None and d < lo:
                continue
            if hi is not None and d > hi:
                continue
            pairs.append((d, ia, ib))
    pairs.sort(key=lambda t: (t[0], t[1], t[2]))
    basis = [("%s|%s" % (a.labels[ia], b.labels[ib]), d) for d, ia, ib in pairs]
    name = "tensor(%s,%s)" % (a.name, b.name)
    if lo is not None or hi is not None:
        name += "[%s..%s]" % (lo, hi)
    m = FDModule(alg, basis, name=name)

    pos: dict[tuple[int, int], tuple[int, int]] = {}
    counter: dict[int, int] = {}
    for d, ia, ib in pairs:
        p = counter.get(d, 0)
        pos[(ia, ib)] = (d, p)
        counter[d] = p + 1

    # column supports of factor total-square matrices, per degree
    def supports(mod: FDModule, u: int, d: int) -> dict[int, list[int]]:
        mat = mod.sq_matrix(u, d)
        cols: dict[int, list[int]] = {j: [] for j in range(mat.cols)}
        for i in range(mat.rows):
            rowv = mat.data[i]
            for j in range(mat.cols):
                if (int(rowv[j >> 6]) >> (j & 63)) & 1:
                    cols[j].append(i)
        return cols

    sup_cache: dict[tuple[int, int, int], dict[int, list[int]]] = {}

    def sup(which: int, u: int, d: int) -> dict[int, list[int]]:
        key = (which, u, d)
        got = sup_cache.get(key)
        if got is None:
            got = supports(a if which == 0 else b, u, d)
            sup_cache[key] = got
        return got

    mats: dict[tuple[int, int], BitMatrix] = {}
    for d, ia, ib in pairs:
        da, db = a.degrees[ia], b.degrees[ib]
        pa, pb = a._pos[ia], b._pos[ib]
        src_p = pos[(ia, ib)][1]
        for k, g in enumerate(alg.gen_degrees):
            key = (k, d)
            mat = mats.get(key)
            if mat is None:
                mat = BitMatrix.zeros(m.dim_at(d + g), m.dim_at(d))
                mats[key] = mat
            for u in range(g + 1):
                v = g - u
                ta = sup(0, u, da).get(pa, ())
                if not ta:
                    continue
                tb = sup(1, v, db).get(pb, ())
                for qa in ta:
                    ja = a._by_degree[da + u][qa]
                    for qb in tb:
                        jb = b._by_degree[db + v][qb]
                        tgt = pos.get((ja, jb))
                        if tgt is None:
                            continue
                        mat.data[tgt[1]][src_p >> 6] ^= _np.uint64(1) << _np.uint64(src_p & 63)
    for (k, d), mat in mats.items():
        m._set_gen_matrix(k, d, mat)
    return m


def suspend(m: FDModule, k: int) -> FDModule:
    """Shift all degrees by k, keeping the action matrices."""
    out = FDModule(
        m.algebra,
        [(lab, d + k) for lab, d in zip(m.labels, m.degrees)],
        name="susp(%d,%s)" % (k, m.name) if k else m.name,
    )
    for j, mats in enumerate(m._gen_mats):
        for d, mat in mats.items():
            out._set_gen_matrix(j, d + k, mat.copy())
    return out


def dualize(m: FDModule) -> FDModule:
    """The contragredient module on negated degrees.

    Generator matrices act through the algebra's canonical anti-involution
    (transposing alone would define a right action, not a left one); on the
    stunted projective modules the correction term vanishes, so there the
    matrices are plain transposes.
    """
    alg = m.algebra
    out = FDModule(
        alg,
        [(lab + "*", -d) for lab, d in zip(m.labels, m.degrees)],
        name="dual(%s)" % m.name,
    )
    for k, g in enumerate(alg.gen_degrees):
        chi_mask = alg.antipode_mask(alg.gen_index[k])
        for d in m.degrees_present():
            if m.dim_at(d) == 0 or m.dim_at(d + g) == 0:
                continue
            mat = m.mask_matrix(chi_mask, d)
            if mat.is_zero():
                continue
            out._set_gen_matrix(k, -(d + g), mat.transpose())
    return out


def regular_module(profile: int) -> FDModule:
    """A(n) as a left module over itself, in the Milnor basis."""
    alg = algebra(profile)
    basis = [("Sq(%s)" % ",".join(map(str, t)), int(alg.deg[i])) for i, t in enumerate(alg.basis)]
    m = FDModule(alg, basis, name="A(%d)" % profile)
    for k, g in enumerate(alg.gen_degrees):
        for d in range(alg.top_degree + 1 - g):
            src = alg.basis_indices_of_degree(d)
            tgt = {c: p for p, c in enumerate(alg.basis_indices_of_degree(d + g))}
            if not src or not tgt:
                continue
            mat = BitMatrix.zeros(len(tgt), len(src))
            for p, bidx in enumerate(src):
                mask = int(alg.left_table[alg.gen_index[k], bidx])
                mm = mask
                while mm:
                    c = (mm & -mm).bit_length() - 1
                    mat.set_(tgt[c], p)
                    mm &= mm - 1
            m._set_gen_matrix(k, d, mat)
    return m


class _Echelon:
    """Incremental row echelon over F2 with combination tracking."""

    def __init__(self, width: int):
        self.width = width
        self.rows: list[tuple[BitVector, int]] = []
        self.pivots: dict[int, int] = {}

    @staticmethod
    def _pivot(v: BitVector) -> int:
        for j in range(v.length):
            if v.get(j):
                return j
        return -1

    def reduce(self, v: BitVector) -> tuple[BitVector, int]:
        """Full normal form: eliminate every pivot bit, in increasing order.

        Stored rows have their pivot at the lowest set index, so one
        ascending pass suffices even though the rows are not inter-reduced.
        """
        combo = 0
        w = v.copy()
        for p in sorted(self.pivots):
            if w.get(p):
                row, rc = self.rows[self.pivots[p]]
                w = w.xor(row)
                combo ^= rc
        return w, combo

    def add(self, v: BitVector) -> bool:
        w, _ = self.reduce(v)
        p = self._pivot(w)
        if p < 0:
            return False
        self.pivots[p] = len(self.rows)
        self.rows.append((w, 1 << len(self.rows)))
        return True

    def coords_against(self, v: BitVector, originals: list[BitVector]) -> Optional[list[int]]:
        """Express v in terms of the original added vectors, or None."""
        w, combo = self.reduce(v)
        if self._pivot(w) >= 0:
            return None
        out = []
        i = 0
        while combo:
            if combo & 1:
                out.append(i)
            combo >>= 1
            i += 1
        return out


def submodule_generated(m: FDModule, gens: list[tuple[int, BitVector]], name: str = "sub"):
    """Closure of homogeneous generators under the action.

    Returns (submodule, inclusion map). The submodule basis per degree is an
    echelon basis of the closure, in a deterministic order.
    """
    alg = m.algebra
    span: dict[int, _Echelon] = {}
    originals: dict[int, list[BitVector]] = {}
    queue: list[tuple[int, BitVector]] = []

    def add(d: int, v: BitVector) -> None:
        if v.is_zero():
            return
        ech = span.get(d)
        if ech is None:
            ech = _Echelon(m.dim_at(d))
            span[d] = ech
            originals[d] = []
        w, _ = ech.reduce(v)
        if ech.add(w):
            originals[d].append(w)
            queue.append((d, w))

    for d, v in sorted(gens, key=lambda t: t[0]):
        if v.length != m.dim_at(d):
            raise ValueError("generator vector length mismatch in degree %d" % d)
        add(d, v)
    while queue:
        d, v = queue.pop(0)
        for k, g in enumerate(alg.gen_degrees):
            if m.dim_at(d + g):
                add(d + g, m.gen_matrix(k, d).matvec(v))

    basis: list[tuple[str, int]] = []
    vecs: dict[int, list[BitVector]] = {}
    for d in sorted(span):
        vs = originals[d]
        vecs[d] = vs
        for p in range(len(vs)):
            basis.append(("%s{%d,%d}" % (name, d, p), d))
    sub = FDModule(alg, basis, name=name)

    incl = ModuleMap(sub, m, 0)
    for d, vs in vecs.items():
        mat = BitMatrix.zeros(m.dim_at(d), len(vs))
        for j, v in enumerate(vs):
            for i in v.support():
                mat.set_(i, j)
        incl.mats[d] = mat

    for k, g in enumerate(alg.gen_degrees):
        for d, vs in vecs.items():
            tgt = vecs.get(d + g)
            if not tgt or not vs:
                continue
            ech = span[d + g]
            mat = BitMatrix.zeros(len(tgt), len(vs))
            col_set = False
            for j, v in enumerate(vs):
                w = m.gen_matrix(k, d).matvec(v)
                coords = ech.coords_against(w, tgt)
                if coords is None:
                    raise AssertionError("closure failure: action left the computed span")
                for i in coords:
                    mat.set_(i, j)
                    col_set = True
            if col_set:
                sub._set_gen_matrix(k, d, mat)
    return sub, incl


def quotient(m: FDModule, sub_inclusion: ModuleMap, name: Optional[str] = None) -> FDModule:
    """Degreewise quotient of m by the image of an inclusion of a submodule."""
    if sub_inclusion.target is not m or sub_inclusion.shift != 0:
        raise ValueError("quotient requires an inclusion map into the module")
    alg = m.algebra

    reducers: dict[int, _Echelon] = {}
    rep_cols: dict[int, list[int]] = {}
    for d in m.degrees_present():
        ech = _Echelon(m.dim_at(d))
        mat = sub_inclusion.mats.get(d)
        if mat is not None:
            for j in range(mat.cols):
                col = BitVector(m.dim_at(d))
                for i in range(mat.rows):
                    if mat.get(i, j):
                        col.set_(i)
                ech.add(col)
        reducers[d] = ech
        rep_cols[d] = [i for i in range(m.dim_at(d)) if i not in ech.pivots]

    basis: list[tuple[str, int]] = []
    for d in m.degrees_present():
        idxs = m.basis_at(d)
        for i in rep_cols[d]:
            basis.append(("[%s]" % m.labels[idxs[i]], d))
    q = FDModule(alg, basis, name=name or "quot(%s)" % m.name)

    def project(d: int, v: BitVector) -> BitVector:
        w, _ = reducers[d].reduce(v)
        out = BitVector(len(rep_cols[d]))
        for p, i in enumerate(rep_cols[d]):
            if w.get(i):
                out.set_(p)
        return out

    for k, g in enumerate(alg.gen_degrees):
        for d in m.degrees_present():
            if not rep_cols.get(d) or q.dim_at(d + g) == 0:
                continue
            mat = BitMatrix.zeros(q.dim_at(d + g), q.dim_at(d))
            nonzero = False
            for j, i in enumerate(rep_cols[d]):
                src = BitVector.unit(m.dim_at(d), i)
                img = project(d + g, m.gen_matrix(k, d).matvec(src))
                for t in img.support():
                    mat.set_(t, j)
                    nonzero = True
            if nonzero:
                q._set_gen_matrix(k, d, mat)

    # contract: the subspace must be action-invariant
    for k, g in enumerate(alg.gen_degrees):
        for d in m.degrees_present():
            mat = sub_inclusion.mats.get(d)
            if mat is None:
                continue
            for j in range(mat.cols):
                col = BitVector(m.dim_at(d))
                for i in range(mat.rows):
                    if mat.get(i, j):
                        col.set_(i)
                img = m.gen_matrix(k, d).matvec(col)
                w, _ = reducers[d + g].reduce(img) if (d + g) in reducers else (img, 0)
                if not w.is_zero():
                    raise ValueError("quotient by a non-invariant subspace (degree %d, Sq^%d)" % (d, g))
    return q


def kernel_module(f: ModuleMap, name: str = "ker"):
    """Kernel of a module map, as a module with its inclusion."""
    m = f.source
    gens: list[tuple[int, BitVector]] = []
    for d in m.degrees_present():
        mat = f.matrix(d)
        for v in kernel_basis(mat):
            gens.append((d, v))
    sub, incl = submodule_generated(m, gens, name=name)
    # kernels of module maps are closed under the action already; the
    # closure above must not have grown past the degreewise kernels
    for d in m.degrees_present():
        expect = m.dim_at(d) - f.matrix(d).rank()
        if sub.dim_at(d) != expect:
            raise AssertionError("kernel closure size mismatch in degree %d" % d)
    return sub, incl


@lru_cache(maxsize=None)
def named_module(name: str, profile: int = 2) -> FDModule:
    """The named A(2)-modules used by the chart computations."""
    if profile != 2:
        raise ValueError("named modules are defined over A(2)")
    if name not in NAMED_MODULES:
        raise ValueError("unknown named module %r; known: %s" % (name, ", ".join(NAMED_MODULES)))
    alg = algebra(2)
    reg = regular_module(2)

    def ideal_quotient(annihilators: list[tuple[int, ...]], qname: str) -> FDModule:
        gens = []
        for t in annihilators:
            d, v = reg.unit_vector("Sq(%s)" % ",".join(map(str, t)))
            gens.append((d, v))
        sub, incl = submodule_generated(reg, gens, name="ideal")
        return quotient(reg, incl, name=qname)

    if name == "A2/Sq1":
        return ideal_quotient([(1, 0, 0)], name)
    if name == "A2/Sq2":
        return ideal_quotient([(2, 0, 0)], name)
    if name == "A2//A1":
        return ideal_quotient([(1, 0, 0), (2, 0, 0)], name)
    if name == "A2//E2":
        return ideal_quotient([(1, 0, 0), (0, 1, 0), (0, 0, 1)], name)
    # M10: kill the degree-7 generator orbit of A2//A1
    a2a1 = named_module("A2//A1")
    idxs = a2a1.basis_at(7)
    if len(idxs) != 1:
        raise AssertionError("A2//A1 should be one-dimensional in degree 7")
    sub, incl = submodule_generated(a2a1, [(7, BitVector.unit(1, 0))], name="sigma7")
    m10 = quotient(a2a1, incl, name="M10")
    if sorted(m10.degrees) != [0, 4, 6, 10]:
        raise AssertionError("M10 basis degrees came out as %r" % sorted(m10.degrees))
    return m10

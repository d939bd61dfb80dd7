"""Minimal free resolutions over A(n) and their Ext charts.

The resolution is computed degree by degree: at internal degree t the
kernel of each differential is completed against the image of the level
above, and every completion vector becomes a new free generator. Because
the differentials land in the augmentation ideal, generator counts equal
Ext ranks. Within one homological level the degree steps are sequential;
a finished Resolution is immutable and safe to read concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .f2linalg import BitMatrix, BitVector
from .f2linalg.backend import impl
from .fdmodule import FDModule
from .steenrod import algebra

__all__ = [
    "Resolution",
    "ExtChart",
    "minimal_resolution",
    "ext_chart",
    "structure_lines",
    "filtration_zero_towers",
    "stable_window",
    "WindowTooSmall",
]

LINE_KINDS = ("h0", "h1", "h2")


class WindowTooSmall(ValueError):
    """Raised when a module window cannot certify the requested region."""

    def __init__(self, message: str, required: tuple[int, int]):
        super().__init__(message)
        self.required = required


def stable_window(
    bounds: tuple[Optional[int], Optional[int]],
    max_s: int,
    max_t: int,
    trusted_stems: tuple[int, int],
    profile: int = 2,
) -> tuple[int, int]:
    """Truncation window leaving Ext unchanged in the trusted region.

    For a semi-infinite object the low cutoff keeps a vanishing-line margin
    of (top algebra degree + 1) per homological level below the lowest
    trusted stem; the high cutoff only needs to clear max_t.
    """
    lo_b, hi_b = bounds
    hi = hi_b if hi_b is not None else max_t + 1
    if lo_b is not None:
        lo = lo_b
    else:
        margin = (algebra(profile).top_degree + 1) * (max_s + 1)
        lo = trusted_stems[0] - margin
    return lo, hi


class _Level:
    """Generators of one homological level and their differentials.

    For s >= 1 the differential of generator i is a row of uint64 algebra
    masks indexed by the generators of the level below; rows live in one
    geometrically grown dense array so the assembly kernels can slice it.
    """

    def __init__(self):
        self.degrees: list[int] = []
        self.d0: list[tuple[int, BitVector]] = []  # s == 0: images in the module
        self._dense = np.zeros((8, 8), dtype=np.uint64)
        self._nrows = 0
        self._width = 0

    @property
    def count(self) -> int:
        return len(self.degrees)

    def add_row(self, row: np.ndarray) -> None:
        need_r = self._nrows + 1
        need_c = max(self._width, row.shape[0], 1)
        if need_r > self._dense.shape[0] or need_c > self._dense.shape[1]:
            big = np.zeros(
                (max(need_r, 2 * self._dense.shape[0]), max(need_c, 2 * self._dense.shape[1])),
                dtype=np.uint64,
            )
            big[: self._nrows, : self._width] = self._dense[: self._nrows, : self._width]
            self._dense = big
        self._dense[self._nrows, : row.shape[0]] = row
        self._nrows = need_r
        self._width = need_c

    def dense_rows(self, width: int) -> np.ndarray:
        width = max(width, 1)
        if width > self._dense.shape[1]:
            big = np.zeros((max(self._dense.shape[0], 1), width), dtype=np.uint64)
            big[: self._nrows, : self._width] = self._dense[: self._nrows, : self._width]
            self._dense = big
        return self._dense[: self._nrows, :width]

    def mask(self, gi: int, h: int) -> int:
        if gi >= self._nrows or h >= self._width:
            return 0
        return int(self._dense[gi, h])

    def row_masks(self, gi: int) -> np.ndarray:
        return self._dense[gi, : self._width]


@dataclass
class _FreeBasis:
    """Enumeration of the degree-t slice of a free level."""

    gidx: np.ndarray
    cidx: np.ndarray
    row_of: np.ndarray
    size: int


class Resolution:
    """A minimal free resolution of a bounded module, up to (max_s, max_t)."""

    def __init__(self, module: FDModule, max_s: int, max_t: int):
        self.module = module
        self.algebra = module.algebra
        self.max_s = max_s
        self.max_t = max_t
        self.levels: list[_Level] = [_Level() for _ in range(max_s + 1)]
        self._gens_at: dict[tuple[int, int], list[int]] = {}
        self._compute()

    # -- bookkeeping -----------------------------------------------------

    def gens_at(self, s: int, t: int) -> list[int]:
        return self._gens_at.get((s, t), [])

    def rank(self, s: int, t: int) -> int:
        return len(self.gens_at(s, t))

    def _register(self, s: int, t: int, gen_index: int) -> None:
        self._gens_at.setdefault((s, t), []).append(gen_index)

    def _free_basis(self, s: int, t: int) -> _FreeBasis:
        alg = self.algebra
        lev = self.levels[s]
        gidx: list[int] = []
        cidx: list[int] = []
        row_of = np.full((max(1, lev.count), 64), -1, dtype=np.int32)
        pos = 0
        for g, tg in enumerate(lev.degrees):
            d = t - tg
            if d < 0 or d > alg.top_degree:
                continue
            start, count = alg.degree_slice(d)
            for c in range(start, start + count):
                gidx.append(g)
                cidx.append(c)
                row_of[g, c] = pos
                pos += 1
        return _FreeBasis(
            np.array(gidx, dtype=np.int64),
            np.array(cidx, dtype=np.int64),
            row_of,
            pos,
        )

    # -- the computation ---------------------------------------------------

    def _compute(self) -> None:
        mod = self.module
        if mod.dim == 0:
            return
        alg = self.algebra
        table = alg.left_table
        t_lo = mod.min_degree
        for t in range(t_lo, self.max_t + 1):
            dim_m = mod.dim_at(t)
            words_m = max(1, (dim_m + 63) >> 6)

            # level 0: images of the existing columns inside M_t
            fb0_old = self._free_basis(0, t)
            img_rows = np.zeros((fb0_old.size, words_m), dtype=np.uint64)
            lev0 = self.levels[0]
            for j in range(fb0_old.size):
                g = int(fb0_old.gidx[j])
                c = int(fb0_old.cidx[j])
                dg, vec = lev0.d0[g]
                img_rows[j] = mod.milnor_matrix(c, dg).matvec(vec).data[:words_m]

            ech_mat = img_rows.copy()
            rank_e, piv_e = impl.rref(ech_mat, dim_m)
            ech_mat = ech_mat[:rank_e]
            cand = np.zeros((dim_m, words_m), dtype=np.uint64)
            for i in range(dim_m):
                impl.set_bit(cand[i], i)
            raw_units = cand.copy()
            impl.reduce_against(cand, ech_mat, piv_e)
            small = _PackedEchelon(dim_m)
            new_rows = []
            for i in range(dim_m):
                r = small.reduce(cand[i].copy())
                if r.any():
                    small.add(r)
                    gen_idx = lev0.count
                    lev0.degrees.append(t)
                    lev0.d0.append((t, BitVector(dim_m, raw_units[i].copy())))
                    self._register(0, t, gen_idx)
                    new_rows.append(raw_units[i])
            if new_rows:
                img_rows = np.vstack([img_rows, np.array(new_rows, dtype=np.uint64)])

            # kernel of d_0 in degree t, coordinates over the full (F_0)_t basis
            ncols0 = img_rows.shape[0]
            mat_a = impl.transpose(img_rows, ncols0, dim_m) if ncols0 else np.zeros((dim_m, 1), dtype=np.uint64)
            rank, piv = impl.rref(mat_a, ncols0)
            kernel = impl.nullspace_from_rref(mat_a, piv, rank, ncols0)

            # higher levels
            for s in range(self.max_s):
                fb_s = self._free_basis(s, t)
                lev_up = self.levels[s + 1]
                fb_up = self._free_basis(s + 1, t)
                dense = lev_up.dense_rows(self.levels[s].count)
                words_s = max(1, (fb_s.size + 63) >> 6)
                b_rows = np.zeros((fb_up.size, words_s), dtype=np.uint64)
                impl.build_image_rows(fb_up.gidx, fb_up.cidx, dense, table, fb_s.row_of, b_rows)

                ech_mat = b_rows.copy()
                rank_e, piv_e = impl.rref(ech_mat, fb_s.size)
                ech_mat = ech_mat[:rank_e]
                kern = kernel.copy()
                impl.reduce_against(kern, ech_mat, piv_e)
                small = _PackedEchelon(fb_s.size)
                added = []
                for j in range(kern.shape[0]):
                    r = small.reduce(kern[j].copy())
                    if not r.any():
                        continue
                    small.add(r.copy())
                    gen_idx = lev_up.count
                    lev_up.degrees.append(t)
                    lev_up.add_row(self._decode(fb_s, r))
                    self._register(s + 1, t, gen_idx)
                    added.append(r)
                if s + 1 < self.max_s:
                    if added:
                        b_rows = np.vstack([b_rows, np.array(added, dtype=np.uint64)])
                    nc = b_rows.shape[0]
                    mat_a = impl.transpose(b_rows, nc, fb_s.size) if nc else np.zeros((fb_s.size, 1), dtype=np.uint64)
                    rank, piv = impl.rref(mat_a, nc)
                    kernel = impl.nullspace_from_rref(mat_a, piv, rank, nc)

    def _decode(self, fb: _FreeBasis, packed: np.ndarray) -> np.ndarray:
        """Unpack a kernel vector into algebra masks per target generator."""
        alg = self.algebra
        out = np.zeros(max(1, fb.row_of.shape[0]), dtype=np.uint64)
        for j in range(fb.size):
            w, b = j >> 6, j & 63
            if (int(packed[w]) >> b) & 1:
                c = int(fb.cidx[j])
                if c == alg.unit:
                    raise AssertionError("minimality violated: unit coefficient in a differential")
                out[int(fb.gidx[j])] ^= np.uint64(1 << c)
        return out

    # -- exactness checks (used by tests) ---------------------------------

    def check_dd_zero(self) -> bool:
        alg = self.algebra
        for s in range(2, self.max_s + 1):
            lev = self.levels[s]
            below = self.levels[s - 1]
            for gi in range(lev.count):
                row = lev.row_masks(gi)
                acc: dict[int, int] = {}
                for h in range(row.shape[0]):
                    m = int(row[h])
                    if not m:
                        continue
                    hrow = below.row_masks(h)
                    for f in range(hrow.shape[0]):
                        if int(hrow[f]):
                            acc[f] = acc.get(f, 0) ^ alg.mul_masks(m, int(hrow[f]))
                if any(v for v in acc.values()):
                    return False
        lev1 = self.levels[1] if self.max_s >= 1 else None
        if lev1 is not None:
            mod = self.module
            lev0 = self.levels[0]
            for gi in range(lev1.count):
                row = lev1.row_masks(gi)
                total: Optional[BitVector] = None
                for h in range(row.shape[0]):
                    m = int(row[h])
                    if not m:
                        continue
                    dh, vec = lev0.d0[h]
                    img = mod.mask_matrix(m, dh).matvec(vec)
                    total = img if total is None else total.xor(img)
                if total is not None and not total.is_zero():
                    return False
        return True

    def check_minimal(self) -> bool:
        unit = self.algebra.unit
        for s in range(1, self.max_s + 1):
            lev = self.levels[s]
            for gi in range(lev.count):
                row = lev.row_masks(gi)
                for h in range(row.shape[0]):
                    if (int(row[h]) >> unit) & 1:
                        return False
        return True


class _PackedEchelon:
    """Row echelon of packed uint64 rows with leftmost-bit pivoting."""

    def __init__(self, width: int):
        self.width = width
        self.rows: dict[int, np.ndarray] = {}

    def _pivot(self, row: np.ndarray) -> int:
        for w in range(row.shape[0]):
            v = int(row[w])
            if v:
                return (w << 6) + ((v & -v).bit_length() - 1)
        return -1

    def reduce(self, row: np.ndarray) -> np.ndarray:
        while True:
            p = self._pivot(row)
            if p < 0 or p not in self.rows:
                return row
            row ^= self.rows[p]

    def add(self, row: np.ndarray) -> bool:
        row = self.reduce(row)
        p = self._pivot(row)
        if p < 0:
            return False
        self.rows[p] = row
        return True


def minimal_resolution(m: FDModule, max_s: int, max_t: int) -> Resolution:
    """Compute a minimal free resolution of m through bidegree (max_s, max_t).

    The caller is responsible for having verified the module action
    (fdmodule.verify_action) and for choosing a window compatible with the
    region it intends to trust (see stable_window).
    """
    return Resolution(m, max_s, max_t)


# -- charts ---------------------------------------------------------------


@dataclass
class ExtChart:
    """Bigraded Ext ranks with h0/h1/h2 structure lines."""

    algebra: str
    module: str
    max_s: int
    max_t: int
    stem_min: int
    stem_max: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    lines: list[tuple[str, tuple[int, int, int], tuple[int, int, int]]] = field(default_factory=list)

    def rank(self, s: int, t: int) -> int:
        return self.entries.get((s, t), 0)

    def in_region(self, s: int, stem: int) -> bool:
        return 0 <= s <= self.max_s and self.stem_min <= stem <= self.stem_max

    def region_overlap(self, other: "ExtChart") -> tuple[int, int, int]:
        return (
            min(self.max_s, other.max_s),
            max(self.stem_min, other.stem_min),
            min(self.stem_max, other.stem_max),
        )

    def stem_entries(self, stem: int) -> list[tuple[int, int]]:
        return sorted((s, r) for (s, t), r in self.entries.items() if t - s == stem)


def structure_lines(res: Resolution, kind: str) -> list[tuple[str, tuple, tuple]]:
    """h-multiplication lines between resolution generators.

    A line runs from generator (s, t, i) to (s+1, t + 2^k, j) exactly when
    the i-component of the j-th differential has nonzero image in the
    indecomposables of the algebra in degree 2^k (the lifted product
    cocycle evaluated on the generator).
    """
    k = LINE_KINDS.index(kind)
    alg = res.algebra
    if k >= len(alg.gen_degrees):
        raise ValueError("%s lines are not defined over A(%d)" % (kind, alg.n))
    if res.max_s < 1:
        raise ValueError("structure lines need the resolution one level beyond the query region")
    g = alg.gen_degrees[k]
    out = []
    for s in range(res.max_s):
        lev_up = res.levels[s + 1]
        for (ss, t), gens in res._gens_at.items():
            if ss != s + 1:
                continue
            src = res.gens_at(s, t - g)
            if not src:
                continue
            for j_ord, j in enumerate(gens):
                for i_ord, i in enumerate(src):
                    mask = lev_up.mask(j, i)
                    if mask and alg.reduce_mod_decomposables(mask, g):
                        out.append((kind, (s, t - g, i_ord), (s + 1, t, j_ord)))
    out.sort()
    return out


def ext_chart(
    res: Resolution,
    module_name: Optional[str] = None,
    stem_min: Optional[int] = None,
    stem_max: Optional[int] = None,
) -> ExtChart:
    """Chart of generator counts and structure lines for a resolution.

    For a module flagged as a low truncation of a semi-infinite object the
    caller must pass a trusted stem range compatible with the stability
    margin, or the chart is refused with the window that would be needed.
    """
    mod = res.module
    if stem_max is None:
        stem_max = res.max_t - res.max_s
    if getattr(mod, "truncated_below", False):
        if stem_min is None:
            raise WindowTooSmall(
                "module is a low truncation; pass the trusted stem range",
                required=(res.max_t - res.max_s, res.max_t + 1),
            )
        margin = (res.algebra.top_degree + 1) * (res.max_s + 1)
        required_lo = stem_min - margin
        if mod.min_degree is not None and mod.min_degree > required_lo:
            raise WindowTooSmall(
                "window bottom %d cannot certify stems >= %d with s <= %d; need lo <= %d"
                % (mod.min_degree, stem_min, res.max_s, required_lo),
                required=(required_lo, res.max_t + 1),
            )
    if stem_min is None:
        stem_min = mod.min_degree if mod.min_degree is not None else 0
    chart = ExtChart(
        algebra="A%d" % res.algebra.n,
        module=module_name if module_name is not None else mod.name,
        max_s=res.max_s,
        max_t=res.max_t,
        stem_min=stem_min,
        stem_max=stem_max,
    )
    for (s, t), gens in sorted(res._gens_at.items()):
        if gens:
            chart.entries[(s, t)] = len(gens)
    for kind_i in range(len(res.algebra.gen_degrees)):
        chart.lines.extend(structure_lines(res, LINE_KINDS[kind_i]))
    chart.lines.sort()
    return chart


def filtration_zero_towers(chart: ExtChart, stem: int) -> list[int]:
    """Lengths of maximal h0-line chains rooted at the s = 0 classes of a stem.

    A chain of length L bounds the group order by 2^L. A chain that is
    still alive at the top of the computed range is reported with length
    max_s + 1 (it runs the full certified filtration range).
    """
    if not (chart.stem_min <= stem <= chart.stem_max):
        raise ValueError("stem %d outside the certified range [%d, %d]" % (stem, chart.stem_min, chart.stem_max))
    targets: dict[tuple[int, int, int], list[tuple[int, int, int]]] = {}
    for kind, a, b in chart.lines:
        if kind == "h0":
            targets.setdefault(a, []).append(b)
    roots = chart.rank(0, stem)
    out = []
    for i in range(roots):
        support = {(0, stem, i)}
        length = 1
        while support and length <= chart.max_s:
            nxt: set[tuple[int, int, int]] = set()
            for node in support:
                for tgt in targets.get(node, ()):  # entries are mod-2 coefficients
                    if tgt in nxt:
                        nxt.discard(tgt)
                    else:
                        nxt.add(tgt)
            if not nxt:
                break
            support = nxt
            length += 1
        out.append(length)
    return sorted(out)

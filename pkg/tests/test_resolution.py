import pytest

from extforge.fdmodule import (
    dualize,
    named_module,
    stunted_cp,
    stunted_rp,
    suspend,
    tensor,
    trivial_module,
)
from extforge.resolution import (
    ExtChart,
    ext_chart,
    filtration_zero_towers,
    minimal_resolution,
    stable_window,
    structure_lines,
)


def bo_rank(stem: int, s: int) -> int:
    """Closed form of the Ext-over-A(1) chart, periodic with period (8, 4)."""
    if stem < 0 or s < 0:
        return 0
    q, r = divmod(stem, 8)
    sp = s - 4 * q
    if sp < 0:
        return 0
    if r == 0:
        return 1
    if (r, sp) in ((1, 1), (2, 2)):
        return 1
    if r == 4 and sp >= 3:
        return 1
    return 0


def bo_lines(max_stem: int, max_s: int):
    """h0/h1 lines of the bo chart, in the resolution's line format."""
    lines = set()
    for stem in range(0, max_stem + 1):
        for s in range(0, max_s):
            if bo_rank(stem, s) and bo_rank(stem, s + 1) and stem % 8 in (0, 4):
                lines.add(("h0", (s, stem + s, 0), (s + 1, stem + s + 1, 0)))
            if bo_rank(stem, s) and bo_rank(stem + 1, s + 1) and stem % 8 in (0, 1) and s == 4 * (stem // 8) + stem % 8:
                lines.add(("h1", (s, stem + s, 0), (s + 1, stem + s + 2, 0)))
    return lines


def test_a0_single_tower():
    res = minimal_resolution(trivial_module(profile=0), 6, 10)
    ch = ext_chart(res)
    assert ch.entries == {(s, s): 1 for s in range(7)}
    assert filtration_zero_towers(ch, 0) == [7]


def test_a1_bo_pattern_and_lines():
    res = minimal_resolution(trivial_module(profile=1), 14, 38)
    assert res.check_dd_zero() and res.check_minimal()
    ch = ext_chart(res)
    for stem in range(0, 25):
        for s in range(0, 15):
            if stem + s > 38:
                continue
            assert ch.rank(s, stem + s) == bo_rank(stem, s), (stem, s)
    want = {l for l in bo_lines(24, 14) if l[2][1] <= 38 and l[2][0] <= 14}
    got = {l for l in ch.lines if 0 <= l[1][1] - l[1][0] <= 24 and l[2][1] <= 38}
    assert got == want


def test_empty_module_empty_chart():
    m = trivial_module(profile=1)
    # a window with no cells
    empty = stunted_rp(5, 5)
    egens = [empty.unit_vector("x^5")]
    from extforge.fdmodule import quotient, submodule_generated

    sub, incl = submodule_generated(empty, egens)
    zero = quotient(empty, incl)
    res = minimal_resolution(zero, 4, 10)
    assert ext_chart(res).entries == {}


def test_m10_is_bo_of_v2():
    res = minimal_resolution(named_module("M10"), 12, 33)
    ch = ext_chart(res)
    for stem in range(0, 21):
        for s in range(0, 13):
            if stem + s > 33:
                continue
            want = sum(bo_rank(stem - 6 * i, s - i) for i in range(0, 4))
            assert ch.rank(s, stem + s) == want, (stem, s)


def test_a2_trivial_module_low_stems():
    # the classical bottom of the chart: the stem-3 chain of length three,
    # nothing in stems 4, 5, 7, one class in stem 6, and the stem-8 column
    # with its infinite tower rooted one step above the isolated class
    res = minimal_resolution(trivial_module(profile=2), 10, 20)
    ch = ext_chart(res)
    assert ch.stem_entries(1) == [(1, 1)]
    assert ch.stem_entries(2) == [(2, 1)]
    assert ch.stem_entries(3) == [(1, 1), (2, 1), (3, 1)]
    assert ch.stem_entries(4) == [] and ch.stem_entries(5) == [] and ch.stem_entries(7) == []
    assert ch.stem_entries(6) == [(2, 1)]
    assert ch.stem_entries(8) == [(s, 1) for s in range(3, 11)]
    assert ch.stem_entries(9) == [(4, 1), (5, 1)]
    assert ch.stem_entries(10) == [(6, 1)]
    h0_in_8 = [l for l in ch.lines if l[0] == "h0" and l[1][1] - l[1][0] == 8]
    assert ("h0", (4, 12, 0), (5, 13, 0)) in h0_in_8  # the tower starts at s = 4
    assert ("h0", (3, 11, 0), (4, 12, 0)) not in h0_in_8  # the s = 3 class is 2-torsion


def test_a2_trivial_module_tmf_portion():
    res = minimal_resolution(trivial_module(profile=2), 9, 28)
    ch = ext_chart(res)
    # stem 14 shows exactly three classes joined by two h0 lines
    assert ch.stem_entries(14) == [(4, 1), (5, 1), (6, 1)]
    h0_in_14 = [l for l in ch.lines if l[0] == "h0" and l[1][1] - l[1][0] == 14]
    assert h0_in_14 == [
        ("h0", (4, 18, 0), (5, 19, 0)),
        ("h0", (5, 19, 0), (6, 20, 0)),
    ]


def test_a2sq2_chart_bottom_pattern():
    res = minimal_resolution(named_module("A2/Sq2"), 8, 20)
    ch = ext_chart(res)
    assert ch.rank(0, 0) == 1 and ch.rank(1, 2) == 1
    assert ("h1", (0, 0, 0), (1, 2, 0)) in ch.lines
    # h0 towers rooted at (stem 3, s = 2) and (stem 7, s = 3)
    assert ch.rank(1, 4) == 0 and ch.rank(2, 5) == 1
    for s in range(2, 8):
        assert ch.rank(s, 3 + s) == 1
    assert ch.rank(2, 9) == 0 and ch.rank(3, 10) == 1
    for s in range(3, 8):
        assert ch.rank(s, 7 + s) == 1


def test_structure_lines_zero_module_and_depth_guard():
    res = minimal_resolution(trivial_module(profile=1), 0, 4)
    with pytest.raises(ValueError):
        structure_lines(res, "h0")
    res = minimal_resolution(trivial_module(profile=1), 3, 8)
    with pytest.raises(ValueError):
        structure_lines(res, "h2")  # no Sq^4 in A(1)


def test_h2_line_on_the_a2_unit():
    # the Sq^4-dual class: a slope line from (0,0) to stem 3, s = 1
    res = minimal_resolution(trivial_module(profile=2), 2, 8)
    ch = ext_chart(res)
    assert ch.rank(1, 4) == 1
    assert ("h2", (0, 0, 0), (1, 4, 0)) in ch.lines
    assert ("h0", (0, 0, 0), (1, 1, 0)) in ch.lines
    assert ("h1", (0, 0, 0), (1, 2, 0)) in ch.lines


def test_filtration_zero_towers_trivial_cases():
    res = minimal_resolution(stunted_rp(3, 12), 6, 14)
    ch = ext_chart(res)
    assert filtration_zero_towers(ch, 4) == []  # no s = 0 class in stem 4
    with pytest.raises(ValueError):
        filtration_zero_towers(ch, 99)


def test_single_space_orders():
    # Z/8, Z/16, Z/2 as filtration-zero tower lengths
    for lo, stem, want in ((-3, -1, [3]), (3, 7, [4]), (-1, -1, [1])):
        m = stunted_rp(lo, stem + 10)
        res = minimal_resolution(m, 8, stem + 9)
        ch = ext_chart(res)
        assert filtration_zero_towers(ch, stem) == want, (lo, stem)


def test_smash_charts_match_expected_groups():
    a = stunted_rp(-3, 25)
    b = stunted_rp(3, 25)
    res = minimal_resolution(tensor(a, b, hi=25), 8, 24)
    ch = ext_chart(res)
    assert filtration_zero_towers(ch, 14) == [3, 4]
    assert ch.rank(0, 15) == 1
    a = stunted_rp(-1, 17)
    b = stunted_rp(-3, 17)
    res = minimal_resolution(tensor(a, b, hi=17), 8, 16)
    ch = ext_chart(res)
    assert filtration_zero_towers(ch, 6) == [1, 3]


def test_window_too_small_refusal():
    from extforge.modlang import build_module, parse_module_expr
    from extforge.resolution import WindowTooSmall

    expr = parse_module_expr("P[..-2]")
    m = build_module(expr, 2, window=(-30, -2))
    assert m.truncated_below
    res = minimal_resolution(m, 3, -3)
    with pytest.raises(WindowTooSmall) as e:
        ext_chart(res, stem_min=-10)
    assert e.value.required[0] == -10 - 24 * 4
    with pytest.raises(WindowTooSmall):
        ext_chart(res)  # trusted range is mandatory for truncations
    wide = build_module(expr, 2, window=(-106, -2))
    res = minimal_resolution(wide, 3, -3)
    chart = ext_chart(res, stem_min=-10)
    assert chart.stem_min == -10


def test_stable_window_formula():
    assert stable_window((None, None), 8, 24, (-1, 15), profile=2) == (-1 - 216, 25)
    assert stable_window((3, None), 8, 24, (7, 7), profile=2) == (3, 25)
    assert stable_window((None, -4), 0, -4, (-10, -10), profile=2) == (-10 - 24, -4)


def test_window_stability_under_enlargement():
    # enlarging the window by one period changes nothing in the region
    def chart_for(lo):
        a = stunted_rp(lo, -2)
        t = tensor(a, a, lo=2 * lo, hi=-4)
        res = minimal_resolution(t, 3, -5)
        return ext_chart(res, stem_min=-14, stem_max=-10)

    base = chart_for(-112)
    bigger = chart_for(-120)
    from extforge.charts import compare

    assert compare(base, bigger).clean


def test_duality_regrade_of_charts():
    # dualize(P[a,b]) and the suspended mirror window resolve identically
    m = stunted_rp(1, 9)
    d = dualize(m)
    s = suspend(stunted_rp(-10, -2), 1)
    chd = ext_chart(minimal_resolution(d, 6, 6))
    chs = ext_chart(minimal_resolution(s, 6, 6))
    assert chd.entries == chs.entries
    assert chd.lines == chs.lines
    c = stunted_cp(2, 16)
    chd = ext_chart(minimal_resolution(dualize(c), 6, 4))
    chs = ext_chart(minimal_resolution(suspend(stunted_cp(-18, -4), 2), 6, 4))
    assert chd.entries == chs.entries


def test_batch_towers_grow_with_window():
    # in the P (x) P chart the number of filtration-0 towers in a stem
    # congruent to 2 mod 4 grows linearly with the window
    def count(lo, hi, stem):
        a = stunted_rp(lo, hi)
        t = tensor(a, a, lo=stem - 2, hi=4)
        res = minimal_resolution(t, 2, 3)
        ch = ext_chart(res, stem_min=stem, stem_max=stem)
        return len(filtration_zero_towers(ch, stem))

    stem = -26
    small = count(-32, 8, stem)
    large = count(-48, 16, stem)
    assert small >= 2
    assert large > small


def test_batch_period_pattern():
    # in the windowed P (x) P chart the filtration-0 towers sit exactly in
    # the stems congruent to 2 mod 4 (the batches, an infinite family in
    # the unbounded model, hence window-grown), run the full filtration
    # range, and everything outside the batches is window-stable
    def chart_for(lo, hi, tlo):
        a = stunted_rp(lo, hi)
        t = tensor(a, a, lo=tlo, hi=6)
        res = minimal_resolution(t, 4, 5)
        return ext_chart(res, stem_min=-16, stem_max=-2)

    ch = chart_for(-40, 12, -60)
    for stem in range(-16, -1):
        towers = filtration_zero_towers(ch, stem)
        if stem % 4 == -2 or stem % 4 == 2:
            assert towers and all(t == 5 for t in towers), (stem, towers)
        else:
            assert towers == [], (stem, towers)
    # the non-batch part of the chart does not move when the window grows
    ch2 = chart_for(-48, 20, -68)
    for (s, t), r in ch.entries.items():
        if (t - s) % 4 != 2 and -16 <= t - s <= -2:
            assert ch2.rank(s, t) == r, (s, t)
    # and the batches strictly grow with the window
    grew = sum(len(filtration_zero_towers(ch2, st)) - len(filtration_zero_towers(ch, st))
               for st in (-14, -10, -6))
    assert grew > 0

"""Serialization, rendering, and diffing of Ext charts.

Chart JSON schema: fields `algebra`, `module`, `region` (max_s, max_t,
stem_min, stem_max), `entries` (array of [s, t, rank]) and `lines` (array
of [kind, [s, t, i], [s, t, i]]). Fixture files carry the same payload
plus `name` and `provenance` (source figure and the exact command that
regenerates them). All functions here are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .resolution import ExtChart

__all__ = [
    "ChartFixture",
    "chart_to_dict",
    "chart_from_dict",
    "save_chart",
    "load_chart",
    "load_fixture",
    "save_fixture",
    "render",
    "compare",
    "DiffReport",
]


def chart_to_dict(c: ExtChart) -> dict:
    return {
        "algebra": c.algebra,
        "module": c.module,
        "region": {
            "max_s": c.max_s,
            "max_t": c.max_t,
            "stem_min": c.stem_min,
            "stem_max": c.stem_max,
        },
        "entries": [[s, t, r] for (s, t), r in sorted(c.entries.items())],
        "lines": [[kind, list(a), list(b)] for kind, a, b in sorted(c.lines)],
    }


def chart_from_dict(d: dict) -> ExtChart:
    reg = d["region"]
    c = ExtChart(
        algebra=d["algebra"],
        module=d["module"],
        max_s=reg["max_s"],
        max_t=reg["max_t"],
        stem_min=reg["stem_min"],
        stem_max=reg["stem_max"],
    )
    for s, t, r in d["entries"]:
        c.entries[(s, t)] = r
    for kind, a, b in d["lines"]:
        c.lines.append((kind, tuple(a), tuple(b)))
    c.lines.sort()
    return c


def save_chart(c: ExtChart, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(chart_to_dict(c), indent=1, sort_keys=True) + "\n")


def load_chart(path: Union[str, Path]) -> ExtChart:
    return chart_from_dict(json.loads(Path(path).read_text()))


@dataclass
class ChartFixture:
    """A checked-in expected chart with its provenance."""

    name: str
    chart: ExtChart
    figure: str
    command: str

    def __post_init__(self):
        if not self.figure or not self.command:
            raise ValueError("fixture provenance must name the figure and the regenerating command")


def save_fixture(f: ChartFixture, path: Union[str, Path]) -> None:
    d = chart_to_dict(f.chart)
    d["name"] = f.name
    d["provenance"] = {"figure": f.figure, "command": f.command}
    Path(path).write_text(json.dumps(d, indent=1, sort_keys=True) + "\n")


def load_fixture(path: Union[str, Path]) -> ChartFixture:
    d = json.loads(Path(path).read_text())
    return ChartFixture(
        name=d["name"],
        chart=chart_from_dict(d),
        figure=d["provenance"]["figure"],
        command=d["provenance"]["command"],
    )


# -- rendering ------------------------------------------------------------

_CELL = 4


def render(c: ExtChart, format: str = "ascii") -> str:
    """Draw a chart with x = t - s and y = s.

    ascii: one row per filtration plus a gap row; multiple classes in one
    spot print as the rank digit. h0 lines are '|', h1 lines '/', h2 lines
    '~' (they jump three stems). svg: dots and segments. Both outputs are
    deterministic functions of the chart.
    """
    if format == "ascii":
        return _render_ascii(c)
    if format == "svg":
        return _render_svg(c)
    raise ValueError("unknown chart format %r" % format)


def _render_ascii(c: ExtChart) -> str:
    stems = list(range(c.stem_min, c.stem_max + 1))
    width = len(stems) * _CELL + 7

    def rank_row(s: int) -> str:
        line = list(("s=%-3d " % s).ljust(width))
        for x, stem in enumerate(stems):
            r = c.rank(s, stem + s)
            if r:
                line[6 + x * _CELL] = str(r) if r < 10 else "*"
        return "".join(line).rstrip()

    def gap_row(s: int) -> str:
        # marks for lines from filtration s up to s + 1
        gap = list(" " * width)
        for kind, a, _b in c.lines:
            if a[0] != s:
                continue
            stem_a = a[1] - a[0]
            if not (c.stem_min <= stem_a <= c.stem_max):
                continue
            col = 6 + (stem_a - c.stem_min) * _CELL
            if kind == "h0":
                gap[col] = "|"
            elif kind == "h1" and col + 2 < width:
                gap[col + 2] = "/"
            elif kind == "h2" and col + 3 < width:
                gap[col + 3] = "~"
        return "".join(gap).rstrip()

    rows = []
    for s in range(c.max_s, -1, -1):
        rows.append(rank_row(s))
        if s > 0:
            rows.append(gap_row(s - 1))
    axis = list(" " * width)
    for x, stem in enumerate(stems):
        for i, ch in enumerate(str(stem)):
            if 6 + x * _CELL + i < width:
                axis[6 + x * _CELL + i] = ch
    rows.append("-" * width)
    rows.append("".join(axis).rstrip())
    header = "%s over %s, stems [%d, %d], s <= %d" % (c.module, c.algebra, c.stem_min, c.stem_max, c.max_s)
    return header + "\n" + "\n".join(rows) + "\n"


def _render_svg(c: ExtChart) -> str:
    unit = 24
    pad = 30
    nx = c.stem_max - c.stem_min + 1
    ny = c.max_s + 1
    w = nx * unit + 2 * pad
    h = ny * unit + 2 * pad

    def px(stem: int, ordinal: int = 0, rank: int = 1) -> float:
        spread = 0 if rank <= 1 else (ordinal - (rank - 1) / 2) * 6
        return pad + (stem - c.stem_min) * unit + unit / 2 + spread

    def py(s: int) -> float:
        return h - pad - s * unit - unit / 2

    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">' % (w, h)]
    out.append('<rect width="%d" height="%d" fill="white"/>' % (w, h))
    for kind, a, b in sorted(c.lines):
        ra, rb = c.rank(a[0], a[1]), c.rank(b[0], b[1])
        x1, y1 = px(a[1] - a[0], a[2], ra), py(a[0])
        x2, y2 = px(b[1] - b[0], b[2], rb), py(b[0])
        out.append(
            '<line x1="%.1f" y1="%.1f" x2="%.1f" y2="%.1f" stroke="black" stroke-width="1"/>'
            % (x1, y1, x2, y2)
        )
    for (s, t), r in sorted(c.entries.items()):
        stem = t - s
        if not (c.stem_min <= stem <= c.stem_max and s <= c.max_s):
            continue
        for i in range(r):
            out.append('<circle cx="%.1f" cy="%.1f" r="2.5" fill="black"/>' % (px(stem, i, r), py(s)))
    for stem in range(c.stem_min, c.stem_max + 1):
        if stem % 4 == 0 or nx <= 12:
            out.append(
                '<text x="%.1f" y="%d" font-size="10" text-anchor="middle">%d</text>'
                % (px(stem), h - 8, stem)
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- diffing ---------------------------------------------------------------


@dataclass
class DiffReport:
    """Mismatches between two charts on the intersection of their regions."""

    region: tuple[int, int, int]  # (max_s, stem_min, stem_max)
    rank_mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)  # (s, t, got, want)
    line_mismatches: list[tuple[str, tuple, tuple, str]] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.rank_mismatches and not self.line_mismatches

    def summary(self) -> str:
        if self.clean:
            return "charts agree on s <= %d, stems [%d, %d]" % self.region
        out = ["%d rank and %d line mismatches on s <= %d, stems [%d, %d]:" % (
            len(self.rank_mismatches), len(self.line_mismatches), *self.region)]
        for s, t, got, want in self.rank_mismatches:
            out.append("  rank (s=%d, t=%d, stem=%d): %d vs %d" % (s, t, t - s, got, want))
        for kind, a, b, where in self.line_mismatches:
            out.append("  %s line %s -> %s only in %s" % (kind, a, b, where))
        return "\n".join(out)


def _line_in_region(line, max_s: int, stem_min: int, stem_max: int) -> bool:
    _, a, b = line
    return (
        a[0] <= max_s
        and b[0] <= max_s
        and stem_min <= a[1] - a[0] <= stem_max
        and stem_min <= b[1] - b[0] <= stem_max
    )


def compare(c: ExtChart, other: Union[ExtChart, ChartFixture]) -> DiffReport:
    """Rank and line differences restricted to the overlapping region."""
    want = other.chart if isinstance(other, ChartFixture) else other
    max_s, stem_min, stem_max = c.region_overlap(want)
    if stem_min > stem_max or max_s < 0:
        raise ValueError(
            "chart regions are disjoint: stems [%d, %d] vs [%d, %d]"
            % (c.stem_min, c.stem_max, want.stem_min, want.stem_max)
        )
    report = DiffReport(region=(max_s, stem_min, stem_max))
    keys = set(c.entries) | set(want.entries)
    for s, t in sorted(keys):
        if s > max_s or not (stem_min <= t - s <= stem_max):
            continue
        got, exp = c.rank(s, t), want.rank(s, t)
        if got != exp:
            report.rank_mismatches.append((s, t, got, exp))
    lines_got = {l for l in c.lines if _line_in_region(l, max_s, stem_min, stem_max)}
    lines_want = {l for l in want.lines if _line_in_region(l, max_s, stem_min, stem_max)}
    for l in sorted(lines_got - lines_want):
        report.line_mismatches.append((l[0], l[1], l[2], "computed"))
    for l in sorted(lines_want - lines_got):
        report.line_mismatches.append((l[0], l[1], l[2], "expected"))
    return report

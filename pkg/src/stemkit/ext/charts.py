"""Ext charts from a minimal resolution, rendered as CSV, text or SVG."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from ..errors import ChartFormatError
from .resolution import Resolution, h_lines

FORMATS = ("csv", "txt", "svg")
Edge = tuple[tuple[int, int, int], tuple[int, int, int]]


@dataclass
class ExtChart:
    max_s: int
    max_t: int
    dims: dict[tuple[int, int], int]
    lines: dict[int, set[Edge]] = field(default_factory=dict)

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def stem(self, n: int) -> dict[int, int]:
        """Filtration -> dimension along stem n."""
        return {s: d for (s, t), d in self.dims.items() if t - s == n}

    @property
    def max_stem(self) -> int:
        return self.max_t - 1


def ext_chart(res: Resolution, with_lines: bool = False) -> ExtChart:
    dims = {}
    for s, col in enumerate(res.columns):
        for t in col.degrees:
            dims[(s, t)] = dims.get((s, t), 0) + 1
    lines = {j: h_lines(res, j) for j in (0, 1, 2)} if with_lines else {}
    return ExtChart(res.max_s, res.max_t, dims, lines)


def _rows(chart: ExtChart) -> list[tuple[int, int, int]]:
    return sorted(((s, t, d) for (s, t), d in chart.dims.items() if d), key=lambda r: (r[1] - r[0], r[0]))


def to_csv(chart: ExtChart) -> str:
    out = ["s,t,dim"]
    out += [f"{s},{t},{d}" for s, t, d in _rows(chart)]
    return "\n".join(out) + "\n"


def to_text(chart: ExtChart) -> str:
    """Grid with stems across and filtration up; each cell shows the dimension."""
    stems = range(0, chart.max_t)
    width = max(2, len(str(chart.max_t)))
    lines = []
    for s in range(chart.max_s, -1, -1):
        cells = []
        for n in stems:
            d = chart.dim(s, n + s) if n + s <= chart.max_t else 0
            cells.append(str(d).rjust(width) if d else ".".rjust(width))
        lines.append(f"{s:>3} |" + " ".join(cells))
    lines.append("    +" + "-" * (len(stems) * (width + 1) - 1))
    lines.append("     " + " ".join(str(n).rjust(width) for n in stems))
    return "\n".join(lines) + "\n"


_CELL = 24
_COLORS = {0: "#1f4e9c", 1: "#b3261e", 2: "#2e7d32"}


def to_svg(chart: ExtChart) -> str:
    stems = chart.max_t
    width = (stems + 1) * _CELL
    height = (chart.max_s + 2) * _CELL

    def centre(s: int, t: int, i: int) -> tuple[float, float]:
        n = _dot_count(chart, s, t)
        offset = (i - (n - 1) / 2) * 5
        x = (t - s + 0.5) * _CELL + offset
        y = height - (s + 1) * _CELL - offset
        return round(x, 2), round(y, 2)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape('Ext chart')}</title>",
        '<g stroke="#ddd" stroke-width="0.5">',
    ]
    for n in range(stems + 1):
        out.append(f'<line x1="{n * _CELL}" y1="0" x2="{n * _CELL}" y2="{height}"/>')
    for s in range(chart.max_s + 2):
        out.append(f'<line x1="0" y1="{s * _CELL}" x2="{width}" y2="{s * _CELL}"/>')
    out.append("</g>")
    for j in sorted(chart.lines):
        out.append(f'<g stroke="{_COLORS[j]}" stroke-width="1">')
        for a, b in sorted(chart.lines[j]):
            if b[1] - b[0] >= stems:
                continue
            (x1, y1), (x2, y2) = centre(*a), centre(*b)
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        out.append("</g>")
    out.append('<g fill="black">')
    for s, t, d in _rows(chart):
        if t - s >= stems:
            continue
        for i in range(d):
            x, y = centre(s, t, i)
            out.append(f'<circle cx="{x}" cy="{y}" r="3"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _dot_count(chart: ExtChart, s: int, t: int) -> int:
    return max(1, chart.dim(s, t))


def emit_chart(chart: ExtChart, fmt: str) -> str:
    fmt = fmt.lower()
    if fmt == "csv":
        return to_csv(chart)
    if fmt in ("txt", "text"):
        return to_text(chart)
    if fmt == "svg":
        return to_svg(chart)
    raise ChartFormatError(f"unknown chart format {fmt!r}; choose one of {', '.join(FORMATS)}")

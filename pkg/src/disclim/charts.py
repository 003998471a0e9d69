"""Renderer-agnostic chart documents, plus a direct SVG heatmap.

A chart document is a canonical JSON text (sorted keys, two-space indent,
shortest round-trip numbers) so identical inputs always serialize to
identical bytes.  Actual plotting is someone else's job; the heatmap is
the one exception because the matrix figure is self-contained enough to
emit as standalone SVG.
"""

from __future__ import annotations

import enum
import json
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .corpus import JoinedTable, align_union, AnnualSeries
from .errors import (
    DataError,
    EmptyMatrixError,
    KindMismatchError,
    MissingIsoCodesError,
)
from .isocodes import IsoCodeTable, load_default_codes
from .metrics import ShareTable, SunburstNode
from .stats import CorrelationMatrix

_CODE_RE = re.compile(r"^[A-Z]{3}$")


class ChartKind(enum.Enum):
    TIME_SERIES = "timeseries"
    DUAL_AXIS = "dualaxis"
    STACKED_AREA = "stackedarea"
    SUNBURST = "sunburst"
    CHOROPLETH = "choropleth"
    HEATMAP = "heatmap"


def parse_chart_kind(name: str) -> ChartKind:
    try:
        return ChartKind(name.strip().lower().replace("-", "").replace("_", ""))
    except ValueError:
        raise KindMismatchError(f"unknown chart kind {name!r}") from None


@dataclass(frozen=True)
class ChartDocument:
    kind: ChartKind
    title: str
    axes: dict
    payload: dict

    def to_text(self) -> str:
        doc = {
            "kind": self.kind.value,
            "title": self.title,
            "axes": self.axes,
            "payload": self.payload,
        }
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_bytes(self) -> bytes:
        return self.to_text().encode("utf-8")


def _as_joined(data) -> JoinedTable:
    if isinstance(data, JoinedTable):
        table = data
    elif isinstance(data, Sequence) and all(isinstance(s, AnnualSeries) for s in data):
        table = align_union(data)
    else:
        raise KindMismatchError(f"expected year-joined series, got {type(data).__name__}")
    if len(set(table.labels)) != len(table.labels):
        raise DataError("series labels are not unique")
    return table


def _series_payload(table: JoinedTable) -> dict:
    return {
        "years": list(table.years),
        "series": [
            {"label": label, "values": list(column)}
            for label, column in zip(table.labels, table.columns)
        ],
    }


def _timeseries(data, title, options) -> ChartDocument:
    table = _as_joined(data)
    return ChartDocument(
        kind=ChartKind.TIME_SERIES,
        title=title or "Time series",
        axes={"x": "year", "y": options.get("units", "")},
        payload=_series_payload(table),
    )


def _dualaxis(data, title, options) -> ChartDocument:
    table = _as_joined(data)
    if len(table.labels) != 2:
        raise KindMismatchError(f"dual-axis needs exactly 2 series, got {len(table.labels)}")
    secondary = options.get("secondary", table.labels[1])
    if secondary not in table.labels:
        raise KindMismatchError(f"secondary series {secondary!r} not among {table.labels}")
    primary = table.labels[0] if secondary != table.labels[0] else table.labels[1]
    return ChartDocument(
        kind=ChartKind.DUAL_AXIS,
        title=title or f"{primary} vs {secondary}",
        axes={"x": "year", "left": primary, "right": secondary},
        payload=_series_payload(table),
    )


def _stackedarea(data, title, options) -> ChartDocument:
    if not isinstance(data, ShareTable):
        raise KindMismatchError(f"stacked area needs a ShareTable, got {type(data).__name__}")
    return ChartDocument(
        kind=ChartKind.STACKED_AREA,
        title=title or "Share of total by year",
        axes={"x": "year", "y": "share of total"},
        payload={
            "years": list(data.years),
            "labels": list(data.labels),
            "shares": [[data.shares[y][label] for label in data.labels] for y in data.years],
            "zero_total_years": sorted(data.zero_total_years),
        },
    )


def _sunburst_node(node: SunburstNode) -> dict:
    return {
        "label": node.label,
        "value": node.value,
        "children": [_sunburst_node(c) for c in node.children],
    }


def _sunburst(data, title, options) -> ChartDocument:
    if not isinstance(data, SunburstNode):
        raise KindMismatchError(f"sunburst needs a SunburstNode, got {type(data).__name__}")
    return ChartDocument(
        kind=ChartKind.SUNBURST,
        title=title or "Hierarchy",
        axes={},
        payload=_sunburst_node(data),
    )


def _choropleth(data, title, options) -> ChartDocument:
    if not isinstance(data, Mapping):
        raise KindMismatchError(f"choropleth needs a name->value mapping, got {type(data).__name__}")
    codes: IsoCodeTable | None = options.get("codes")
    if codes is None:
        codes = load_default_codes()
    values: dict[str, float] = {}
    missing: list[str] = []
    for name in sorted(data):
        if _CODE_RE.match(name):
            code = name
        else:
            entry = codes.normalize(name)
            code = entry.code if entry else None
        if code is None:
            missing.append(name)
            continue
        if code in values:
            raise DataError(f"two entities map to {code}")
        values[code] = float(data[name])
    if missing:
        raise MissingIsoCodesError(missing)
    return ChartDocument(
        kind=ChartKind.CHOROPLETH,
        title=title or "World map values",
        axes={"key": "ISO 3166-1 alpha-3"},
        payload={"values": values},
    )


def _heatmap(data, title, options) -> ChartDocument:
    if not isinstance(data, CorrelationMatrix):
        raise KindMismatchError(f"heatmap needs a CorrelationMatrix, got {type(data).__name__}")
    return ChartDocument(
        kind=ChartKind.HEATMAP,
        title=title or f"{data.method} correlation",
        axes={"rows": "series", "columns": "series"},
        payload={
            "labels": list(data.labels),
            "method": data.method,
            "values": [list(row) for row in data.values],
        },
    )


_EMITTERS = {
    ChartKind.TIME_SERIES: _timeseries,
    ChartKind.DUAL_AXIS: _dualaxis,
    ChartKind.STACKED_AREA: _stackedarea,
    ChartKind.SUNBURST: _sunburst,
    ChartKind.CHOROPLETH: _choropleth,
    ChartKind.HEATMAP: _heatmap,
}


def emit_chart(kind: ChartKind | str, data, title: str | None = None, **options) -> ChartDocument:
    """Build the document for *kind*; inputs must match the kind's schema."""
    if isinstance(kind, str):
        kind = parse_chart_kind(kind)
    return _EMITTERS[kind](data, title, options)


# -- heatmap SVG -------------------------------------------------------------


@dataclass(frozen=True)
class HeatmapStyle:
    """Diverging ramp anchored at -1, 0, +1 plus annotation settings."""

    negative: str = "#2166ac"
    neutral: str = "#f7f7f7"
    positive: str = "#b2182b"
    precision: int = 2
    cell_size: int = 52


def ramp_position(value: float) -> float:
    """Map a coefficient in [-1, 1] to [0, 1], strictly increasing."""
    if not -1.0 <= value <= 1.0:
        raise DataError(f"coefficient out of range: {value!r}")
    return (value + 1.0) / 2.0


def _hex_to_rgb(color: str) -> tuple[int, int, int]:
    return tuple(int(color[i : i + 2], 16) for i in (1, 3, 5))  # type: ignore[return-value]


def _rgb_to_hex(rgb: tuple[float, float, float]) -> str:
    return "#%02x%02x%02x" % tuple(int(round(c)) for c in rgb)


def _lerp(a: tuple[int, int, int], b: tuple[int, int, int], t: float) -> str:
    return _rgb_to_hex(tuple(a[i] + (b[i] - a[i]) * t for i in range(3)))


def ramp_color(value: float, style: HeatmapStyle = HeatmapStyle()) -> str:
    """Interpolated fill for a coefficient: linear in each half of the ramp."""
    ramp_position(value)  # bounds check
    if value < 0:
        return _lerp(_hex_to_rgb(style.negative), _hex_to_rgb(style.neutral), value + 1.0)
    return _lerp(_hex_to_rgb(style.neutral), _hex_to_rgb(style.positive), value)


def _luminance(color: str) -> float:
    r, g, b = _hex_to_rgb(color)
    return 0.2126 * r + 0.7152 * g + 0.0722 * b


def render_heatmap_svg(matrix: CorrelationMatrix, style: HeatmapStyle = HeatmapStyle()) -> bytes:
    """Standalone SVG: one annotated cell per pair, hatch for undefined."""
    if matrix.size == 0:
        raise EmptyMatrixError("matrix has no series")
    k = matrix.size
    cell = style.cell_size
    left, top = 190, 150
    legend_w, pad = 60, 20
    width = left + k * cell + legend_w + pad
    height = top + k * cell + pad

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<defs>",
        '<pattern id="undef" width="8" height="8" patternUnits="userSpaceOnUse" '
        'patternTransform="rotate(45)">'
        '<rect width="8" height="8" fill="#ececec"/>'
        '<line x1="0" y1="0" x2="0" y2="8" stroke="#9a9a9a" stroke-width="2"/>'
        "</pattern>",
        '<linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0">'
        f'<stop offset="0" stop-color="{style.negative}"/>'
        f'<stop offset="0.5" stop-color="{style.neutral}"/>'
        f'<stop offset="1" stop-color="{style.positive}"/>'
        "</linearGradient>",
        "</defs>",
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{left}" y="24" font-family="sans-serif" font-size="16" '
        f'fill="#111111">{_escape(matrix.method)} correlation</text>',
    ]

    for j, label in enumerate(matrix.labels):
        x = left + j * cell + cell // 2
        parts.append(
            f'<text x="{x}" y="{top - 8}" font-family="sans-serif" font-size="11" '
            f'fill="#111111" text-anchor="start" '
            f'transform="rotate(-55 {x} {top - 8})">{_escape(label)}</text>'
        )
    for i, label in enumerate(matrix.labels):
        y = top + i * cell + cell // 2 + 4
        parts.append(
            f'<text x="{left - 8}" y="{y}" font-family="sans-serif" font-size="11" '
            f'fill="#111111" text-anchor="end">{_escape(label)}</text>'
        )

    for i in range(k):
        for j in range(k):
            x = left + j * cell
            y = top + i * cell
            value = matrix.values[i][j]
            if value is None:
                parts.append(
                    f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                    f'fill="url(#undef)" stroke="#ffffff"/>'
                )
                continue
            fill = ramp_color(value, style)
            text_fill = "#111111" if _luminance(fill) > 140 else "#ffffff"
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{fill}" stroke="#ffffff"/>'
            )
            parts.append(
                f'<text x="{x + cell // 2}" y="{y + cell // 2 + 4}" '
                f'font-family="sans-serif" font-size="11" fill="{text_fill}" '
                f'text-anchor="middle">{value:.{style.precision}f}</text>'
            )

    bar_x = left + k * cell + pad
    bar_h = k * cell
    parts.append(
        f'<rect x="{bar_x}" y="{top}" width="16" height="{bar_h}" fill="url(#ramp)" '
        f'stroke="#cccccc"/>'
    )
    for tick, frac in (("+1", 0.0), ("0", 0.5), ("-1", 1.0)):
        y = top + int(bar_h * frac)
        parts.append(
            f'<text x="{bar_x + 22}" y="{y + 4}" font-family="sans-serif" '
            f'font-size="11" fill="#111111">{tick}</text>'
        )

    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")

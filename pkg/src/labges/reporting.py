"""Render a footprint result as the regulatory CSV, synthetic tables and SVG charts.

All renderers are pure and byte-deterministic: no timestamps or random
identifiers are embedded, so identical inputs give identical outputs.
Labels are hard-coded in both French and English.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .engine import (
    CATEGORY_LABELS_EN,
    CATEGORY_LABELS_FR,
    BreakdownRow,
    FootprintResult,
    RegulatoryCategory,
    RegulatoryTable,
    Scope,
    SyntheticFootprint,
)

LOCALES = ("fr", "en")


class EmptyChart(ValueError):
    """There is nothing to draw: the chart total is zero."""


def _check_locale(locale: str) -> str:
    if locale not in LOCALES:
        raise ValueError(f"unsupported locale {locale!r}; expected one of {LOCALES}")
    return locale


_SCOPE_SUBTOTAL = {
    "en": {1: "Scope 1 subtotal", 2: "Scope 2 subtotal", 3: "Scope 3 subtotal"},
    "fr": {1: "Sous-total scope 1", 2: "Sous-total scope 2", 3: "Sous-total scope 3"},
}
_TOTAL_LABEL = {"en": "Total", "fr": "Total"}


def render_regulatory_csv(table: RegulatoryTable, locale: str = "en") -> bytes:
    """The 23-category statement: category rows, scope subtotals, total.

    Columns: category number, localized label, kg CO2e, uncertainty (kg),
    both rounded to whole kilograms. 27 lines, LF endings, UTF-8.
    """
    _check_locale(locale)
    labels = CATEGORY_LABELS_FR if locale == "fr" else CATEGORY_LABELS_EN
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    for scope in Scope:
        for row in table.rows:
            if row.category.scope is not scope:
                continue
            writer.writerow(
                [
                    row.category.value,
                    labels[row.category],
                    round(row.co2e_kg),
                    round(row.uncertainty_kg),
                ]
            )
        writer.writerow(
            [
                "",
                _SCOPE_SUBTOTAL[locale][scope.value],
                round(table.scope_subtotals[scope.value]),
                round(table.scope_uncertainties[scope.value]),
            ]
        )
    writer.writerow(["", _TOTAL_LABEL[locale], round(table.total_kg), round(table.total_uncertainty_kg)])
    return out.getvalue().encode("utf-8")


_SYNTHETIC_ROWS = (
    ("buildings", "Carbon footprint of the buildings", "Empreinte carbone des bâtiments"),
    ("buildings_heating", "- Heating", "- Chauffage"),
    ("buildings_electricity", "- Electricity", "- Électricité"),
    ("buildings_refrigerants", "- Refrigerant gases", "- Gaz réfrigérants"),
    ("travel", "Travel carbon footprint", "Empreinte carbone des déplacements"),
    ("travel_commutes", "- Commutes", "- Trajets domicile-travail"),
    ("travel_vehicles", "- Vehicles", "- Véhicules"),
    ("travel_professional", "- Professional travel", "- Déplacements professionnels"),
)


@dataclass(frozen=True)
class SyntheticRendering:
    json_bytes: bytes
    text_table: str


def render_synthetic(footprint: SyntheticFootprint, locale: str = "en") -> SyntheticRendering:
    """Synthetic footprint as JSON bytes plus an aligned text table.

    Rows follow the fixed buildings-then-travel order; shares are
    percentages of the grand total rounded to the nearest point, rendered
    as an en dash when the total is zero.
    """
    _check_locale(locale)
    total = footprint.total_kg

    def value_of(key: str) -> float:
        if key == "buildings":
            return footprint.buildings_total
        if key == "travel":
            return footprint.travel_total
        return footprint.leaves[key]

    rows = []
    for key, label_en, label_fr in _SYNTHETIC_ROWS:
        value = value_of(key)
        rows.append(
            {
                "key": key,
                "label": label_fr if locale == "fr" else label_en,
                "co2e_kg": value,
                "share_percent": round(100.0 * value / total) if total > 0 else None,
            }
        )
    payload = {"rows": rows, "total_kg": total}
    json_bytes = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")

    label_width = max(len(str(r["label"])) for r in rows) + 2
    lines = []
    header_label = "Empreinte carbone" if locale == "fr" else "Carbon footprint"
    lines.append(f"{header_label:<{label_width}}{'kg CO2e':>12}  {'share':>6}")
    for r in rows:
        share = f"{r['share_percent']}%" if r["share_percent"] is not None else "–"
        lines.append(f"{str(r['label']):<{label_width}}{round(float(r['co2e_kg'])):>12}  {share:>6}")
    total_share = "100%" if total > 0 else "–"
    lines.append(f"{_TOTAL_LABEL[locale]:<{label_width}}{round(total):>12}  {total_share:>6}")
    return SyntheticRendering(json_bytes=json_bytes, text_table="\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# SVG charts
# ---------------------------------------------------------------------------

_PALETTE = ("#b65d40", "#d9a441", "#7a8b5c", "#4f7286", "#8a6d9e", "#b0413e", "#5ea28d", "#c77e9a")

_LEAF_LABELS = {
    "buildings_heating": {"en": "Heating", "fr": "Chauffage"},
    "buildings_electricity": {"en": "Electricity", "fr": "Électricité"},
    "buildings_refrigerants": {"en": "Refrigerant gases", "fr": "Gaz réfrigérants"},
    "travel_commutes": {"en": "Commutes", "fr": "Domicile-travail"},
    "travel_vehicles": {"en": "Vehicles", "fr": "Véhicules"},
    "travel_professional": {"en": "Professional travel", "fr": "Déplacements professionnels"},
}


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def _fmt_kg(value: float) -> str:
    return f"{round(value):,}".replace(",", " ")


def render_pie_svg(footprint: SyntheticFootprint, locale: str = "en", title: str = "") -> bytes:
    """Pie of the six synthetic leaves; one slice per non-zero leaf.

    Deterministic bytes for identical inputs. Raises EmptyChart when the
    total is zero.
    """
    _check_locale(locale)
    total = footprint.total_kg
    if total <= 0:
        raise EmptyChart("synthetic footprint total is zero")
    slices = [
        (name, footprint.leaves[name])
        for name in _LEAF_LABELS
        if footprint.leaves[name] > 0
    ]

    width, height = 640, 360
    cx, cy, radius = 180.0, 180.0, 140.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{cx:.1f}" y="24" text-anchor="middle" font-size="14" '
            f'font-family="sans-serif">{_esc(title)}</text>'
        )

    if len(slices) == 1:
        name, value = slices[0]
        parts.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{radius:.1f}" fill="{_PALETTE[0]}"/>')
    else:
        angle = -math.pi / 2  # start at 12 o'clock, clockwise
        for i, (name, value) in enumerate(slices):
            sweep = 2 * math.pi * (value / total)
            x0 = cx + radius * math.cos(angle)
            y0 = cy + radius * math.sin(angle)
            angle += sweep
            x1 = cx + radius * math.cos(angle)
            y1 = cy + radius * math.sin(angle)
            large = 1 if sweep > math.pi else 0
            parts.append(
                f'<path d="M{cx:.2f},{cy:.2f} L{x0:.2f},{y0:.2f} '
                f'A{radius:.2f},{radius:.2f} 0 {large} 1 {x1:.2f},{y1:.2f} Z" '
                f'fill="{_PALETTE[i % len(_PALETTE)]}" stroke="white" stroke-width="1"/>'
            )

    legend_x, legend_y = 360, 70
    for i, (name, value) in enumerate(slices):
        label = _LEAF_LABELS[name]["fr" if locale == "fr" else "en"]
        percent = round(100.0 * value / total)
        y = legend_y + i * 26
        parts.append(
            f'<rect x="{legend_x}" y="{y - 11}" width="14" height="14" fill="{_PALETTE[i % len(_PALETTE)]}"/>'
        )
        parts.append(
            f'<text x="{legend_x + 22}" y="{y}" font-size="13" font-family="sans-serif">'
            f"{_esc(label)} – {_fmt_kg(value)} kg ({percent}%)</text>"
        )
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


_AXIS_LABELS = {
    "purpose": {
        "field_study": {"en": "Field study", "fr": "Etude terrain"},
        "conference": {"en": "Conference", "fr": "Colloque-Congrès"},
        "seminar": {"en": "Seminar", "fr": "Séminaire"},
        "teaching": {"en": "Teaching", "fr": "Enseignement"},
        "collaboration": {"en": "Collaboration", "fr": "Collaboration"},
        "visit": {"en": "Visit", "fr": "Visite"},
        "research_admin": {"en": "Research administration", "fr": "Administration de la recherche"},
        "other": {"en": "Other", "fr": "Autre"},
        "unknown": {"en": "Unknown", "fr": "Inconnu"},
    },
    "status": {
        "researcher": {"en": "Researchers", "fr": "Chercheur.e.s-EC"},
        "technician_admin": {"en": "Technicians & admin", "fr": "ITA"},
        "phd_postdoc": {"en": "PhD & postdocs", "fr": "Doc-Post doc"},
        "guest": {"en": "Guests", "fr": "Personnes invitées"},
        "unknown": {"en": "Unknown", "fr": "Inconnu"},
    },
}


def _axis_label(axis: str, value: str, locale: str) -> str:
    table = _AXIS_LABELS.get(axis, {})
    if value in table:
        return table[value][locale]
    return value.replace("_", " ")


def render_bar_svg(
    breakdown: Sequence[BreakdownRow], axis: str = "", locale: str = "en", title: str = ""
) -> bytes:
    """Horizontal bar chart of a travel breakdown, one bar per non-zero row."""
    _check_locale(locale)
    rows = [row for row in breakdown if row.co2e_kg > 0]
    if not rows:
        raise EmptyChart("breakdown has no non-zero rows")

    bar_height, gap, left, right_pad, top = 26, 10, 230, 130, 46
    width = 720
    height = top + len(rows) * (bar_height + gap) + 24
    max_value = max(row.co2e_kg for row in rows)
    scale = (width - left - right_pad) / max_value

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{left}" y="24" font-size="14" font-family="sans-serif">{_esc(title)}</text>'
        )
    for i, row in enumerate(rows):
        y = top + i * (bar_height + gap)
        label = _axis_label(axis, row.value, locale)
        bar_w = row.co2e_kg * scale
        parts.append(
            f'<text x="{left - 10}" y="{y + bar_height - 8}" text-anchor="end" font-size="13" '
            f'font-family="sans-serif">{_esc(label)}</text>'
        )
        parts.append(
            f'<rect x="{left}" y="{y}" width="{bar_w:.2f}" height="{bar_height}" '
            f'fill="{_PALETTE[i % len(_PALETTE)]}"/>'
        )
        parts.append(
            f'<text x="{left + bar_w + 8:.2f}" y="{y + bar_height - 8}" font-size="12" '
            f'font-family="sans-serif">{_fmt_kg(row.co2e_kg)} kg ({round(100 * row.share)}%)</text>'
        )
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Bundles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReportBundle:
    """The downloadable outputs for one computed inventory."""

    regulatory_csv: bytes
    synthetic_json: bytes
    synthetic_text: str
    charts: Mapping[str, bytes]


_CHART_TITLES = {
    "synthetic_pie": {"en": "Carbon footprint by source", "fr": "Empreinte carbone par source"},
    "travel_by_purpose": {"en": "Professional travel by purpose", "fr": "Déplacements professionnels par motif"},
    "travel_by_status": {"en": "Professional travel by status", "fr": "Déplacements professionnels par statut"},
}


def build_report_bundle(result: FootprintResult, locale: str = "en") -> ReportBundle:
    """Render every report; charts that would be empty are omitted."""
    _check_locale(locale)
    synthetic = render_synthetic(result.synthetic, locale)
    charts: dict[str, bytes] = {}
    try:
        charts["synthetic_pie"] = render_pie_svg(
            result.synthetic, locale, title=_CHART_TITLES["synthetic_pie"][locale]
        )
    except EmptyChart:
        pass
    for axis, chart_name in (("purpose", "travel_by_purpose"), ("status", "travel_by_status")):
        try:
            charts[chart_name] = render_bar_svg(
                result.breakdowns.get(axis, ()), axis, locale, title=_CHART_TITLES[chart_name][locale]
            )
        except EmptyChart:
            pass
    return ReportBundle(
        regulatory_csv=render_regulatory_csv(result.regulatory, locale),
        synthetic_json=synthetic.json_bytes,
        synthetic_text=synthetic.text_table,
        charts=charts,
    )


def report_filename(lab_name: str, year: int, report: str, ext: str) -> str:
    """Conventional output name: {lab}_{year}_{report}.{ext}."""
    slug = "".join(ch if ch.isalnum() else "_" for ch in lab_name.lower()).strip("_") or "lab"
    while "__" in slug:
        slug = slug.replace("__", "_")
    return f"{slug}_{year}_{report}.{ext}"

"""Comparison reports over solved configurations.

Row conventions copy the published tables: lightpath counts carry the
protection-LSP-carrying count in brackets, wavelength counts carry the
interlayer-BRS extra wavelengths in brackets, costs print with 0 decimals and
traffic with 1.  The CSV and table renderings contain identical numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .modes import SurvivabilityMode
from .planner import NetworkConfiguration

__all__ = [
    "ReportColumn",
    "report_columns",
    "relative_difference",
    "emit_report",
    "fmt_cost",
    "fmt_traffic",
]

ROWS = ("Transit traffic (Gbps)", "# of lightpaths", "# of wavelengths",
        "Total cost", "Optical layer cost")


def _round_half_up(x: Fraction, digits: int = 0) -> Fraction:
    scale = Fraction(10) ** digits
    scaled = x * scale
    whole = scaled.numerator // scaled.denominator
    if 2 * (scaled - whole) >= 1:
        whole += 1
    return Fraction(whole, 1) / scale


def fmt_cost(x) -> str:
    return str(int(_round_half_up(Fraction(x))))


def fmt_traffic(x) -> str:
    v = _round_half_up(Fraction(x), 1)
    return f"{float(v):.1f}"


@dataclass(frozen=True)
class ReportColumn:
    label: str
    transit: str
    lightpaths: str
    wavelengths: str
    total: str
    optical: str
    total_exact: Fraction

    def cells(self) -> tuple[str, ...]:
        return (self.transit, self.lightpaths, self.wavelengths,
                self.total, self.optical)


def report_columns(configs: Sequence[tuple[str, NetworkConfiguration]]
                   ) -> list[ReportColumn]:
    cols = []
    for label, cfg in configs:
        counts = cfg.counts()
        lp_text = str(counts.lightpaths)
        if cfg.mode is not SurvivabilityMode.NONE:
            lp_text += f" ({cfg.protection_carrying_lightpaths()})"
        wl_text = str(counts.wavelengths)
        if cfg.mode is SurvivabilityMode.ML_INTERLAYER_BRS:
            wl_text += f" ({cfg.extra_wavelengths})"
        cols.append(ReportColumn(
            label=label,
            transit=fmt_traffic(counts.transit_gbps),
            lightpaths=lp_text,
            wavelengths=wl_text,
            total=fmt_cost(cfg.cost.total),
            optical=fmt_cost(cfg.cost.optical),
            total_exact=cfg.cost.total,
        ))
    return cols


def relative_difference(a, b) -> str:
    """(a − b)/b as a signed percentage with one decimal, e.g. '+6.9%'."""
    a = Fraction(a)
    b = Fraction(b)
    pct = _round_half_up((a - b) / b * 100, 1)
    sign = "+" if pct >= 0 else "-"
    return f"{sign}{float(abs(pct)):.1f}%"


def emit_report(configs: Sequence[tuple[str, NetworkConfiguration]],
                fmt: str = "table", diff_base: str | None = None) -> str:
    """Render a side-by-side comparison; ``diff_base`` adds a relative total
    cost row against the named column."""
    cols = report_columns(configs)
    diff_row = None
    if diff_base is not None:
        base = next((c for c in cols if c.label == diff_base), None)
        if base is None:
            raise ValueError(f"no column labelled {diff_base!r}")
        diff_row = [relative_difference(c.total_exact, base.total_exact) for c in cols]

    if fmt == "table":
        return _render_table(cols, diff_row, diff_base)
    if fmt == "csv":
        return _render_csv(cols, diff_row, diff_base)
    if fmt == "json":
        return _render_json(cols, diff_row, diff_base)
    raise ValueError(f"unknown report format {fmt!r}")


def _render_table(cols: list[ReportColumn], diff_row, diff_base) -> str:
    headers = [""] + [c.label for c in cols]
    rows = [[name] + [c.cells()[ri] for c in cols] for ri, name in enumerate(ROWS)]
    if diff_row is not None:
        rows.append([f"Cost vs {diff_base}"] + diff_row)
    widths = [max(len(str(r[i])) for r in [headers] + rows) for i in range(len(headers))]
    out = []
    for row in [headers] + rows:
        out.append("  ".join(str(cell).ljust(widths[i])
                             for i, cell in enumerate(row)).rstrip())
    return "\n".join(out) + "\n"


def _render_csv(cols: list[ReportColumn], diff_row, diff_base) -> str:
    lines = ["row," + ",".join(c.label for c in cols)]
    for ri, name in enumerate(ROWS):
        lines.append(f"{name}," + ",".join(f"\"{c.cells()[ri]}\"" for c in cols))
    if diff_row is not None:
        lines.append(f"Cost vs {diff_base}," + ",".join(f"\"{v}\"" for v in diff_row))
    return "\n".join(lines) + "\n"


def _render_json(cols: list[ReportColumn], diff_row, diff_base) -> str:
    payload = {
        "columns": [c.label for c in cols],
        "rows": {name: [c.cells()[ri] for c in cols] for ri, name in enumerate(ROWS)},
    }
    if diff_row is not None:
        payload["rows"][f"Cost vs {diff_base}"] = diff_row
    return json.dumps(payload, indent=1) + "\n"

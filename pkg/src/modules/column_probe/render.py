"""Threshold tables and CSV exports for column probe reports"""
from typing import List, Sequence

from modules.sharded.errors import ArgumentError
from modules.utils.files import render_csv
from .probe import ColumnProbeReport


def format_threshold(t: float) -> str:
    mantissa, exponent = f"{t:.0e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def _collapse_saturated(thresholds: Sequence[float], cells: List[List[str]]) -> List[List[str]]:
    """Merge the trailing rows where every fraction prints as 1.0000 into one range row"""
    saturated = len(cells)
    while saturated > 0 and all(c == "1.0000" for c in cells[saturated - 1][1:]):
        saturated -= 1
    if len(cells) - saturated < 2:
        return cells
    label = f"{format_threshold(thresholds[saturated])}..{format_threshold(thresholds[-1])}"
    return cells[:saturated] + [[label] + cells[saturated][1:]]


def _align(rows: List[List[str]]) -> List[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return [f"{r[0]:<{widths[0]}}" + "".join(f"  {c:>{w}}" for c, w in zip(r[1:], widths[1:])) for r in rows]


def render_threshold_table(report: ColumnProbeReport) -> str:
    cells = [[format_threshold(t), f"{f:.4f}"] for t, f in zip(report.thresholds, report.fractions)]
    rows = [["Threshold", "Fraction"]] + _collapse_saturated(report.thresholds, cells)
    lines = _align(rows)
    lines.append(f"Total elems = {report.total_elements}")
    return "\n".join(lines) + "\n"


def render_seed_table(reports: Sequence[ColumnProbeReport]) -> str:
    """Side-by-side fractions, one column per seed, with the probed index of each"""
    if not reports:
        raise ArgumentError("no reports to tabulate")
    thresholds = reports[0].thresholds
    header = ["Thres."] + [f"F{i + 1}" for i in range(len(reports))]
    indices = ["Idx"] + [str(r.column_index) for r in reports]
    cells = [[format_threshold(t)] + [f"{r.fractions[i]:.4f}" for r in reports] for i, t in enumerate(thresholds)]
    lines = _align([header, indices] + _collapse_saturated(thresholds, cells))
    lines.append(f"Total elems = {reports[0].total_elements}")
    return "\n".join(lines) + "\n"


def fractions_csv(report: ColumnProbeReport) -> str:
    return render_csv(["threshold", "fraction"], zip(report.thresholds, report.fractions))


def histogram_csv(report: ColumnProbeReport) -> str:
    return render_csv(["bin_left", "bin_right", "count"],
                      ((report.bin_edges[i], report.bin_edges[i + 1], int(c)) for i, c in enumerate(report.counts)))

"""CSV exports and the fixed-width Ritz table"""
from typing import List, Optional

from modules.utils.files import render_csv
from .density import SmoothedDensity
from .ritz import RitzSpectrum


def spectrum_csv(s: RitzSpectrum) -> str:
    return render_csv(["ritz_value", "weight"], zip(s.values, s.weights))


def density_csv(d: SmoothedDensity) -> str:
    return render_csv(["x", "density"], zip(d.grid, d.density))


def format_ritz_value(value: float) -> str:
    if value == 0 or abs(value) >= 1e-3:
        return f"{value:.4f}"
    return f"{value:.4e}"


def format_weight(weight: float) -> str:
    return f"{weight:.4f}" if weight >= 1e-3 else f"{weight:.4e}"


def render_ritz_table(s: RitzSpectrum, title: Optional[str] = None) -> str:
    """Two right-aligned columns: Ritz Value and Weight"""
    rows = [(format_ritz_value(v), format_weight(w)) for v, w in zip(s.values, s.weights)]
    value_width = max([len("Ritz Value")] + [len(r[0]) for r in rows])
    weight_width = max([len("Weight")] + [len(r[1]) for r in rows])
    lines: List[str] = []
    if title:
        lines.append(title)
    lines.append(f"{'Ritz Value':>{value_width}}  {'Weight':>{weight_width}}")
    lines.append(f"{'-' * value_width}  {'-' * weight_width}")
    lines.extend(f"{v:>{value_width}}  {w:>{weight_width}}" for v, w in rows)
    return "\n".join(lines) + "\n"


def render_ritz_comparison(left: RitzSpectrum, right: RitzSpectrum,
                           left_title: str, right_title: str, gap: int = 4) -> str:
    """Two Ritz tables side by side; the shorter one is padded with blank rows"""
    left_lines = render_ritz_table(left, left_title).splitlines()
    right_lines = render_ritz_table(right, right_title).splitlines()
    width = max(len(line) for line in left_lines)
    rows = max(len(left_lines), len(right_lines))
    left_lines += [""] * (rows - len(left_lines))
    right_lines += [""] * (rows - len(right_lines))
    return "\n".join(f"{a:<{width}}{' ' * gap}{b}".rstrip() for a, b in zip(left_lines, right_lines)) + "\n"

"""Plain-text renderings of diagnostic reports for run artifacts"""
from typing import List

from modules.quadrature.export import format_ritz_value, format_weight
from modules.quadrature.ritz import RitzSpectrum
from .ghosts import GhostReport
from .near_zero import NearZeroPartition
from .precision import PrecisionReport


def render_ghost_report(s: RitzSpectrum, report: GhostReport, title: str = "Ghost report") -> str:
    lines: List[str] = [
        title,
        f"cluster tolerance: {report.cluster_tol:.1e} x spectral width",
        f"ghost weight threshold: {report.weight_threshold:.1e} x max weight",
        f"clusters: {len(report.clusters)}",
        f"flagged ghosts: {report.ghost_count}",
    ]
    for cluster in report.clusters:
        if cluster.size < 2:
            continue
        lines.append(f"cluster at {format_ritz_value(cluster.representative)} "
                     f"({cluster.size} members, weight {format_weight(cluster.total_weight)})")
        for i in cluster.indices:
            marker = "  likely ghost" if report.ghost_flags[i] else ""
            lines.append(f"  {format_ritz_value(s.values[i])}  {format_weight(s.weights[i])}{marker}")
    if report.ghost_count:
        lines.append("Flagged values are near-duplicates with negligible weight and are, with high "
                     "probability, ghosts from loss of orthogonality.")
    return "\n".join(lines) + "\n"


def render_precision_report(report: PrecisionReport) -> str:
    return "\n".join([
        f"precision: {report.precision.value}",
        f"unit roundoff u: {report.unit_roundoff:.6e}",
        f"iterations k: {report.k}",
        f"weight relative error bound 2ku: {report.weight_rel_bound:.6e}",
        f"machine epsilon threshold: {report.machine_eps_threshold:.6e}",
        f"orthogonality level ku: {report.orthogonality_level:.6e}",
        f"gamma_3: {report.gamma3:.6e}",
    ]) + "\n"


def render_near_zero(partition: NearZeroPartition) -> str:
    return "\n".join([
        f"near-zero cutoff: {partition.cutoff:.6e}",
        f"near-zero pairs: {len(partition.near_zero_indices)}",
        f"near-zero mass: {partition.near_zero_mass:.6e}",
        f"outlier mass: {partition.outlier_mass:.6e}",
    ]) + "\n"


def render_ghost_diff(without: GhostReport, with_full: GhostReport) -> str:
    """Ghost counts of a no-reorthogonalization run next to its fully reorthogonalized twin"""
    return "\n".join([
        f"{'variant':<12}  {'ghosts':>6}  {'clusters':>8}",
        f"{'no-ortho':<12}  {without.ghost_count:>6}  {len(without.clusters):>8}",
        f"{'full-ortho':<12}  {with_full.ghost_count:>6}  {len(with_full.clusters):>8}",
        f"ghosts only without reorthogonalization: {max(without.ghost_count - with_full.ghost_count, 0)}",
    ]) + "\n"

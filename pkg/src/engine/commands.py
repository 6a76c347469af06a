"""
Command orchestration: slq, probe and compare-ortho.

Each command resolves the configured operator, shards it over a worker pool,
runs the numerical pipeline and hands every output to an ArtifactWriter.
"""
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from modules.autodiff.data import load_samples, split_batches, synthetic_samples
from modules.autodiff.models import Model, ModelSpec
from modules.column_probe.probe import ColumnProbeReport, column_report, multi_seed_probe, probe_column
from modules.column_probe.render import fractions_csv, histogram_csv, render_seed_table, render_threshold_table
from modules.diagnostics.ghosts import GhostReport, detect_ghosts
from modules.diagnostics.near_zero import classify_near_zero
from modules.diagnostics.precision import precision_report
from modules.diagnostics.render import render_ghost_diff, render_ghost_report, render_near_zero, \
    render_precision_report
from modules.lanczos.classes import LanczosConfig, LanczosResult, Reorthogonalization
from modules.lanczos.driver import lanczos_run
from modules.lanczos.errors import LanczosBreakdownError
from modules.logs.logger import SLQLogger
from modules.logs.run_trail import RunTrail
from modules.operators.base import OperatorHandle
from modules.operators.dense import dense_operator, diagonal_operator, identity_operator, load_dense_file
from modules.operators.hessian import hessian_operator
from modules.operators.random_matrix import semicircle_density, semicircle_radius, spiked_operator, \
    wigner_operator
from modules.quadrature.density import average_spectra, l1_distance_to, smooth_density
from modules.quadrature.export import density_csv, render_ritz_comparison, render_ritz_table, spectrum_csv
from modules.quadrature.ritz import RitzSpectrum, ritz_decompose
from modules.runtime.executor import ShardExecutor
from modules.runtime.pool import spawn_pool
from modules.sharded.layout import ShardLayout
from modules.sharded.probes import ProbeDistribution, ProbeSpec
from modules.utils.config import ConfigError, RunConfig, config_echo
from modules.utils.ids import seed_tag
from .artifacts import COLUMN_RESULT_FILE, COMPARE_RESULT_FILE, RESULT_FILE, ArtifactWriter, ghost_record, \
    result_document, run_record, spectrum_record, tridiagonal_record


@dataclass
class OperatorSource:
    """
    An operator whose dimension is known before the worker pool exists.
    bind() attaches the executor its applies run on.
    """
    dim: int
    kind: str
    factory: Callable[[ShardExecutor], OperatorHandle]

    def bind(self, executor: ShardExecutor) -> OperatorHandle:
        return self.factory(executor)


def resolve_operator(cfg: RunConfig) -> OperatorSource:
    """
    Read whatever the configured operator needs (matrix file, model, samples)

    Raises:
        ConfigError: If a required operator setting is missing
        OperatorError, DataError, ShapeError: If the operator inputs are malformed
    """
    section = cfg.operator
    kind = section.kind

    if kind == "dense":
        if not section.path:
            raise ConfigError("operator.kind = dense needs operator.path")
        matrix = load_dense_file(section.path, cap=section.cap)
        return OperatorSource(matrix.dim, kind,
                              lambda ex: dense_operator(matrix, label=f"dense({section.path})", executor=ex))

    if kind == "wigner":
        return OperatorSource(section.n, kind,
                              lambda ex: wigner_operator(section.n, section.sigma, section.seed, ex, section.cap))

    if kind == "spiked":
        if not section.spikes:
            raise ConfigError("operator.kind = spiked needs operator.spikes")
        return OperatorSource(section.n, kind,
                              lambda ex: spiked_operator(section.n, section.sigma, section.spikes, section.seed,
                                                         ex, section.cap))

    if kind == "identity":
        return OperatorSource(section.n, kind, lambda ex: identity_operator(section.n, ex))

    if kind == "diagonal":
        if not section.values:
            raise ConfigError("operator.kind = diagonal needs operator.values")
        return OperatorSource(len(section.values), kind, lambda ex: diagonal_operator(section.values, ex))

    # autodiff: loss Hessian of a small model over its samples
    spec = ModelSpec(architecture=cfg.model.architecture, loss=cfg.model.loss,
                     layer_widths=tuple(cfg.model.layer_widths), d_model=cfg.model.d_model,
                     n_heads=cfg.model.n_heads, seq_len=cfg.model.seq_len, n_classes=cfg.model.n_classes)
    model = Model.initialize(spec, seed=cfg.model.seed, precision=cfg.runtime.precision)
    if cfg.data.path:
        samples = load_samples(cfg.data.path)
    else:
        samples = synthetic_samples(spec, cfg.data.samples, seed=cfg.data.seed)
    batches = split_batches(samples, cfg.data.batch_size)
    return OperatorSource(model.parameter_count, kind, lambda ex: hessian_operator(model, batches, ex))


@contextmanager
def open_executor(cfg: RunConfig, layout: ShardLayout, logger: SLQLogger) -> Iterator[ShardExecutor]:
    with spawn_pool(cfg.runtime.workers, layout, logger=logger, reply_jitter=cfg.runtime.reply_jitter,
                    reply_timeout=cfg.runtime.reply_timeout) as pool:
        yield pool


def lanczos_config(cfg: RunConfig, seed: int,
                   reorthogonalize: Optional[Reorthogonalization] = None) -> LanczosConfig:
    return LanczosConfig(
        k_max=cfg.lanczos.k,
        breakdown_tol=cfg.lanczos.breakdown_tol,
        reorthogonalize=reorthogonalize or Reorthogonalization(cfg.lanczos.reorthogonalize),
        probe=ProbeSpec(seed=seed, distribution=ProbeDistribution(cfg.probe.distribution)),
        store_basis=cfg.lanczos.store_basis,
        precision=cfg.runtime.precision,
    )


def _detect(cfg: RunConfig, spectrum: RitzSpectrum) -> GhostReport:
    return detect_ghosts(spectrum, cluster_tol=cfg.diagnostics.cluster_tol,
                         weight_threshold=cfg.diagnostics.ghost_weight_threshold)


class SLQCommand:
    """Shared state of one command invocation"""

    name = "slq"
    result_file = RESULT_FILE

    def __init__(self, cfg: RunConfig, logger: SLQLogger, trail: RunTrail):
        self.cfg = cfg
        self.logger = logger
        self.trail = trail
        self.writer = ArtifactWriter(cfg.output.dir, trail, logger)
        self.started = time.perf_counter()
        self.runs: List[Dict[str, Any]] = []

    def timing(self) -> Dict[str, float]:
        return {
            "total_seconds": time.perf_counter() - self.started,
            "apply_seconds": sum(run["diagnostics"]["apply_seconds"] for run in self.runs),
        }

    def prepare(self) -> Tuple[OperatorSource, ShardLayout]:
        source = resolve_operator(self.cfg)
        layout = ShardLayout.even(source.dim, self.cfg.runtime.workers)
        self.trail.log_event("run_start", {"command": self.name, "dimension": source.dim,
                                           "shard_sizes": layout.shard_sizes, "config": config_echo(self.cfg)})
        self.logger.info(f"{self.name}: {source.kind} operator of dimension {source.dim} "
                         f"on {layout.worker_count} worker(s), precision {self.cfg.runtime.precision.value}")
        return source, layout

    def run_probe(self, op: OperatorHandle, lcfg: LanczosConfig, layout: ShardLayout,
                  executor: ShardExecutor, seed: int) -> Tuple[LanczosResult, RitzSpectrum, GhostReport]:
        """
        One Lanczos run plus its Ritz decomposition and ghost check.
        A breakdown leaves a partial result file behind before propagating.
        """
        try:
            result = lanczos_run(op, lcfg, layout, executor=executor, logger=self.logger)
        except LanczosBreakdownError as e:
            self.logger.error(f"Lanczos breakdown for seed {seed}: {e}")
            partial = {"seed": seed, "reason": str(e),
                       "tridiagonal": tridiagonal_record(e.partial) if e.partial is not None else None,
                       "betas": list(e.diagnostics.betas) if e.diagnostics is not None else []}
            self.trail.log_event("breakdown", partial)
            self.writer.write_json(self.result_file, result_document(
                self.name, self.cfg, "breakdown", self.runs, self.timing(),
                dict(executor.message_counts), partial=partial))
            raise

        spectrum = ritz_decompose(result.tridiagonal, logger=self.logger)
        ghosts = _detect(self.cfg, spectrum)
        self.runs.append(run_record(seed, result, spectrum, ghosts))
        self.trail.log_event("probe_done", {"seed": seed, "steps": result.tridiagonal.k,
                                            "terminated_early": result.diagnostics.terminated_early,
                                            "ghosts": ghosts.ghost_count})
        self.logger.info(f"seed {seed}: {result.tridiagonal.k} Lanczos steps, {ghosts.ghost_count} ghost(s)")
        return result, spectrum, ghosts

    def finish(self, message_counts: Dict[str, int], **sections: Any) -> Dict[str, Any]:
        self.trail.log_event("message_counts", message_counts)
        document = result_document(self.name, self.cfg, "ok", self.runs, self.timing(), message_counts, **sections)
        self.writer.write_json(self.result_file, document)
        self.logger.info(f"{self.name}: wrote {len(self.writer.written)} file(s) to {self.writer.output_dir}")
        return document


def cmd_slq(cfg: RunConfig, logger: SLQLogger, trail: RunTrail) -> Dict[str, Any]:
    """
    Lanczos per probe seed, averaged Ritz spectrum, smoothed density and reports

    Raises:
        LanczosBreakdownError: After the partial result file is written
    """
    command = SLQCommand(cfg, logger, trail)
    source, layout = command.prepare()
    spectra: List[RitzSpectrum] = []
    ghost_texts: List[str] = []
    achieved_k = 0

    with open_executor(cfg, layout, logger) as executor:
        op = source.bind(executor)
        for seed in cfg.probe.seeds:
            result, spectrum, ghosts = command.run_probe(op, lanczos_config(cfg, seed), layout, executor, seed)
            spectra.append(spectrum)
            achieved_k = max(achieved_k, result.tridiagonal.k)
            ghost_texts.append(render_ghost_report(spectrum, ghosts, title=f"Ghost report, seed {seed}"))
            command.writer.write(f"spectrum_{seed_tag(seed)}.csv", spectrum_csv(spectrum))
        message_counts = dict(executor.message_counts)

    averaged = average_spectra(spectra)
    density = smooth_density(averaged, sigma=cfg.density.sigma, grid_points=cfg.density.grid_points)
    precision = precision_report(cfg.runtime.precision, achieved_k)
    near_zero = classify_near_zero(averaged, eps_threshold=cfg.diagnostics.near_zero_eps)

    writer = command.writer
    writer.write("spectrum.csv", spectrum_csv(averaged))
    writer.write("density.csv", density_csv(density))
    writer.write("ritz_table.txt", render_ritz_table(
        averaged, title=f"{len(spectra)} probe(s), {achieved_k} Lanczos iterations"))
    writer.write("ghosts.txt", "\n".join(ghost_texts))
    writer.write("precision.txt", render_precision_report(precision))
    writer.write("near_zero.txt", render_near_zero(near_zero))

    sections: Dict[str, Any] = {
        "spectrum": spectrum_record(averaged),
        "density": {"kernel_sigma": density.kernel_sigma, "grid_points": len(density.grid),
                    "integral": density.integral()},
        "precision": precision,
        "near_zero": near_zero,
    }
    if source.kind == "wigner":
        n, sigma = cfg.operator.n, cfg.operator.sigma
        radius = semicircle_radius(n, sigma)
        sections["semicircle_l1"] = l1_distance_to(density, lambda x: semicircle_density(x, n, sigma),
                                                   support=(-radius, radius))
    return command.finish(message_counts, **sections)


def _probe_tag(report: ColumnProbeReport) -> str:
    return seed_tag(report.seed) if report.seed is not None else f"col{report.column_index}"


def cmd_probe(cfg: RunConfig, logger: SLQLogger, trail: RunTrail) -> Dict[str, Any]:
    """Column magnitude histograms and threshold fractions, one set of files per seed (or fixed index)"""
    command = SLQCommand(cfg, logger, trail)
    command.name, command.result_file = "probe", COLUMN_RESULT_FILE
    source, layout = command.prepare()
    column = cfg.column
    precision = cfg.runtime.precision

    with open_executor(cfg, layout, logger) as executor:
        op = source.bind(executor)
        if column.index is not None:
            col = probe_column(op, column.index, layout, precision, executor)
            reports = [column_report(col, column.thresholds, column.bins, column_index=column.index,
                                     executor=executor)]
        else:
            reports = multi_seed_probe(op, column.seeds, layout, precision, column.thresholds, column.bins,
                                       executor, logger)
        message_counts = dict(executor.message_counts)

    writer = command.writer
    for report in reports:
        tag = _probe_tag(report)
        writer.write(f"fractions_{tag}.csv", fractions_csv(report))
        writer.write(f"histogram_{tag}.csv", histogram_csv(report))
        writer.write(f"thresholds_{tag}.txt", render_threshold_table(report))
        trail.log_event("probe_done", {"seed": report.seed, "column_index": report.column_index})
    writer.write("seed_table.txt", render_seed_table(reports))

    columns = [{"seed": r.seed, "column_index": r.column_index, "total_elements": r.total_elements,
                "thresholds": r.thresholds, "fractions": r.fractions, "counts": r.counts,
                "bin_edges": r.bin_edges} for r in reports]
    return command.finish(message_counts, columns=columns)


def cmd_compare_ortho(cfg: RunConfig, logger: SLQLogger, trail: RunTrail) -> Dict[str, Any]:
    """
    The first probe seed run twice, without and with full reorthogonalization,
    with side-by-side Ritz tables and the ghost difference

    Raises:
        ConfigError: If the operator is too large to store the Lanczos basis
    """
    command = SLQCommand(cfg, logger, trail)
    command.name, command.result_file = "compare-ortho", COMPARE_RESULT_FILE
    source, layout = command.prepare()
    if source.dim > cfg.operator.cap:
        raise ConfigError(f"compare-ortho stores the Lanczos basis; dimension {source.dim} "
                          f"exceeds operator.cap {cfg.operator.cap}")
    seed = cfg.probe.seeds[0]

    with open_executor(cfg, layout, logger) as executor:
        op = source.bind(executor)
        _, plain, plain_ghosts = command.run_probe(
            op, lanczos_config(cfg, seed, Reorthogonalization.NONE), layout, executor, seed)
        _, full, full_ghosts = command.run_probe(
            op, lanczos_config(cfg, seed, Reorthogonalization.FULL), layout, executor, seed)
        message_counts = dict(executor.message_counts)

    writer = command.writer
    writer.write("spectrum_no_ortho.csv", spectrum_csv(plain))
    writer.write("spectrum_full_ortho.csv", spectrum_csv(full))
    writer.write("ritz_comparison.txt", render_ritz_comparison(plain, full, "No Ortho", "Full Ortho"))
    writer.write("ghost_diff.txt", render_ghost_diff(plain_ghosts, full_ghosts) + "\n"
                 + render_ghost_report(plain, plain_ghosts, title="No Ortho") + "\n"
                 + render_ghost_report(full, full_ghosts, title="Full Ortho"))

    return command.finish(message_counts, ghost_diff={
        "no_ortho": ghost_record(plain_ghosts),
        "full_ortho": ghost_record(full_ghosts),
        "ghosts_only_without_reorthogonalization": max(plain_ghosts.ghost_count - full_ghosts.ghost_count, 0),
    })


COMMANDS: Dict[str, Callable[[RunConfig, SLQLogger, RunTrail], Dict[str, Any]]] = {
    "slq": cmd_slq,
    "probe": cmd_probe,
    "compare-ortho": cmd_compare_ortho,
}

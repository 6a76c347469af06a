"""
Run artifacts: atomic file output, trail bookkeeping and the versioned result document.

Spectrum, density and report files are byte-deterministic for a given
configuration. The result document also carries wall-clock timings and is
therefore not part of the byte-identity contract.
"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from modules.diagnostics.ghosts import GhostReport
from modules.lanczos.classes import LanczosResult, TridiagonalMatrix
from modules.logs.logger import SLQLogger
from modules.logs.run_trail import RunTrail
from modules.quadrature.ritz import RitzSpectrum
from modules.utils.config import RunConfig, config_echo
from modules.utils.files import atomic_write_text
from modules.utils.json import safe_json_dumps, to_dict
from .__version__ import __version__

RESULT_FORMAT_VERSION = 1

RESULT_FILE = "result.json"
COLUMN_RESULT_FILE = "column_result.json"
COMPARE_RESULT_FILE = "compare_result.json"


class ArtifactWriter:
    """Writes files into one output directory and records each in the run trail"""

    def __init__(self, output_dir: str, trail: RunTrail, logger: SLQLogger):
        self.output_dir = Path(output_dir)
        self.trail = trail
        self.logger = logger
        self.written: List[str] = []

    def write(self, name: str, content: str) -> Path:
        path = atomic_write_text(self.output_dir / name, content)
        self.written.append(name)
        self.trail.log_event("artifact_written", {"name": name, "bytes": len(content.encode('utf-8'))})
        self.logger.debug(f"Wrote {path}")
        return path

    def write_json(self, name: str, document: Dict[str, Any]) -> Path:
        return self.write(name, safe_json_dumps(document, indent=2) + "\n")


def tridiagonal_record(t: TridiagonalMatrix) -> Dict[str, Any]:
    return {"k": t.k, "alphas": list(t.alphas), "betas": list(t.betas)}


def spectrum_record(s: RitzSpectrum) -> Dict[str, Any]:
    return {"values": to_dict(s.values), "weights": to_dict(s.weights)}


def ghost_record(report: GhostReport) -> Dict[str, Any]:
    return {
        "ghost_count": report.ghost_count,
        "ghost_indices": report.ghost_indices,
        "clusters": len(report.clusters),
        "cluster_tol": report.cluster_tol,
        "weight_threshold": report.weight_threshold,
    }


def run_record(seed: int, result: LanczosResult, spectrum: RitzSpectrum, ghosts: GhostReport) -> Dict[str, Any]:
    """One probe's Lanczos run: T, its Ritz pairs, the ghost verdict and the run diagnostics"""
    diagnostics = result.diagnostics
    return {
        "seed": seed,
        "tridiagonal": tridiagonal_record(result.tridiagonal),
        "spectrum": spectrum_record(spectrum),
        "ghosts": ghost_record(ghosts),
        "diagnostics": {
            "steps": diagnostics.steps,
            "final_residual": diagnostics.final_residual,
            "terminated_early": diagnostics.terminated_early,
            "orthogonality": diagnostics.orthogonality[-1] if diagnostics.orthogonality else None,
            "apply_seconds": sum(diagnostics.apply_seconds),
        },
    }


def result_document(command: str, cfg: RunConfig, status: str, runs: Sequence[Dict[str, Any]],
                     timing: Dict[str, float], message_counts: Optional[Dict[str, int]] = None,
                     **sections: Any) -> Dict[str, Any]:
    """Versioned result file: config echo, per-probe runs, timings, worker message counts and extras"""
    document = {
        "format_version": RESULT_FORMAT_VERSION,
        "engine_version": __version__,
        "command": command,
        "status": status,
        "config": config_echo(cfg),
        "runs": list(runs),
        "timing": timing,
        "message_counts": dict(message_counts or {}),
    }
    document.update({key: to_dict(value) for key, value in sections.items()})
    return document

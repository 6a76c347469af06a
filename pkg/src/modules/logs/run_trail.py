"""
Run trail logger

Records the sequential flow of an SLQ run in JSON Lines format:
- run start with the echoed configuration
- per-probe completion with iteration counts
- worker message counts
- artifacts written and numerical breakdowns

Timestamps make the trail non-deterministic; it is never part of the
byte-identical outputs.
"""

from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

from modules.logs.logger import SLQLogger
from modules.utils.ids import get_run_id
from modules.utils.json import safe_json_dumps, to_dict

TRAIL_FILE_NAME = 'trail.jsonl'


class RunTrail:
    """
    Append-only JSON Lines trail for one run directory
    """

    def __init__(self, logger: SLQLogger, output_dir: Optional[str] = None):
        """
        Args:
            logger: Logger used to report trail write failures
            output_dir: Directory receiving trail.jsonl; None sends events to the debug log only
        """
        self.logger = logger
        self.run_id = get_run_id()
        self.trail_file: Optional[Path] = Path(output_dir) / TRAIL_FILE_NAME if output_dir else None

        if self.trail_file is not None:
            self.trail_file.parent.mkdir(parents=True, exist_ok=True)

    def log_event(self, event_type: str, data: Dict[str, Any]) -> None:
        """
        Log a single trail event

        Args:
            event_type: e.g. 'run_start', 'probe_done', 'artifact_written'
            data: Event payload (dataclasses and pydantic models are converted)
        """
        try:
            event = {
                "run_id": self.run_id,
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "event_type": event_type,
                "data": to_dict(data),
            }
            line = safe_json_dumps(event)
            if self.trail_file is None:
                self.logger.debug(f"trail: {line}")
                return
            # Appended line by line, not atomically: a cut run keeps the events written so far
            with open(self.trail_file, 'a', encoding='utf-8') as f:
                f.write(line + '\n')
                f.flush()
        except Exception as e:
            # A broken trail never stops the run
            self.logger.error(f"Run trail write failed: {e}")


def setup_run_trail(logger: SLQLogger, output_dir: Optional[str] = None) -> RunTrail:
    """Create a run trail for the given output directory"""
    return RunTrail(logger, output_dir)

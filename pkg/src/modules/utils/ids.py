"""
Utilities for run IDs and output file naming
"""
import uuid
from typing import Optional

# Process-wide run ID cache
_run_id: Optional[str] = None


def get_run_id() -> str:
    """
    Get the run ID for the current process. Returns the same value for all calls
    within the same Python process instance.

    Returns:
        Process-wide run ID string
    """
    global _run_id
    if _run_id is None:
        _run_id = str(uuid.uuid4())
    return _run_id


def seed_tag(seed: int) -> str:
    """File-name fragment for a probe seed (negative seeds keep their sign readable)"""
    return f"seed{seed}" if seed >= 0 else f"seedm{-seed}"

"""
Atomic file output and fixed numeric formatting for run artifacts
"""
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence, Union


def atomic_write_text(path: Union[str, Path], content: str) -> Path:
    """
    Write text to path through a temporary sibling file and an atomic rename.
    An interrupted write never leaves a truncated file at path.

    Args:
        path: Destination file
        content: Full file contents

    Returns:
        The destination path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=str(path.parent))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
            f.write(content)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise
    return path


def format_float(value: float) -> str:
    """Shortest round-trip representation of a float, stable across runs"""
    return repr(float(value))


def render_csv(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    """
    Render numeric rows as CSV with full round-trip precision

    Args:
        header: Column names
        rows: Numeric rows (ints are written as ints)

    Returns:
        CSV text terminated by a newline
    """
    lines = [','.join(header)]
    for row in rows:
        lines.append(','.join(str(v) if isinstance(v, int) else format_float(v) for v in row))
    return '\n'.join(lines) + '\n'

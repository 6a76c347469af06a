"""
Line-based logger for SLQ runs
Every line carries the run id and a one-character level tag
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from modules.utils.ids import get_run_id

LOGGER_NAME = 'hessian_slq'


class UTF8StreamHandler(logging.StreamHandler):
    """StreamHandler that forces UTF-8 encoding on Windows to prevent UnicodeEncodeError"""

    def __init__(self, stream=None):
        if sys.platform == 'win32' and stream is not None:
            import io
            if hasattr(stream, 'buffer'):
                stream = io.TextIOWrapper(
                    stream.buffer,
                    encoding='utf-8',
                    errors='replace',
                    line_buffering=True
                )

        super().__init__(stream)


class RunFormatter(logging.Formatter):
    """Formatter that includes the run ID in log messages"""

    # Single character mapping keeps columns aligned
    LEVEL_MAPPING = {
        'DEBUG': 'D',
        'INFO': 'I',
        'WARNING': 'W',
        'ERROR': 'E',
        'CRITICAL': 'C'
    }

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._run_id = get_run_id()[:8]

    def format(self, record):
        record.run_id = self._run_id
        if not record.levelname or not isinstance(record.levelname, str):
            record.levelname = 'U'
        else:
            record.levelname = self.LEVEL_MAPPING.get(record.levelname, record.levelname[0])
        return super().format(record)


class SLQLogger:
    """Thin wrapper over the package logger shared by the engine components"""

    FORMAT = '%(asctime)s [%(run_id)s] (%(levelname)s) %(message)s'

    def __init__(self, log_file: Optional[str] = None, level: int = logging.INFO):
        self.log_file = log_file
        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(level)
        self.logger.propagate = False

        # Handlers are owned by the most recent SLQLogger
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        formatter = RunFormatter(self.FORMAT)
        console_handler = UTF8StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        if log_file:
            log_path = Path(log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_path, encoding='utf-8')
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

    def info(self, message: str) -> None:
        """Log info message"""
        self.logger.info(message)

    def error(self, message: str, exc_info: bool = False) -> None:
        """Log error message"""
        self.logger.error(message, exc_info=exc_info)

    def warning(self, message: str) -> None:
        """Log warning message"""
        self.logger.warning(message)

    def debug(self, message: str) -> None:
        """Log debug message"""
        self.logger.debug(message)

    def is_debug(self) -> bool:
        return self.logger.isEnabledFor(logging.DEBUG)

    def close(self) -> None:
        """Detach and close all handlers"""
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()


def setup_logger(log_file: Optional[str] = None, level: int = logging.INFO) -> SLQLogger:
    """
    Setup the run logger

    Args:
        log_file: Optional path to a log file (stderr only if None)
        level: Logging level

    Returns:
        Configured SLQLogger instance
    """
    return SLQLogger(log_file, level)

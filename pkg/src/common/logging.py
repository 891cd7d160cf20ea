import sys
from pathlib import Path

from loguru import logger

from common.config import config

# Loguru config
logger.remove()
_stderr_sink = logger.add(sys.stderr, format=config.log_format, level=config.log_level, colorize=True)
_file_sink: int | None = None


def configure_logging(level: str | None = None, run_dir: Path | None = None) -> None:
    """Re-install the stderr sink at `level` and optionally log to `run_dir/run.log`."""
    global _stderr_sink, _file_sink

    logger.remove(_stderr_sink)
    _stderr_sink = logger.add(sys.stderr, format=config.log_format, level=level or config.log_level, colorize=True)

    if _file_sink is not None:
        logger.remove(_file_sink)
        _file_sink = None
    if run_dir is not None:
        _file_sink = logger.add(Path(run_dir) / "run.log", level="DEBUG", colorize=False)


def get_logger(name: str | None = None):
    return logger.bind(name=name) if name else logger

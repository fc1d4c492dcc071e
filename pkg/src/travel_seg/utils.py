"""
Utility functions for the travel CLI: stage timing and input discovery.
"""

import logging
import time
from contextlib import contextmanager
from pathlib import Path

from .core.io import FORMAT_SUFFIXES
from .errors import InputError

log = logging.getLogger(__name__)


@contextmanager
def stage_timer(timings: dict, name: str):
    """Record the wall-clock duration of the block in `timings[name]`, in milliseconds."""
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = (time.perf_counter() - start) * 1000.0


def collect_scans(inputs) -> list[Path]:
    """
    Expand files and directories into scan paths.

    Directories contribute every file with a known scan suffix (a `velodyne`
    subdirectory is searched when present), sorted by name. Order of the
    arguments is kept.
    """
    scans = []
    for item in inputs:
        path = Path(item)
        if path.is_dir():
            root = path / "velodyne" if (path / "velodyne").is_dir() else path
            found = sorted(p for p in root.iterdir() if p.is_file() and p.suffix.lower() in FORMAT_SUFFIXES)
            if not found:
                log.warning(f"No scan files in {root}")
            scans.extend(found)
        elif path.is_file():
            scans.append(path)
        else:
            raise InputError(f"Input not found: {path}")
    return scans


def collect_labels(item) -> list[Path]:
    """Label files of a directory (or its `labels` subdirectory), sorted by name."""
    path = Path(item)
    if path.is_file():
        return [path]
    if not path.is_dir():
        raise InputError(f"Label path not found: {path}")
    root = path / "labels" if (path / "labels").is_dir() else path
    return sorted(p for p in root.iterdir() if p.is_file() and p.suffix == ".label")

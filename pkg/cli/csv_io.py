"""CSV output shared by every subcommand."""

import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from utils.exceptions import ConfigurationError
from utils.helpers import format_float
from utils.logger import get_logger

logger = get_logger("cli.csv_io")


def frame_to_csv(frame: pd.DataFrame, precision: int = 17) -> str:
    """
    Header row plus one row per record. Floats take their shortest round-trip form,
    capped at ``precision`` significant digits.
    """
    rendered = frame.copy()
    for column in rendered.select_dtypes(include="float").columns:
        rendered[column] = [format_float(v, precision) for v in rendered[column]]
    return rendered.to_csv(index=False, lineterminator="\n")


def write_frame(
    frame: pd.DataFrame, path: Optional[Union[str, Path]] = None, precision: int = 17
) -> None:
    """
    Write ``frame`` as CSV to ``path``, or to stdout when ``path`` is None.

    Files are written to a temporary sibling and moved into place, so a failed run
    never leaves a partial file behind.
    """
    text = frame_to_csv(frame, precision)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    try:
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=directory)
    except OSError as e:
        raise ConfigurationError(
            f"Cannot write output file {target}: {e}", error_code="OUTPUT_UNWRITABLE"
        ) from e
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp_name, target)
    except OSError as e:
        Path(tmp_name).unlink(missing_ok=True)
        raise ConfigurationError(
            f"Cannot write output file {target}: {e}", error_code="OUTPUT_UNWRITABLE"
        ) from e
    logger.info("csv written", path=str(target), rows=len(frame))


def read_frame(path: Union[str, Path]) -> pd.DataFrame:
    """Read a CSV written by ``write_frame`` back with exact float parsing."""
    return pd.read_csv(path, float_precision="round_trip")

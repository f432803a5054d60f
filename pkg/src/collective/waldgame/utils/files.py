"""
File utility functions for collective.waldgame.

JSON summaries are written with orjson, CSV tables with csv.DictWriter. Every
float written to a CSV carries 17 significant digits so that reading it back
reproduces the value bit for bit.
"""

from collections.abc import Iterable
from collections.abc import Mapping
from collective.waldgame import logger
from collective.waldgame.settings import wg_config
from pathlib import Path
from typing import Any

import csv
import json
import math
import numpy as np
import orjson


JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def format_number(value: Any) -> str:
    """Render a number with enough digits to round-trip exactly.

    Integers are written as integers, floats with 17 significant digits and
    always with a decimal point or exponent.
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int | np.integer):
        return str(int(value))
    number = float(value)
    if math.isnan(number):
        return "nan"
    if math.isinf(number):
        return "inf" if number > 0 else "-inf"
    digits = int(wg_config.output.digits)
    text = f"{number:.{digits}g}"
    if not any(char in text for char in ".en"):
        text = f"{text}.0"
    return text


def _default(obj: Any) -> Any:
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"Type {type(obj).__name__} is not JSON serializable")


def json_dumps(data: dict | list) -> bytes:
    """Dump data to JSON bytes.

    Converts Python data structures to JSON format using orjson, with fallback
    to the standard json module for structures orjson rejects.

    Args:
        data: Data to convert to JSON

    Returns:
        JSON data as bytes
    """
    try:
        response: bytes = orjson.dumps(data, default=_default, option=JSON_OPTIONS)
    except orjson.JSONEncodeError:
        response = json.dumps(data, indent=2, sort_keys=True, default=_default).encode(
            "utf-8"
        )
    return response


def json_dump(data: dict | list, path: Path) -> Path:
    """Dump JSON data to a file.

    Args:
        data: Data to write as JSON
        path: File path to write to

    Returns:
        Path to the written file
    """
    path.write_bytes(json_dumps(data))
    logger.debug(f" - Wrote {path}")
    return path


def csv_dump(data: Iterable[Mapping[str, Any]], header: list[str], path: Path) -> Path:
    """Dump rows to a CSV file with a header row.

    Args:
        data: Rows to write
        header: Column names, in order
        path: File path to write to

    Returns:
        Path to the written CSV file
    """
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, header)
        writer.writeheader()
        for row in data:
            writer.writerow({
                key: format_number(value) if isinstance(value, int | float) else value
                for key, value in row.items()
            })
    logger.debug(f" - Wrote {path}")
    return path


def csv_read(path: Path) -> list[dict[str, float]]:
    """Read a numeric CSV written by ``csv_dump``."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        return [{key: float(value) for key, value in row.items()} for row in reader]


def ensure_dir(path: Path) -> Path:
    """Create a directory (and parents) when missing."""
    path.mkdir(parents=True, exist_ok=True)
    return path

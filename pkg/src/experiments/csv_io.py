"""
CSV emitters for experiment outputs.

Every file starts with ``#`` header lines naming the experiment, the config
fingerprint, the seed and the tool version. Nothing time-dependent is
written, so identical config and seed give byte-identical files.
"""

import csv
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence
import logging
import math

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return '%.17g' % value
    return str(value)


def header_lines(meta: Dict[str, Any]) -> Iterable[str]:
    return [f"{key}={format_value(value)}" for key, value in meta.items()]


def write_csv(path: Path, meta: Dict[str, Any], columns: Sequence[str],
              rows: Iterable[Sequence[Any]]) -> Path:
    """Write ``rows`` under ``columns`` with the provenance header ``meta``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        for line in header_lines(meta):
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
            count += 1
    logger.info(f"Wrote {count} rows to {path}")
    return path


def read_csv(path: Path):
    """Header mapping and data rows (as strings) of a file written by :func:`write_csv`."""
    meta, lines = {}, []
    with open(path, newline='', encoding='utf-8') as fh:
        for line in fh:
            if line.startswith('#'):
                key, _, value = line[1:].strip().partition('=')
                meta[key] = value
            elif line.strip():
                lines.append(line)
    rows = list(csv.reader(lines))
    return meta, rows[0], rows[1:]

"""
CSV persistence for channels, beamformer states and run traces.

Complex matrices are written as ``row,col,re,im`` records in row-major order
after ``#``-prefixed header lines. Floats use 17 significant digits, so a
reload reproduces the array bit for bit.
"""

import csv
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union
import logging

import numpy as np

from .assembly import ChannelSet
from ..errors import DimensionMismatch

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
FLOAT_FORMAT = '%.17g'


def _fmt(value: float) -> str:
    return FLOAT_FORMAT % value


def _read_records(path: Path):
    header = {}
    rows = []
    with open(path, newline='') as fh:
        for line in fh:
            if line.startswith('#'):
                for token in line[1:].split():
                    if '=' in token:
                        key, value = token.split('=', 1)
                        header[key] = value
                continue
            if line.strip():
                rows.append(line)
    return header, list(csv.reader(rows))


def save_complex_matrix(path: PathLike, matrix, extra_header: Optional[Iterable[str]] = None) -> Path:
    """Write a complex vector (as an N x 1 matrix) or matrix."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    m = np.asarray(matrix, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a vector or matrix, got shape {m.shape}")
    with open(path, 'w', newline='') as fh:
        for line in extra_header or ():
            fh.write(f"# {line}\n")
        fh.write(f"# rows={m.shape[0]} cols={m.shape[1]}\n")
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['row', 'col', 're', 'im'])
        for (r, c), value in np.ndenumerate(m):
            writer.writerow([r, c, _fmt(value.real), _fmt(value.imag)])
    return path


def load_complex_matrix(path: PathLike) -> np.ndarray:
    """
    Read a matrix written by :func:`save_complex_matrix`.

    Raises:
        DimensionMismatch: if the records disagree with the declared shape.
    """
    header, records = _read_records(Path(path))
    if records and records[0][:1] == ['row']:
        records = records[1:]
    try:
        rows, cols = int(header['rows']), int(header['cols'])
    except KeyError as exc:
        raise DimensionMismatch(f"{path}: missing shape header") from exc
    if len(records) != rows * cols:
        raise DimensionMismatch(f"{path}: expected {rows * cols} entries, found {len(records)}")
    out = np.empty((rows, cols), dtype=complex)
    for r, c, re, im in records:
        out[int(r), int(c)] = complex(float(re), float(im))
    return out


def _load_vector(path: Path) -> np.ndarray:
    return load_complex_matrix(path)[:, 0]


def save_channel_set(directory: PathLike, ch: ChannelSet) -> Path:
    """Write ``f1.csv .. fL.csv``, ``g.csv`` and ``meta.csv`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for idx, f in enumerate(ch.f, start=1):
        save_complex_matrix(directory / f"f{idx}.csv", f)
    save_complex_matrix(directory / 'g.csv', ch.g)
    with open(directory / 'meta.csv', 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['key', 'value'])
        writer.writerow(['wavelength_m', _fmt(ch.wavelength)])
        writer.writerow(['layers', ch.num_layers])
    logger.info(f"Saved {ch.num_layers}-layer channel set to {directory}")
    return directory


def load_channel_set(directory: PathLike) -> ChannelSet:
    directory = Path(directory)
    _, records = _read_records(directory / 'meta.csv')
    meta = {key: value for key, value in records[1:]}
    layers = int(meta['layers'])
    f = tuple(load_complex_matrix(directory / f"f{idx}.csv") for idx in range(1, layers + 1))
    return ChannelSet(f, load_complex_matrix(directory / 'g.csv'), float(meta['wavelength_m']))


def save_state(directory: PathLike, state) -> Path:
    """Write ``w.csv``, ``theta1.csv .. thetaL.csv`` and ``v.csv``."""
    directory = Path(directory)
    save_complex_matrix(directory / 'w.csv', state.w)
    for idx, theta in enumerate(state.theta, start=1):
        save_complex_matrix(directory / f"theta{idx}.csv", theta)
    save_complex_matrix(directory / 'v.csv', state.v)
    return directory


def load_state(directory: PathLike):
    from ..beamformer.state import BeamformerState  # avoids an import cycle

    directory = Path(directory)
    thetas = []
    idx = 1
    while (directory / f"theta{idx}.csv").exists():
        thetas.append(_load_vector(directory / f"theta{idx}.csv"))
        idx += 1
    return BeamformerState(
        w=_load_vector(directory / 'w.csv'),
        theta=tuple(thetas),
        v=_load_vector(directory / 'v.csv'),
    )


def save_trace(path: PathLike, trace, extra_header: Optional[Sequence[str]] = None) -> Path:
    """Write ``iteration,snr_linear,snr_db``; iteration 0 is the initial point."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    snrs = [trace.initial_snr, *trace.snr_per_iteration]
    with open(path, 'w', newline='') as fh:
        for line in extra_header or ():
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['iteration', 'snr_linear', 'snr_db'])
        for it, value in enumerate(snrs):
            db = 10.0 * np.log10(value) if value > 0 else float('-inf')
            writer.writerow([it, _fmt(value), _fmt(db)])
    return path

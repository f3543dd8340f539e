"""Binary quadrature records.

Layout: a little-endian header ``<4sIQQQd`` (magic, version, trajectories,
samples per trajectory, dimensions, sample spacing in seconds) followed by
``<f8`` values in trajectory-major, then sample, then dimension order.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from model.errors import ParameterError

MAGIC = b"QREC"
VERSION = 1
HEADER = struct.Struct("<4sIQQQd")
DTYPE = np.dtype("<f8")


@dataclass(frozen=True)
class RecordHeader:
    n_trajectories: int
    n_samples: int
    n_dims: int
    sample_dt: float

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_trajectories, self.n_samples, self.n_dims)


def create_records(path: str | Path, header: RecordHeader) -> np.memmap:
    """Write the header and return a writable (traj, sample, dim) view of the body."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(
            HEADER.pack(
                MAGIC,
                VERSION,
                header.n_trajectories,
                header.n_samples,
                header.n_dims,
                header.sample_dt,
            )
        )
        fh.truncate(HEADER.size + DTYPE.itemsize * int(np.prod(header.shape)))
    return np.memmap(path, dtype=DTYPE, mode="r+", offset=HEADER.size, shape=header.shape)


def read_header(path: str | Path) -> RecordHeader:
    with Path(path).open("rb") as fh:
        raw = fh.read(HEADER.size)
    if len(raw) != HEADER.size:
        raise ParameterError(f"{path}: truncated record header")
    magic, version, n_traj, n_samples, n_dims, sample_dt = HEADER.unpack(raw)
    if magic != MAGIC:
        raise ParameterError(f"{path}: not a quadrature record file")
    if version != VERSION:
        raise ParameterError(f"{path}: unsupported record version {version}")
    return RecordHeader(n_traj, n_samples, n_dims, sample_dt)


def read_records(path: str | Path) -> tuple[RecordHeader, np.ndarray]:
    """Header plus a read-only (traj, sample, dim) array."""
    header = read_header(path)
    expected = HEADER.size + DTYPE.itemsize * int(np.prod(header.shape))
    actual = Path(path).stat().st_size
    if actual != expected:
        raise ParameterError(f"{path}: size {actual} does not match header (expected {expected})")
    data = np.memmap(path, dtype=DTYPE, mode="r", offset=HEADER.size, shape=header.shape)
    return header, data

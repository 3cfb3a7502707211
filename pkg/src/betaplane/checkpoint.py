"""BPF1 bit-exact field checkpoints.

Layout (little-endian): magic b"BPF1", uint32 version=1, uint64 n,
float64 box_length, float64 t, float64 beta, then n*n float64 values row-major.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

import numpy as np

from .spectral import GridSpec, RealField

MAGIC = b"BPF1"
VERSION = 1
_HEADER = struct.Struct("<4sIQddd")
HEADER_SIZE = _HEADER.size  # 40 bytes


class CheckpointError(ValueError):
    pass


@dataclass(frozen=True)
class Checkpoint:
    field: RealField
    t: float
    beta: float


def checkpoint_write(path, field: RealField, t: float, beta: float) -> None:
    g = field.grid
    header = _HEADER.pack(MAGIC, VERSION, g.n, g.box_length, float(t), float(beta))
    payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def checkpoint_read(path) -> Checkpoint:
    size = os.path.getsize(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise CheckpointError(f"bad magic {magic!r} at byte offset 0 (expected {MAGIC!r})")
        rest = fh.read(HEADER_SIZE - 4)
        if len(rest) != HEADER_SIZE - 4:
            raise CheckpointError(f"truncated header: expected {HEADER_SIZE} bytes, file has {size}")
        _, version, n, box_length, t, beta = _HEADER.unpack(magic + rest)
        if version != VERSION:
            raise CheckpointError(f"unsupported version {version} at byte offset 4 (expected {VERSION})")
        expected = HEADER_SIZE + 8 * n * n
        if size != expected:
            raise CheckpointError(
                f"payload length mismatch: expected {expected} bytes total "
                f"({8 * n * n} payload from offset {HEADER_SIZE}), actual {size}"
            )
        data = np.frombuffer(fh.read(8 * n * n), dtype="<f8").reshape(n, n)
    return Checkpoint(RealField(GridSpec(int(n), box_length), data.astype(np.float64)), t, beta)

"""Artifact writers and readers: diagnostic CSV series, sweep tables, the
run manifest, and binary state checkpoints.

Numbers are written with 17 significant digits, enough for exact float64
round trips, so re-running an identical configuration reproduces every
file byte for byte.  Checkpoints are a short text header followed by raw
little-endian coefficient blocks (complex128 for u, float64 for v and vt)
flattened with the first (k) index fastest.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os

import numpy as np

from .dynamics import State, TrajectoryRecord, make_state
from .grids import field_from_coef, make_grid

__all__ = [
    "write_series",
    "write_table",
    "write_manifest",
    "file_checksums",
    "checkpoint_name",
    "save_checkpoint",
    "load_checkpoint",
]

_MAGIC = "sibsim-state 1"


def _fmt(value) -> str:
    x = float(value)
    if math.isnan(x):
        return ""
    return format(x, ".17g")


def _atomic_write(path: str, data: bytes) -> None:
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_series(path: str, record: TrajectoryRecord) -> None:
    """One CSV row per monitored sample; empty cell for unavailable values."""
    write_table(
        path,
        list(record.series),
        zip(*(record.series[col] for col in record.series)),
    )


def write_table(path: str, columns, rows) -> None:
    out = []
    writer_target = _StringCollector(out)
    writer = csv.writer(writer_target, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else _fmt(cell) for cell in row])
    _atomic_write(path, "".join(out).encode())


class _StringCollector:
    def __init__(self, sink: list):
        self.sink = sink

    def write(self, text: str) -> None:
        self.sink.append(text)


def write_manifest(path: str, payload: dict) -> None:
    data = json.dumps(payload, indent=2, sort_keys=True).encode() + b"\n"
    _atomic_write(path, data)


def file_checksums(directory: str, names) -> dict:
    """sha256 and size for each named artifact in the directory."""
    table = {}
    for name in names:
        with open(os.path.join(directory, name), "rb") as fh:
            blob = fh.read()
        table[name] = {"sha256": hashlib.sha256(blob).hexdigest(), "bytes": len(blob)}
    return table


# ---------------------------------------------------------------------------
# checkpoints


def checkpoint_name(t: float) -> str:
    return f"state_t{t:.4f}.bin"


def save_checkpoint(path: str, state: State) -> None:
    g = state.grid
    header = "\n".join(
        [
            _MAGIC,
            f"grid {g.Lx:.17g} {g.Ly:.17g} {g.Nx} {g.Ny}",
            f"t {state.t:.17g}",
            "blocks u:complex128 v:float64 vt:float64",
            "layout little-endian k-fastest",
            "end",
        ]
    ) + "\n"
    body = b"".join(
        [
            state.u.coef.flatten(order="F").astype("<c16").tobytes(),
            state.v.coef.flatten(order="F").astype("<f8").tobytes(),
            state.vt.coef.flatten(order="F").astype("<f8").tobytes(),
        ]
    )
    _atomic_write(path, header.encode() + body)


def load_checkpoint(path: str) -> State:
    with open(path, "rb") as fh:
        blob = fh.read()
    head_end = blob.find(b"end\n")
    if not blob.startswith(_MAGIC.encode()) or head_end < 0:
        raise ValueError(f"{path} is not a state checkpoint")
    fields = {}
    for line in blob[: head_end].decode().splitlines()[1:]:
        key, _, rest = line.partition(" ")
        fields[key] = rest
    lx, ly, nx, ny = fields["grid"].split()
    grid = make_grid(float(lx), float(ly), int(nx), int(ny))
    t = float(fields["t"])
    body = blob[head_end + 4 :]
    count = grid.Nx * grid.Ny
    u_bytes = 16 * count
    expected = u_bytes + 2 * 8 * count
    if len(body) != expected:
        raise ValueError(
            f"{path}: expected {expected} payload bytes, found {len(body)}"
        )

    def block(offset, size, dtype):
        return np.frombuffer(body, dtype=dtype, count=count, offset=offset).reshape(
            grid.shape, order="F"
        )

    u = block(0, u_bytes, "<c16").astype(np.complex128)
    v = block(u_bytes, 8 * count, "<f8").astype(np.float64)
    vt = block(u_bytes + 8 * count, 8 * count, "<f8").astype(np.float64)
    return make_state(
        field_from_coef(grid, u),
        field_from_coef(grid, v),
        field_from_coef(grid, vt),
        t,
    )

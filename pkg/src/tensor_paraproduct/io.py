"""File formats: TPMX binary matrices, binary PGM images and CSV matrices."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .dyadic import UnitGridField
from .errors import ShapeError

TPMX_MAGIC = b"TPMX"
TPMX_VERSION = 1
_HEADER = struct.Struct("<4sBII")  # 13 bytes


def encode_tpmx(values) -> bytes:
    arr = np.ascontiguousarray(values, dtype="<f8")
    if arr.ndim != 2:
        raise ShapeError(f"TPMX stores 2-D matrices, got shape {arr.shape}")
    return _HEADER.pack(TPMX_MAGIC, TPMX_VERSION, arr.shape[0], arr.shape[1]) + arr.tobytes()


def decode_tpmx(data: bytes) -> np.ndarray:
    if len(data) < _HEADER.size:
        raise ShapeError("truncated TPMX header")
    magic, version, rows, cols = _HEADER.unpack_from(data)
    if magic != TPMX_MAGIC:
        raise ShapeError(f"bad TPMX magic {magic!r}")
    if version != TPMX_VERSION:
        raise ShapeError(f"unsupported TPMX version {version}")
    payload = data[_HEADER.size:]
    if len(payload) != 8 * rows * cols:
        raise ShapeError(f"TPMX payload is {len(payload)} bytes, expected {8 * rows * cols}")
    return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(np.float64)


def write_tpmx(path, values) -> None:
    Path(path).write_bytes(encode_tpmx(values))


def read_tpmx(path) -> np.ndarray:
    return decode_tpmx(Path(path).read_bytes())


def pgm_bytes(values) -> bytes:
    """Binary PGM (P5, maxval 255); ``[min, max]`` maps affinely onto ``[0, 255]``
    and a constant image is mid-gray 128.  Image row ``r`` is array row ``r``."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"cannot render array of shape {arr.shape}")
    lo, hi = float(arr.min()), float(arr.max())
    if hi > lo:
        pix = np.rint((arr - lo) * (255.0 / (hi - lo)))
        pix = np.clip(pix, 0, 255).astype(np.uint8)
    else:
        pix = np.full(arr.shape, 128, dtype=np.uint8)
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode("ascii")
    return header + pix.tobytes()


def render_grayscale(field_: UnitGridField, path) -> None:
    Path(path).write_bytes(pgm_bytes(field_.values))


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ShapeError("not a binary PGM")
    cols, rows = (int(t) for t in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(rows, cols)


def write_matrix_csv(path, values) -> None:
    arr = np.asarray(values, dtype=np.float64)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(f"c{i}" for i in range(arr.shape[1])) + "\n")
        for row in arr:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_field(path, field_: UnitGridField, fmt: str) -> None:
    if fmt == "tpmx":
        write_tpmx(path, field_.values)
    elif fmt == "csv":
        write_matrix_csv(path, field_.values)
    elif fmt == "pgm":
        render_grayscale(field_, path)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_field(path) -> UnitGridField:
    path = Path(path)
    if path.suffix == ".csv":
        return UnitGridField(read_matrix_csv(path))
    return UnitGridField(read_tpmx(path))

"""Bit-exact binary checkpoints (``.dcrf``).

Layout, all little-endian::

    0   4s   magic b"DCRF"
    4   u32  version (1)
    8   u32  n_points
    12  u32  n_modes
    16  f64  half_length
    24  f64  time
    32  ...  n_points * n_modes complex values, (re, im) f64 pairs, x1-major
"""

import struct

import numpy as np

from .field import Field, Grid1D
from .hermite import build_basis

MAGIC = b"DCRF"
VERSION = 1
HEADER = struct.Struct("<4sIIIdd")


class CheckpointError(ValueError):
    pass


def dumps(f, time=0.0):
    g = f.physical()
    header = HEADER.pack(MAGIC, VERSION, g.grid.n_points, g.basis.n_modes,
                         float(g.grid.half_length), float(time))
    return header + np.ascontiguousarray(g.coeffs, dtype="<c16").tobytes()


def read_header(data):
    if len(data) < HEADER.size:
        raise CheckpointError("file too short for a checkpoint header")
    magic, version, n_points, n_modes, half_length, time = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    return {"n_points": n_points, "n_modes": n_modes, "half_length": half_length, "time": time}


def loads(data, basis=None):
    """Decode checkpoint bytes into ``(field, time)``."""
    hdr = read_header(data)
    n1, nh = hdr["n_points"], hdr["n_modes"]
    expected = HEADER.size + 16 * n1 * nh
    if len(data) != expected:
        raise CheckpointError(f"payload size mismatch: {len(data)} bytes, expected {expected}")
    coeffs = np.frombuffer(data, dtype="<c16", offset=HEADER.size).reshape(n1, nh)
    if basis is None or basis.n_modes != nh:
        basis = build_basis(nh)
    return Field(Grid1D(n1, hdr["half_length"]), basis, coeffs.astype(np.complex128)), hdr["time"]


def write(path, f, time=0.0):
    with open(path, "wb") as fh:
        fh.write(dumps(f, time))


def read(path, basis=None):
    with open(path, "rb") as fh:
        return loads(fh.read(), basis)

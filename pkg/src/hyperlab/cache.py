"""On-disk table cache.

Layout: 4 magic bytes ``HPL1``, one version byte, a little-endian int64 element
count, then the elements as little-endian int64.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"HPL1"
VERSION = 1
_HEADER = struct.Struct("<4sBq")


class CacheFormatError(ValueError):
    pass


def save_array(path: str | Path, arr: np.ndarray) -> None:
    data = np.ascontiguousarray(arr, dtype="<i8")
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, len(data)))
        fh.write(data.tobytes())
    tmp.replace(path)


def load_array(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise CacheFormatError("truncated header")
        magic, version, count = _HEADER.unpack(head)
        if magic != MAGIC:
            raise CacheFormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise CacheFormatError(f"unsupported version {version}")
        body = fh.read()
    if len(body) != 8 * count:
        raise CacheFormatError("payload length does not match header")
    return np.frombuffer(body, dtype="<i8").astype(np.int64)

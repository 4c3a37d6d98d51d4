"""Versioned binary container for named tensors plus JSON metadata.

Layout::

    b"PMTB" | u16 version | u32 header length | header JSON | tensor bytes

The header lists every tensor's name, dtype and shape in payload order.
Tensors are stored row-major in little-endian byte order.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path
from typing import Mapping

import numpy as np

MAGIC = b"PMTB"
VERSION = 1
_ALLOWED = {"<f8", "<i8", "<f4", "|u1"}


def encode_blob(tensors: Mapping[str, np.ndarray], meta: Mapping | None = None) -> bytes:
    entries = []
    chunks = []
    for name, arr in tensors.items():
        a = np.asarray(arr)
        if a.dtype.kind == "f":
            a = a.astype("<f8")
        elif a.dtype.kind in "iu" and a.dtype != np.uint8:
            a = a.astype("<i8")
        dt = a.dtype.str
        if dt not in _ALLOWED:
            raise TypeError(f"tensor {name!r}: unsupported dtype {a.dtype}")
        entries.append({"name": name, "dtype": dt, "shape": list(a.shape)})
        chunks.append(np.ascontiguousarray(a).tobytes(order="C"))
    header = json.dumps(
        {"meta": dict(meta or {}), "tensors": entries}, sort_keys=True, separators=(",", ":")
    ).encode("utf-8")
    return MAGIC + struct.pack("<HI", VERSION, len(header)) + header + b"".join(chunks)


def decode_blob(data: bytes) -> tuple[dict[str, np.ndarray], dict]:
    if data[:4] != MAGIC:
        raise ValueError("not a tensor blob (bad magic)")
    version, hlen = struct.unpack("<HI", data[4:10])
    if version != VERSION:
        raise ValueError(f"unsupported blob version {version}")
    header = json.loads(data[10 : 10 + hlen].decode("utf-8"))
    offset = 10 + hlen
    tensors = {}
    for e in header["tensors"]:
        dt = np.dtype(e["dtype"])
        shape = tuple(e["shape"])
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * dt.itemsize
        if offset + nbytes > len(data):
            raise ValueError(f"truncated blob while reading {e['name']!r}")
        arr = np.frombuffer(data, dtype=dt, count=count, offset=offset).reshape(shape).copy()
        tensors[e["name"]] = arr
        offset += nbytes
    if offset != len(data):
        raise ValueError("trailing bytes after last tensor")
    return tensors, header["meta"]


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def save_blob(path, tensors: Mapping[str, np.ndarray], meta: Mapping | None = None) -> None:
    atomic_write_bytes(path, encode_blob(tensors, meta))


def load_blob(path) -> tuple[dict[str, np.ndarray], dict]:
    return decode_blob(Path(path).read_bytes())

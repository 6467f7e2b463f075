"""
Reading and writing sample batches.

Two formats:

CSV
    Header ``dim_0,...,dim_{D-1}`` (preceded by a ``lambda`` column when the
    rows are points along an interpolation path), one row per latent point,
    floats written in shortest round-trip form.  Metadata is not stored.

LSB1
    Little-endian binary::

        b"LSB1"                  magic
        u32                      D
        u64                      n
        n * D float64            row-major values
        u32                      byte length of the metadata blob
        bytes                    UTF-8 JSON metadata (prior, seed, ...)
"""
from __future__ import annotations

import csv
import json
import os
import struct
from typing import Optional, Union

import numpy as np

from .priors import PriorSpec, SampleBatch

__all__ = [
    "MAGIC",
    "to_lsb1_bytes",
    "from_lsb1_bytes",
    "write_lsb1",
    "read_lsb1",
    "write_csv",
    "read_csv",
    "write_histogram_csv",
    "write_json",
    "read_batch",
]

MAGIC = b"LSB1"
_HEADER = struct.Struct("<4sIQ")
_LEN = struct.Struct("<I")
_RESERVED = ("prior", "seed", "scale", "lambdas")

PathLike = Union[str, os.PathLike]


class FormatError(ValueError):
    pass


def _metadata_json(batch: SampleBatch) -> bytes:
    return json.dumps(batch.metadata(), sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


def to_lsb1_bytes(batch: SampleBatch) -> bytes:
    meta = _metadata_json(batch)
    body = np.ascontiguousarray(batch.data, dtype="<f8").tobytes()
    return b"".join([_HEADER.pack(MAGIC, batch.D, batch.n), body,
                     _LEN.pack(len(meta)), meta])


def from_lsb1_bytes(buf: bytes) -> SampleBatch:
    if len(buf) < _HEADER.size or buf[:4] != MAGIC:
        raise FormatError("not an LSB1 stream (bad magic)")
    _, D, n = _HEADER.unpack_from(buf, 0)
    start = _HEADER.size
    end = start + 8 * n * D
    if len(buf) < end + _LEN.size:
        raise FormatError("truncated LSB1 stream")
    data = np.frombuffer(buf, dtype="<f8", count=n * D, offset=start).reshape(n, D)
    (mlen,) = _LEN.unpack_from(buf, end)
    raw = buf[end + _LEN.size:end + _LEN.size + mlen]
    if len(raw) != mlen:
        raise FormatError("truncated LSB1 metadata")
    meta = json.loads(raw.decode("utf-8"))
    prior = PriorSpec.from_dict(meta["prior"])
    if prior.D != D:
        raise FormatError(f"metadata says D={prior.D}, header says D={D}")
    extra = {k: v for k, v in meta.items() if k not in _RESERVED}
    return SampleBatch(data, prior, int(meta["seed"]),
                       scale=float(meta.get("scale", 1.0)),
                       lambdas=meta.get("lambdas"), extra=extra)


def write_lsb1(batch: SampleBatch, path: PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(to_lsb1_bytes(batch))


def read_lsb1(path: PathLike) -> SampleBatch:
    with open(path, "rb") as fh:
        return from_lsb1_bytes(fh.read())


def _format(v: float) -> str:
    return repr(float(v))


def write_csv(batch: SampleBatch, path: PathLike) -> None:
    header = [f"dim_{j}" for j in range(batch.D)]
    with_lambda = batch.lambdas is not None
    if with_lambda:
        header = ["lambda"] + header
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i, row in enumerate(batch.data):
            cells = [_format(v) for v in row]
            if with_lambda:
                cells.insert(0, _format(batch.lambdas[i]))
            w.writerow(cells)


def read_csv(path: PathLike) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Return ``(data, lambdas)``; ``lambdas`` is None without that column."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError("empty CSV file")
    header = rows[0]
    with_lambda = bool(header) and header[0] == "lambda"
    dims = header[1:] if with_lambda else header
    if dims != [f"dim_{j}" for j in range(len(dims))]:
        raise FormatError("CSV header must be dim_0,...,dim_{D-1}")
    values = np.array([[float(c) for c in r] for r in rows[1:]], dtype=float)
    values = values.reshape(len(rows) - 1, len(header))
    if with_lambda:
        return values[:, 1:].copy(), values[:, 0].copy()
    return values, None


def write_histogram_csv(histogram, path: PathLike) -> None:
    """``bin_center,density`` rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_center", "density"])
        for center, density in histogram:
            w.writerow([_format(center), _format(density)])


def write_json(obj: dict, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


def read_batch(path: PathLike) -> SampleBatch | np.ndarray:
    """LSB1 files give a :class:`SampleBatch`, anything else is read as CSV data."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return read_lsb1(path)
    return read_csv(path)[0]


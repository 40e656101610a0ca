"""The common container for per-node encodings and its CSV interchange.

Every scheme in this package (gape, lape, rw, ppr_diag, pprp, sinusoidal)
produces an ``EncodingMatrix``: one row per node, one column per encoding
dimension, plus a metadata record with the parameters that produced it.
CSV export writes shortest round-trip decimals so re-reading is lossless.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["SCHEMES", "EncodingMatrix", "encoding_to_csv", "encoding_from_csv"]

SCHEMES = ("gape", "lape", "rw", "ppr_diag", "pprp", "sinusoidal")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class EncodingMatrix:
    """n x k matrix of node encodings with scheme and parameter metadata."""

    scheme: str
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"encoding values must be 2-D, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("encoding contains NaN or Inf entries")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]


def encoding_to_csv(enc: EncodingMatrix, path) -> None:
    """Write `node,dim_1,...,dim_k` rows with shortest round-trip decimals."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node"] + [f"dim_{j + 1}" for j in range(enc.k)])
        for i in range(enc.n):
            writer.writerow([i + 1] + [repr(float(x)) for x in enc.values[i]])


def encoding_from_csv(path, scheme: str = "gape", meta: dict | None = None) -> EncodingMatrix:
    """Read an encoding CSV back into an :class:`EncodingMatrix`."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "node":
            raise ValueError(f"{path} is not an encoding CSV (bad header)")
        rows = []
        for row in reader:
            if not row:
                continue
            rows.append([float(x) for x in row[1:]])
    if not rows:
        raise ValueError(f"{path} holds no encoding rows")
    return EncodingMatrix(scheme=scheme, values=np.array(rows), meta=dict(meta or {}))

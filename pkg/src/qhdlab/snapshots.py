"""Field snapshot files (QHDF) and line-delimited run diagnostics (NDJSON).

QHDF layout, all little-endian:

    magic   4 bytes  b"QHDF"
    version u32      currently 1
    dim     u32      Cartesian spatial dimension, or ambient d for radial
    n       u32      nodes per axis (Cartesian) or n_r (radial)
    extent  f64      box side L (Cartesian) or r_max (radial)
    kind    u32      0 = cartesian-periodic, 1 = radial
    ncomp   u32      1 for scalar/complex, dim for vector
    cplx    u32      1 when samples are complex, else 0

followed by float64 samples in row-major node order. Vector components are
interleaved per node; complex samples are stored as (re, im) pairs.
"""
from __future__ import annotations

import dataclasses
import json
import struct
from pathlib import Path

import numpy as np

from .grids import ComplexField, Grid, RadialGrid, ScalarField, VectorField

MAGIC = b"QHDF"
VERSION = 1
_KIND_CODE = {"cartesian-periodic": 0, "radial": 1}
_HEADER = struct.Struct("<4sIIIdIII")


def _grid_header(field) -> tuple[int, int, float, int]:
    g = field.grid
    if isinstance(g, Grid):
        return g.dim, g.n, g.length, 0
    if isinstance(g, RadialGrid):
        return g.d, g.n_r, g.r_max, 1
    raise TypeError(f"unsupported grid type {type(g)!r}")


def write_field(path: str | Path, field: ScalarField | VectorField | ComplexField) -> None:
    dim, n, extent, kind = _grid_header(field)
    if isinstance(field, VectorField):
        ncomp, cplx = field.grid.dim, 0
        # component-major in memory -> node-major interleaved on disk
        payload = np.moveaxis(field.values, 0, -1)
    elif isinstance(field, ComplexField):
        ncomp, cplx = 1, 1
        payload = field.values
    else:
        ncomp, cplx = 1, 0
        payload = field.values
    header = _HEADER.pack(MAGIC, VERSION, dim, n, extent, kind, ncomp, cplx)
    data = np.ascontiguousarray(payload)
    if cplx:
        data = data.astype("<c16")
    else:
        data = data.astype("<f8")
    Path(path).write_bytes(header + data.tobytes())


def read_field(path: str | Path) -> ScalarField | VectorField | ComplexField:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size or raw[:4] != MAGIC:
        raise ValueError(f"{path}: not a QHDF file")
    magic, version, dim, n, extent, kind, ncomp, cplx = _HEADER.unpack_from(raw)
    if version != VERSION:
        raise ValueError(f"{path}: unsupported QHDF version {version}")
    if kind == 0:
        grid = Grid(dim=dim, n=n, length=extent)
        shape = grid.shape
    elif kind == 1:
        grid = RadialGrid(d=dim, r_max=extent, n_r=n)
        shape = grid.shape
    else:
        raise ValueError(f"{path}: unknown grid kind {kind}")
    count = int(np.prod(shape)) * ncomp
    dtype = np.dtype("<c16") if cplx else np.dtype("<f8")
    body = np.frombuffer(raw, dtype=dtype, offset=_HEADER.size)
    if body.size != count:
        raise ValueError(f"{path}: expected {count} samples, found {body.size}")
    if cplx:
        return ComplexField(grid, body.reshape(shape).astype(np.complex128))
    if ncomp == 1:
        return ScalarField(grid, body.reshape(shape).astype(np.float64))
    values = body.reshape(shape + (ncomp,)).astype(np.float64)
    return VectorField(grid, np.moveaxis(values, -1, 0))


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def write_ndjson(path: str | Path, records) -> None:
    """One JSON object per line; floats via repr for bit-stable output."""
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(_jsonable(rec), allow_nan=False, separators=(",", ":")))
            fh.write("\n")


def read_ndjson(path: str | Path) -> list[dict]:
    out = []
    with open(path) as fh:
        for i, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{i}: malformed NDJSON record: {exc}") from exc
    return out

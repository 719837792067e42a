"""On-disk formats: F64R rasters, CSV tables, PGM previews, dumps.

F64R is a minimal binary container: magic ``F64R``, a little-endian
u16 version (1), u16 dimension count, one u64 extent per dimension,
then the row-major IEEE-754 binary64 payload.  CSV files carry ``#``
header lines and print floats with 17 significant digits so repeated
runs diff bitwise.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

__all__ = [
    "FormatError",
    "write_f64r",
    "read_f64r",
    "write_csv",
    "read_csv_rows",
    "write_pgm",
    "dump_coefficients",
    "load_coefficients",
    "fmt_float",
]

_MAGIC = b"F64R"
_VERSION = 1


class FormatError(ValueError):
    """Malformed container or sidecar."""


def fmt_float(x: float) -> str:
    return f"{float(x):.17e}"


def write_f64r(path, array) -> None:
    arr = np.ascontiguousarray(np.asarray(array, dtype="<f8"))
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<HH", _VERSION, arr.ndim))
        for n in arr.shape:
            fh.write(struct.pack("<Q", n))
        fh.write(arr.tobytes())


def read_f64r(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 8 or raw[:4] != _MAGIC:
        raise FormatError(f"{path}: missing F64R magic")
    version, ndim = struct.unpack_from("<HH", raw, 4)
    if version != _VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    off = 8
    if len(raw) < off + 8 * ndim:
        raise FormatError(f"{path}: truncated header")
    shape = struct.unpack_from("<" + "Q" * ndim, raw, off)
    off += 8 * ndim
    count = int(np.prod(shape)) if ndim else 0
    if len(raw) != off + 8 * count:
        raise FormatError(f"{path}: payload length mismatch")
    return np.frombuffer(raw, dtype="<f8", offset=off, count=count).reshape(shape).copy()


def write_csv(path, rows, header: list[str] | None = None) -> None:
    lines = []
    for h in header or []:
        lines.append(f"# {h}")
    for row in rows:
        parts = []
        for v in row:
            if isinstance(v, str):
                parts.append(v)
            elif isinstance(v, (int, np.integer)):
                parts.append(str(int(v)))
            else:
                parts.append(fmt_float(v))
        lines.append(",".join(parts))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv_rows(path) -> list[list[str]]:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split(","))
    return rows


def write_pgm(path, array) -> None:
    """8-bit binary PGM preview with min-max scaling (2D only)."""
    arr = np.asarray(array, dtype=float)
    if arr.ndim != 2:
        raise FormatError("PGM export requires a 2D raster")
    lo, hi = float(arr.min()), float(arr.max())
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    img = np.clip((arr - lo) * scale, 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode())
        fh.write(img.tobytes())


def dump_coefficients(cset, path, config_text: str) -> None:
    """Flat F64R of all bands plus a plain-text band index sidecar.

    The sidecar stores the system config (commented) followed by one
    line per band: region, scale, shear components, flat offset, and
    the band extents.
    """
    path = Path(path)
    flat = cset.flatten()
    write_f64r(path, flat)
    lines = ["# shearframes coefficient index v1"]
    for cfg_line in config_text.strip().splitlines():
        lines.append(f"#config {cfg_line}")
    ext = "x".join(str(n) for n in cset.plan.extents)
    lines.append(f"#extents {ext}")
    offset = 0
    for band in cset.plan.bands:
        arr = cset.data[band]
        kstr = ";".join(str(int(kk)) for kk in band.k) or "-"
        estr = "x".join(str(n) for n in arr.shape)
        lines.append(f"{band.region} {band.j} {kstr} {offset} {estr}")
        offset += arr.size
    Path(str(path) + ".idx").write_text("\n".join(lines) + "\n")


def load_coefficients(path):
    """Rebuild a CoefficientSet from a dump; returns (cset, spec)."""
    from .systems import SystemSpec
    from .transform import CoefficientSet, plan_for

    flat = read_f64r(path)
    idx_path = Path(str(path) + ".idx")
    if not idx_path.exists():
        raise FormatError(f"missing sidecar {idx_path}")
    config_lines = []
    extents = None
    band_rows = []
    for line in idx_path.read_text().splitlines():
        if line.startswith("#config "):
            config_lines.append(line[len("#config "):])
        elif line.startswith("#extents "):
            extents = tuple(int(x) for x in line.split()[1].split("x"))
        elif line.startswith("#") or not line.strip():
            continue
        else:
            band_rows.append(line.split())
    if extents is None or not config_lines:
        raise FormatError(f"{idx_path}: incomplete sidecar")
    spec = SystemSpec.from_config("\n".join(config_lines))
    plan = plan_for(spec, extents)
    if len(band_rows) != len(plan.bands):
        raise FormatError("band count mismatch between sidecar and plan")
    data = {}
    for band, row in zip(plan.bands, band_rows):
        region, j_s, kstr, off_s, estr = row
        shape = tuple(int(x) for x in estr.split("x"))
        if region != band.region or int(j_s) != band.j or shape != band.counts:
            raise FormatError(f"band mismatch: {row} vs {band}")
        off = int(off_s)
        data[band] = flat[off:off + int(np.prod(shape))].reshape(shape)
    return CoefficientSet(plan, data), spec

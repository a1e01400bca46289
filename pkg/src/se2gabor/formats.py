"""On-disk formats: F2D1/SE2F binary fields, 16-bit PGM, PPM, and CSV.

All writers go through a temp-file-plus-rename so partially written
outputs never land under the target path.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .angular import AngularSignal, angle_grid
from .bargmann import SE2Field
from .grid2d import Field2D

__all__ = [
    "atomic_write",
    "write_field",
    "read_field",
    "write_se2_field",
    "read_se2_field",
    "pgm16_bytes",
    "write_pgm16",
    "ppm_bytes",
    "write_ppm",
    "write_signal_csv",
]

_F2D1_MAGIC = b"F2D1"
_SE2F_MAGIC = b"SE2F"
_FLAG_COMPLEX = 0x1


def atomic_write(path: str, data: bytes) -> None:
    """Write bytes to ``path`` atomically (same-directory temp + rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _field_payload(f: Field2D) -> bytes:
    vals = f.values
    is_complex = bool(np.iscomplexobj(vals))
    head = _F2D1_MAGIC + struct.pack(
        "<IId", f.n, _FLAG_COMPLEX if is_complex else 0, float(f.h)
    )
    if is_complex:
        inter = np.empty((f.n, f.n, 2), dtype="<f8")
        inter[..., 0] = vals.real
        inter[..., 1] = vals.imag
        return head + inter.tobytes()
    return head + np.ascontiguousarray(vals.real, dtype="<f8").tobytes()


def write_field(path: str, f: Field2D) -> None:
    atomic_write(path, _field_payload(f))


def _parse_field(buf: bytes, offset: int = 0):
    if buf[offset : offset + 4] != _F2D1_MAGIC:
        raise ValueError(f"bad magic {buf[offset:offset + 4]!r}, expected {_F2D1_MAGIC!r}")
    n, flags, h = struct.unpack_from("<IId", buf, offset + 4)
    start = offset + 4 + struct.calcsize("<IId")
    if flags & _FLAG_COMPLEX:
        count = 2 * n * n
        raw = np.frombuffer(buf, dtype="<f8", count=count, offset=start)
        vals = raw[0::2] + 1j * raw[1::2]
    else:
        count = n * n
        vals = np.frombuffer(buf, dtype="<f8", count=count, offset=start).copy()
    end = start + count * 8
    return Field2D(vals.reshape(n, n), h=h), end


def read_field(path: str) -> Field2D:
    with open(path, "rb") as fh:
        field, _ = _parse_field(fh.read())
    return field


def write_se2_field(path: str, f: SE2Field) -> None:
    head = _SE2F_MAGIC + struct.pack(
        "<IIddd", f.n, f.n_theta, float(f.h), float(f.lam), float(f.omega)
    )
    body = b"".join(_field_payload(f.theta_slice(t)) for t in range(f.n_theta))
    atomic_write(path, head + body)


def read_se2_field(path: str) -> SE2Field:
    with open(path, "rb") as fh:
        buf = fh.read()
    if buf[:4] != _SE2F_MAGIC:
        raise ValueError(f"bad magic {buf[:4]!r}, expected {_SE2F_MAGIC!r}")
    n, n_theta, h, lam, omega = struct.unpack_from("<IIddd", buf, 4)
    offset = 4 + struct.calcsize("<IIddd")
    slices = []
    for _ in range(n_theta):
        field, offset = _parse_field(buf, offset)
        slices.append(field.values)
    return SE2Field(np.stack(slices), lam=lam, omega=omega, h=h)


def pgm16_bytes(values: np.ndarray, lo: float, hi: float, seed: int | None = None) -> bytes:
    vals = np.asarray(values, dtype=float)
    span = hi - lo if hi > lo else 1.0
    scaled = np.clip(np.round((vals - lo) / span * 65535.0), 0, 65535).astype(">u2")
    header = f"P5\n{vals.shape[1]} {vals.shape[0]}\n"
    if seed is not None:
        header += f"# seed={seed}\n"
    header += "65535\n"
    return header.encode("ascii") + scaled.tobytes()


def write_pgm16(path: str, values: np.ndarray, seed: int | None = None,
                lo: float | None = None, hi: float | None = None) -> None:
    """16-bit grayscale PGM with affine min-max scaling.

    The scaling interval ``[lo, hi]`` (shared scaling is possible by passing
    it explicitly) is recorded in a ``<path>.meta`` sidecar of plain
    ``key=value`` lines.
    """
    vals = np.asarray(values, dtype=float)
    lo = float(vals.min()) if lo is None else float(lo)
    hi = float(vals.max()) if hi is None else float(hi)
    atomic_write(path, pgm16_bytes(vals, lo, hi, seed))
    meta_lines = [f"min={lo!r}", f"max={hi!r}", f"width={vals.shape[1]}",
                  f"height={vals.shape[0]}", "maxval=65535"]
    if seed is not None:
        meta_lines.append(f"seed={seed}")
    atomic_write(path + ".meta", ("\n".join(meta_lines) + "\n").encode("ascii"))


def ppm_bytes(rgb: np.ndarray, seed: int | None = None) -> bytes:
    rgb = np.asarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"need an (h, w, 3) uint8 array, got shape {rgb.shape}")
    header = f"P6\n{rgb.shape[1]} {rgb.shape[0]}\n"
    if seed is not None:
        header += f"# seed={seed}\n"
    header += "255\n"
    return header.encode("ascii") + rgb.tobytes()


def write_ppm(path: str, rgb: np.ndarray, seed: int | None = None) -> None:
    """24-bit color PPM; a trailing header comment carries the seed."""
    atomic_write(path, ppm_bytes(rgb, seed))


def write_signal_csv(path: str, s: AngularSignal, include_imag: bool | None = None) -> None:
    """Angular signal as ``phi,re[,im]`` rows with a header line."""
    if include_imag is None:
        include_imag = bool(np.abs(s.values.imag).max() > 0.0)
    phis = angle_grid(s.n)
    lines = ["phi,re,im" if include_imag else "phi,re"]
    for phi, v in zip(phis, s.values):
        if include_imag:
            lines.append(f"{phi!r},{v.real!r},{v.imag!r}")
        else:
            lines.append(f"{phi!r},{v.real!r}")
    atomic_write(path, ("\n".join(lines) + "\n").encode("ascii"))

"""Binary PGM (P5, maxval 255) reading and writing."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import FormatError


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Pull ``count`` whitespace-separated header tokens, skipping # comments."""
    toks = []
    i = 0
    n = len(data)
    while len(toks) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i >= n:
            raise FormatError("truncated PGM header")
        if data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
            i += 1
        toks.append(data[start:i])
    # exactly one whitespace byte separates maxval from the raster
    if i >= n or not data[i : i + 1].isspace():
        raise FormatError("missing whitespace after PGM header")
    return toks, i + 1


def parse_pgm(data: bytes) -> np.ndarray:
    if not data.startswith(b"P5"):
        raise FormatError("not a binary PGM (expected P5 magic)")
    toks, offset = _tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in toks[1:])
    except ValueError as exc:
        raise FormatError(f"bad PGM header field: {exc}") from None
    if width <= 0 or height <= 0:
        raise FormatError("PGM dimensions must be positive")
    if maxval != 255:
        raise FormatError(f"only maxval 255 is supported, got {maxval}")
    raster = data[offset : offset + width * height]
    if len(raster) != width * height:
        raise FormatError("PGM raster shorter than header claims")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def format_pgm(img: np.ndarray) -> bytes:
    img = np.asarray(img)
    if img.ndim != 2:
        raise FormatError("PGM images are two-dimensional")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise FormatError("pixel values outside 0..255")
        img = img.astype(np.uint8)
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(img).tobytes()


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    return parse_pgm(Path(path).read_bytes())


def atomic_write(path: str | os.PathLike, data: bytes) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        # mkstemp creates 0600; match what a plain open() would give
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_pgm(path: str | os.PathLike, img: np.ndarray) -> None:
    atomic_write(path, format_pgm(img))

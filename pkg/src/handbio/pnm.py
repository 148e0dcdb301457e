"""Binary PPM (P6) and PGM (P5) image I/O, maxval 255.

Writers emit no comment lines; readers tolerate '#' comments and arbitrary
whitespace in the header, as produced by common tools.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .raster import RasterImage


def _read_token(f: io.BufferedReader) -> bytes:
    tok = b""
    while True:
        ch = f.read(1)
        if not ch:
            raise ValueError("truncated PNM header")
        if ch == b"#":
            while ch not in (b"\n", b""):
                ch = f.read(1)
            continue
        if ch.isspace():
            if tok:
                return tok
            continue
        tok += ch


def read_pnm(path) -> RasterImage:
    with open(path, "rb") as f:
        magic = _read_token(f)
        if magic not in (b"P5", b"P6"):
            raise ValueError(f"unsupported PNM magic: {magic!r}")
        w = int(_read_token(f))
        h = int(_read_token(f))
        maxval = int(_read_token(f))
        if maxval != 255:
            raise ValueError("only maxval 255 is supported")
        channels = 3 if magic == b"P6" else 1
        data = f.read(w * h * channels)
        if len(data) != w * h * channels:
            raise ValueError("truncated PNM pixel data")
    arr = np.frombuffer(data, dtype=np.uint8)
    if channels == 1:
        return RasterImage(arr.reshape(h, w).copy())
    return RasterImage(arr.reshape(h, w, 3).copy())


def write_pnm(img: RasterImage, path) -> None:
    path = Path(path)
    magic = b"P6" if img.channels == 3 else b"P5"
    header = magic + b"\n%d %d\n255\n" % (img.width, img.height)
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(img.pixels).tobytes())


def write_mask_pgm(bits: np.ndarray, path) -> None:
    write_pnm(RasterImage((bits.astype(np.uint8) * 255)), path)


def read_mask_pgm(path) -> np.ndarray:
    img = read_pnm(path)
    if img.channels != 1:
        raise ValueError("mask PGM must be single channel")
    return img.pixels > 127

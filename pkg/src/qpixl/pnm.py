"""Reading and writing netpbm grayscale (PGM) and color (PPM) images."""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .errors import ImageFormatError, MalformedHeaderError, SampleRangeError, TruncatedPayloadError

_MAGIC = {
    b"P2": ("PGM", 1, False),
    b"P5": ("PGM", 1, True),
    b"P3": ("PPM", 3, False),
    b"P6": ("PPM", 3, True),
}
_WHITESPACE = b" \t\r\n\v\f"


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos:self.pos + 1]
            if c in _WHITESPACE:
                self.pos += 1
            elif c == b"#":
                eol = data.find(b"\n", self.pos)
                self.pos = len(data) if eol < 0 else eol + 1
            else:
                break

    def integer(self, what):
        self.skip_space()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if self.pos == start:
            if start >= len(data):
                raise TruncatedPayloadError(f"unexpected end of file reading {what}", start)
            err = ImageFormatError if what == "sample" else MalformedHeaderError
            raise err(f"expected an integer for {what}", start)
        return int(data[start:self.pos]), start


def parse_pnm(data: bytes, expect: str | None = None):
    """Parse netpbm bytes.

    Returns ``(kind, width, height, channels, maxval, samples)`` with
    ``samples`` a flat row-major, channel-interleaved integer array.
    """
    magic = data[:2]
    if magic not in _MAGIC:
        raise MalformedHeaderError(f"unknown magic number {magic!r}", 0)
    kind, channels, binary = _MAGIC[magic]
    if expect is not None and expect.upper() != kind:
        raise MalformedHeaderError(f"expected a {expect.upper()} file, found {kind}", 0)

    rd = _Reader(data)
    rd.pos = 2
    if rd.pos < len(data) and data[rd.pos:rd.pos + 1] not in _WHITESPACE + b"#":
        raise MalformedHeaderError("missing whitespace after magic number", rd.pos)
    width, off = rd.integer("width")
    if width < 1:
        raise MalformedHeaderError("width must be positive", off)
    height, off = rd.integer("height")
    if height < 1:
        raise MalformedHeaderError("height must be positive", off)
    maxval, off = rd.integer("maxval")
    if not 1 <= maxval <= 65535 or (maxval + 1) & maxval:
        raise MalformedHeaderError(f"maxval {maxval} is not of the form 2^k - 1 (k <= 16)", off)

    count = width * height * channels
    if binary:
        if rd.pos >= len(data) or data[rd.pos:rd.pos + 1] not in _WHITESPACE:
            raise MalformedHeaderError("missing whitespace after maxval", rd.pos)
        start = rd.pos + 1
        width_bytes = 1 if maxval < 256 else 2
        end = start + count * width_bytes
        if end > len(data):
            raise TruncatedPayloadError(
                f"raster needs {count * width_bytes} bytes, file has {len(data) - start}",
                len(data),
            )
        dtype = np.uint8 if width_bytes == 1 else np.dtype(">u2")
        samples = np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.int64)
        bad = np.flatnonzero(samples > maxval)
        if bad.size:
            i = int(bad[0])
            raise SampleRangeError(
                f"sample out of range: {samples[i]} > maxval {maxval}", start + i * width_bytes
            )
    else:
        samples = np.empty(count, dtype=np.int64)
        for i in range(count):
            value, off = rd.integer("sample")
            if value > maxval:
                raise SampleRangeError(f"sample out of range: {value} > maxval {maxval}", off)
            samples[i] = value
    return kind, width, height, channels, maxval, samples


def read_pnm(path: str | os.PathLike, expect: str | None = None):
    return parse_pnm(Path(path).read_bytes(), expect)


def encode_pnm(width: int, height: int, channels: int, maxval: int, samples) -> bytes:
    """Binary P5 (one channel) or P6 (three channels) bytes."""
    magic = {1: b"P5", 3: b"P6"}.get(channels)
    if magic is None:
        raise ValueError(f"netpbm stores 1 or 3 channels, not {channels}")
    header = magic + b"\n%d %d\n%d\n" % (width, height, maxval)
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    return header + np.asarray(samples).astype(dtype).tobytes()


def write_pnm(path, width, height, channels, maxval, samples):
    Path(path).write_bytes(encode_pnm(width, height, channels, maxval, samples))

"""Classical side of the encoding: images, padding, and the pixel-to-angle maps.

Every angle vector holds *circuit* rotation angles, i.e. twice the color
angle of the pixel state ``cos(t)|0> + sin(t)|1>``. A full-intensity FRQI
pixel therefore stores ``pi``, not ``pi/2``.

Pixels are ordered row-major (``k = row * width + col``) for every mapping,
and bit ``b^0`` of a value is its most significant bit.
"""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import pnm
from .errors import DomainError, MalformedHeaderError

# Circuit angles for the IFRQI bit pairs 00, 01, 10, 11 (twice the color angle).
IFRQI_ANGLES = np.array([0.0, 2 * math.pi / 5, 2 * (math.pi / 2 - math.pi / 5), math.pi])


class Mapping(str, enum.Enum):
    FRQI = "frqi"
    IFRQI = "ifrqi"
    NEQR = "neqr"
    MCRQI = "mcrqi"
    INCQI = "incqi"


class Domain(str, enum.Enum):
    PIXEL = "pixel"
    WALSH = "walsh"


def ceil_log2(count: int) -> int:
    """Smallest ``n`` with ``2**n >= count``."""
    if count < 1:
        raise ValueError("count must be positive")
    return (count - 1).bit_length()


def _readonly(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ImageBuffer:
    """A raw pixel grid: row-major, channel-interleaved integer samples."""

    width: int
    height: int
    channels: int
    bit_depth: int
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DomainError("image dimensions must be positive")
        if self.channels not in (1, 3, 4):
            raise DomainError(f"unsupported channel count {self.channels}")
        if not 1 <= self.bit_depth <= 16:
            raise DomainError(f"unsupported bit depth {self.bit_depth}")
        samples = _readonly(self.samples, np.int64).reshape(-1)
        if samples.size != self.width * self.height * self.channels:
            raise DomainError(
                f"expected {self.width * self.height * self.channels} samples, got {samples.size}"
            )
        if samples.size and (samples.min() < 0 or samples.max() > self.max_intensity):
            raise DomainError(f"samples must lie in [0, {self.max_intensity}]")
        object.__setattr__(self, "samples", samples)

    @property
    def max_intensity(self) -> int:
        return (1 << self.bit_depth) - 1

    @property
    def pixel_count(self) -> int:
        return self.width * self.height

    def channel(self, c: int) -> np.ndarray:
        return self.samples[c::self.channels]

    def planes(self) -> np.ndarray:
        """Samples as a ``(channels, width * height)`` array."""
        return self.samples.reshape(-1, self.channels).T

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return (
            (self.width, self.height, self.channels, self.bit_depth)
            == (other.width, other.height, other.channels, other.bit_depth)
            and np.array_equal(self.samples, other.samples)
        )

    __hash__ = None


@dataclass(frozen=True)
class AngleVector:
    """Rotation angles over ``2**n`` positions, in pixel or Walsh domain."""

    values: np.ndarray = field(repr=False)
    domain: Domain = Domain.PIXEL

    def __post_init__(self):
        values = _readonly(self.values, np.float64).reshape(-1)
        size = values.size
        if size < 1 or size & (size - 1):
            raise DomainError(f"angle vector length {size} is not a power of two")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "domain", Domain(self.domain))

    @property
    def n(self) -> int:
        return self.values.size.bit_length() - 1

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class EncodingSpec:
    """Everything needed to build, and later decode, one encoded image."""

    n: int
    original_pixel_count: int
    bit_depth: int
    width: int
    height: int
    channels: int
    mapping: Mapping | None = None
    compression_percent: float = 0.0

    def __post_init__(self):
        if self.mapping is not None:
            object.__setattr__(self, "mapping", Mapping(self.mapping))
        if not 0 <= self.compression_percent <= 100:
            raise DomainError(f"compression level {self.compression_percent} outside [0, 100]")
        if self.original_pixel_count > 1 << self.n or (
            self.n > 0 and self.original_pixel_count <= 1 << (self.n - 1)
        ):
            raise DomainError("position qubit count does not match the pixel count")

    @property
    def padded_pixel_count(self) -> int:
        return 1 << self.n

    @property
    def max_intensity(self) -> int:
        return (1 << self.bit_depth) - 1

    @property
    def pair_count(self) -> int | None:
        return self.bit_depth // 2 if self.mapping is Mapping.IFRQI else None

    @property
    def color_qubits(self) -> int:
        if self.mapping is None:
            raise DomainError("encoding has no mapping yet")
        return {
            Mapping.FRQI: 1,
            Mapping.IFRQI: self.bit_depth // 2,
            Mapping.NEQR: self.bit_depth,
            Mapping.MCRQI: 3,
            Mapping.INCQI: 4 * self.bit_depth,
        }[self.mapping]

    @property
    def total_qubits(self) -> int:
        return self.n + self.color_qubits

    def with_mapping(self, mapping, compression_percent: float = 0.0) -> EncodingSpec:
        """Attach a color mapping after checking the image can carry it."""
        mapping = Mapping(mapping)
        need = {Mapping.MCRQI: 3, Mapping.INCQI: 4}.get(mapping, 1)
        if self.channels != need:
            raise DomainError(
                f"{mapping.name} needs {need}-channel images, got {self.channels} channel(s)"
            )
        if mapping is Mapping.IFRQI and self.bit_depth % 2:
            raise DomainError(f"IFRQI needs an even bit depth, got {self.bit_depth}")
        return replace(self, mapping=mapping, compression_percent=float(compression_percent))


# -- image files -------------------------------------------------------------

def load_image(path: str | os.PathLike, format: str | None = None) -> ImageBuffer:
    """Read a PGM (P2/P5) or PPM (P3/P6) file.

    The bit depth is inferred from maxval, which must be ``2**bits - 1``.
    """
    _, width, height, channels, maxval, samples = pnm.read_pnm(path, format)
    return ImageBuffer(width, height, channels, maxval.bit_length(), samples)


def load_rgba(rgb_path, alpha_path) -> ImageBuffer:
    """Combine a PPM and a same-sized PGM alpha mask into a 4-channel image."""
    rgb = load_image(rgb_path, "PPM")
    alpha = load_image(alpha_path, "PGM")
    if (rgb.width, rgb.height) != (alpha.width, alpha.height):
        raise MalformedHeaderError("alpha mask dimensions differ from the color image", 0)
    if rgb.bit_depth != alpha.bit_depth:
        raise MalformedHeaderError("alpha mask maxval differs from the color image", 0)
    samples = np.column_stack([rgb.planes().T, alpha.samples]).reshape(-1)
    return ImageBuffer(rgb.width, rgb.height, 4, rgb.bit_depth, samples)


def alpha_path_for(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".alpha.pgm")


def save_image(path, img: ImageBuffer) -> list[Path]:
    """Write binary PGM/PPM with maxval ``2**bit_depth - 1``.

    Four-channel images are split into a PPM at ``path`` and an alpha PGM
    next to it. Returns the paths written.
    """
    maxval = img.max_intensity
    if img.channels == 4:
        planes = img.planes()
        rgb = planes[:3].T.reshape(-1)
        pnm.write_pnm(path, img.width, img.height, 3, maxval, rgb)
        alpha = alpha_path_for(path)
        pnm.write_pnm(alpha, img.width, img.height, 1, maxval, planes[3])
        return [Path(path), alpha]
    pnm.write_pnm(path, img.width, img.height, img.channels, maxval, img.samples)
    return [Path(path)]


# -- flattening --------------------------------------------------------------

def vectorize(img: ImageBuffer) -> tuple[np.ndarray, EncodingSpec]:
    """Flatten each channel row-major and zero-pad it to a power of two.

    Returns a ``(channels, 2**n)`` integer array and a mapping-less spec.
    """
    count = img.pixel_count
    n = ceil_log2(count)
    padded = np.zeros((img.channels, 1 << n), dtype=np.int64)
    padded[:, :count] = img.planes()
    spec = EncodingSpec(
        n=n,
        original_pixel_count=count,
        bit_depth=img.bit_depth,
        width=img.width,
        height=img.height,
        channels=img.channels,
    )
    return padded, spec


def unpad(planes: np.ndarray, spec: EncodingSpec) -> np.ndarray:
    return np.asarray(planes)[..., :spec.original_pixel_count]


def image_from_planes(planes: np.ndarray, spec: EncodingSpec) -> ImageBuffer:
    planes = unpad(np.atleast_2d(planes), spec)
    return ImageBuffer(spec.width, spec.height, spec.channels, spec.bit_depth, planes.T.reshape(-1))


# -- angle maps --------------------------------------------------------------

def _as_int_channel(channel, upper, what):
    values = np.asarray(channel)
    if values.dtype.kind == "f":
        if not np.all(values == np.round(values)):
            raise DomainError(f"{what} values must be integers")
        values = values.astype(np.int64)
    values = values.astype(np.int64).reshape(-1)
    if values.size and (values.min() < 0 or values.max() > upper):
        raise DomainError(f"{what} values must lie in [0, {upper}]")
    return values


def frqi_angles(channel, max_intensity: int) -> AngleVector:
    """FRQI circuit angles ``pi * g / K`` for a padded channel."""
    if isinstance(max_intensity, float) and not max_intensity.is_integer():
        raise DomainError("maximum intensity must be an integer")
    K = int(max_intensity)
    if K <= 0:
        raise DomainError("maximum intensity must be positive")
    g = _as_int_channel(channel, K, "pixel")
    return AngleVector(np.pi * g / K, Domain.PIXEL)


def _bits(values, bit_depth):
    """Bit planes with row i holding bit b^i (b^0 most significant)."""
    shifts = np.arange(bit_depth - 1, -1, -1, dtype=np.int64)
    return (values[None, :] >> shifts[:, None]) & 1


def ifrqi_angles(channel, pair_count: int) -> list[AngleVector]:
    """One angle vector per bit pair ``(b^{2i}, b^{2i+1})``, first bit high."""
    if pair_count < 1:
        raise DomainError("IFRQI needs at least one bit pair")
    g = _as_int_channel(channel, (1 << (2 * pair_count)) - 1, "pixel")
    bits = _bits(g, 2 * pair_count)
    codes = 2 * bits[0::2] + bits[1::2]
    return [AngleVector(IFRQI_ANGLES[row], Domain.PIXEL) for row in codes]


def neqr_angles(channel, bit_depth: int) -> list[AngleVector]:
    """One angle vector per bit ``b^i``: ``pi`` where the bit is set."""
    if bit_depth < 1:
        raise DomainError("bit depth must be positive")
    g = _as_int_channel(channel, (1 << bit_depth) - 1, "pixel")
    return [AngleVector(np.pi * row, Domain.PIXEL) for row in _bits(g, bit_depth)]


def mapping_angles(spec: EncodingSpec, planes) -> list[AngleVector]:
    """All angle planes for ``spec.mapping``, ordered by target color qubit."""
    planes = np.atleast_2d(planes)
    m = spec.mapping
    if m is Mapping.FRQI:
        return [frqi_angles(planes[0], spec.max_intensity)]
    if m is Mapping.IFRQI:
        if spec.bit_depth % 2:
            raise DomainError("IFRQI needs an even bit depth")
        return ifrqi_angles(planes[0], spec.bit_depth // 2)
    if m is Mapping.NEQR:
        return neqr_angles(planes[0], spec.bit_depth)
    if m is Mapping.MCRQI:
        return [frqi_angles(p, spec.max_intensity) for p in planes[:3]]
    if m is Mapping.INCQI:
        return [a for p in planes[:4] for a in neqr_angles(p, spec.bit_depth)]
    raise DomainError("encoding has no mapping")


# -- decoding ----------------------------------------------------------------

UNMEASURED_EPS = 1e-14


def decode_frqi(alpha: float, beta: float, max_intensity: int) -> int | None:
    """Gray value from the (cos, sin) amplitude pair of one pixel.

    Returns None when both amplitudes vanish (a pixel with no weight).
    """
    if abs(alpha) < UNMEASURED_EPS and abs(beta) < UNMEASURED_EPS:
        return None
    value = round(max_intensity * math.atan2(beta, alpha) / (math.pi / 2))
    return min(max(value, 0), max_intensity)


def decode_frqi_array(alpha, beta, max_intensity: int) -> np.ndarray:
    """Vectorized :func:`decode_frqi`; unmeasured pixels come back as -1."""
    alpha = np.asarray(alpha, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    values = np.rint(max_intensity * np.arctan2(beta, alpha) / (np.pi / 2))
    values = np.clip(values, 0, max_intensity).astype(np.int64)
    values[(np.abs(alpha) < UNMEASURED_EPS) & (np.abs(beta) < UNMEASURED_EPS)] = -1
    return values

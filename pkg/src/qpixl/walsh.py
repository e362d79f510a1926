"""Matrix-free solution of the uniformly controlled rotation angle system.

For circuit angles ``theta`` over ``N = 2**n`` positions, the rotation angles
``theta_hat`` of the Ry/CNOT ladder satisfy

    (H^{(x)n} P_G) theta_hat = theta,      H = [[1, 1], [1, -1]],

where ``P_G`` sends binary order to Gray-code order: ``(P_G v)[gray(l)] = v[l]``.
Both factors are applied in place in O(N log N).
"""
from __future__ import annotations

import enum

import numpy as np

from ._backend import get_backend
from .codec import AngleVector, Domain
from .errors import DomainError


class Direction(str, enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def gray_code(k):
    """Reflected binary Gray code of ``k`` (int or integer array)."""
    if np.any(np.asarray(k) < 0):
        raise ValueError("gray_code needs non-negative indices")
    return k ^ (k >> 1)


def _buffer(v) -> np.ndarray:
    if not isinstance(v, np.ndarray) or v.dtype != np.float64 or not v.flags.c_contiguous:
        raise TypeError("in-place transforms need a C-contiguous float64 numpy array")
    if not v.flags.writeable:
        raise TypeError("in-place transforms need a writeable array")
    size = v.size
    if size < 1 or size & (size - 1):
        raise DomainError(f"length {size} is not a power of two")
    return v.reshape(-1)


def gray_permute(v: np.ndarray, direction=Direction.FORWARD, backend=None) -> np.ndarray:
    """Apply ``P_G`` (forward) or ``P_G^-1`` (inverse) to ``v`` in place.

    The compiled kernel follows permutation cycles with an N-bit visited
    bitmap (N/8 bytes of scratch); the numpy kernel performs n-1 chunked
    slice swaps with at most 2**16 elements of scratch.
    """
    buf = _buffer(v)
    forward = Direction(direction) is Direction.FORWARD
    get_backend(backend).gray_permute(buf, forward)
    return v


def sfwht(v: np.ndarray, direction=Direction.FORWARD, backend=None) -> np.ndarray:
    """Scaled fast Walsh-Hadamard transform, in place.

    FORWARD applies ``2**-n H^{(x)n}`` (a factor 1/2 per butterfly stage),
    INVERSE the unscaled ``H^{(x)n}``. Stage ``s`` pairs indices that differ
    in bit ``s``.
    """
    buf = _buffer(v)
    forward = Direction(direction) is Direction.FORWARD
    get_backend(backend).sfwht(buf, forward)
    return v


def solve_angles(theta: AngleVector, backend=None) -> AngleVector:
    """Ladder rotation angles ``theta_hat`` for pixel-domain angles ``theta``."""
    if theta.domain is not Domain.PIXEL:
        raise DomainError("solve_angles expects pixel-domain angles")
    work = np.array(theta.values, dtype=np.float64)
    sfwht(work, Direction.FORWARD, backend)
    gray_permute(work, Direction.INVERSE, backend)
    return AngleVector(work, Domain.WALSH)


def apply_angles(theta_hat: AngleVector, backend=None) -> AngleVector:
    """Pixel-domain angles ``H^{(x)n} P_G theta_hat`` realized by a ladder."""
    if theta_hat.domain is not Domain.WALSH:
        raise DomainError("apply_angles expects Walsh-domain angles")
    work = np.array(theta_hat.values, dtype=np.float64)
    gray_permute(work, Direction.FORWARD, backend)
    sfwht(work, Direction.INVERSE, backend)
    return AngleVector(work, Domain.PIXEL)

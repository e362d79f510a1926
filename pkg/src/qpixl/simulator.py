"""Dense statevector simulation and independent reference states.

Amplitude index ``i = sum_q bit_q * 2**(Q-1-q)`` (qubit 0 most significant),
so an encoded image has amplitude ``k * 2**C + c`` for position ``k`` and
color basis state ``c`` over ``C`` color qubits.

``oracle_state`` builds each mapping's state from its definition with plain
tensor arithmetic. It shares no code with circuit synthesis, which makes
``simulate(circuit) == oracle_state(...)`` a genuine cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import get_backend
from .circuit import Circuit, GateKind
from .codec import EncodingSpec, ImageBuffer, Mapping, decode_frqi_array
from .errors import DomainError, InvalidStateError, QubitBudgetError

DEFAULT_MAX_QUBITS = 26
NONZERO_EPS = 1e-8

# IFRQI color angles (not doubled) for bit pairs 00, 01, 10, 11.
_IFRQI_COLOR_ANGLES = np.array([0.0, math.pi / 5, math.pi / 2 - math.pi / 5, math.pi / 2])
_IFRQI_BOUNDARIES = (_IFRQI_COLOR_ANGLES[1:] + _IFRQI_COLOR_ANGLES[:-1]) / 2
_INV_SQRT2 = 1 / math.sqrt(2)


@dataclass
class Statevector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size < 2 or amps.size & (amps.size - 1):
            raise DomainError(f"statevector length {amps.size} is not 2**q with q >= 1")
        self.amplitudes = amps

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class QualityMetrics:
    max_amp_error: float | None = None
    fidelity: float | None = None
    psnr_db: float | None = None
    mse: float | None = None


def _check_budget(num_qubits, max_qubits):
    if num_qubits > max_qubits:
        raise QubitBudgetError(
            f"{num_qubits} qubits exceed the simulation budget of {max_qubits}"
        )


def _apply_mcry(state, num_qubits, gate):
    view = state.reshape((2,) * num_qubits)
    index = [slice(None)] * num_qubits
    for q, positive in gate.controls:
        index[q] = slice(1, 2) if positive else slice(0, 1)
    # length-1 slices keep these views even when every qubit is fixed
    index[gate.target] = slice(0, 1)
    a = view[tuple(index)]
    index[gate.target] = slice(1, 2)
    b = view[tuple(index)]
    c, s = math.cos(gate.angle / 2), math.sin(gate.angle / 2)
    new_a = c * a - s * b
    b *= c
    b += s * a
    a[...] = new_a


def simulate(c: Circuit, max_qubits: int = DEFAULT_MAX_QUBITS, backend=None) -> Statevector:
    """Apply ``c`` to ``|0...0>`` and return the final state."""
    _check_budget(c.num_qubits, max_qubits)
    kernels = get_backend(backend)
    q = c.num_qubits
    state = np.zeros(1 << q, dtype=np.complex128)
    state[0] = 1.0
    for g in c.gates:
        kind = g.kind
        if kind is GateKind.RY:
            cs, sn = math.cos(g.angle / 2), math.sin(g.angle / 2)
            kernels.apply_1q(state, q, g.target, cs, -sn, sn, cs)
        elif kind is GateKind.CNOT:
            kernels.apply_cnot(state, q, g.controls[0][0], g.target)
        elif kind is GateKind.H:
            kernels.apply_1q(state, q, g.target, _INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2)
        elif kind is GateKind.X:
            kernels.apply_1q(state, q, g.target, 0.0, 1.0, 1.0, 0.0)
        else:
            _apply_mcry(state, q, g)
    return Statevector(state)


# -- reference states --------------------------------------------------------

def _bits_msb_first(values, width):
    shifts = np.arange(width - 1, -1, -1)
    return (values[:, None] >> shifts[None, :]) & 1


def _product_blocks(color_angles):
    """Per-position product states from a (positions, qubits) array of color angles."""
    positions, qubits = color_angles.shape
    block = np.ones((positions, 1))
    for j in range(qubits):
        qubit = np.stack([np.cos(color_angles[:, j]), np.sin(color_angles[:, j])], axis=1)
        block = (block[:, :, None] * qubit[:, None, :]).reshape(positions, -1)
    return block


def oracle_state(spec: EncodingSpec, pixels, max_qubits: int = DEFAULT_MAX_QUBITS) -> Statevector:
    """The encoded image state, built directly from the mapping definitions.

    ``pixels`` is a ``(channels, count)`` integer array with ``count`` either
    the original or the padded pixel count; padding positions always carry
    the all-zero color state.
    """
    if spec.mapping is None:
        raise DomainError("encoding has no mapping")
    _check_budget(spec.total_qubits, max_qubits)
    pixels = np.atleast_2d(np.asarray(pixels, dtype=np.int64))
    real = pixels[:, :spec.original_pixel_count]
    N, C, K, bits = spec.padded_pixel_count, spec.color_qubits, spec.max_intensity, spec.bit_depth
    m = spec.mapping
    blocks = np.zeros((N, 1 << C))
    blocks[:, 0] = 1.0  # padding: |k>|0>
    count = real.shape[1]
    if m in (Mapping.FRQI, Mapping.MCRQI):
        channels = 1 if m is Mapping.FRQI else 3
        color = (math.pi / 2) / K * real[:channels].T
        blocks[:count] = _product_blocks(color)
    elif m is Mapping.IFRQI:
        pair_bits = _bits_msb_first(real[0], bits)
        codes = 2 * pair_bits[:, 0::2] + pair_bits[:, 1::2]
        blocks[:count] = _product_blocks(_IFRQI_COLOR_ANGLES[codes])
    elif m in (Mapping.NEQR, Mapping.INCQI):
        channels = 1 if m is Mapping.NEQR else 4
        index = np.zeros(count, dtype=np.int64)
        for ch in range(channels):
            index = (index << bits) | real[ch]
        blocks[:count] = 0.0
        blocks[np.arange(count), index] = 1.0
    return Statevector((blocks / math.sqrt(N)).reshape(-1))


# -- decoding ----------------------------------------------------------------

def _marginal_angles(blocks, C):
    """Color angle in [0, pi/2] of each color qubit, from marginal probabilities."""
    probs = (np.abs(blocks) ** 2).reshape((-1,) + (2,) * C)
    angles = np.empty((blocks.shape[0], C))
    for j in range(C):
        other = tuple(a for a in range(1, C + 1) if a != j + 1)
        marginal = probs.sum(axis=other) if other else probs
        angles[:, j] = np.arctan2(np.sqrt(marginal[:, 1]), np.sqrt(marginal[:, 0]))
    return angles


def reconstruct(spec: EncodingSpec, s: Statevector, strict: bool = True) -> ImageBuffer:
    """Read the image back out of an encoded state's amplitudes.

    With ``strict`` (the default) basis-encoded states (NEQR, INCQI) must put
    all weight of each pixel on one color basis state. ``strict=False`` takes
    the most likely color state instead, which is what compressed circuits
    need.
    """
    if spec.mapping is None:
        raise DomainError("encoding has no mapping")
    C = spec.color_qubits
    if s.amplitudes.size != 1 << (spec.n + C):
        raise DomainError(
            f"statevector has {s.num_qubits} qubits, encoding needs {spec.n + C}"
        )
    K, bits, m = spec.max_intensity, spec.bit_depth, spec.mapping
    blocks = s.amplitudes.reshape(spec.padded_pixel_count, 1 << C)[:spec.original_pixel_count]
    if m is Mapping.FRQI:
        values = decode_frqi_array(blocks[:, 0].real, blocks[:, 1].real, K)
        if np.any(values < 0):
            raise InvalidStateError("not a valid FRQI state: a pixel has no amplitude")
        planes = values[None, :]
    elif m is Mapping.MCRQI:
        angles = _marginal_angles(blocks, C)
        planes = np.clip(np.rint(K * angles / (math.pi / 2)), 0, K).astype(np.int64).T
    elif m is Mapping.IFRQI:
        codes = np.searchsorted(_IFRQI_BOUNDARIES, _marginal_angles(blocks, C))
        values = np.zeros(blocks.shape[0], dtype=np.int64)
        for j in range(C):
            values = (values << 2) | codes[:, j]
        planes = values[None, :]
    else:
        mags = np.abs(blocks)
        if strict:
            support = np.count_nonzero(mags > NONZERO_EPS, axis=1)
            if np.any(support != 1):
                raise InvalidStateError(
                    f"not a valid {m.name} state: a pixel is not a single color basis state"
                )
        index = np.argmax(mags, axis=1)
        channels = 1 if m is Mapping.NEQR else 4
        mask = (1 << bits) - 1
        planes = np.stack(
            [(index >> (bits * (channels - 1 - ch))) & mask for ch in range(channels)]
        )
    return ImageBuffer(spec.width, spec.height, spec.channels, bits, planes.T.reshape(-1))


# -- metrics -----------------------------------------------------------------

def compare(a: Statevector, b: Statevector) -> QualityMetrics:
    if a.amplitudes.size != b.amplitudes.size:
        raise DomainError("statevectors have different lengths")
    diff = float(np.max(np.abs(a.amplitudes - b.amplitudes)))
    overlap = np.vdot(a.amplitudes, b.amplitudes)
    return QualityMetrics(max_amp_error=diff, fidelity=float(abs(overlap) ** 2))


def image_quality(original: ImageBuffer, recon: ImageBuffer) -> QualityMetrics:
    """MSE and PSNR (peak = max intensity) between two decoded images."""
    if original.samples.shape != recon.samples.shape:
        raise DomainError("images have different sizes")
    err = original.samples.astype(np.float64) - recon.samples
    mse = float(np.mean(err ** 2))
    psnr = math.inf if mse == 0 else 10 * math.log10(original.max_intensity ** 2 / mse)
    return QualityMetrics(psnr_db=psnr, mse=mse)

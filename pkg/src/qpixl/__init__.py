"""Quantum pixel representation (QPIXL) circuit synthesis.

Images become state-preparation circuits built only from H, Ry and CNOT
gates: one uniformly controlled Ry ladder per color qubit, with the ladder
angles obtained by an in-place Gray permutation and scaled Walsh-Hadamard
transform. Ladders can be compressed in the Walsh domain, and a dense
statevector simulator checks circuits against directly constructed states.
"""
from ._backend import active as _active_backend
from .circuit import Circuit, Gate, GateCounts, GateKind, count_gates, emit_qasm, ucry
from .codec import (
    AngleVector,
    Domain,
    EncodingSpec,
    ImageBuffer,
    Mapping,
    decode_frqi,
    frqi_angles,
    ifrqi_angles,
    load_image,
    neqr_angles,
    vectorize,
)
from .compress import CompressionReport, compress_coefficients, synth_compressed_ucry
from .simulator import Statevector, compare, oracle_state, reconstruct, simulate
from .synth import encode_image, frqi_circuit, mapping_circuit
from .walsh import apply_angles, gray_code, gray_permute, sfwht, solve_angles

KERNEL_BACKEND = _active_backend.NAME

__version__ = "0.1.0"

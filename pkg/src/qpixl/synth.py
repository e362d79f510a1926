"""Circuit templates for each color mapping and the image-to-circuit pipeline.

Every template is ``H`` on the position register followed by one
uniformly controlled Ry ladder per color qubit, all controlled by the full
position register. Planes are laid out on ascending color qubits.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .circuit import Circuit, Gate, GateKind
from .codec import (
    AngleVector,
    Domain,
    EncodingSpec,
    ImageBuffer,
    Mapping,
    mapping_angles,
    vectorize,
)
from .compress import (
    ZERO_ANGLE_TOL,
    CompressionReport,
    compress_coefficients,
    synth_compressed_ucry,
)
from .errors import DomainError
from .walsh import solve_angles


def build_circuit(spec: EncodingSpec, planes, backend=None) -> tuple[Circuit, list[CompressionReport]]:
    """Synthesize the (compressed) preparation circuit for pixel-domain planes.

    Each plane is solved, compressed at ``spec.compression_percent`` and
    synthesized independently; zero angles (up to rounding residue,
    ``ZERO_ANGLE_TOL``) are dropped even at 0%.
    """
    planes = list(planes)
    if spec.mapping is not None and len(planes) != spec.color_qubits:
        raise DomainError(
            f"{spec.mapping.name} uses {spec.color_qubits} angle plane(s), got {len(planes)}"
        )
    n = spec.n
    for p in planes:
        if p.domain is not Domain.PIXEL:
            raise DomainError("templates take pixel-domain angle planes")
        if p.n != n:
            raise DomainError(f"angle plane over {len(p)} positions, encoding has {1 << n}")
    circuit = Circuit(n + len(planes), metadata=spec)
    circuit.extend(Gate.h(q) for q in range(n))
    full_cnots = (1 << n) if n else 0
    reports = []
    for i, theta in enumerate(planes):
        sparse, report = compress_coefficients(
            solve_angles(theta, backend), spec.compression_percent, ZERO_ANGLE_TOL
        )
        fragment = synth_compressed_ucry(sparse, range(n), n + i)
        cnots = sum(g.kind is GateKind.CNOT for g in fragment)
        reports.append(replace(report, cnot_removed=full_cnots - cnots))
        circuit.extend(fragment)
    return circuit, reports


def mapping_circuit(spec: EncodingSpec, planes, backend=None) -> Circuit:
    """Preparation circuit for any mapping, given its angle planes."""
    return build_circuit(spec, planes, backend)[0]


def frqi_circuit(theta: AngleVector, spec: EncodingSpec, backend=None) -> Circuit:
    """FRQI preparation: ``n`` H gates and one ladder onto qubit ``n``."""
    if spec.mapping not in (None, Mapping.FRQI):
        raise DomainError(f"frqi_circuit called with a {spec.mapping.name} encoding")
    return build_circuit(spec, [theta], backend)[0]


@dataclass
class EncodedImage:
    spec: EncodingSpec
    pixels: np.ndarray  # (channels, 2**n) padded integer planes
    circuit: Circuit
    reports: list[CompressionReport]


def encode_image(img: ImageBuffer, mapping, compression: float = 0.0, backend=None) -> EncodedImage:
    """Full pipeline: vectorize, map to angles, solve, compress, synthesize."""
    pixels, skeleton = vectorize(img)
    spec = skeleton.with_mapping(mapping, compression)
    planes = mapping_angles(spec, pixels)
    circuit, reports = build_circuit(spec, planes, backend)
    return EncodedImage(spec, pixels, circuit, reports)

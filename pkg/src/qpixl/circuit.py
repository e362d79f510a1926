"""Gate-level circuit representation, Ry/CNOT ladders, and QASM output.

Qubit 0 is the most significant position bit; color qubits follow the
position qubits. ``RY(a)`` is ``[[cos a/2, -sin a/2], [sin a/2, cos a/2]]``.
"""
from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .codec import AngleVector, Domain, EncodingSpec
from .errors import DomainError
from .walsh import gray_code

MCRY_BASELINE_MAX_PIXELS = 1 << 12


class GateKind(str, enum.Enum):
    H = "h"
    X = "x"
    RY = "ry"
    CNOT = "cx"
    MCRY = "mcry"


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: int
    controls: tuple[tuple[int, bool], ...] = ()
    angle: float | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        controls = tuple((int(q), bool(pos)) for q, pos in self.controls)
        object.__setattr__(self, "controls", controls)
        qubits = [q for q, _ in controls]
        if self.target in qubits:
            raise ValueError("target qubit cannot also be a control")
        if len(set(qubits)) != len(qubits):
            raise ValueError("control qubits must be distinct")
        if kind in (GateKind.H, GateKind.X) and controls:
            raise ValueError(f"{kind.name} takes no controls")
        if kind is GateKind.RY and controls:
            raise ValueError("RY takes no controls; use MCRY")
        if kind is GateKind.CNOT and (len(controls) != 1 or not controls[0][1]):
            raise ValueError("CNOT needs exactly one positive control")
        if kind in (GateKind.RY, GateKind.MCRY):
            if self.angle is None:
                raise ValueError(f"{kind.name} needs an angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{kind.name} takes no angle")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target, *(q for q, _ in self.controls))

    @classmethod
    def h(cls, q):
        return cls(GateKind.H, q)

    @classmethod
    def x(cls, q):
        return cls(GateKind.X, q)

    @classmethod
    def ry(cls, angle, q):
        return cls(GateKind.RY, q, angle=angle)

    @classmethod
    def cx(cls, control, target):
        return cls(GateKind.CNOT, target, ((control, True),))


@dataclass
class Circuit:
    """An ordered gate list over ``num_qubits`` qubits, first gate applied first."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    metadata: EncodingSpec | None = None

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        gates, self.gates = self.gates, []
        self.extend(gates)

    def append(self, gate: Gate) -> None:
        if max(gate.qubits) >= self.num_qubits or min(gate.qubits) < 0:
            raise ValueError(f"{gate} acts outside qubits 0..{self.num_qubits - 1}")
        self.gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


@dataclass(frozen=True)
class GateCounts:
    ry: int = 0
    cnot: int = 0
    h: int = 0
    x: int = 0
    mcry: int = 0
    total_qubits: int = 0


def count_gates(c: Circuit) -> GateCounts:
    tally = {kind: 0 for kind in GateKind}
    for g in c.gates:
        tally[g.kind] += 1
    return GateCounts(
        ry=tally[GateKind.RY],
        cnot=tally[GateKind.CNOT],
        h=tally[GateKind.H],
        x=tally[GateKind.X],
        mcry=tally[GateKind.MCRY],
        total_qubits=c.num_qubits,
    )


# -- uniformly controlled rotations ------------------------------------------

def cnot_schedule(n: int) -> np.ndarray:
    """Bit (0 = least significant) that controls each of the 2**n ladder CNOTs.

    CNOT ``l`` sits after rotation ``l`` and is controlled by the bit in which
    ``gray(l)`` and ``gray(l + 1 mod 2**n)`` differ. Empty for ``n == 0``.
    """
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    ell = np.arange(1 << n, dtype=np.int64)
    delta = gray_code(ell) ^ gray_code((ell + 1) % (1 << n))
    return np.log2(delta).astype(np.int64)


def _check_ladder(theta_hat: AngleVector, controls) -> list[int]:
    controls = list(controls)
    if theta_hat.domain is not Domain.WALSH:
        raise DomainError("ladder synthesis expects Walsh-domain angles")
    if len(theta_hat) != 1 << len(controls):
        raise DomainError(
            f"{len(theta_hat)} angles cannot be addressed by {len(controls)} control qubit(s)"
        )
    return controls


def ucry(theta_hat: AngleVector, controls, target: int) -> list[Gate]:
    """Full Ry/CNOT ladder: RY(theta_hat[l]) then CNOT ``l``, zero angles kept.

    ``controls[0]`` is the most significant position bit.
    """
    controls = _check_ladder(theta_hat, controls)
    n = len(controls)
    schedule = cnot_schedule(n)
    gates = []
    for ell, angle in enumerate(theta_hat.values):
        gates.append(Gate.ry(angle, target))
        if n:
            gates.append(Gate.cx(controls[n - 1 - schedule[ell]], target))
    return gates


def mcry_baseline_circuit(theta: AngleVector, spec: EncodingSpec) -> Circuit:
    """FRQI preparation with one multi-controlled Ry per pixel.

    Only for cross-checking small instances; MCRY gates are simulated
    directly and cannot be exported.
    """
    if theta.domain is not Domain.PIXEL:
        raise DomainError("the baseline circuit takes pixel-domain angles")
    N = len(theta)
    if N > MCRY_BASELINE_MAX_PIXELS:
        raise DomainError(f"baseline circuit is capped at {MCRY_BASELINE_MAX_PIXELS} pixels")
    n = theta.n
    if n != spec.n:
        raise DomainError("angle vector does not match the encoding's position register")
    circuit = Circuit(n + 1, metadata=spec)
    circuit.extend(Gate.h(q) for q in range(n))
    for k, angle in enumerate(theta.values):
        pattern = tuple((q, bool((k >> (n - 1 - q)) & 1)) for q in range(n))
        circuit.append(Gate(GateKind.MCRY, n, pattern, angle))
    return circuit


# -- QASM --------------------------------------------------------------------

def _qasm_line(g: Gate) -> str:
    if g.kind is GateKind.H:
        return f"h q[{g.target}];"
    if g.kind is GateKind.X:
        return f"x q[{g.target}];"
    if g.kind is GateKind.RY:
        return f"ry({g.angle:.17g}) q[{g.target}];"
    if g.kind is GateKind.CNOT:
        return f"cx q[{g.controls[0][0]}],q[{g.target}];"
    raise DomainError("multi-controlled Ry gates have no QASM export")


def emit_qasm(c: Circuit, stream: TextIO | None = None) -> str:
    """OPENQASM 2.0 text for ``c``; also written to ``stream`` if given."""
    out = io.StringIO()
    out.write('OPENQASM 2.0;\ninclude "qelib1.inc";\n')
    out.write(f"qreg q[{c.num_qubits}];\n")
    for g in c.gates:
        out.write(_qasm_line(g))
        out.write("\n")
    text = out.getvalue()
    if stream is not None:
        stream.write(text)
    return text

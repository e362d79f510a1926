"""Walsh-domain compression of Ry/CNOT ladders.

Compression zeroes the smallest-magnitude ladder angles, drops the zero
rotations, and merges each run of CNOTs between surviving rotations: all
ladder CNOTs share one target and commute, so a control that appears an even
number of times in a run cancels, and an odd count leaves a single CNOT.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circuit import Gate, _check_ladder, cnot_schedule
from .codec import AngleVector, Domain
from .errors import DomainError

# Pixel-domain angles are bounded by pi, so Walsh coefficients this small are
# rounding residue of exact zeros; an Ry this small moves amplitudes < 1e-12.
ZERO_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class CompressionReport:
    level_percent: float
    coefficients_total: int
    coefficients_kept: int
    ry_removed: int
    cnot_removed: int
    threshold_magnitude: float

    @property
    def coefficients_zeroed(self) -> int:
        return self.coefficients_total - self.coefficients_kept


def zero_count(level: float, total: int) -> int:
    """``floor(level / 100 * total)``, computed exactly for decimal levels."""
    return math.floor(Fraction(str(level)) * total / 100)


def compress_coefficients(theta_hat: AngleVector, level: float, zero_tol: float = 0.0):
    """Zero the ``floor(level% * N)`` smallest |angles|; ties go to lower indices.

    Entries with magnitude ``<= zero_tol`` are first snapped to exact zero.
    Exact zeros already present count towards the zeroed population. Returns
    the sparse vector and a report whose ``cnot_removed`` is left at 0; the
    synthesis step fills it in.
    """
    if theta_hat.domain is not Domain.WALSH:
        raise DomainError("compression acts on Walsh-domain angles")
    if not 0 <= level <= 100:
        raise DomainError(f"compression level {level} outside [0, 100]")
    values = np.array(theta_hat.values)
    if zero_tol > 0:
        values[np.abs(values) <= zero_tol] = 0.0
    total = values.size
    drop = zero_count(level, total)
    order = np.argsort(np.abs(values), kind="stable")[:drop]
    threshold = float(np.abs(values[order]).max()) if drop else 0.0
    values[order] = 0.0
    kept = int(np.count_nonzero(values))
    report = CompressionReport(
        level_percent=float(level),
        coefficients_total=total,
        coefficients_kept=kept,
        ry_removed=total - kept,
        cnot_removed=0,
        threshold_magnitude=threshold,
    )
    return AngleVector(values, Domain.WALSH), report


def synth_compressed_ucry(theta_hat: AngleVector, controls, target: int) -> list[Gate]:
    """Ladder for ``theta_hat`` with zero rotations removed and CNOT runs merged.

    Pending CNOT controls accumulate as a parity mask; the mask is flushed
    (one CNOT per odd-parity control, ascending qubit index) before each
    surviving rotation and once at the end.
    """
    controls = _check_ladder(theta_hat, controls)
    n = len(controls)
    schedule = cnot_schedule(n)
    gates: list[Gate] = []
    pending = 0  # bit i set <=> controls[i] has odd parity

    def flush():
        nonlocal pending
        order = sorted((controls[i], i) for i in range(n) if pending >> i & 1)
        gates.extend(Gate.cx(q, target) for q, _ in order)
        pending = 0

    for ell, angle in enumerate(theta_hat.values):
        if angle != 0.0:
            flush()
            gates.append(Gate.ry(angle, target))
        if n:
            pending ^= 1 << (n - 1 - int(schedule[ell]))
    flush()
    return gates

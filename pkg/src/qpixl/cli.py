"""Command-line front end.

Exit codes: 2 bad flags, 3 I/O or unreadable image, 4 domain error,
5 qubit budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import _backend
from .circuit import count_gates, emit_qasm
from .codec import ImageBuffer, Mapping, load_image, load_rgba, save_image
from .errors import DomainError, ImageFormatError, QubitBudgetError
from .simulator import (
    DEFAULT_MAX_QUBITS,
    QualityMetrics,
    compare,
    image_quality,
    oracle_state,
    reconstruct,
    simulate,
)
from .synth import encode_image
from .walsh import Direction, gray_permute, sfwht

log = logging.getLogger("qpixl")

EXIT_USAGE, EXIT_IO, EXIT_DOMAIN, EXIT_BUDGET = 2, 3, 4, 5
SCHEMA_VERSION = 1


@dataclass
class MetricsRecord:
    input: str
    mapping: str
    n: int
    color_qubits: int
    compression_percent: float
    gate_counts: dict
    compression: list[dict]
    quality: dict | None = None
    wall_times_ms: dict = field(default_factory=dict)
    timestamp: str | None = None
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        d = asdict(self)
        q = d["quality"]
        if q is not None and q.get("psnr_db") == math.inf:
            # JSON has no infinity; exact reconstructions are flagged instead
            q["psnr_db"] = None
            q["lossless"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict) -> MetricsRecord:
        d = dict(d)
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported metrics schema {d.get('schema')!r}")
        q = d.get("quality")
        if q is not None and q.pop("lossless", False):
            q["psnr_db"] = math.inf
        return cls(**d)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False)


class _Timer:
    def __init__(self):
        self.ms = {}

    def __call__(self, phase):
        timer = self

        class _Phase:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                timer.ms[phase] = timer.ms.get(phase, 0.0) + (time.perf_counter() - self.t0) * 1e3

        return _Phase()


def _load(args) -> ImageBuffer:
    if args.alpha:
        return load_rgba(args.input, args.alpha)
    return load_image(args.input)


def _encode(args, timer):
    if not 0 <= args.compress <= 100:
        raise DomainError(f"--compress must lie in [0, 100], got {args.compress:g}")
    with timer("load"):
        img = _load(args)
    with timer("synthesize"):
        enc = encode_image(img, args.mapping, args.compress)
    return img, enc


def _record(args, enc, timer, quality=None) -> MetricsRecord:
    return MetricsRecord(
        input=str(args.input),
        mapping=enc.spec.mapping.value,
        n=enc.spec.n,
        color_qubits=enc.spec.color_qubits,
        compression_percent=enc.spec.compression_percent,
        gate_counts=asdict(count_gates(enc.circuit)),
        compression=[asdict(r) for r in enc.reports],
        quality=None if quality is None else asdict(quality),
        wall_times_ms={k: round(v, 3) for k, v in timer.ms.items()},
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def _write_metrics(args, record):
    text = record.dumps() + "\n"
    if args.metrics:
        Path(args.metrics).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_encode(args) -> int:
    timer = _Timer()
    _, enc = _encode(args, timer)
    if args.out:
        with timer("emit"):
            Path(args.out).write_text(emit_qasm(enc.circuit))
    _write_metrics(args, _record(args, enc, timer))
    return 0


def cmd_roundtrip(args) -> int:
    timer = _Timer()
    img, enc = _encode(args, timer)
    if enc.spec.total_qubits > args.max_qubits:
        raise QubitBudgetError(
            f"encoding needs {enc.spec.total_qubits} qubits, budget is {args.max_qubits}"
        )
    if args.out:
        with timer("emit"):
            Path(args.out).write_text(emit_qasm(enc.circuit))
    with timer("simulate"):
        state = simulate(enc.circuit, args.max_qubits)
    with timer("reconstruct"):
        recon = reconstruct(enc.spec, state, strict=enc.spec.compression_percent == 0)
    amp = compare(state, oracle_state(enc.spec, enc.pixels, args.max_qubits))
    img_q = image_quality(img, recon)
    quality = QualityMetrics(amp.max_amp_error, amp.fidelity, img_q.psnr_db, img_q.mse)
    with timer("write"):
        save_image(args.recon, recon)
    _write_metrics(args, _record(args, enc, timer, quality))
    return 0


def run_bench(min_n, max_n, reps, backends=("auto",), seed=0):
    """Median wall time (ms) of sfwht and gray_permute for each ``n``.

    Repetitions are interleaved round-robin over all sizes, so slow drifts
    in machine speed hit every ``n`` alike instead of skewing the ratios.
    Yields ``(n, op, median_ms)``; ``median_ms`` is None when the vectors
    could not be allocated.
    """
    rng = np.random.default_rng(seed)
    buffers = {}
    for n in range(min_n, max_n + 1):
        try:
            pristine = rng.random(1 << n)
            buffers[n] = (pristine, np.empty_like(pristine))
        except MemoryError:
            buffers[n] = None
    ops = {
        "sfwht": lambda v, b: sfwht(v, Direction.FORWARD, b),
        "gray_permute": lambda v, b: gray_permute(v, Direction.FORWARD, b),
    }
    times = {}
    for _ in range(reps):
        for n, bufs in buffers.items():
            if bufs is None:
                continue
            pristine, work = bufs
            for b in backends:
                for op, fn in ops.items():
                    np.copyto(work, pristine)
                    t0 = time.perf_counter()
                    fn(work, b)
                    times.setdefault((n, b, op), []).append((time.perf_counter() - t0) * 1e3)
    for n, bufs in buffers.items():
        for b in backends:
            for op in ops:
                ms = statistics.median(times[n, b, op]) if bufs is not None else None
                yield n, _op_name(op, b, backends), ms


def _op_name(op, backend, backends):
    return op if len(backends) == 1 else f"{op}:{backend}"


def cmd_bench(args) -> int:
    backends = _backend.available_backends() if args.backend == "both" else (args.backend,)
    for b in backends:
        _backend.get_backend(b)  # fail early on an unavailable backend
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "op", "median_ms"])
        for n, op, ms in run_bench(args.min_n, args.max_n, args.reps, backends):
            if ms is None:
                out.write(f"# n={n} {op} skipped: allocation failed\n")
            else:
                writer.writerow([n, op, f"{ms:.6f}"])
            out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _add_encode_flags(p):
    p.add_argument("--input", required=True, help="PGM or PPM image")
    p.add_argument("--alpha", help="PGM alpha mask paired with a PPM input (RGBA)")
    p.add_argument("--mapping", required=True, choices=[m.value for m in Mapping])
    p.add_argument("--compress", type=float, default=0.0, metavar="PCT",
                   help="percentage of smallest Walsh coefficients to drop (default 0)")
    p.add_argument("--out", help="QASM output path (omit for counting only)")
    p.add_argument("--metrics", help="metrics JSON path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpixl", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="image to state-preparation circuit")
    _add_encode_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("roundtrip", help="encode, simulate and decode an image")
    _add_encode_flags(p)
    p.add_argument("--recon", required=True, help="reconstructed image output path")
    p.add_argument("--max-qubits", type=int, default=DEFAULT_MAX_QUBITS)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("bench", help="time the Walsh transform and Gray permutation")
    p.add_argument("--min-n", type=int, default=10)
    p.add_argument("--max-n", type=int, default=20)
    p.add_argument("--reps", type=int, default=15)
    p.add_argument("--backend", default="auto",
                   choices=["auto", "both", *_backend.available_backends()])
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench":
        if args.min_n < 1 or args.reps < 1:
            parser.error("--min-n and --reps must be positive")
        if args.max_n < args.min_n:
            parser.error("--max-n must not be smaller than --min-n")
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except QubitBudgetError as exc:
        print(f"qpixl: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, ImageFormatError) as exc:
        print(f"qpixl: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"qpixl: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

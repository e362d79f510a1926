import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dense import state
from qpixl.circuit import Circuit, Gate, GateKind
from qpixl.codec import ImageBuffer, load_rgba, vectorize
from qpixl.errors import InvalidStateError, QubitBudgetError
from qpixl.simulator import (
    Statevector,
    compare,
    image_quality,
    oracle_state,
    reconstruct,
    simulate,
)
from qpixl.synth import encode_image


@st.composite
def random_circuits(draw, max_qubits=5, max_gates=25):
    n = draw(st.integers(2, max_qubits))
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        kind = draw(st.sampled_from(["h", "x", "ry", "cx", "mcry"]))
        qs = draw(st.permutations(range(n)))
        if kind == "h":
            gates.append(Gate.h(qs[0]))
        elif kind == "x":
            gates.append(Gate.x(qs[0]))
        elif kind == "ry":
            gates.append(Gate.ry(draw(st.floats(-7, 7)), qs[0]))
        elif kind == "cx":
            gates.append(Gate.cx(qs[0], qs[1]))
        else:
            k = draw(st.integers(1, n - 1))
            pattern = tuple((q, draw(st.booleans())) for q in qs[1:k + 1])
            gates.append(Gate(GateKind.MCRY, qs[0], pattern, draw(st.floats(-7, 7))))
    return Circuit(n, gates)


@settings(max_examples=80, deadline=None)
@given(random_circuits())
def test_simulate_matches_dense_matrices(c):
    for backend in ("numpy", None):
        s = simulate(c, backend=backend)
        assert np.allclose(s.amplitudes, state(c), atol=1e-12)
        assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_simulate_respects_budget():
    with pytest.raises(QubitBudgetError):
        simulate(Circuit(5, [Gate.h(0)]), max_qubits=4)


def test_statevector_checks_length():
    with pytest.raises(ValueError):
        Statevector(np.ones(3))


def test_neqr_state_is_uniform_over_basis_states(rng):
    img = ImageBuffer(4, 4, 1, 8, rng.integers(0, 256, 16))
    enc = encode_image(img, "neqr")
    amps = simulate(enc.circuit).amplitudes
    nonzero = np.abs(amps) > 1e-8
    assert nonzero.sum() == 16
    assert np.allclose(np.abs(amps[nonzero]), 1 / 4, atol=1e-12)
    # pixel k sits on color basis state g_k
    assert np.flatnonzero(nonzero).tolist() == [k * 256 + g for k, g in enumerate(img.samples)]


def test_oracle_padding_positions_are_zero_color():
    img = ImageBuffer(3, 1, 1, 8, [255, 255, 255])
    pixels, spec = vectorize(img)
    s = oracle_state(spec.with_mapping("frqi"), pixels).amplitudes.real
    assert s[6] == pytest.approx(0.5) and s[7] == 0.0
    assert np.allclose(s[1:6:2], 0.5)


@pytest.mark.parametrize("name, mapping", [
    ("gray4_6x5.pgm", "frqi"),
    ("gray4_6x5.pgm", "ifrqi"),
    ("gray4_6x5.pgm", "neqr"),
    ("rgb_5x3.ppm", "mcrqi"),
    ("square_2x2.pgm", "frqi"),
])
def test_fixture_round_trip(load_fixture, name, mapping, backend):
    img = load_fixture(name)
    enc = encode_image(img, mapping, backend=backend)
    s = simulate(enc.circuit, backend=backend)
    oracle = oracle_state(enc.spec, enc.pixels)
    assert compare(s, oracle).max_amp_error <= 1e-10
    assert reconstruct(enc.spec, s) == img


def test_incqi_round_trip(data_dir):
    img = load_rgba(data_dir / "rgba2_4x4.ppm", data_dir / "rgba2_4x4.alpha.pgm")
    enc = encode_image(img, "incqi")
    assert enc.spec.total_qubits == 4 + 8
    s = simulate(enc.circuit)
    assert compare(s, oracle_state(enc.spec, enc.pixels)).max_amp_error <= 1e-10
    assert reconstruct(enc.spec, s) == img


def test_compressed_neqr_needs_non_strict(load_fixture):
    img = load_fixture("gray4_6x5.pgm")
    enc = encode_image(img, "neqr", 50)
    s = simulate(enc.circuit)
    with pytest.raises(InvalidStateError):
        reconstruct(enc.spec, s)
    out = reconstruct(enc.spec, s, strict=False)
    assert out.samples.shape == img.samples.shape


def test_frqi_reconstruct_rejects_empty_pixel():
    _, spec = vectorize(ImageBuffer(2, 1, 1, 8, [1, 2]))
    s = Statevector(np.array([1, 0, 0, 0], dtype=complex))
    with pytest.raises(InvalidStateError):
        reconstruct(spec.with_mapping("frqi"), s)


def test_compare_and_quality():
    a = Statevector(np.array([1, 0, 0, 0], dtype=complex))
    b = Statevector(np.array([0.6, 0.8, 0, 0], dtype=complex))
    m = compare(a, b)
    assert m.max_amp_error == pytest.approx(0.8)
    assert m.fidelity == pytest.approx(0.36)
    x = ImageBuffer(2, 1, 1, 8, [0, 255])
    y = ImageBuffer(2, 1, 1, 8, [10, 255])
    assert image_quality(x, x).psnr_db == math.inf
    q = image_quality(x, y)
    assert q.mse == 50.0
    assert q.psnr_db == pytest.approx(10 * math.log10(255 ** 2 / 50))


def test_compression_changes_state_but_keeps_norm(load_fixture):
    img = load_fixture("structured_64.pgm")
    exact = simulate(encode_image(img, "frqi").circuit)
    lossy = simulate(encode_image(img, "frqi", 90).circuit)
    assert lossy.norm() == pytest.approx(1.0, abs=1e-12)
    assert compare(exact, lossy).fidelity < 1.0


def test_report_counts_match_circuit(load_fixture):
    enc = encode_image(load_fixture("mnist_like_3.pgm"), "frqi", 75)
    (report,) = enc.reports
    ry = sum(g.kind is GateKind.RY for g in enc.circuit)
    cx = sum(g.kind is GateKind.CNOT for g in enc.circuit)
    assert ry == report.coefficients_kept == 256
    assert cx == 1024 - report.cnot_removed

"""Vectorized numpy twins of the compiled kernels in ``_kernels.pyx``.

Used when the extension is not built, or when ``QPIXL_BACKEND=numpy``.
"""
import numpy as np

NAME = "numpy"

# Upper bound on the temporary used to swap two slices (elements).
_SWAP_CHUNK = 1 << 16


def _butterfly(a, b, forward):
    """a, b <- a + b, a - b (halved when forward), chunked scratch.

    Rounds exactly like the compiled loop, so both backends agree bit for bit.
    """
    if a.size > _SWAP_CHUNK:
        if a.shape[0] > 1:
            step = max(1, _SWAP_CHUNK // a.shape[1])
            for r in range(0, a.shape[0], step):
                _butterfly(a[r:r + step], b[r:r + step], forward)
        else:
            for c in range(0, a.shape[1], _SWAP_CHUNK):
                _butterfly(a[:, c:c + _SWAP_CHUNK], b[:, c:c + _SWAP_CHUNK], forward)
        return
    tmp = a.copy()
    a += b
    np.subtract(tmp, b, out=b)
    if forward:
        a *= 0.5
        b *= 0.5


def sfwht(v, forward):
    n = v.shape[0]
    h = 1
    while h < n:
        x = v.reshape(-1, 2, h)
        _butterfly(x[:, 0, :], x[:, 1, :], forward)
        h <<= 1


def _swap(x, y):
    """Swap two equally shaped views using at most _SWAP_CHUNK of scratch."""
    if x.size <= _SWAP_CHUNK:
        tmp = x.copy()
        x[...] = y
        y[...] = tmp
        return
    if x.ndim == 1:
        for c0 in range(0, x.shape[0], _SWAP_CHUNK):
            _swap(x[c0:c0 + _SWAP_CHUNK], y[c0:c0 + _SWAP_CHUNK])
        return
    per_row = x[0].size
    if per_row >= _SWAP_CHUNK:
        for r in range(x.shape[0]):
            _swap(x[r], y[r])
        return
    step = _SWAP_CHUNK // per_row
    for r0 in range(0, x.shape[0], step):
        _swap(x[r0:r0 + step], y[r0:r0 + step])


def gray_permute(v, forward):
    """Gray permutation as a product of bit transvections.

    i -> i ^ (i >> 1) factors into the involutions T_j: bit j ^= bit j+1,
    applied for j = 0, 1, ..., n-2. Each T_j swaps two quarter-slices, so the
    whole permutation is n-1 chunked slice swaps with bounded scratch memory.
    """
    n = v.shape[0]
    bits = n.bit_length() - 1
    order = range(bits - 1) if forward else reversed(range(bits - 1))
    for j in order:
        inner = 1 << j
        x = v.reshape(-1, 2, 2, inner)
        _swap(x[:, 1, 0, :], x[:, 1, 1, :])


def apply_1q(state, num_qubits, qubit, m00, m01, m10, m11):
    stride = 1 << (num_qubits - 1 - qubit)
    x = state.reshape(-1, 2, stride)
    a = x[:, 0, :]
    b = x[:, 1, :]
    new_a = m00 * a + m01 * b
    b *= m11
    b += m10 * a
    a[...] = new_a


def apply_cnot(state, num_qubits, control, target):
    if control < target:
        x = state.reshape(1 << control, 2, 1 << (target - control - 1), 2,
                          1 << (num_qubits - 1 - target))
        _swap(x[:, 1, :, 0, :], x[:, 1, :, 1, :])
    else:
        x = state.reshape(1 << target, 2, 1 << (control - target - 1), 2,
                          1 << (num_qubits - 1 - control))
        _swap(x[:, 0, :, 1, :], x[:, 1, :, 1, :])

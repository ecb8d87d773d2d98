"""Reference computations written independently of the package, for cross-checks."""

import itertools

import numpy as np

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA = (I2, SX, SY, SZ)


def string_op(s):
    out = np.ones((1, 1), dtype=complex)
    for i in s:
        out = np.kron(out, SIGMA[i])
    return out


def coefficients(rho):
    """R_s = Tr[rho P_s] by explicit traces."""
    return {s: float(np.trace(rho @ string_op(s)).real) for s in itertools.product(range(4), repeat=3)}


def from_coefficients(values):
    m = np.eye(8, dtype=complex)
    for s, v in values.items():
        if s != (0, 0, 0):
            m = m + v * string_op(s)
    return m / 8


def ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def w_density():
    w = (ket("001") + ket("010") + ket("100")) / np.sqrt(3)
    return np.outer(w, w.conj())


def w_noisy(p):
    return (1 - p) * np.eye(8) / 8 + p * w_density()


def partial_transpose_loop(rho, q):
    out = np.zeros_like(rho)
    for i in range(8):
        for j in range(8):
            bi = [(i >> (2 - k)) & 1 for k in range(3)]
            bj = [(j >> (2 - k)) & 1 for k in range(3)]
            bi[q], bj[q] = bj[q], bi[q]
            ii = bi[0] * 4 + bi[1] * 2 + bi[2]
            jj = bj[0] * 4 + bj[1] * 2 + bj[2]
            out[ii, jj] = rho[i, j]
    return out


def random_density(rng, dim=8):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_unitary(rng):
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))

"""Dense 2/4/8-dimensional linear algebra for three qubits.

Basis ordering is |q_A q_B q_C> with row index 4*q_A + 2*q_B + q_C, so qubit A
is the slowest-varying tensor factor. Matrices are plain complex numpy arrays;
constructors that validate a density matrix hand back read-only copies.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Iterable, Tuple

import numpy as np

from .errors import EmptyKeepSet, NonUnitTrace, NotHermitian, NotPSD

TOL = 1e-10

PauliString = Tuple[int, int, int]

QUBITS = ("A", "B", "C")

_PAULIS = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
for _p in _PAULIS:
    _p.flags.writeable = False

PAULI_LABELS = "IXYZ"


class Cut(str, Enum):
    """Single-qubit bipartition: the solo qubit versus the remaining pair."""

    A_BC = "A|BC"
    B_AC = "B|AC"
    C_AB = "C|AB"

    @property
    def solo(self) -> int:
        return "ABC".index(self.value[0])

    @property
    def pair(self) -> tuple[int, int]:
        return tuple(q for q in range(3) if q != self.solo)

    @classmethod
    def parse(cls, text: "str | Cut") -> "Cut":
        """Accept ``"A|BC"``, ``"A"``, ``"a"`` and friends."""
        if isinstance(text, Cut):
            return text
        key = str(text).strip().upper()
        for cut in cls:
            if key in (cut.value, cut.value[0]):
                return cut
        raise ValueError(f"unknown bipartition {text!r}; expected one of A|BC, B|AC, C|AB")

    def __str__(self) -> str:
        return self.value


def qubit_index(q: "int | str") -> int:
    if isinstance(q, str):
        try:
            return QUBITS.index(q.upper())
        except ValueError:
            raise ValueError(f"unknown qubit {q!r}") from None
    if q not in (0, 1, 2):
        raise ValueError(f"qubit index {q} out of range")
    return int(q)


def pauli(idx: int) -> np.ndarray:
    """Return I, sigma_x, sigma_y or sigma_z for ``idx`` = 0, 1, 2, 3."""
    if idx not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index must be in 0..3, got {idx}")
    return _PAULIS[idx]


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


@lru_cache(maxsize=None)
def _pauli_string_cached(s: PauliString) -> np.ndarray:
    mat = kron(kron(pauli(s[0]), pauli(s[1])), pauli(s[2]))
    mat.flags.writeable = False
    return mat


def pauli_string_matrix(s: Iterable[int]) -> np.ndarray:
    """8x8 matrix of sigma_a (x) sigma_b (x) sigma_c for the string ``(a, b, c)``."""
    s = tuple(int(i) for i in s)
    if len(s) != 3:
        raise ValueError(f"Pauli string must have three indices, got {s}")
    for i in s:
        pauli(i)
    return _pauli_string_cached(s)


def pauli_label(s: PauliString) -> str:
    return "".join(PAULI_LABELS[i] for i in s)


def hermiticity_error(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _check_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_eig(m: np.ndarray, tol: float = TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix.

    Raises NotHermitian if any entry of ``M - M^dagger`` exceeds ``tol`` in modulus.
    """
    m = _check_square(m)
    dev = hermiticity_error(m)
    if dev > tol:
        raise NotHermitian(dev, tol)
    herm = 0.5 * (m + m.conj().T)
    return np.linalg.eigh(herm)


def min_eigenvalue(m: np.ndarray, tol: float = TOL) -> float:
    return float(hermitian_eig(m, tol)[0][0])


def is_psd(m: np.ndarray, tol: float = TOL) -> bool:
    return min_eigenvalue(m, tol) >= -tol


def validate_density(m: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return a read-only copy.

    The dimension must be 2, 4 or 8.
    """
    m = _check_square(m)
    if m.shape[0] not in (2, 4, 8):
        raise ValueError(f"density matrices here are 2x2, 4x4 or 8x8, got {m.shape}")
    dev = hermiticity_error(m)
    if dev > tol:
        raise NotHermitian(dev, tol)
    tr = complex(np.trace(m))
    if abs(tr - 1) > tol:
        raise NonUnitTrace(tr, tol)
    lam = min_eigenvalue(m, tol)
    if lam < -tol:
        raise NotPSD(lam, tol)
    out = m.copy()
    out.flags.writeable = False
    return out


def density_errors(m: np.ndarray, tol: float = TOL) -> list[str]:
    """Human-readable list of violated density-matrix invariants (empty when valid)."""
    try:
        validate_density(m, tol)
    except (NotHermitian, NonUnitTrace, NotPSD, ValueError) as exc:
        return [str(exc)]
    return []


def partial_trace(rho: np.ndarray, keep: Iterable["int | str"]) -> np.ndarray:
    """Reduced density matrix of an 8x8 state on the qubits in ``keep``.

    Kept qubits stay in A, B, C order.
    """
    keep = sorted({qubit_index(q) for q in keep})
    if not keep:
        raise EmptyKeepSet("partial_trace needs at least one qubit to keep")
    rho = _check_square(rho)
    if rho.shape != (8, 8):
        raise ValueError(f"partial_trace expects an 8x8 matrix, got {rho.shape}")
    t = rho.reshape((2,) * 6)
    letters = "abcdef"
    row = list(letters[:3])
    col = list(letters[3:])
    for q in range(3):
        if q not in keep:
            col[q] = row[q]
    out = "".join(row[q] for q in keep) + "".join(col[q] for q in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    d = 2 ** len(keep)
    return reduced.reshape(d, d)


def partial_transpose(rho: np.ndarray, qubit: "int | str") -> np.ndarray:
    """Transpose the tensor factor of one qubit of an 8x8 matrix."""
    q = qubit_index(qubit)
    rho = _check_square(rho)
    if rho.shape != (8, 8):
        raise ValueError(f"partial_transpose expects an 8x8 matrix, got {rho.shape}")
    axes = list(range(6))
    axes[q], axes[q + 3] = axes[q + 3], axes[q]
    return rho.reshape((2,) * 6).transpose(axes).reshape(8, 8)


def ppt_min_eigs(rho: np.ndarray) -> dict[Cut, float]:
    """Smallest eigenvalue of the partial transpose on each single qubit, keyed by cut."""
    return {cut: min_eigenvalue(partial_transpose(rho, cut.solo)) for cut in Cut}


def embed_bipartite(solo: np.ndarray, pair: np.ndarray, cut: Cut) -> np.ndarray:
    """8x8 operator ``solo (x) pair`` with the factors placed on the qubits named by ``cut``.

    ``pair`` acts on the two remaining qubits in A, B, C order.
    """
    order = (cut.solo, *cut.pair)
    t = kron(solo, pair).reshape((2,) * 6)
    pos = [order.index(q) for q in range(3)]
    return t.transpose(pos + [3 + p for p in pos]).reshape(8, 8)


def product_operator(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return kron(kron(a, b), c)


def local_unitary_conjugate(rho: np.ndarray, ua: np.ndarray, ub: np.ndarray, uc: np.ndarray) -> np.ndarray:
    u = product_operator(ua, ub, uc)
    return u @ rho @ u.conj().T

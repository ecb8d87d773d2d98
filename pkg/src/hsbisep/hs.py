"""Hilbert-Schmidt (Pauli-basis) coefficients of three-qubit states.

Convention: ``8 rho = sum_s R_s P_s`` over the 64 Pauli strings ``s = (l, m, n)``,
so ``R_s = Tr[rho P_s]`` and ``R_000 = 1`` for a unit-trace state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import NonUnitTrace, NotPSD, OutOfRange
from .linalg import TOL, PauliString, min_eigenvalue, pauli, pauli_label, validate_density

PAULI_STRINGS: tuple[PauliString, ...] = tuple(itertools.product(range(4), repeat=3))
IDENTITY: PauliString = (0, 0, 0)
MDS_STRINGS: tuple[PauliString, ...] = tuple(s for s in PAULI_STRINGS if 0 not in s)
LOCAL_STRINGS: tuple[PauliString, ...] = tuple(s for s in PAULI_STRINGS if 0 in s and s != IDENTITY)

# Coefficient orderings for the reference families.
CANONICAL_STRINGS: tuple[PauliString, ...] = ((1, 1, 1), (2, 2, 2), (3, 3, 3))
ROTATED_STRINGS: tuple[PauliString, ...] = ((1, 3, 2), (3, 2, 1), (2, 1, 3))
THIRD_TRIAD_STRINGS: tuple[PauliString, ...] = ((1, 2, 3), (3, 1, 2), (2, 3, 1))
REFERENCE_FAMILIES: dict[str, tuple[PauliString, ...]] = {
    "canonical": CANONICAL_STRINGS,
    "rotated": ROTATED_STRINGS,
    "two_triad": CANONICAL_STRINGS + ROTATED_STRINGS,
    "three_triad": CANONICAL_STRINGS + ROTATED_STRINGS + THIRD_TRIAD_STRINGS,
}

# Stacked single-qubit Paulis, shape (4, 2, 2); used for vectorised extraction.
_SIGMA = np.stack([pauli(i) for i in range(4)])


@dataclass(frozen=True, eq=False)
class HSDecomposition:
    """Real coefficient tensor ``R[l, m, n]`` of shape (4, 4, 4)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (4, 4, 4):
            raise ValueError(f"coefficient tensor must have shape (4, 4, 4), got {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, s: Sequence[int]) -> float:
        return float(self.coeffs[tuple(s)])

    def __iter__(self) -> Iterator[PauliString]:
        return iter(PAULI_STRINGS)

    def items(self) -> Iterator[tuple[PauliString, float]]:
        for s in PAULI_STRINGS:
            yield s, float(self.coeffs[s])

    def subset(self, strings: Iterable[PauliString]) -> dict[PauliString, float]:
        return {tuple(s): float(self.coeffs[tuple(s)]) for s in strings}

    def nonidentity(self) -> dict[PauliString, float]:
        return self.subset(s for s in PAULI_STRINGS if s != IDENTITY)

    def nonzero(self, threshold: float = 1e-12) -> dict[PauliString, float]:
        """Nonidentity coefficients with ``|R| > threshold``, sorted by string."""
        return {s: v for s, v in self.nonidentity().items() if abs(v) > threshold}

    @property
    def mds_tensor(self) -> np.ndarray:
        """The 3x3x3 block of all-nonidentity coefficients (index 0 means sigma_x)."""
        return self.coeffs[1:, 1:, 1:]

    def scaled(self, factor: float) -> "HSDecomposition":
        """Scale every nonidentity coefficient, keeping ``R_000``."""
        c = self.coeffs * factor
        c[IDENTITY] = self.coeffs[IDENTITY]
        return HSDecomposition(c)

    def __eq__(self, other):
        if not isinstance(other, HSDecomposition):
            return NotImplemented
        return bool(np.array_equal(self.coeffs, other.coeffs))

    @classmethod
    def from_mapping(cls, values: Mapping[PauliString, float], identity: float = 1.0) -> "HSDecomposition":
        c = np.zeros((4, 4, 4))
        c[IDENTITY] = identity
        for s, v in values.items():
            c[tuple(s)] = v
        return cls(c)

    def describe(self, threshold: float = 1e-12) -> list[str]:
        rows = []
        for s, v in self.nonzero(threshold).items():
            kind = "mds" if 0 not in s else "local"
            rows.append(f"{pauli_label(s)}  ({s[0]},{s[1]},{s[2]})  {kind:<5}  {v:+.17g}")
        return rows


def hs_decompose(rho: np.ndarray, tol: float = TOL) -> HSDecomposition:
    """Pauli coefficients ``R_s = Tr[rho P_s]`` of an 8x8 matrix.

    Raises ValueError if any ``Tr[rho P_s]`` has an imaginary part above ``tol``
    (the input was not Hermitian) and NonUnitTrace if ``|R_000 - 1| > tol``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise ValueError(f"hs_decompose expects an 8x8 matrix, got {rho.shape}")
    t = rho.reshape((2,) * 6)
    # Tr[rho (s_l x s_m x s_n)] = sum rho[abc, def] s_l[da] s_m[eb] s_n[fc]
    raw = np.einsum("abcdef,lda,meb,nfc->lmn", t, _SIGMA, _SIGMA, _SIGMA)
    imag = float(np.max(np.abs(raw.imag)))
    if imag > tol:
        raise ValueError(f"Pauli coefficient has imaginary part {imag:.3e}; input is not Hermitian")
    d = HSDecomposition(raw.real)
    if abs(d[IDENTITY] - 1) > tol:
        raise NonUnitTrace(complex(np.trace(rho)), tol)
    return d


def hs_reconstruct(d: HSDecomposition) -> np.ndarray:
    """``(1/8) sum_s R_s P_s``; the result is Hermitian but need not be PSD."""
    c = d.coeffs if isinstance(d, HSDecomposition) else np.asarray(d, dtype=float)
    m = np.einsum("lmn,lad,mbe,ncf->abcdef", c, _SIGMA, _SIGMA, _SIGMA)
    return m.reshape(8, 8) / 8


def is_mds(d: HSDecomposition, tol: float = TOL) -> bool:
    """True when every coefficient carrying an identity factor (except R_000) vanishes.

    Equivalently, every one- and two-qubit marginal is maximally mixed.
    """
    return all(abs(d[s]) <= tol for s in LOCAL_STRINGS)


def split_local_mds(d: HSDecomposition) -> tuple[dict[PauliString, float], dict[PauliString, float]]:
    return d.subset(LOCAL_STRINGS), d.subset(MDS_STRINGS)


def _values(sub) -> np.ndarray:
    if isinstance(sub, Mapping):
        sub = list(sub.values())
    return np.asarray(list(sub), dtype=float)


def l1_norm(sub: "Mapping[PauliString, float] | Iterable[float]") -> float:
    return float(np.sum(np.abs(_values(sub))))


def frobenius_norm(sub: "Mapping[PauliString, float] | Iterable[float]") -> float:
    v = _values(sub)
    return float(math.sqrt(float(np.dot(v, v))))


def state_from_coefficients(
    values: Mapping[PauliString, float], tol: float = TOL
) -> np.ndarray:
    """Validated density matrix ``(1/8)(I + sum R_s P_s)``; NotPSD carries the minimal eigenvalue."""
    m = hs_reconstruct(HSDecomposition.from_mapping(values))
    lam = min_eigenvalue(m, tol)
    if lam < -tol:
        raise NotPSD(lam, tol)
    return validate_density(m, tol)


def canonical_state(r111: float, r222: float, r333: float, tol: float = TOL) -> np.ndarray:
    """``8 rho = I + R111 XXX + R222 YYY + R333 ZZZ``; valid iff the coefficients lie in the unit ball."""
    return state_from_coefficients(dict(zip(CANONICAL_STRINGS, (r111, r222, r333))), tol)


def reference_state(which: str, coeffs: Sequence[float], tol: float = TOL) -> np.ndarray:
    """Build one of the triad reference states from caller-supplied coefficients.

    ``which`` selects the coefficient ordering:

    * ``"canonical"``: (R111, R222, R333)
    * ``"rotated"``: (R132, R321, R213)
    * ``"two_triad"``: canonical followed by rotated, six values
    * ``"three_triad"``: two_triad followed by (R123, R312, R231), nine values
    """
    try:
        strings = REFERENCE_FAMILIES[which]
    except KeyError:
        raise ValueError(f"unknown reference state {which!r}; choose from {sorted(REFERENCE_FAMILIES)}") from None
    coeffs = [float(c) for c in coeffs]
    if len(coeffs) != len(strings):
        raise ValueError(f"{which} takes {len(strings)} coefficients, got {len(coeffs)}")
    return state_from_coefficients(dict(zip(strings, coeffs)), tol)


def rotated_state(r132: float, r321: float, r213: float, tol: float = TOL) -> np.ndarray:
    return reference_state("rotated", (r132, r321, r213), tol)


def two_triad_state(coeffs: Sequence[float], tol: float = TOL) -> np.ndarray:
    return reference_state("two_triad", coeffs, tol)


def three_triad_state(coeffs: Sequence[float], tol: float = TOL) -> np.ndarray:
    return reference_state("three_triad", coeffs, tol)


def random_state(seed: int, kind: str = "generic", tol: float = TOL) -> np.ndarray:
    """Reproducible random three-qubit state drawn with ``numpy.random.default_rng(seed)`` (PCG64).

    ``generic``: normalised Wishart matrix G G^dagger from complex Gaussian G.
    ``mds``: 27 all-nonidentity coefficients uniform in [-1, 1], halved until
    the reconstructed matrix is positive semidefinite.
    """
    rng = np.random.default_rng(seed)
    if kind == "generic":
        g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        m = g @ g.conj().T
        m = m / np.trace(m).real
        return validate_density(0.5 * (m + m.conj().T), tol)
    if kind == "mds":
        c = np.zeros((4, 4, 4))
        c[1:, 1:, 1:] = rng.uniform(-1.0, 1.0, size=(3, 3, 3))
        c[IDENTITY] = 1.0
        while True:
            m = hs_reconstruct(c)
            if min_eigenvalue(m, tol) >= 0:
                return validate_density(m, tol)
            c[1:, 1:, 1:] *= 0.5
    raise OutOfRange(f"unknown random state kind {kind!r}; expected 'generic' or 'mds'")

"""Latin triads of Pauli strings and their Bell-basis biseparable decompositions.

A triad is three all-nonidentity strings whose A, B and C indices each run
over {1, 2, 3}. Restricted to any two qubits, the three strings give pairwise
commuting two-qubit Paulis, so they share four rank-1 eigenprojectors (the
Bell states, up to a local frame). A triad with coefficients ``v`` then splits as

    (1/8)(|v| I + sum_k v_k P_k) = (|v|/4) sum_eps solo_eps (x) Pi_eps

with single-qubit factors whose Bloch vectors are ``eps * v / |v|``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .certificate import CertificateTerm
from .errors import DegenerateTriad, InternalSignSolveFailure, NotMDS
from .hs import HSDecomposition, is_mds
from .linalg import TOL, Cut, PauliString, embed_bipartite, hermitian_eig, kron, pauli, pauli_string_matrix


def _is_latin(strings: Sequence[PauliString]) -> bool:
    return all(sorted(s[q] for s in strings) == [1, 2, 3] for q in range(3))


@dataclass(frozen=True)
class Triad:
    """Three Latin Pauli strings, ordered by their A index.

    ``id`` is the (a, b) label of the cyclic family, where string k is
    ``(k, (k-1+a) % 3 + 1, (k-1+b) % 3 + 1)``; it is None for other Latin triads.
    """

    strings: tuple[PauliString, PauliString, PauliString]
    id: tuple[int, int] | None = None

    def __post_init__(self):
        strings = tuple(sorted(tuple(int(i) for i in s) for s in self.strings))
        if len(strings) != 3 or not _is_latin(strings):
            raise ValueError(f"{strings} is not a Latin triad")
        object.__setattr__(self, "strings", strings)
        if self.id is not None and strings != cyclic_strings(*self.id):
            raise ValueError(f"{strings} is not the cyclic triad {self.id}")

    def __iter__(self):
        return iter(self.strings)

    def values(self, coeffs: "HSDecomposition | Mapping[PauliString, float]") -> tuple[float, float, float]:
        return tuple(float(coeffs[s]) for s in self.strings)


def cyclic_strings(a: int, b: int) -> tuple[PauliString, PauliString, PauliString]:
    return tuple((k, (k - 1 + a) % 3 + 1, (k - 1 + b) % 3 + 1) for k in (1, 2, 3))


def cyclic_triad(a: int, b: int) -> Triad:
    if a not in (0, 1, 2) or b not in (0, 1, 2):
        raise ValueError(f"cyclic triad label must lie in {{0,1,2}}^2, got {(a, b)}")
    return Triad(cyclic_strings(a, b), (a, b))


@lru_cache(maxsize=None)
def triad_partition() -> tuple[Triad, ...]:
    """The nine cyclic triads, ordered by (a, b); they partition the 27 MDS strings."""
    return tuple(cyclic_triad(a, b) for a in range(3) for b in range(3))


@lru_cache(maxsize=None)
def latin_triads() -> tuple[Triad, ...]:
    """All 36 Latin triads (pairs of permutations for the B and C indices)."""
    out = []
    for sb in itertools.permutations((1, 2, 3)):
        for sc in itertools.permutations((1, 2, 3)):
            out.append(Triad(tuple((k, sb[k - 1], sc[k - 1]) for k in (1, 2, 3))))
    return tuple(out)


BELL_LABELS = ("Phi-", "Phi+", "Psi+", "Psi-")


@lru_cache(maxsize=None)
def bell_projectors() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Projectors onto Phi-, Phi+, Psi+, Psi- (in that order) of a qubit pair."""
    s = 1 / np.sqrt(2)
    vecs = (
        np.array([s, 0, 0, -s]),
        np.array([s, 0, 0, s]),
        np.array([0, s, s, 0]),
        np.array([0, s, -s, 0]),
    )
    out = []
    for v in vecs:
        p = np.outer(v, v.conj()).astype(complex)
        p.flags.writeable = False
        out.append(p)
    return tuple(out)


def pair_operators(t: Triad, cut: Cut) -> list[np.ndarray]:
    """The triad strings restricted to the two qubits paired by ``cut``."""
    p1, p2 = cut.pair
    return [kron(pauli(s[p1]), pauli(s[p2])) for s in t.strings]


def _pattern_key(eps: tuple[int, int, int]):
    minus = tuple(i for i, e in enumerate(eps) if e < 0)
    return (len(minus), minus)


def joint_eigenprojectors(ops: Sequence[np.ndarray]) -> list[tuple[tuple[int, int, int], np.ndarray]]:
    """Common rank-1 eigenprojectors of three commuting two-qubit Paulis with their sign patterns.

    Patterns are ordered by number of minus signs, then by their positions; for
    (XX, YY, ZZ) this reproduces the Phi-, Phi+, Psi+, Psi- order.
    """
    generic = ops[0] + 2 * ops[1] + 4 * ops[2]
    _, vecs = hermitian_eig(generic)
    out = []
    for j in range(vecs.shape[1]):
        v = vecs[:, j]
        eps = tuple(int(np.rint((v.conj() @ q @ v).real)) for q in ops)
        if any(abs(e) != 1 for e in eps):
            raise InternalSignSolveFailure(f"pair operators are not jointly diagonal (pattern {eps})")
        out.append((eps, np.outer(v, v.conj())))
    out.sort(key=lambda item: _pattern_key(item[0]))
    return out


def triad_decomposition(
    t: Triad, values: Sequence[float], bipartition: "Cut | str" = Cut.A_BC
) -> tuple[float, list[CertificateTerm]]:
    """Split ``(1/8)(w I + sum_k values_k P_k)`` into four bipartite terms, w = |values|.

    Returns ``(w, terms)`` where the terms are normalised states with weight 1/4
    each. Values are aligned with ``t.strings``.
    """
    cut = Cut.parse(bipartition)
    v = np.asarray(values, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"a triad takes three values, got {v.shape}")
    w = float(np.linalg.norm(v))
    if w == 0:
        raise DegenerateTriad(f"all values vanish on triad {t.strings}")
    unit = v / w
    solo_axes = [s[cut.solo] for s in t.strings]
    patterns = joint_eigenprojectors(pair_operators(t, cut))

    target = np.eye(8, dtype=complex)
    for s, x in zip(t.strings, unit):
        target = target + x * pauli_string_matrix(s)
    target /= 8

    identity = np.eye(2, dtype=complex)
    for eta in itertools.product((1, -1), repeat=3):
        solos = []
        for eps, _ in patterns:
            bloch = sum(eta[k] * eps[k] * unit[k] * pauli(solo_axes[k]) for k in range(3))
            solos.append((identity + bloch) / 2)
        recon = sum(0.25 * embed_bipartite(sf, proj, cut) for sf, (_, proj) in zip(solos, patterns))
        if np.linalg.norm(recon - target) <= 1e-12:
            break
    else:
        raise InternalSignSolveFailure(f"no sign assignment reconstructs triad {t.strings} across {cut}")
    return w, [CertificateTerm.bipartite(0.25, sf, proj, cut) for sf, (_, proj) in zip(solos, patterns)]


# Proper signed permutations: the rotations of the cube, acting on (x, y, z) labels.
def _proper_rotations() -> np.ndarray:
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            o = np.zeros((3, 3))
            for i, (j, sgn) in enumerate(zip(perm, signs)):
                o[i, j] = sgn
            if np.linalg.det(o) > 0:
                out.append(o)
    arr = np.array(out)
    arr.flags.writeable = False
    return arr


PROPER_ROTATIONS = _proper_rotations()

_CYCLIC_INDEX = np.array([[tuple(i - 1 for i in s) for s in t.strings] for t in triad_partition()])


def rotation_unitary(o: np.ndarray) -> np.ndarray:
    """A single-qubit unitary U with ``U sigma_i U^dagger = sum_j o[j, i] sigma_j``."""
    from scipy.spatial.transform import Rotation

    vec = Rotation.from_matrix(np.asarray(o, dtype=float)).as_rotvec()
    theta = float(np.linalg.norm(vec))
    if theta == 0:
        return np.eye(2, dtype=complex)
    n = vec / theta
    gen = n[0] * pauli(1) + n[1] * pauli(2) + n[2] * pauli(3)
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * gen


def rotate_mds_tensor(t: np.ndarray, oa: np.ndarray, ob: np.ndarray, oc: np.ndarray) -> np.ndarray:
    """Coefficient tensor after the local frame change ``R' = (oa x ob x oc) R``."""
    return np.einsum("ia,jb,kc,abc->ijk", oa, ob, oc, t)


def triad_norms(t: np.ndarray) -> np.ndarray:
    """Frobenius norms of the nine cyclic triads of a 3x3x3 tensor."""
    vals = t[_CYCLIC_INDEX[..., 0], _CYCLIC_INDEX[..., 1], _CYCLIC_INDEX[..., 2]]
    return np.sqrt(np.sum(vals**2, axis=-1))


class FrameSearch(NamedTuple):
    best_norm_sum: float
    rotations: tuple[np.ndarray, np.ndarray, np.ndarray]


def _all_frame_sums(t: np.ndarray) -> np.ndarray:
    r = PROPER_ROTATIONS
    t1 = np.einsum("fia,abc->fibc", r, t)
    t2 = np.einsum("gjb,fibc->fgijc", r, t1)
    t3 = np.einsum("hkc,fgijc->fghijk", r, t2)
    idx = _CYCLIC_INDEX
    vals = t3[..., idx[..., 0], idx[..., 1], idx[..., 2]]
    return np.sqrt(np.sum(vals**2, axis=-1)).sum(axis=-1).reshape(-1)


def optimize_frame(d: HSDecomposition, tol: float = TOL) -> FrameSearch:
    """Minimise the cyclic triad norm sum over all 24^3 proper local signed permutations.

    Ties (within 1e-12) go to the lowest frame index; the identity frame is index 0.
    """
    if not is_mds(d, tol):
        raise NotMDS("frame optimisation needs an MDS state")
    sums = _all_frame_sums(d.mds_tensor)
    best = float(sums.min())
    index = int(np.flatnonzero(sums <= best + 1e-12)[0])
    fa, rest = divmod(index, 24 * 24)
    fb, fc = divmod(rest, 24)
    rot = (PROPER_ROTATIONS[fa].copy(), PROPER_ROTATIONS[fb].copy(), PROPER_ROTATIONS[fc].copy())
    return FrameSearch(float(sums[index]), rot)


def frame_triads(rotations: Sequence[np.ndarray]) -> tuple[Triad, ...]:
    """The original-frame Latin triads that the rotated cyclic partition corresponds to."""
    perms = [np.argmax(np.abs(o), axis=1) + 1 for o in rotations]
    out = []
    for t in triad_partition():
        out.append(Triad(tuple(tuple(int(perms[q][s[q] - 1]) for q in range(3)) for s in t.strings)))
    return tuple(out)


def latin_cover(
    coeffs: Mapping[PauliString, float], zero_tol: float = 1e-14
) -> tuple[float, list[tuple[Triad, tuple[float, float, float]]]]:
    """Cover the nonzero MDS coefficients by disjoint parts of Latin triads.

    Minimises the sum of the parts' Frobenius norms (a set-partitioning
    integer program over every nonempty subset of every Latin triad). Each
    returned triad carries values with zeros on the strings it does not cover.
    """
    support = sorted(s for s, v in coeffs.items() if 0 not in s and abs(v) > zero_tol)
    if not support:
        return 0.0, []
    where = {s: i for i, s in enumerate(support)}
    groups: dict[frozenset, Triad] = {}
    for t in latin_triads():
        inside = [s for s in t.strings if s in where]
        for r in range(1, len(inside) + 1):
            for sub in itertools.combinations(inside, r):
                groups.setdefault(frozenset(sub), t)
    keys = list(groups)
    cost = np.array([np.sqrt(sum(coeffs[s] ** 2 for s in g)) for g in keys])
    a = np.zeros((len(support), len(keys)))
    for j, g in enumerate(keys):
        for s in g:
            a[where[s], j] = 1
    res = milp(
        cost,
        constraints=LinearConstraint(a, 1, 1),
        integrality=np.ones(len(keys)),
        bounds=Bounds(0, 1),
    )
    if not res.success:
        raise RuntimeError(f"triad cover failed: {res.message}")
    chosen = [keys[j] for j in np.flatnonzero(res.x > 0.5)]
    cover = []
    for g in sorted(chosen, key=lambda g: sorted(g)):
        t = groups[g]
        cover.append((t, tuple(float(coeffs[s]) if s in g else 0.0 for s in t.strings)))
    total = float(sum(np.linalg.norm(v) for _, v in cover))
    return total, cover

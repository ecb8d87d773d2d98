"""The W state mixed with white noise: reference data, explicit certificates, thresholds.

``rho(p) = (1 - p) I/8 + p |W><W|`` with ``|W> = (|001> + |010> + |100>)/sqrt(3)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .certificate import BIPARTITE, Certificate, CertificateTerm, state_digest, verify_certificate
from .construct import full_separability_cost, fully_separable_certificate
from .errors import CriterionNotMet, InternalSignSolveFailure, NoSignChange, OutOfRange, ThresholdExceeded
from .hs import HSDecomposition, hs_decompose
from .linalg import TOL, Cut, kron, pauli, ppt_min_eigs, validate_density
from .triads import cyclic_triad, triad_decomposition

W_SUPPORT = (1, 2, 4)  # zero-based rows of |001>, |010>, |100>

# Coefficients of 8 rho(W), i.e. the full table divided by 3.
W_HS_TABLE = {
    (3, 0, 0): 1 / 3, (0, 3, 0): 1 / 3, (0, 0, 3): 1 / 3,
    (2, 0, 2): 2 / 3, (0, 2, 2): 2 / 3, (2, 2, 0): 2 / 3,
    (3, 0, 3): -1 / 3, (0, 3, 3): -1 / 3, (3, 3, 0): -1 / 3,
    (1, 1, 0): 2 / 3, (1, 0, 1): 2 / 3, (0, 1, 1): 2 / 3,
    (1, 3, 1): 2 / 3, (3, 1, 1): 2 / 3, (1, 1, 3): 2 / 3,
    (2, 2, 3): 2 / 3, (2, 3, 2): 2 / 3, (3, 2, 2): 2 / 3,
    (3, 3, 3): -1.0,
}  # fmt: skip

# Product terms (I + s_A sigma)(I + s_B sigma)(I + s_C sigma)/8 of weight p/3 each, keyed
# by Pauli axis. The second sigma_y product uses (I - sigma_y) on C, not (I - sigma_z).
W_PRODUCT_SIGNS = (
    (3, (1, 1, -1)),
    (3, (-1, 1, 1)),
    (3, (1, -1, 1)),
    (2, (1, 1, 1)),
    (2, (-1, -1, -1)),
    (1, (1, 1, 1)),
    (1, (-1, -1, -1)),
)

# Pi/2 rotations mapping the (XXX, YYY) pair onto the three pairs of 2/3-coefficient
# MDS strings. Per qubit (A, B, C): None or (axis, sign of the angle).
W_ROTATIONS = (
    (None, (2, -1), (1, 1)),
    ((1, 1), None, (2, -1)),
    ((2, -1), (1, 1), None),
)
W_ROTATED_PAIRS = (
    ((1, 3, 1), (2, 2, 3)),
    ((1, 1, 3), (3, 2, 2)),
    ((3, 1, 1), (2, 3, 2)),
)


def bisep_threshold() -> float:
    """Largest p covered by the explicit biseparable construction: 3/(7 + 6 sqrt 2)."""
    return 3 / (7 + 6 * math.sqrt(2))


def full_sep_threshold() -> float:
    """Largest p covered by the fully separable construction."""
    return 1 / 9


@lru_cache(maxsize=None)
def _w_state() -> np.ndarray:
    m = np.zeros((8, 8), dtype=complex)
    for i in W_SUPPORT:
        for j in W_SUPPORT:
            m[i, j] = 1 / 3
    m.flags.writeable = False
    return m


def w_state() -> np.ndarray:
    return _w_state()


@dataclass(frozen=True, eq=False)
class WNoiseState:
    p: float
    rho: np.ndarray


def _check_p(p: float) -> float:
    p = float(p)
    if not 0 <= p <= 1:
        raise OutOfRange(f"mixing probability must lie in [0, 1], got {p}")
    return p


def w_mixed(p: float, tol: float = TOL) -> WNoiseState:
    p = _check_p(p)
    rho = (1 - p) * np.eye(8, dtype=complex) / 8 + p * w_state()
    return WNoiseState(p, validate_density(rho, tol))


def w_hs_reference() -> HSDecomposition:
    return HSDecomposition.from_mapping(W_HS_TABLE)


def rotation(axis: int, sign: int) -> np.ndarray:
    """exp(-i sign (pi/4) sigma_axis): a rotation by sign * pi/2 about ``axis``."""
    theta = sign * math.pi / 2
    return math.cos(theta / 2) * np.eye(2, dtype=complex) - 1j * math.sin(theta / 2) * pauli(axis)


def _local_unitaries(spec) -> list[np.ndarray]:
    return [np.eye(2, dtype=complex) if r is None else rotation(*r) for r in spec]


def resolve_rotation_signs() -> tuple:
    """Recompute ``W_ROTATIONS``: for each pair, the angle signs that give both strings +1/sqrt 2.

    Used as a regression check on the frozen constants.
    """
    block = sum(t.weight * t.operator() for t in bell_block())
    out = []
    for spec, pair in zip(W_ROTATIONS, W_ROTATED_PAIRS):
        axes = [None if r is None else r[0] for r in spec]
        found = []
        for signs in itertools.product((1, -1), repeat=2):
            it = iter(signs)
            trial = tuple(None if a is None else (a, next(it)) for a in axes)
            us = _local_unitaries(trial)
            u = kron(kron(us[0], us[1]), us[2])
            d = hs_decompose(u @ block @ u.conj().T)
            if all(abs(d[s] - 1 / math.sqrt(2)) < 1e-12 for s in pair):
                found.append(trial)
        if len(found) != 1:
            raise InternalSignSolveFailure(f"expected one sign choice for {pair}, found {found}")
        out.append(found[0])
    return tuple(out)


@lru_cache(maxsize=None)
def bell_block() -> tuple[CertificateTerm, ...]:
    """The (XXX + YYY)/sqrt 2 triad block across A|BC: four Bell terms of weight 1/4."""
    _, terms = triad_decomposition(cyclic_triad(0, 0), (1.0, 1.0, 0.0), Cut.A_BC)
    return tuple(terms)


def _conjugated_block(spec) -> list[CertificateTerm]:
    ua, ub, uc = _local_unitaries(spec)
    ubc = kron(ub, uc)
    out = []
    for t in bell_block():
        solo, pair = t.factors
        out.append(CertificateTerm.bipartite(t.weight, ua @ solo @ ua.conj().T, ubc @ pair @ ubc.conj().T, Cut.A_BC))
    return out


def _relabel(term: CertificateTerm, cut: Cut) -> CertificateTerm:
    """Move an A|BC term to ``cut`` by the qubit swap A <-> solo (W is permutation invariant)."""
    if cut is Cut.A_BC:
        return term
    if term.kind == BIPARTITE:
        solo, pair = term.factors
        if cut is Cut.C_AB:
            swap = np.eye(4)[[0, 2, 1, 3]]
            pair = swap @ pair @ swap
        return CertificateTerm.bipartite(term.weight, solo, pair, cut)
    a, b, c = term.factors
    factors = (b, a, c) if cut is Cut.B_AC else (c, b, a)
    return CertificateTerm.product(term.weight, *factors)


def w_bisep_certificate(p: float, bipartition: "Cut | str" = Cut.A_BC, tol: float = TOL) -> Certificate:
    """Explicit biseparable decomposition of the noisy W state.

    Seven product terms of weight p/3, twelve Bell-type terms of weight
    sqrt(2) p / 6 (the XXX + YYY block conjugated by each rotation pair), and
    white noise of weight 1 - 7p/3 - 2 sqrt(2) p. The result is verified
    before it is returned.
    """
    p = _check_p(p)
    cut = Cut.parse(bipartition)
    limit = bisep_threshold()
    if p > limit:
        raise ThresholdExceeded(p, limit)
    state = w_mixed(p, tol).rho
    noise = 1 - 7 * p / 3 - 2 * math.sqrt(2) * p
    noise = 0.0 if abs(noise) <= 1e-12 else noise
    terms = [CertificateTerm.noise(noise)]
    if p > 0:
        for axis, signs in W_PRODUCT_SIGNS:
            halves = [(np.eye(2, dtype=complex) + s * pauli(axis)) / 2 for s in signs]
            terms.append(CertificateTerm.product(p / 3, *halves))
        block_weight = 2 * math.sqrt(2) * p / 3
        for spec in W_ROTATIONS:
            terms.extend(t.with_weight(block_weight * t.weight) for t in _conjugated_block(spec))
    terms = [_relabel(t, cut) for t in terms]
    cert = Certificate(tuple(terms), state_digest(state), tol, {"route": "w-noise", "p": p})
    report = verify_certificate(cert, state, tol)
    if not report.passed:
        raise InternalSignSolveFailure("W-noise construction failed verification: " + "; ".join(report.failures))
    return cert


def _ppt_margin(p: float) -> float:
    return min(ppt_min_eigs(w_mixed(p).rho).values())


def ppt_threshold(tol: float = 1e-6) -> float:
    """p where the smallest partial-transpose eigenvalue crosses zero, bisected on [0, 1] to width ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.0, 1.0
    if _ppt_margin(lo) < 0 or _ppt_margin(hi) >= 0:
        raise NoSignChange("partial-transpose margin does not change sign on [0, 1]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _ppt_margin(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SweepRow:
    p: float
    ppt_min: tuple[float, float, float]  # cuts A|BC, B|AC, C|AB
    triad_norm_sum_scaled: float  # non-noise weight of the biseparable construction
    l1_scaled: float  # identity weight of the fully separable construction
    bisep_certified: bool
    full_sep_certified: bool

    COLUMNS = ("p", "ppt_min_A", "ppt_min_B", "ppt_min_C", "triad_norm_sum", "l1", "bisep_certified", "full_sep_certified")

    def as_tuple(self) -> tuple:
        return (self.p, *self.ppt_min, self.triad_norm_sum_scaled, self.l1_scaled, self.bisep_certified, self.full_sep_certified)


def sweep_row(p: float, tol: float = TOL) -> SweepRow:
    state = w_mixed(p, tol)
    d = hs_decompose(state.rho, tol)
    try:
        cert = w_bisep_certificate(p, tol=tol)
        bisep = verify_certificate(cert, state.rho, tol).passed
    except ThresholdExceeded:
        bisep = False
    try:
        cert = fully_separable_certificate(d, target=state.rho, tol=tol)
        full = verify_certificate(cert, state.rho, tol).passed
    except CriterionNotMet:
        full = False
    ppt = ppt_min_eigs(state.rho)
    return SweepRow(
        p=state.p,
        ppt_min=(ppt[Cut.A_BC], ppt[Cut.B_AC], ppt[Cut.C_AB]),
        triad_norm_sum_scaled=state.p * (7 / 3 + 2 * math.sqrt(2)),
        l1_scaled=full_separability_cost(d),
        bisep_certified=bisep,
        full_sep_certified=full,
    )


def sweep(p_min: float, p_max: float, steps: int, tol: float = TOL) -> list[SweepRow]:
    """Evenly spaced rows from ``p_min`` to ``p_max`` inclusive; flags come from built and verified certificates."""
    if not (0 <= p_min < p_max <= 1) or int(steps) < 2:
        raise OutOfRange(f"need 0 <= p_min < p_max <= 1 and steps >= 2, got ({p_min}, {p_max}, {steps})")
    return [sweep_row(float(p), tol) for p in np.linspace(p_min, p_max, int(steps))]

"""Builders for separable and biseparable certificates.

Three routes, all producing a :class:`Certificate` that verifies against the
target state:

* :func:`assemble_mds_certificate` for MDS states: Bell-basis terms for each
  cyclic triad plus white noise, valid when the triad norms sum to at most 1.
* :func:`fully_separable_certificate`: product terms only. The computational
  basis diagonal part is written as a mixture of basis product states, every
  other Pauli term costs its absolute coefficient.
* :func:`bisep_certificate` for arbitrary states: single-axis Pauli groups as
  product terms, remaining one- and two-body terms at their absolute value,
  remaining MDS terms covered by disjoint Latin triads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .certificate import Certificate, CertificateTerm, combine
from .errors import CriterionNotMet, NotMDS
from .hs import IDENTITY, LOCAL_STRINGS, MDS_STRINGS, PAULI_STRINGS, HSDecomposition, hs_reconstruct, is_mds
from .linalg import TOL, Cut, PauliString, pauli
from .triads import Triad, frame_triads, latin_cover, triad_decomposition, triad_partition

# Coefficients at or below this magnitude are treated as absent when choosing terms.
ZERO = 1e-14
# Slack on "cost <= 1" so boundary states (cost exactly 1) are accepted.
SLACK = 1e-12

AXES = (1, 2, 3)


def _half(axis: int, sign: int) -> np.ndarray:
    return (np.eye(2, dtype=complex) + sign * pauli(axis)) / 2


def axis_group(axis: int, include_triple: bool = True) -> tuple[PauliString, ...]:
    """Strings built only from I and one Pauli axis (mutually commuting, jointly diagonal)."""
    out = [s for s in itertools.product((0, axis), repeat=3) if s != IDENTITY]
    if not include_triple:
        out.remove((axis, axis, axis))
    return tuple(out)


def _axis_spectrum(coeffs: Mapping[PauliString, float], strings: Sequence[PauliString]) -> dict:
    """Eigenvalue of ``sum_s R_s P_s`` on each joint product eigenvector, keyed by sign pattern."""
    spec = {}
    for eps in itertools.product((1, -1), repeat=3):
        val = 0.0
        for s in strings:
            sign = 1
            for q in range(3):
                if s[q]:
                    sign *= eps[q]
            val += coeffs[s] * sign
        spec[eps] = val
    return spec


def axis_group_cost(coeffs: Mapping[PauliString, float], strings: Sequence[PauliString]) -> float:
    """Identity weight needed to make a single-axis group a positive mixture of product states."""
    if not strings:
        return 0.0
    return max(0.0, -min(_axis_spectrum(coeffs, strings).values()))


def _axis_group_terms(axis: int, coeffs, strings) -> tuple[float, list[CertificateTerm]]:
    spec = _axis_spectrum(coeffs, strings)
    c = max(0.0, -min(spec.values()))
    if c + max(spec.values()) <= ZERO:
        return 0.0, []
    terms = []
    for eps, e in spec.items():
        w = (c + e) / 8
        if w > 0:
            terms.append(CertificateTerm.product(w, *(_half(axis, sgn) for sgn in eps)))
    total = sum(t.weight for t in terms)
    return total, [t.with_weight(t.weight / total) for t in terms]


def _string_terms(s: PauliString, value: float) -> tuple[float, list[CertificateTerm]]:
    """``(|R|/8)(I + sign(R) P_s)`` as an equal mixture of product states."""
    active = [q for q in range(3) if s[q]]
    target = 1 if value > 0 else -1
    patterns = [eps for eps in itertools.product((1, -1), repeat=len(active)) if np.prod(eps) == target]
    terms = []
    for eps in patterns:
        factors = [np.eye(2, dtype=complex) / 2] * 3
        for q, sgn in zip(active, eps):
            factors[q] = _half(s[q], sgn)
        terms.append(CertificateTerm.product(1 / len(patterns), *factors))
    return abs(value), terms


@dataclass
class Plan:
    """How each Pauli term of a state is paid for, and the total identity weight used."""

    axis_groups: dict[int, tuple[PauliString, ...]] = field(default_factory=dict)
    axis_costs: dict[int, float] = field(default_factory=dict)
    single: tuple[PauliString, ...] = ()
    cover: list[tuple[Triad, tuple[float, float, float]]] = field(default_factory=list)
    cover_cost: float = 0.0
    cost: float = 0.0


def _realise(
    plan: Plan, coeffs: Mapping[PauliString, float], cut: Cut, target: np.ndarray, tol: float, route: str
) -> Certificate:
    blocks = []
    for axis, strings in plan.axis_groups.items():
        w, terms = _axis_group_terms(axis, coeffs, strings)
        if terms:
            blocks.append((w, terms))
    for s in plan.single:
        if abs(coeffs[s]) > ZERO:
            blocks.append(_string_terms(s, coeffs[s]))
    for t, values in plan.cover:
        blocks.append(triad_decomposition(t, values, cut))
    noise = max(0.0, 1.0 - sum(w for w, _ in blocks))
    return combine(blocks, noise, target, tol, {"route": route, "cost": plan.cost})


def _coeff_map(d: HSDecomposition) -> dict[PauliString, float]:
    return {s: d[s] for s in PAULI_STRINGS}


def mds_norm_sum(d: HSDecomposition, triads: Sequence[Triad] | None = None) -> tuple[float, list[float]]:
    triads = triad_partition() if triads is None else triads
    norms = [float(np.linalg.norm(t.values(d))) for t in triads]
    return float(sum(norms)), norms


def assemble_mds_certificate(
    d: HSDecomposition,
    bipartition: "Cut | str" = Cut.A_BC,
    *,
    target: np.ndarray | None = None,
    rotations: Sequence[np.ndarray] | None = None,
    tol: float = TOL,
) -> Certificate:
    """Biseparable certificate for an MDS state from its nine triad blocks.

    ``rotations`` (from :func:`optimize_frame`) swaps the cyclic partition for
    its image in that frame. Raises NotMDS for states with local coefficients
    and CriterionNotMet when the triad norms sum above 1.
    """
    cut = Cut.parse(bipartition)
    if not is_mds(d, tol):
        raise NotMDS("state has nonzero one- or two-body Pauli coefficients")
    triads = triad_partition() if rotations is None else frame_triads(rotations)
    norm_sum, norms = mds_norm_sum(d, triads)
    if norm_sum > 1 + SLACK:
        raise CriterionNotMet(norm_sum)
    plan = Plan(cover=[(t, t.values(d)) for t, n in zip(triads, norms) if n > ZERO], cover_cost=norm_sum, cost=norm_sum)
    target = hs_reconstruct(d) if target is None else target
    route = "mds-triads" if rotations is None else "mds-triads-rotated"
    return _realise(plan, _coeff_map(d), cut, target, tol, route)


def full_separability_plan(d: HSDecomposition) -> Plan:
    coeffs = _coeff_map(d)
    z = axis_group(3)
    rest = tuple(s for s in PAULI_STRINGS if s != IDENTITY and s not in z)
    zc = axis_group_cost(coeffs, z)
    cost = zc + sum(abs(coeffs[s]) for s in rest)
    return Plan(axis_groups={3: z}, axis_costs={3: zc}, single=rest, cost=cost)


def full_separability_cost(d: HSDecomposition) -> float:
    """Identity weight of the fully separable construction; at most 1 means certified."""
    return full_separability_plan(d).cost


def fully_separable_certificate(
    d: HSDecomposition, *, target: np.ndarray | None = None, tol: float = TOL
) -> Certificate:
    plan = full_separability_plan(d)
    if plan.cost > 1 + SLACK:
        raise CriterionNotMet(plan.cost, f"full separability cost {plan.cost:.17g} > 1")
    target = hs_reconstruct(d) if target is None else target
    return _realise(plan, _coeff_map(d), Cut.A_BC, target, tol, "fully-separable")


def bisep_plan(d: HSDecomposition) -> Plan:
    """Cheapest general plan over which of XXX, YYY, ZZZ join their single-axis group."""
    coeffs = _coeff_map(d)
    best = None
    for mask in itertools.product((True, False), repeat=3):
        groups = {a: axis_group(a, inc) for a, inc in zip(AXES, mask)}
        grouped = {s for g in groups.values() for s in g}
        single = tuple(s for s in LOCAL_STRINGS if s not in grouped)
        costs = {a: axis_group_cost(coeffs, g) for a, g in groups.items()}
        mds = {s: coeffs[s] for s in MDS_STRINGS if s not in grouped}
        cover_cost, cover = latin_cover(mds, ZERO)
        cost = sum(costs.values()) + sum(abs(coeffs[s]) for s in single) + cover_cost
        if best is None or cost < best.cost - 1e-15:
            best = Plan(groups, costs, single, cover, cover_cost, cost)
    return best


def bisep_cost(d: HSDecomposition) -> float:
    return bisep_plan(d).cost


def bisep_certificate(
    d: HSDecomposition,
    bipartition: "Cut | str" = Cut.A_BC,
    *,
    target: np.ndarray | None = None,
    tol: float = TOL,
) -> Certificate:
    """Biseparable certificate for any three-qubit state whose general plan costs at most 1."""
    cut = Cut.parse(bipartition)
    plan = bisep_plan(d)
    if plan.cost > 1 + SLACK:
        raise CriterionNotMet(plan.cost, f"biseparability cost {plan.cost:.17g} > 1")
    target = hs_reconstruct(d) if target is None else target
    return _realise(plan, _coeff_map(d), cut, target, tol, "general")

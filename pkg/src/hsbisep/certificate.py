"""Separability certificates and their independent verification.

A certificate is a convex mixture of product terms. ``fully_product`` terms
carry three single-qubit density matrices; ``bipartite`` terms carry one
single-qubit factor (the solo qubit of ``cut``) and one two-qubit factor on the
remaining pair. Verification only uses the stored numbers, never the producer.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import TOL, Cut, density_errors, embed_bipartite, product_operator

BIPARTITE = "bipartite"
FULLY_PRODUCT = "fully_product"
KINDS = (BIPARTITE, FULLY_PRODUCT)

MAXIMALLY_MIXED_QUBIT = np.eye(2, dtype=complex) / 2


def state_digest(rho: np.ndarray) -> str:
    """SHA-256 of the little-endian complex128 bytes of ``rho``."""
    arr = np.ascontiguousarray(np.asarray(rho, dtype="<c16"))
    return hashlib.sha256(arr.tobytes()).hexdigest()


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class CertificateTerm:
    weight: float
    kind: str
    factors: tuple[np.ndarray, ...]
    cut: Cut | None = None

    def __post_init__(self):
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "factors", tuple(_frozen(f) for f in self.factors))
        if self.cut is not None:
            object.__setattr__(self, "cut", Cut.parse(self.cut))

    @classmethod
    def bipartite(cls, weight: float, solo: np.ndarray, pair: np.ndarray, cut: "Cut | str") -> "CertificateTerm":
        return cls(weight, BIPARTITE, (solo, pair), Cut.parse(cut))

    @classmethod
    def product(cls, weight: float, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> "CertificateTerm":
        return cls(weight, FULLY_PRODUCT, (a, b, c))

    @classmethod
    def noise(cls, weight: float) -> "CertificateTerm":
        return cls.product(weight, MAXIMALLY_MIXED_QUBIT, MAXIMALLY_MIXED_QUBIT, MAXIMALLY_MIXED_QUBIT)

    def with_weight(self, weight: float) -> "CertificateTerm":
        return CertificateTerm(weight, self.kind, self.factors, self.cut)

    def shape_errors(self) -> list[str]:
        if self.kind == BIPARTITE:
            want = [(2, 2), (4, 4)]
            if self.cut is None:
                return ["bipartite term without a cut"]
        elif self.kind == FULLY_PRODUCT:
            want = [(2, 2)] * 3
        else:
            return [f"unknown term kind {self.kind!r}"]
        got = [f.shape for f in self.factors]
        if got != want:
            return [f"{self.kind} factors have shapes {got}, expected {want}"]
        return []

    def operator(self) -> np.ndarray:
        """The normalised 8x8 product state of this term (weight not applied)."""
        if self.kind == BIPARTITE:
            return embed_bipartite(self.factors[0], self.factors[1], self.cut)
        return product_operator(*self.factors)


@dataclass(frozen=True, eq=False)
class Certificate:
    terms: tuple[CertificateTerm, ...]
    target_digest: str
    tol: float = TOL
    # Free-form provenance (construction route, resolved signs); serialised verbatim.
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.weight for t in self.terms])

    @property
    def cuts(self) -> set[Cut]:
        return {t.cut for t in self.terms if t.kind == BIPARTITE}

    @property
    def cut(self) -> Cut | None:
        """The common cut of the bipartite terms, or None for a fully separable certificate."""
        cuts = self.cuts
        return next(iter(cuts)) if len(cuts) == 1 else None

    @property
    def fully_separable(self) -> bool:
        return all(t.kind == FULLY_PRODUCT for t in self.terms)

    def count(self, kind: str) -> int:
        return sum(t.kind == kind for t in self.terms)

    def mixture(self) -> np.ndarray:
        out = np.zeros((8, 8), dtype=complex)
        for t in self.terms:
            out += t.weight * t.operator()
        return out

    def noise_weight(self) -> float:
        """Weight of the maximally mixed product term(s)."""
        return float(
            sum(
                t.weight
                for t in self.terms
                if t.kind == FULLY_PRODUCT and all(np.array_equal(f, MAXIMALLY_MIXED_QUBIT) for f in t.factors)
            )
        )


@dataclass
class VerificationReport:
    factors_ok: bool
    weights_ok: bool
    cut_ok: bool
    residual_ok: bool
    residual: float
    weight_sum: float
    tol: float
    digest_match: bool | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.factors_ok and self.weights_ok and self.cut_ok and self.residual_ok

    def __bool__(self) -> bool:
        return self.passed

    def lines(self) -> list[str]:
        mark = {True: "PASS", False: "FAIL"}
        out = [
            f"[{mark[self.factors_ok]}] factors: every factor Hermitian, unit trace, PSD within {self.tol:.1e}",
            f"[{mark[self.weights_ok]}] weights: nonnegative, sum = {self.weight_sum:.17g}",
            f"[{mark[self.cut_ok]}] cut: bipartite terms share one cut",
            f"[{mark[self.residual_ok]}] residual: |mixture - rho|_F = {self.residual:.3e}",
        ]
        if self.digest_match is not None:
            out.append(f"[info] target digest {'matches' if self.digest_match else 'does NOT match'} the state")
        out.extend(f"  - {msg}" for msg in self.failures)
        out.append("verification " + ("passed" if self.passed else "FAILED"))
        return out


def verify_certificate(cert: Certificate, rho: np.ndarray, tol: float | None = None) -> VerificationReport:
    """Check a certificate against a state; failures are reported, never raised."""
    tol = cert.tol if tol is None else float(tol)
    rho = np.asarray(rho, dtype=complex)
    failures: list[str] = []

    factors_ok = True
    for i, term in enumerate(cert.terms):
        errs = term.shape_errors()
        if not errs:
            for j, f in enumerate(term.factors):
                errs.extend(f"factor {j}: {e}" for e in density_errors(f, tol))
        if errs:
            factors_ok = False
            failures.extend(f"term {i}: {e}" for e in errs)

    weights = cert.weights
    weight_sum = float(weights.sum()) if len(weights) else 0.0
    weights_ok = True
    if len(weights) == 0:
        weights_ok = False
        failures.append("certificate has no terms")
    elif np.any(weights < -tol):
        weights_ok = False
        failures.append(f"negative weight {weights.min():.3e}")
    if abs(weight_sum - 1) > tol:
        weights_ok = False
        failures.append(f"weights sum to {weight_sum:.17g}, not 1")

    cut_ok = len(cert.cuts) <= 1
    if not cut_ok:
        failures.append("bipartite terms use different cuts: " + ", ".join(sorted(str(c) for c in cert.cuts)))

    residual = float("inf")
    residual_ok = False
    if rho.shape != (8, 8):
        failures.append(f"target state has shape {rho.shape}, expected (8, 8)")
    elif all(not t.shape_errors() for t in cert.terms):
        residual = float(np.linalg.norm(cert.mixture() - rho))
        residual_ok = residual <= tol
        if not residual_ok:
            failures.append(f"reconstruction residual {residual:.3e} exceeds {tol:.1e}")
    else:
        failures.append("residual not computed: malformed terms")

    digest_match = None
    if cert.target_digest and rho.shape == (8, 8):
        digest_match = cert.target_digest == state_digest(rho)

    return VerificationReport(
        factors_ok=factors_ok,
        weights_ok=weights_ok,
        cut_ok=cut_ok,
        residual_ok=residual_ok,
        residual=residual,
        weight_sum=weight_sum,
        tol=tol,
        digest_match=digest_match,
        failures=failures,
    )


def combine(
    blocks: Sequence[tuple[float, Sequence[CertificateTerm]]],
    noise: float,
    target: np.ndarray,
    tol: float = TOL,
    meta: dict | None = None,
) -> Certificate:
    """Flatten ``(block weight, block terms)`` pairs and a noise weight into one certificate.

    Each block's terms carry their internal convex split as weights.
    """
    terms = [CertificateTerm.noise(noise)]
    for w, block in blocks:
        terms.extend(t.with_weight(w * t.weight) for t in block)
    return Certificate(tuple(terms), state_digest(target), tol, dict(meta or {}))

"""One-call analysis of a three-qubit state: norms, criteria, PPT margins, verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .certificate import Certificate, verify_certificate
from .construct import (
    SLACK,
    assemble_mds_certificate,
    bisep_certificate,
    bisep_cost,
    full_separability_cost,
    fully_separable_certificate,
    mds_norm_sum,
)
from .errors import CriterionNotMet
from .hs import hs_decompose, is_mds, l1_norm
from .linalg import TOL, Cut, ppt_min_eigs, validate_density
from .triads import optimize_frame

FULLY_SEPARABLE = "fully-separable (certified)"
INCONCLUSIVE = "inconclusive"


def biseparable_verdict(cut: Cut) -> str:
    return f"biseparable (certified, cut {cut})"


def ppt_verdict(cut: Cut) -> str:
    return f"not fully separable (PPT violated, cut {cut})"


@dataclass
class BisepReport:
    per_triad_norms: tuple[float, ...]
    norm_sum: float
    criterion_met: bool
    l1_total: float
    full_sep_met: bool
    ppt_min_eigs: dict[Cut, float]
    is_mds: bool
    best_frame_norm_sum: float | None
    full_sep_cost: float
    bisep_cost: float
    bisep_certified: bool
    cut: Cut
    verdicts: list[str] = field(default_factory=list)
    certificate: Certificate | None = field(default=None, repr=False)

    @property
    def verdict(self) -> str:
        return "; ".join(self.verdicts)

    def as_dict(self) -> dict:
        return {
            "per_triad_norms": list(self.per_triad_norms),
            "norm_sum": self.norm_sum,
            "criterion_met": self.criterion_met,
            "l1_total": self.l1_total,
            "full_sep_cost": self.full_sep_cost,
            "full_sep_met": self.full_sep_met,
            "is_mds": self.is_mds,
            "best_frame_norm_sum": self.best_frame_norm_sum,
            "bisep_cost": self.bisep_cost,
            "bisep_certified": self.bisep_certified,
            "cut": str(self.cut),
            "ppt_min_eigs": {str(c): v for c, v in self.ppt_min_eigs.items()},
            "verdicts": list(self.verdicts),
        }


def _verified(cert: Certificate, rho: np.ndarray, tol: float) -> bool:
    return verify_certificate(cert, rho, tol).passed


def analyze(rho: np.ndarray, bipartition: "Cut | str" = Cut.A_BC, tol: float = TOL) -> BisepReport:
    """Evaluate every criterion on ``rho``.

    Separability claims are only made from certificates that were built and
    verified here; a failed sufficient condition yields "inconclusive".
    """
    cut = Cut.parse(bipartition)
    rho = validate_density(rho, tol)
    d = hs_decompose(rho, tol)
    mds = is_mds(d, tol)
    norm_sum, norms = mds_norm_sum(d)
    criterion = mds and norm_sum <= 1 + SLACK
    best_frame = optimize_frame(d, tol).best_norm_sum if mds else None

    full_cost = full_separability_cost(d)
    full_ok = False
    if full_cost <= 1 + SLACK:
        full_ok = _verified(fully_separable_certificate(d, target=rho, tol=tol), rho, tol)

    cert = None
    if criterion:
        cert = assemble_mds_certificate(d, cut, target=rho, tol=tol)
    general_cost = bisep_cost(d)
    if cert is None and general_cost <= 1 + SLACK:
        try:
            cert = bisep_certificate(d, cut, target=rho, tol=tol)
        except CriterionNotMet:
            cert = None
    bisep_ok = cert is not None and _verified(cert, rho, tol)

    ppt = ppt_min_eigs(rho)
    verdicts = []
    if full_ok:
        verdicts.append(FULLY_SEPARABLE)
    elif bisep_ok:
        verdicts.append(biseparable_verdict(cut))
    verdicts.extend(ppt_verdict(c) for c, v in ppt.items() if v < -tol)
    if not verdicts:
        verdicts.append(INCONCLUSIVE)

    return BisepReport(
        per_triad_norms=tuple(norms),
        norm_sum=norm_sum,
        criterion_met=criterion,
        l1_total=l1_norm(d.nonidentity()),
        full_sep_met=full_ok,
        ppt_min_eigs=ppt,
        is_mds=mds,
        best_frame_norm_sum=best_frame,
        full_sep_cost=full_cost,
        bisep_cost=min(general_cost, norm_sum) if mds else general_cost,
        bisep_certified=bisep_ok,
        cut=cut,
        verdicts=verdicts,
        certificate=cert if bisep_ok else None,
    )

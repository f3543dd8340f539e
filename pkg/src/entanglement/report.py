from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from lyapunov.covariance import CovarianceMatrix

from .negativity import (
    BipartitionLabel,
    TripartiteClass,
    all_negativities,
    classify_tripartite,
    residual_tripartite,
)

REPORT_FIELDS: tuple[str, ...] = tuple(label.key for label in BipartitionLabel) + (
    "g_tri_proxy",
    "tripartite_class",
    "stability_margin",
    "stable",
)


@dataclass(frozen=True)
class EntanglementReport:
    """Every negativity of one parameter point; E fields are None when unstable."""

    stable: bool
    stability_margin: float
    e_ac: Optional[float] = None
    e_mc: Optional[float] = None
    e_am: Optional[float] = None
    e_a_mc: Optional[float] = None
    e_m_ac: Optional[float] = None
    e_c_am: Optional[float] = None
    g_tri_proxy: Optional[float] = None
    tripartite_class: Optional[TripartiteClass] = None

    def negativity(self, label: BipartitionLabel | str) -> Optional[float]:
        return getattr(self, BipartitionLabel(label).key)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {name: getattr(self, name) for name in REPORT_FIELDS}
        if self.tripartite_class is not None:
            out["tripartite_class"] = self.tripartite_class.value
        return out


def build_report(V: CovarianceMatrix, stability_margin: float) -> EntanglementReport:
    negativities = all_negativities(V)
    return EntanglementReport(
        stable=True,
        stability_margin=stability_margin,
        g_tri_proxy=residual_tripartite(V, negativities),
        tripartite_class=classify_tripartite(negativities),
        **{label.key: value for label, value in negativities.items()},
    )


def unstable_report(stability_margin: float) -> EntanglementReport:
    return EntanglementReport(stable=False, stability_margin=stability_margin)


def separable_report(stable: bool, stability_margin: float) -> EntanglementReport:
    """Product state of uncoupled modes: every negativity is exactly zero."""
    return EntanglementReport(
        stable=stable,
        stability_margin=stability_margin,
        g_tri_proxy=0.0,
        tripartite_class=TripartiteClass.FULLY_SEPARABLE,
        **{label.key: 0.0 for label in BipartitionLabel},
    )

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .classify import CaseLabel


@dataclass
class VolumeResult:
    """Intersection volume plus provenance.

    ``error`` is a quadrature error bound, a 1-sigma Monte Carlo error, or
    0 for closed forms.  ``fallback`` marks results where the elliptic path
    was requested (``auto``) but quadrature had to step in.
    """

    volume: float
    case: CaseLabel
    method: str
    regions: dict[str, float] = field(default_factory=dict)
    error: float = 0.0
    fallback: bool = False
    warning: str | None = None

    def as_dict(self) -> dict:
        out = asdict(self)
        out["case"] = str(self.case)
        return out

"""Volume of the intersection of a solid right circular cone and a sphere."""

from .classify import CaseLabel, cap_inclusion, classify, slice_roots
from .errors import (ConditioningError, ConeSphereError, DegenerateError,
                     InvalidInputError, WrongCaseError)
from .geometry import (CanonicalGeometry, ReducedScalars, SceneGeometry, normalize,
                       reduce_to_canonical)
from .lens import LensSection, lens_area, lens_ordinates, lens_section
from .oracle import McSpec, QuadratureSpec, integrate_slices, mc_volume, quadrature_volume, slice_area
from .results import VolumeResult
from .volume import (compute_volume, volume, volume_on_axis_inside, volume_on_axis_outside,
                     volume_stretched)

__all__ = [
    "CaseLabel", "CanonicalGeometry", "ConditioningError", "ConeSphereError",
    "DegenerateError", "InvalidInputError", "LensSection", "McSpec", "QuadratureSpec",
    "ReducedScalars", "SceneGeometry", "VolumeResult", "WrongCaseError", "cap_inclusion",
    "classify", "compute_volume", "integrate_slices", "lens_area", "lens_ordinates",
    "lens_section", "mc_volume", "normalize", "quadrature_volume", "reduce_to_canonical",
    "slice_area", "slice_roots", "volume", "volume_on_axis_inside", "volume_on_axis_outside",
    "volume_stretched",
]

"""Lightcone framed curves in Lorentz-Minkowski 3-space and their Bertrand mates."""

from .engine import (
    CurvatureQuintuple,
    FramedCurvePath,
    InitialFrame,
    circle_frame_path,
    classify_point,
    congruent,
    extract_curvature,
    gauge_transform,
    reconstruct,
    reflect,
    to_adapted,
)
from .frames import NullPair, OrthoFrame, null_pair_to_ortho, ortho_to_null_pair, phi_map, tilde_null
from .mates import (
    MateKind,
    MateSpec,
    condition_residual,
    construct_mate,
    mate_curvature_formula,
    solve_lambda,
    special_mates,
    verify_mate,
)
from .minkowski import CausalType, causal_type, normalize_lightlike, pseudo_dot, wedge

__version__ = "0.1.0"

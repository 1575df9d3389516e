"""Lorentzian linear algebra on R^3_1 with metric signature (-,+,+).

Vectors are plain numpy arrays whose last axis has length 3; every function
broadcasts over leading axes.
"""

import enum

import numpy as np

from .errors import LightlikeError

CLASSIFY_TOL = 1e-9
CONSTRAINT_TOL = 1e-6

_METRIC = np.array([-1.0, 1.0, 1.0])


class CausalType(enum.Enum):
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"
    TIMELIKE = "timelike"
    ZERO = "zero"


def vec(x1, x2, x3):
    """Build a vector, rejecting non-finite components."""
    v = np.array([x1, x2, x3], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector component in {v}")
    return v


def pseudo_dot(a, b):
    """Pseudo-scalar product -a1*b1 + a2*b2 + a3*b3."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.sum(_METRIC * a * b, axis=-1)


def wedge(a, b):
    """Pseudo-vector product, characterised by <w, a^b> = det(w, a, b)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.cross(a, b)
    return c * _METRIC


def causal_type(a, tol=CLASSIFY_TOL):
    """Classify a single vector by the sign of <a, a>."""
    a = np.asarray(a, dtype=float)
    if np.linalg.norm(a) <= tol:
        return CausalType.ZERO
    s = float(pseudo_dot(a, a))
    if abs(s) <= tol:
        return CausalType.LIGHTLIKE
    return CausalType.SPACELIKE if s > 0 else CausalType.TIMELIKE


def normalize_lightlike(a, tol=CLASSIFY_TOL):
    """Scale a lightlike vector so its first component is 1 (a point of the lightcone circle)."""
    a = np.asarray(a, dtype=float)
    if causal_type(a, tol) is not CausalType.LIGHTLIKE:
        raise LightlikeError(f"{a} is not a nonzero lightlike vector")
    if abs(a[0]) <= tol:
        raise LightlikeError(f"{a} has vanishing time component")
    return a / a[0]


def boost_rotation(angle, rapidity):
    """SO(1,2) element: boost in the (x1, x2) plane followed by a rotation about the time axis."""
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    boost = np.array([[ch, sh, 0.0], [sh, ch, 0.0], [0.0, 0.0, 1.0]])
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    return rot @ boost

"""Pointwise frame objects: null pairs in Delta_4 and pseudo-orthonormal triples.

Both dataclasses accept single vectors (shape (3,)) or stacks (shape (N, 3)).
The plain constructor performs no validation; ``checked`` validates.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError
from .minkowski import CONSTRAINT_TOL, pseudo_dot, wedge


def _max_abs(x):
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


@dataclass(frozen=True)
class NullPair:
    lplus: np.ndarray
    lminus: np.ndarray

    def violation(self):
        """Largest of |<l+,l+>|, |<l-,l->|, |<l+,l-> + 2| over all nodes."""
        return max(
            _max_abs(pseudo_dot(self.lplus, self.lplus)),
            _max_abs(pseudo_dot(self.lminus, self.lminus)),
            _max_abs(pseudo_dot(self.lplus, self.lminus) + 2.0),
        )

    @classmethod
    def checked(cls, lplus, lminus, tol=CONSTRAINT_TOL):
        p = cls(np.asarray(lplus, dtype=float), np.asarray(lminus, dtype=float))
        if not (np.all(np.isfinite(p.lplus)) and np.all(np.isfinite(p.lminus))):
            raise ConstraintError("null pair has non-finite components")
        v = p.violation()
        if v > tol:
            raise ConstraintError(f"null pair violates Delta_4 constraints by {v:.3e} (tol {tol:g})")
        return p

    def swapped(self):
        return NullPair(self.lminus, self.lplus)


@dataclass(frozen=True)
class OrthoFrame:
    nT: np.ndarray
    nS: np.ndarray
    n: np.ndarray

    def violation(self):
        return max(
            _max_abs(pseudo_dot(self.nT, self.nT) + 1.0),
            _max_abs(pseudo_dot(self.nS, self.nS) - 1.0),
            _max_abs(pseudo_dot(self.n, self.n) - 1.0),
            _max_abs(pseudo_dot(self.nT, self.nS)),
            _max_abs(pseudo_dot(self.nT, self.n)),
            _max_abs(pseudo_dot(self.nS, self.n)),
            _max_abs(wedge(self.nT, self.nS) - self.n),
        )

    @classmethod
    def checked(cls, nT, nS, n, tol=CONSTRAINT_TOL):
        f = cls(np.asarray(nT, dtype=float), np.asarray(nS, dtype=float), np.asarray(n, dtype=float))
        v = f.violation()
        if v > tol:
            raise ConstraintError(f"frame violates pseudo-orthonormality by {v:.3e} (tol {tol:g})")
        return f


def null_pair_to_ortho(p, tol=CONSTRAINT_TOL, check=True):
    """(l+, l-) -> (nT, nS, n) with nT=(l+ + l-)/2, nS=(l+ - l-)/2, n=-(1/2) l+ ^ l-."""
    if check:
        p = NullPair.checked(p.lplus, p.lminus, tol)
    nT = 0.5 * (p.lplus + p.lminus)
    nS = 0.5 * (p.lplus - p.lminus)
    n = -0.5 * wedge(p.lplus, p.lminus)
    f = OrthoFrame(nT, nS, n)
    return OrthoFrame.checked(nT, nS, n, tol) if check else f


def ortho_to_null_pair(f, tol=CONSTRAINT_TOL, check=True):
    """Inverse of null_pair_to_ortho: l+ = nT + nS, l- = nT - nS."""
    if check:
        f = OrthoFrame.checked(f.nT, f.nS, f.n, tol)
        return NullPair.checked(f.nT + f.nS, f.nT - f.nS, tol)
    return NullPair(f.nT + f.nS, f.nT - f.nS)


def tilde_null(f):
    """The second lightlike pair (nT + n, nT - n)."""
    return f.nT + f.n, f.nT - f.n


def phi_map(p):
    """Point map Delta_4 -> Delta_1, (v, w) -> ((v + w)/2, (v - w)/2)."""
    return 0.5 * (p.lplus + p.lminus), 0.5 * (p.lplus - p.lminus)

"""Lightcone framed curves: reconstruction from curvature, curvature extraction,
reflection, gauge changes, circle frames and congruence.

State convention: a path stores gamma, l+, l- and n as (N, 3) arrays on a
uniform grid. The frame equations integrated here are

    l+' =  k1 l+ + 2 k3 n
    l-' = -k1 l- + 2 k2 n
    n'  =  k2 l+ + k3 l-
    gamma' = alpha l+ + beta l-
"""

from dataclasses import dataclass

import numpy as np

from .dsl import FuncField, GridField, ScalarField, as_field, constant, differentiate, integrate
from .errors import ConstraintError, GaugeError, IntegrationError, IntervalError
from .frames import NullPair, OrthoFrame
from .minkowski import CLASSIFY_TOL, CONSTRAINT_TOL, CausalType, pseudo_dot, wedge

DEFAULT_SAMPLES = 2001
DRIFT_HARD_LIMIT = 1e-4
FIELD_NAMES = ("k1", "k2", "k3", "alpha", "beta")


@dataclass(frozen=True)
class CurvatureQuintuple:
    k1: ScalarField
    k2: ScalarField
    k3: ScalarField
    alpha: ScalarField
    beta: ScalarField
    interval: tuple

    def __post_init__(self):
        iv = (float(self.interval[0]), float(self.interval[1]))
        if not iv[1] > iv[0]:
            raise IntervalError(f"invalid interval {iv}")
        object.__setattr__(self, "interval", iv)
        for name in FIELD_NAMES:
            f = getattr(self, name)
            if f.interval is not None and not np.allclose(f.interval, iv, rtol=0, atol=1e-12):
                raise IntervalError(f"field {name} lives on {f.interval}, expected {iv}")

    @classmethod
    def of(cls, k1, k2, k3, alpha, beta, interval, params=None):
        """Build from numbers, expression strings or fields."""
        fields = [as_field(x, params, interval) for x in (k1, k2, k3, alpha, beta)]
        fields = [f if f.interval is not None else f.with_interval(interval) for f in fields]
        return cls(*fields, interval=interval)

    def fields(self):
        return tuple(getattr(self, n) for n in FIELD_NAMES)

    @property
    def kT(self):
        return self.k2 + self.k3

    @property
    def kS(self):
        return self.k2 - self.k3

    @property
    def a(self):
        return self.alpha + self.beta

    @property
    def b(self):
        return self.alpha - self.beta

    def grid(self, N=DEFAULT_SAMPLES):
        return np.linspace(self.interval[0], self.interval[1], N)

    def sample(self, ts):
        """(5, len(ts)) array of k1, k2, k3, alpha, beta."""
        ts = np.asarray(ts, dtype=float)
        return np.stack([f.sample(ts) for f in self.fields()])


@dataclass(frozen=True)
class InitialFrame:
    gamma0: np.ndarray
    pair0: NullPair

    @classmethod
    def checked(cls, gamma0, lplus, lminus, tol=CONSTRAINT_TOL):
        g = np.asarray(gamma0, dtype=float)
        if g.shape != (3,) or not np.all(np.isfinite(g)):
            raise ConstraintError("gamma0 must be a finite 3-vector")
        return cls(g, NullPair.checked(lplus, lminus, tol))

    @classmethod
    def canonical(cls):
        return cls(np.zeros(3), NullPair(np.array([1.0, 1.0, 0.0]), np.array([1.0, -1.0, 0.0])))


def grid_derivative(values, h):
    """Fourth-order finite-difference derivative along axis 0 of uniform samples."""
    f = np.asarray(values, dtype=float)
    n = f.shape[0]
    if n < 5:
        raise IntervalError("need at least 5 samples to differentiate")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d


@dataclass(frozen=True)
class FramedCurvePath:
    t: np.ndarray
    gamma: np.ndarray
    lplus: np.ndarray
    lminus: np.ndarray
    n: np.ndarray

    @property
    def N(self):
        return self.t.size

    @property
    def interval(self):
        return (float(self.t[0]), float(self.t[-1]))

    @property
    def h(self):
        return (self.t[-1] - self.t[0]) / (self.N - 1)

    def pair(self):
        return NullPair(self.lplus, self.lminus)

    def ortho(self):
        return OrthoFrame(0.5 * (self.lplus + self.lminus), 0.5 * (self.lplus - self.lminus), self.n)

    def derivative(self, values):
        return grid_derivative(values, self.h)

    def drift(self):
        """Max Delta_4 constraint violation over all nodes."""
        return self.pair().violation()

    def wedge_drift(self):
        """Max deviation of the carried n from -(1/2) l+ ^ l-."""
        return float(np.max(np.abs(self.n + 0.5 * wedge(self.lplus, self.lminus))))

    def tangency_residual(self):
        """Max |<gamma', n>|, the n-component of the velocity."""
        return float(np.max(np.abs(pseudo_dot(self.derivative(self.gamma), self.n))))

    def validate(self, tol=CONSTRAINT_TOL, tangency_tol=1e-4):
        d = self.drift()
        if d > tol:
            raise ConstraintError(f"path violates Delta_4 constraints by {d:.3e}")
        r = self.tangency_residual()
        if r > tangency_tol:
            raise ConstraintError(f"path velocity has n-component {r:.3e}")
        return self

    def transformed(self, A, a=None):
        """Image under x -> A x + a (A acts on all frame vectors, a only on gamma)."""
        A = np.asarray(A, dtype=float)
        a = np.zeros(3) if a is None else np.asarray(a, dtype=float)
        return FramedCurvePath(
            self.t, self.gamma @ A.T + a, self.lplus @ A.T, self.lminus @ A.T, self.n @ A.T
        )

    def swapped(self):
        """Same base curve with l+ and l- exchanged (n flips sign)."""
        return FramedCurvePath(self.t, self.gamma, self.lminus, self.lplus, -self.n)


def _renormalize(lp, lm):
    nT = 0.5 * (lp + lm)
    nS = 0.5 * (lp - lm)
    nT = nT / np.sqrt(-pseudo_dot(nT, nT))
    nS = nS + pseudo_dot(nS, nT) * nT
    nS = nS / np.sqrt(pseudo_dot(nS, nS))
    return nT + nS, nT - nS, wedge(nT, nS)


def reconstruct(q, init=None, N=DEFAULT_SAMPLES, renormalize=False, hard_limit=DRIFT_HARD_LIMIT):
    """Integrate the frame equations with classical RK4 on a uniform N-node grid.

    The 12-dimensional state (gamma, l+, l-, n) evolves by the linear system
    Y' = K(t) Y with rows of Y the four vectors. Coefficient fields are
    sampled at nodes and midpoints once up front.
    """
    if N < 5:
        raise IntervalError("reconstruction needs N >= 5 samples")
    init = init or InitialFrame.canonical()
    t0, t1 = q.interval
    ts = np.linspace(t0, t1, N)
    fine = np.linspace(t0, t1, 2 * N - 1)
    k1, k2, k3, al, be = q.sample(fine)
    zero = np.zeros_like(k1)
    K = np.array(
        [
            [zero, al, be, zero],
            [zero, k1, zero, 2 * k3],
            [zero, zero, -k1, 2 * k2],
            [zero, k2, k3, zero],
        ]
    ).transpose(2, 0, 1)
    h = (t1 - t0) / (N - 1)
    lp0, lm0 = init.pair0.lplus, init.pair0.lminus
    Y = np.array([init.gamma0, lp0, lm0, -0.5 * wedge(lp0, lm0)], dtype=float)
    out = np.empty((N, 4, 3))
    out[0] = Y
    for i in range(N - 1):
        Ka, Km, Kb = K[2 * i], K[2 * i + 1], K[2 * i + 2]
        s1 = Ka @ Y
        s2 = Km @ (Y + 0.5 * h * s1)
        s3 = Km @ (Y + 0.5 * h * s2)
        s4 = Kb @ (Y + h * s3)
        Y = Y + (h / 6.0) * (s1 + 2 * s2 + 2 * s3 + s4)
        if renormalize:
            Y[1], Y[2], Y[3] = _renormalize(Y[1], Y[2])
        out[i + 1] = Y
    if not np.all(np.isfinite(out)):
        raise IntegrationError("integration produced non-finite values; try a larger N")
    path = FramedCurvePath(ts, out[:, 0], out[:, 1], out[:, 2], out[:, 3])
    drift = path.drift()
    if drift > hard_limit:
        raise IntegrationError(f"constraint drift {drift:.3e} exceeds {hard_limit:g}; try a larger N")
    return path


def extract_curvature(path, tol=CONSTRAINT_TOL):
    """Recover (k1, k2, k3, alpha, beta) on the path grid from finite-difference derivatives."""
    d = path.drift()
    if d > tol:
        raise ConstraintError(f"path violates Delta_4 constraints by {d:.3e}")
    dlp = path.derivative(path.lplus)
    dlm = path.derivative(path.lminus)
    dg = path.derivative(path.gamma)
    vals = (
        -0.5 * pseudo_dot(dlp, path.lminus),
        0.5 * pseudo_dot(dlm, path.n),
        0.5 * pseudo_dot(dlp, path.n),
        -0.5 * pseudo_dot(dg, path.lminus),
        -0.5 * pseudo_dot(dg, path.lplus),
    )
    t0, t1 = path.interval
    return CurvatureQuintuple(*(GridField(t0, t1, v) for v in vals), interval=(t0, t1))


def reflect(q):
    """Curvature of (gamma, l-, l+): (-k1, -k3, -k2, beta, alpha)."""
    return CurvatureQuintuple(-q.k1, -q.k3, -q.k2, q.beta, q.alpha, interval=q.interval)


def _check_nonvanishing(c, interval, tol, N=DEFAULT_SAMPLES):
    ts = np.linspace(interval[0], interval[1], N)
    vals = c.sample(ts)
    i = int(np.argmin(np.abs(vals)))
    if abs(vals[i]) < tol:
        raise GaugeError(f"gauge function vanishes near t={ts[i]:.6g} (|c|={abs(vals[i]):.3e})")


def gauge_transform(q, c, tol=CLASSIFY_TOL):
    """Curvature after l+ -> l+/c, l- -> c l-."""
    c = as_field(c, interval=q.interval)
    _check_nonvanishing(c, q.interval, tol)

    def k1(t):
        cv = c._eval(t)
        return (-differentiate(c, t) + cv * q.k1._eval(t)) / cv

    iv = q.interval
    return CurvatureQuintuple(
        FuncField(k1, iv, "gauge k1"),
        c * q.k2,
        q.k3 / c,
        c * q.alpha,
        q.beta / c,
        interval=iv,
    )


def adapted_gauge(q):
    """c(t) = exp(integral of k1 from t0 to t)."""
    t0 = q.interval[0]
    return FuncField(lambda t: np.exp(integrate(q.k1, t0, t)), q.interval, "adapted gauge")


def to_adapted(q):
    """Gauge to an adapted frame (k1 = 0). Returns the new curvature and the gauge used."""
    c = adapted_gauge(q)
    return gauge_transform(q, c), c


def gauge_initial_frame(init, c, t0):
    cv = float(c(t0))
    return InitialFrame(init.gamma0, NullPair(init.pair0.lplus / cv, cv * init.pair0.lminus))


def circle_frame_path(theta, alpha, beta, gamma0=None, N=DEFAULT_SAMPLES, interval=None):
    """Path with l+- = (1, +-cos theta, +-sin theta) and gamma integrated from alpha l+ + beta l-."""
    theta, alpha, beta = (as_field(f, interval=interval) for f in (theta, alpha, beta))
    iv = interval or theta.interval or alpha.interval or beta.interval
    if iv is None:
        raise IntervalError("circle frame needs an interval")
    if N < 5:
        raise IntervalError("need N >= 5")
    ts = np.linspace(iv[0], iv[1], N)
    fine = np.linspace(iv[0], iv[1], 2 * N - 1)

    def frame(th):
        c, s = np.cos(th), np.sin(th)
        one = np.ones_like(th)
        lp = np.stack([one, c, s], axis=-1)
        lm = np.stack([one, -c, -s], axis=-1)
        n = np.stack([np.zeros_like(th), -s, c], axis=-1)
        return lp, lm, n

    th = theta.sample(fine)
    lp, lm, _ = frame(th)
    v = alpha.sample(fine)[:, None] * lp + beta.sample(fine)[:, None] * lm
    h = (iv[1] - iv[0]) / (N - 1)
    panels = h / 6.0 * (v[0:-1:2] + 4 * v[1::2] + v[2::2])
    g0 = np.zeros(3) if gamma0 is None else np.asarray(gamma0, dtype=float)
    gamma = g0 + np.concatenate([np.zeros((1, 3)), np.cumsum(panels, axis=0)])
    lp_n, lm_n, n_n = frame(th[::2])
    return FramedCurvePath(ts, gamma, lp_n, lm_n, n_n)


def circle_frame_curvature(theta, alpha, beta, interval):
    """(0, -theta'/2, theta'/2, alpha, beta)."""
    theta = as_field(theta, interval=interval)
    half = FuncField(lambda t: 0.5 * differentiate(theta, t), interval, "theta'/2")
    return CurvatureQuintuple(constant(0.0, interval), -half, half, as_field(alpha, interval=interval),
                              as_field(beta, interval=interval), interval=interval)


def sup_distance(q1, q2, N=DEFAULT_SAMPLES, ts=None):
    """Per-field sup-norm differences on a shared grid."""
    if not np.allclose(q1.interval, q2.interval, rtol=0, atol=1e-12):
        raise IntervalError(f"intervals differ: {q1.interval} vs {q2.interval}")
    ts = q1.grid(N) if ts is None else ts
    diff = np.abs(q1.sample(ts) - q2.sample(ts))
    return dict(zip(FIELD_NAMES, (float(x) for x in diff.max(axis=1))))


def congruent(q1, q2, tol=CONSTRAINT_TOL, N=DEFAULT_SAMPLES):
    """True iff all five curvature fields agree within tol in sup-norm."""
    return max(sup_distance(q1, q2, N).values()) <= tol


def classify_values(alpha, beta, tol=CLASSIFY_TOL):
    """Causal type of gamma' = alpha l+ + beta l- from the sign of alpha*beta."""
    if abs(alpha) <= tol and abs(beta) <= tol:
        return CausalType.ZERO, True
    ab = alpha * beta
    if abs(ab) <= tol:
        return CausalType.LIGHTLIKE, False
    return (CausalType.SPACELIKE if ab < 0 else CausalType.TIMELIKE), False


def classify_point(q, t, tol=CLASSIFY_TOL):
    """(CausalType, singular) of the base curve at t; singular points report ZERO."""
    t0, t1 = q.interval
    if not (t0 - 1e-12 <= t <= t1 + 1e-12):
        raise IntervalError(f"t={t} outside {q.interval}")
    return classify_values(float(q.alpha(t)), float(q.beta(t)), tol)


def classify_grid(q, ts, tol=CLASSIFY_TOL):
    """Per-node causal labels and singular flags.

    A node is singular when both alpha and beta are within tol, or when
    max(|alpha|, |beta|) has a local minimum there that is small compared with
    one grid step times the local slope (a zero that falls between nodes).
    """
    ts = np.asarray(ts, dtype=float)
    al = q.alpha.sample(ts)
    be = q.beta.sample(ts)
    m = np.maximum(np.abs(al), np.abs(be))
    h = ts[1] - ts[0]
    slope = np.maximum(np.abs(grid_derivative(al, h)), np.abs(grid_derivative(be, h)))
    local_min = np.zeros(ts.size, dtype=bool)
    local_min[1:-1] = (m[1:-1] <= m[:-2]) & (m[1:-1] <= m[2:])
    singular = (m <= tol) | (local_min & (m <= 0.5 * h * slope))
    labels = []
    for i in range(ts.size):
        if singular[i]:
            labels.append(CausalType.ZERO)
        else:
            labels.append(classify_values(al[i], be[i], tol)[0])
    return labels, singular


def singular_times(q, ts, tol=CLASSIFY_TOL):
    """Parameter values of singular points, one per cluster of adjacent singular nodes."""
    ts = np.asarray(ts, dtype=float)
    _, sing = classify_grid(q, ts, tol)
    al, be = q.alpha.sample(ts), q.beta.sample(ts)
    m = np.maximum(np.abs(al), np.abs(be))
    out = []
    i = 0
    while i < ts.size:
        if sing[i]:
            j = i
            while j + 1 < ts.size and sing[j + 1]:
                j += 1
            k = i + int(np.argmin(m[i : j + 1]))
            out.append(float(ts[k]))
            i = j + 1
        else:
            i += 1
    return out


def frame_matrix(path, i=0):
    """3x3 matrix with columns nT, nS, n at node i."""
    f = path.ortho()
    return np.column_stack([f.nT[i], f.nS[i], f.n[i]])


def congruence_motion(source, target, i=0):
    """(A, a) with A in SO(1,2) mapping source's frame at node i to target's, and a the translation."""
    A = frame_matrix(target, i) @ np.linalg.inv(frame_matrix(source, i))
    a = target.gamma[i] - A @ source.gamma[i]
    return A, a


def aligned_distance(source, target, i=0):
    """Sup-norm distance of gamma after moving source onto target's initial frame."""
    A, a = congruence_motion(source, target, i)
    moved = source.transformed(A, a)
    return float(np.max(np.abs(moved.gamma - target.gamma)))


def frame_residuals(path, q):
    """Sup-norm residuals of the three frame equations and the velocity equation."""
    k1, k2, k3, al, be = (x[:, None] for x in q.sample(path.t))
    d = path.derivative
    return {
        "lplus": float(np.max(np.abs(d(path.lplus) - (k1 * path.lplus + 2 * k3 * path.n)))),
        "lminus": float(np.max(np.abs(d(path.lminus) - (-k1 * path.lminus + 2 * k2 * path.n)))),
        "n": float(np.max(np.abs(d(path.n) - (k2 * path.lplus + k3 * path.lminus)))),
        "gamma": float(np.max(np.abs(d(path.gamma) - (al * path.lplus + be * path.lminus)))),
    }


def dual_frame_residuals(path, q):
    """Residuals of nT' = k1 nS + kT n, nS' = k1 nT - kS n, n' = kT nT + kS nS."""
    k1, k2, k3, _, _ = (x[:, None] for x in q.sample(path.t))
    kT, kS = k2 + k3, k2 - k3
    f = path.ortho()
    d = path.derivative
    return {
        "nT": float(np.max(np.abs(d(f.nT) - (k1 * f.nS + kT * f.n)))),
        "nS": float(np.max(np.abs(d(f.nS) - (k1 * f.nT - kS * f.n)))),
        "n": float(np.max(np.abs(d(f.n) - (kT * f.nT + kS * f.nS)))),
    }


def metric_identity_residual(path, q):
    """Sup over nodes of |<gamma', gamma'> + 4 alpha beta|."""
    dg = path.derivative(path.gamma)
    al, be = q.alpha.sample(path.t), q.beta.sample(path.t)
    return float(np.max(np.abs(pseudo_dot(dg, dg) + 4 * al * be)))

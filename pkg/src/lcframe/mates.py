"""Bertrand mates of lightcone framed curves.

A (v, w)-mate of (gamma, l+, l-) is a framed curve gamma_bar = gamma + lam v
whose frame vector w_bar equals v. For each of the thirteen kinds this module
provides the existence condition, a solver for lam, the closed-form mate frame
and the mate's curvature.

Notation used throughout: kT = k2 + k3, kS = k2 - k3, a = alpha + beta,
b = alpha - beta, nT = (l+ + l-)/2, nS = (l+ - l-)/2, and the second null pair
lt+ = nT + n, lt- = nT - n.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .dsl import ExprField, FuncField, antiderivative, as_field, constant, cumulative_integral, differentiate
from .engine import (
    DEFAULT_SAMPLES,
    FIELD_NAMES,
    CurvatureQuintuple,
    FramedCurvePath,
    extract_curvature,
    sup_distance,
)
from .errors import ConditionError, MateConstructionError, MateSpecError, UnsolvableError
from .minkowski import pseudo_dot, wedge

LAMBDA_ZERO_TOL = 1e-8
COEF_TOL = 1e-8
PRE_CONDITION_TOL = 1e-6
SOLVE_TOL = 1e-9
DRIFT_TOL = 1e-6
TANGENCY_TOL = 1e-4
FORMULA_TOL = 1e-4
DIRECTION_TOL = 1e-6


class MateKind(enum.Enum):
    LpLp = "LpLp"
    LpLm = "LpLm"
    LmLp = "LmLp"
    LmLm = "LmLm"
    TpLp = "TpLp"
    TpLm = "TpLm"
    TmLp = "TmLp"
    TmLm = "TmLm"
    NT = "NT"
    NN = "NN"
    NSNS = "NSNS"
    NNS = "NNS"
    NSN = "NSN"

    @classmethod
    def parse(cls, name):
        try:
            return cls(name)
        except ValueError:
            raise MateSpecError(f"unknown mate kind {name!r}; expected one of {[k.value for k in cls]}") from None


LIGHTLIKE_KINDS = {MateKind.LpLp, MateKind.LpLm, MateKind.LmLp, MateKind.LmLm,
                   MateKind.TpLp, MateKind.TpLm, MateKind.TmLp, MateKind.TmLm}
ANGLE_KINDS = {MateKind.NT, MateKind.NSNS, MateKind.NNS}

# *Lm kinds are the l+/l- swap of the matching *Lp kind
LP_PARTNER = {
    MateKind.LpLm: MateKind.LpLp,
    MateKind.LmLm: MateKind.LmLp,
    MateKind.TpLm: MateKind.TpLp,
    MateKind.TmLm: MateKind.TmLp,
}

# (source direction, mate frame vector) per kind
DIRECTIONS = {
    MateKind.LpLp: ("lplus", "lplus"),
    MateKind.LpLm: ("lplus", "lminus"),
    MateKind.LmLp: ("lminus", "lplus"),
    MateKind.LmLm: ("lminus", "lminus"),
    MateKind.TpLp: ("ltplus", "lplus"),
    MateKind.TpLm: ("ltplus", "lminus"),
    MateKind.TmLp: ("ltminus", "lplus"),
    MateKind.TmLm: ("ltminus", "lminus"),
    MateKind.NT: ("nT", "nT"),
    MateKind.NN: ("n", "n"),
    MateKind.NSNS: ("nS", "nS"),
    MateKind.NNS: ("n", "nS"),
    MateKind.NSN: ("nS", "n"),
}


@dataclass(frozen=True)
class MateSpec:
    """Mate kind plus its free data.

    ``aux`` is k for the eight lightlike kinds and the angle theta for NT,
    NSNS and NNS; NN and NSN do not use it. ``sign`` selects the branch of the
    hyperbolic frame rotation for NSNS and NNS.
    """

    kind: MateKind
    lam: object
    aux: object = None
    sign: int = 1

    def __post_init__(self):
        kind = self.kind if isinstance(self.kind, MateKind) else MateKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "lam", as_field(self.lam))
        if kind in LIGHTLIKE_KINDS or kind in ANGLE_KINDS:
            if self.aux is None:
                raise MateSpecError(f"{kind.value} needs aux ({'k' if kind in LIGHTLIKE_KINDS else 'theta'})")
            object.__setattr__(self, "aux", as_field(self.aux))
        if self.sign not in (1, -1):
            raise MateSpecError("sign must be +1 or -1")
        if kind is MateKind.NN and isinstance(self.lam, ExprField) and not self.lam.is_constant():
            raise MateSpecError(f"NN mates need a constant lambda, got {self.lam.text!r}")

    @classmethod
    def nn(cls, lam):
        """Parallel-curve mate along n at constant distance lam."""
        return cls(MateKind.NN, constant(float(lam)))

    @classmethod
    def nsn(cls, q, base=None, const=0.0):
        """Pseudo-circular involute: lam = const - integral of b from base."""
        return cls(MateKind.NSN, solve_lambda(q, MateKind.NSN, base=base, const=const))

    def validate(self, ts):
        lam = self.lam.sample(ts)
        if float(np.max(np.abs(lam))) <= LAMBDA_ZERO_TOL:
            raise MateSpecError("lambda vanishes identically on the grid")
        if self.kind is MateKind.NN and float(np.ptp(lam)) > 1e-12 * max(1.0, float(np.max(np.abs(lam)))):
            raise MateSpecError("NN mates need a constant lambda")
        return self


def _with_interval(f, interval):
    return f if f.interval is not None else f.with_interval(interval)


@dataclass(frozen=True)
class ConditionResidual:
    t: np.ndarray
    values: np.ndarray

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    @property
    def argmax(self):
        return int(np.argmax(np.abs(self.values)))


def _samples(q, ts):
    k1, k2, k3, al, be = q.sample(ts)
    return dict(k1=k1, k2=k2, k3=k3, alpha=al, beta=be, kT=k2 + k3, kS=k2 - k3, a=al + be, b=al - be)


def _condition_parts(kind, s, aux):
    """(rest, coef) with condition rest + lam * coef = 0, from sampled fields."""
    base = LP_PARTNER.get(kind, kind)
    if base is MateKind.LpLp:
        return aux * s["beta"], -s["k3"]
    if base is MateKind.LmLp:
        return aux * s["alpha"], -s["k2"]
    if base is MateKind.TpLp:
        return aux * s["a"] + s["b"], s["k1"] + s["kS"]
    if base is MateKind.TmLp:
        return aux * s["a"] - s["b"], -(s["k1"] - s["kS"])
    if kind is MateKind.NT:
        c, sn = np.cos(aux), np.sin(aux)
        return -s["b"] * sn, s["kT"] * c - s["k1"] * sn
    if kind is MateKind.NSNS:
        ch, sh = np.cosh(aux), np.sinh(aux)
        return s["a"] * sh, s["kS"] * ch + s["k1"] * sh
    if kind is MateKind.NNS:
        ch, sh = np.cosh(aux), np.sinh(aux)
        return s["a"] * sh - s["b"] * ch, s["kT"] * sh - s["kS"] * ch
    raise ValueError(kind)


def condition_residual(q, spec, ts=None, N=DEFAULT_SAMPLES):
    """Pointwise residual of the kind's existence condition on a grid.

    NN: deviation of lam from its initial value. NSN: lam(t) - lam(t0) plus the
    integral of b from t0, which vanishes exactly when lam' = -b.
    """
    ts = q.grid(N) if ts is None else np.asarray(ts, dtype=float)
    lam = spec.lam.sample(ts)
    if spec.kind is MateKind.NN:
        if isinstance(spec.lam, ExprField) and not spec.lam.is_constant():
            raise MateSpecError("NN mates need a constant lambda")
        return ConditionResidual(ts, lam - lam[0])
    if spec.kind is MateKind.NSN:
        b = _with_interval(q.b, q.interval)
        return ConditionResidual(ts, lam - lam[0] + cumulative_integral(b, ts))
    rest, coef = _condition_parts(spec.kind, _samples(q, ts), spec.aux.sample(ts))
    return ConditionResidual(ts, rest + lam * coef)


def solve_lambda(q, kind, aux=None, base=None, const=0.0, N=DEFAULT_SAMPLES):
    """Solve the existence condition for lam.

    Returns a field evaluating rest/coef pointwise. NN gives the constant 1 and
    NSN gives const minus the integral of b from ``base`` (default: left end).
    Raises UnsolvableError naming the first grid node where the coefficient of
    lam falls below 1e-8 in magnitude.
    """
    kind = kind if isinstance(kind, MateKind) else MateKind.parse(kind)
    iv = q.interval
    if kind is MateKind.NN:
        return constant(1.0, iv)
    if kind is MateKind.NSN:
        F = antiderivative(_with_interval(q.b, iv), iv, base=base)
        return const - F
    if aux is None:
        raise MateSpecError(f"{kind.value} needs aux to solve for lambda")
    aux = as_field(aux, interval=iv)
    ts = q.grid(N)
    _, coef = _condition_parts(kind, _samples(q, ts), aux.sample(ts))
    bad = np.nonzero(np.abs(coef) < COEF_TOL)[0]
    if bad.size:
        raise UnsolvableError(bad[0], ts[bad[0]], "coefficient of lambda")

    def lam(t):
        t = np.asarray(t, dtype=float)
        rest, c = _condition_parts(kind, _samples(q, t), aux._eval(t))
        return -rest / c

    return FuncField(lam, iv, f"solved lambda ({kind.value})")


# ---------------------------------------------------------------- construction


def _frame_vectors(path):
    lp, lm, n = path.lplus, path.lminus, path.n
    nT = 0.5 * (lp + lm)
    nS = 0.5 * (lp - lm)
    return dict(lplus=lp, lminus=lm, n=n, nT=nT, nS=nS, ltplus=nT + n, ltminus=nT - n)


def _mate_pair(kind, v, aux, sign):
    """(l+_bar, l-_bar) for a kind from source frame vectors v and sampled aux (k or theta)."""
    if kind in LP_PARTNER:
        lp, lm = _mate_pair(LP_PARTNER[kind], v, aux, sign)
        return lm, lp
    k = aux[:, None] if aux is not None else None
    nT, nS, n = v["nT"], v["nS"], v["n"]
    if kind is MateKind.LpLp:
        return v["lplus"], k**2 * v["lplus"] + v["lminus"] + 2 * k * n
    if kind is MateKind.LmLp:
        return v["lminus"], v["lplus"] + k**2 * v["lminus"] + 2 * k * n
    if kind is MateKind.TpLp:
        return v["ltplus"], (k**2 + 1) * nT - 2 * k * nS + (k**2 - 1) * n
    if kind is MateKind.TmLp:
        return v["ltminus"], (k**2 + 1) * nT + 2 * k * nS + (1 - k**2) * n
    if kind is MateKind.NT:
        c, s = np.cos(k), np.sin(k)
        bT, bS = nT, s * n + c * nS
    elif kind is MateKind.NSNS:
        ch, sh = np.cosh(k), np.sinh(k)
        bT, bS = sign * (sh * n + ch * nT), nS
    elif kind is MateKind.NNS:
        ch, sh = np.cosh(k), np.sinh(k)
        bT, bS = -sign * (ch * nT + sh * nS), n
    elif kind is MateKind.NN:
        return v["lplus"], v["lminus"]
    elif kind is MateKind.NSN:
        bT, bS = nT, n
    else:
        raise ValueError(kind)
    return bT + bS, bT - bS


def _designated(path, name):
    v = _frame_vectors(path)
    return v[name]


def construct_mate(path, q, spec, check=True):
    """Build the mate path gamma + lam v with its closed-form frame.

    The mate's n is recomputed as -(1/2) l+_bar ^ l-_bar. With ``check`` the
    existence condition is verified first (ConditionError) and the result must
    satisfy the Delta_4 and tangency invariants (MateConstructionError).
    """
    ts = path.t
    spec.validate(ts)
    if check:
        res = condition_residual(q, spec, ts)
        if res.max_abs > PRE_CONDITION_TOL:
            i = res.argmax
            raise ConditionError(res.max_abs, i, ts[i])
    v = _frame_vectors(path)
    lam = spec.lam.sample(ts)
    aux = spec.aux.sample(ts) if spec.aux is not None else None
    lpb, lmb = _mate_pair(spec.kind, v, aux, spec.sign)
    direction = v[DIRECTIONS[spec.kind][0]]
    gamma = path.gamma + lam[:, None] * direction
    nb = -0.5 * wedge(lpb, lmb)
    mate = FramedCurvePath(ts, gamma, lpb, lmb, nb)
    if check:
        d = mate.drift()
        if d > DRIFT_TOL:
            raise MateConstructionError(f"{spec.kind.value} mate violates Delta_4 by {d:.3e}")
        r = mate.tangency_residual()
        if r > TANGENCY_TOL:
            raise MateConstructionError(f"{spec.kind.value} mate velocity has n-component {r:.3e}")
    return mate


# ---------------------------------------------------------------- mate curvature


def _dual_to_quintuple(k1, kT, kS, a, b):
    return k1, 0.5 * (kT + kS), 0.5 * (kT - kS), 0.5 * (a + b), 0.5 * (a - b)


def _formula(kind, s, lam, dlam, x, dx, sign):
    """Mate curvature (k1, k2, k3, alpha, beta) as arrays.

    x is k (lightlike kinds) or theta (angle kinds), dx its derivative.
    """
    k1, k2, k3, al, be = s["k1"], s["k2"], s["k3"], s["alpha"], s["beta"]
    kT, kS, a, b = s["kT"], s["kS"], s["a"], s["b"]
    if kind in LP_PARTNER:
        r = _formula(LP_PARTNER[kind], s, lam, dlam, x, dx, sign)
        return -r[0], -r[2], -r[1], r[4], r[3]
    if kind is MateKind.LpLp:
        return (k1 - 2 * k3 * x, dx + k1 * x + k2 - k3 * x**2, k3,
                al + dlam + lam * k1 - be * x**2, be)
    if kind is MateKind.LmLp:
        return (-k1 - 2 * x * k2, -dx + x * k1 + x**2 * k2 - k3, -k2,
                be + dlam - lam * k1 - x**2 * al, al)
    if kind is MateKind.TpLp:
        return _dual_to_quintuple(
            x * k1 + kT + x * kS,
            (0.5 * x**2 - 1) * k1 + x * kT + 0.5 * x**2 * kS + dx,
            0.5 * x**2 * k1 + x * kT + (0.5 * x**2 + 1) * kS + dx,
            dlam + lam * kT - 0.5 * x**2 * a + a,
            dlam + lam * kT - 0.5 * x**2 * a,
        )
    if kind is MateKind.TmLp:
        return _dual_to_quintuple(
            -x * k1 - kT + x * kS,
            -(0.5 * x**2 - 1) * k1 - x * kT + 0.5 * x**2 * kS + dx,
            -0.5 * x**2 * k1 - x * kT + (0.5 * x**2 + 1) * kS + dx,
            dlam - lam * kT - 0.5 * x**2 * a + a,
            dlam - lam * kT - 0.5 * x**2 * a,
        )
    if kind is MateKind.NT:
        c, sn = np.cos(x), np.sin(x)
        return _dual_to_quintuple(
            k1 * c + kT * sn,
            -k1 * sn + kT * c,
            kS - dx,
            a + dlam,
            lam * kT * sn + (b + lam * k1) * c,
        )
    if kind is MateKind.NSNS:
        ch, sh = np.cosh(x), np.sinh(x)
        return _dual_to_quintuple(
            sign * (k1 * ch + kS * sh),
            dx + kT,
            sign * (k1 * sh + kS * ch),
            sign * (lam * kS * sh + (a + lam * k1) * ch),
            b + dlam,
        )
    if kind is MateKind.NNS:
        ch, sh = np.cosh(x), np.sinh(x)
        return _dual_to_quintuple(
            -sign * (kT * ch - kS * sh),
            -(dx + k1),
            sign * (kT * sh - kS * ch),
            -sign * ((a + lam * kT) * ch - (b + lam * kS) * sh),
            dlam,
        )
    if kind is MateKind.NN:
        return k1, k2, k3, al + lam * k2, be + lam * k3
    if kind is MateKind.NSN:
        return _dual_to_quintuple(kT, -k1, kS, a + lam * k1, -lam * kS)
    raise ValueError(kind)


def mate_curvature_formula(q, spec):
    """Closed-form curvature of the mate as a CurvatureQuintuple of lazy fields.

    Derivatives of lam and of k or theta are taken with the library's default
    finite-difference step.
    """
    iv = q.interval
    lam_f = _with_interval(spec.lam, iv)
    aux_f = _with_interval(spec.aux, iv) if spec.aux is not None else None

    def evaluate(t):
        t = np.asarray(t, dtype=float)
        s = _samples(q, t)
        lam = lam_f._eval(t)
        dlam = differentiate(lam_f, t)
        if aux_f is not None:
            x = aux_f._eval(t)
            dx = differentiate(aux_f, t)
        else:
            x = dx = np.zeros_like(t)
        return _formula(spec.kind, s, lam, dlam, x, dx, spec.sign)

    def component(i):
        return FuncField(lambda t: evaluate(t)[i], iv, f"{spec.kind.value} mate {FIELD_NAMES[i]}")

    return CurvatureQuintuple(*(component(i) for i in range(5)), interval=iv)


# ---------------------------------------------------------------- verification


@dataclass
class MateReport:
    kind: MateKind
    condition_residual: float
    condition_argmax_t: float
    drift: float
    tangency: float
    discrepancy: dict = field(default_factory=dict)
    direction_error: float = 0.0
    direction_sign: int = 1
    passed: bool = False
    failures: list = field(default_factory=list)

    @property
    def max_discrepancy(self):
        return max(self.discrepancy.values()) if self.discrepancy else 0.0

    def as_dict(self):
        return {
            "kind": self.kind.value,
            "condition_residual": self.condition_residual,
            "condition_argmax_t": self.condition_argmax_t,
            "drift": self.drift,
            "tangency": self.tangency,
            "discrepancy": dict(self.discrepancy),
            "direction_error": self.direction_error,
            "direction_sign": self.direction_sign,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def direction_check(path, mate, kind):
    """(error, sign): sup |w_bar - sign * v| with sign chosen to fit best."""
    src, dst = DIRECTIONS[kind]
    v = _designated(path, src)
    w = _designated(mate, dst)
    plus = float(np.max(np.abs(w - v)))
    minus = float(np.max(np.abs(w + v)))
    return (plus, 1) if plus <= minus else (minus, -1)


def verify_mate(path, q, spec, tol=FORMULA_TOL):
    """Construct the mate and cross-check it; never raises for numerical failures."""
    ts = path.t
    spec.validate(ts)
    res = condition_residual(q, spec, ts)
    mate = construct_mate(path, q, spec, check=False)
    drift = mate.drift()
    tang = mate.tangency_residual()
    extracted = extract_curvature(mate, tol=np.inf)
    disc = sup_distance(mate_curvature_formula(q, spec), extracted, ts=ts)
    derr, dsign = direction_check(path, mate, spec.kind)
    rep = MateReport(spec.kind, res.max_abs, float(ts[res.argmax]), drift, tang, disc, derr, dsign)
    if res.max_abs > PRE_CONDITION_TOL:
        rep.failures.append("condition")
    if drift > DRIFT_TOL:
        rep.failures.append("drift")
    if tang > TANGENCY_TOL:
        rep.failures.append("tangency")
    if max(disc.values()) > tol:
        rep.failures.append("curvature")
    if derr > DIRECTION_TOL:
        rep.failures.append("direction")
    elif dsign < 0 and spec.kind is not MateKind.NSN:
        rep.failures.append("direction_sign")
    rep.passed = not rep.failures
    return rep


# ---------------------------------------------------------------- special constructions

SPECIALS = {
    "lplus-evolute": "LpLp with k = 1, lam = beta/k3",
    "lplus-beta": "LpLp with k = k3, lam = beta",
    "lminus-evolute": "LmLp with k = 1, lam = alpha/k2",
    "lminus-alpha": "LmLp with k = k2, lam = alpha",
    "tplus-k0": "TpLp with k = 0, lam = -b/(k1 + kS)",
    "tplus-k1": "TpLp with k = 1, lam = -2 alpha/(k1 + kS)",
    "tplus-km1": "TpLp with k = -1, lam = 2 beta/(k1 + kS)",
    "tminus-k0": "TmLp with k = 0, lam = -b/(k1 - kS)",
    "tminus-k1": "TmLp with k = 1, lam = 2 beta/(k1 - kS)",
    "tminus-km1": "TmLp with k = -1, lam = -2 alpha/(k1 - kS)",
    "involute": "NSN with lam = -integral of b",
}


def special_spec(q, which, N=DEFAULT_SAMPLES):
    """Canonical evolute/involute specs. Denominators are checked on the grid."""
    iv = q.interval
    if which not in SPECIALS:
        raise MateSpecError(f"unknown special mate {which!r}; expected one of {sorted(SPECIALS)}")
    if which == "involute":
        return MateSpec.nsn(q)
    if which == "lplus-beta":
        return MateSpec(MateKind.LpLp, _with_interval(q.beta, iv), _with_interval(q.k3, iv))
    if which == "lminus-alpha":
        return MateSpec(MateKind.LmLp, _with_interval(q.alpha, iv), _with_interval(q.k2, iv))
    kind, k = {
        "lplus-evolute": (MateKind.LpLp, 1.0),
        "lminus-evolute": (MateKind.LmLp, 1.0),
        "tplus-k0": (MateKind.TpLp, 0.0),
        "tplus-k1": (MateKind.TpLp, 1.0),
        "tplus-km1": (MateKind.TpLp, -1.0),
        "tminus-k0": (MateKind.TmLp, 0.0),
        "tminus-k1": (MateKind.TmLp, 1.0),
        "tminus-km1": (MateKind.TmLp, -1.0),
    }[which]
    aux = constant(k, iv)
    return MateSpec(kind, solve_lambda(q, kind, aux, N=N), aux)


def special_mates(path, q, which):
    spec = special_spec(q, which, N=path.N)
    return construct_mate(path, q, spec), spec


def swap_partner(spec):
    """The *Lm spec carrying the same (lam, k) as an *Lp spec, and vice versa."""
    inverse = {v: k for k, v in LP_PARTNER.items()}
    other = LP_PARTNER.get(spec.kind) or inverse.get(spec.kind)
    if other is None:
        raise MateSpecError(f"{spec.kind.value} has no swap partner")
    return MateSpec(other, spec.lam, spec.aux, spec.sign)


__all__ = [
    "ConditionResidual",
    "MateKind",
    "MateReport",
    "MateSpec",
    "SPECIALS",
    "condition_residual",
    "construct_mate",
    "direction_check",
    "mate_curvature_formula",
    "solve_lambda",
    "special_mates",
    "special_spec",
    "swap_partner",
    "verify_mate",
]

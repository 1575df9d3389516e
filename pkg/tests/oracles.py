"""Independent numeric oracle for mate curvature.

Frames are handled as coefficient rows in the source basis (l+, l-, n). If the
source frame F satisfies F' = C F and the mate frame is M F, then the mate
frame satisfies (M F)' = (M' + M C) M^-1 (M F), and the mate curvature is read
off that matrix. This uses neither the library's mate formulas nor numerical
extraction from a sampled path.
"""

import numpy as np

# canonical realisation of the basis: l+ = (1,1,0), l- = (1,-1,0), n = (0,0,1)
E = np.array([[1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
E_INV = np.linalg.inv(E)
LP = np.array([1.0, 0.0, 0.0])
LM = np.array([0.0, 1.0, 0.0])
N_ = np.array([0.0, 0.0, 1.0])
NT = 0.5 * (LP + LM)
NS = 0.5 * (LP - LM)


def _wedge(a, b):
    c = np.cross(a, b)
    return np.array([-c[0], c[1], c[2]])


def mate_n(lp, lm):
    """Coefficients of -(1/2) l+_bar ^ l-_bar, computed in the canonical realisation."""
    return -0.5 * _wedge(lp @ E, lm @ E) @ E_INV


def mate_rows(kind, x, sign=1):
    """Rows (l+_bar, l-_bar) of the mate frame, retyped from the constructions in the proofs."""
    if kind in ("LpLm", "LmLm", "TpLm", "TmLm"):
        lp, lm = mate_rows(kind[:2] + "Lp", x, sign)
        return lm, lp
    k = x
    lt_p, lt_m = NT + N_, NT - N_
    if kind == "LpLp":
        return LP, k**2 * LP + LM + 2 * k * N_
    if kind == "LmLp":
        return LM, LP + k**2 * LM + 2 * k * N_
    if kind == "TpLp":
        return lt_p, (k**2 + 1) * NT - 2 * k * NS + (k**2 - 1) * N_
    if kind == "TmLp":
        return lt_m, (k**2 + 1) * NT + 2 * k * NS + (1 - k**2) * N_
    th = x
    if kind == "NT":
        bT, bS = NT, np.sin(th) * N_ + np.cos(th) * NS
    elif kind == "NSNS":
        bT, bS = sign * (np.sinh(th) * N_ + np.cosh(th) * NT), NS
    elif kind == "NNS":
        bT, bS = -sign * (np.cosh(th) * NT + np.sinh(th) * NS), N_
    elif kind == "NN":
        return LP, LM
    elif kind == "NSN":
        bT, bS = NT, N_
    else:
        raise ValueError(kind)
    return bT + bS, bT - bS


DIRECTION = {
    "LpLp": LP, "LpLm": LP, "LmLp": LM, "LmLm": LM,
    "TpLp": NT + N_, "TpLm": NT + N_, "TmLp": NT - N_, "TmLm": NT - N_,
    "NT": NT, "NN": N_, "NSNS": NS, "NNS": N_, "NSN": NS,
}


def frame_matrix(kind, x, sign=1):
    lp, lm = mate_rows(kind, x, sign)
    return np.array([lp, lm, mate_n(lp, lm)])


def oracle_curvature(kind, t, k1, k2, k3, al, be, lam, aux, sign=1, h=1e-4):
    """Mate (k1, k2, k3, alpha, beta) at a single t.

    k1..be, lam and aux are scalar callables; aux is k or theta (ignored for NN/NSN).
    """
    aux = aux or (lambda s: 0.0)

    def M(s):
        return frame_matrix(kind, aux(s), sign)

    dM = (M(t - 2 * h) - 8 * M(t - h) + 8 * M(t + h) - M(t + 2 * h)) / (12 * h)
    dlam = (lam(t - 2 * h) - 8 * lam(t - h) + 8 * lam(t + h) - lam(t + 2 * h)) / (12 * h)
    C = np.array([[k1(t), 0.0, 2 * k3(t)], [0.0, -k1(t), 2 * k2(t)], [k2(t), k3(t), 0.0]])
    Mt = M(t)
    Cb = (dM + Mt @ C) @ np.linalg.inv(Mt)
    v = DIRECTION[kind]
    g = np.array([al(t), be(t), 0.0]) + dlam * v + lam(t) * (v @ C)
    coef, *_ = np.linalg.lstsq(Mt[:2].T, g, rcond=None)
    return np.array([Cb[0, 0], 0.5 * Cb[1, 2], 0.5 * Cb[0, 2], coef[0], coef[1]])

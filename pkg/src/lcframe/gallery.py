"""Built-in example curves with closed-form base curves and ready-made mate specs."""

import math
from dataclasses import dataclass, field

import numpy as np

from .dsl import ExprField
from .engine import CurvatureQuintuple, FramedCurvePath, InitialFrame
from .mates import MateSpec
from .minkowski import wedge


@dataclass
class GalleryEntry:
    name: str
    params: dict
    interval: tuple
    curvature: dict  # k1..beta -> expression text
    gamma0: tuple
    lplus0: tuple
    lminus0: tuple
    closed_form: object = None  # ts -> (gamma, lplus, lminus), each (N, 3)
    mates: dict = field(default_factory=dict)  # name -> {"kind", "lambda", "aux", "sign"}

    def quintuple(self):
        c = self.curvature
        return CurvatureQuintuple.of(c["k1"], c["k2"], c["k3"], c["alpha"], c["beta"], self.interval, self.params)

    def initial_frame(self):
        return InitialFrame.checked(self.gamma0, self.lplus0, self.lminus0)

    def closed_path(self, ts):
        if self.closed_form is None:
            return None
        g, lp, lm = self.closed_form(np.asarray(ts, dtype=float))
        return FramedCurvePath(np.asarray(ts, dtype=float), g, lp, lm, -0.5 * wedge(lp, lm))

    def mate_spec(self, name):
        return mate_spec_from_block(self.mates[name], self.params, self.interval)

    def spec_document(self, mate=None, samples=2001):
        doc = {
            "name": self.name,
            "interval": {"t0": self.interval[0], "t1": self.interval[1]},
            "samples": samples,
            "params": dict(self.params),
            "curvature": dict(self.curvature),
            "initial_frame": {
                "gamma0": list(self.gamma0),
                "lplus": list(self.lplus0),
                "lminus": list(self.lminus0),
            },
        }
        if mate is not None:
            doc["mate"] = dict(self.mates[mate])
        return doc


def mate_spec_from_block(block, params, interval):
    aux = block.get("aux")
    return MateSpec(
        block["kind"],
        ExprField(str(block["lambda"]), params, interval),
        None if aux is None else ExprField(str(aux), params, interval),
        int(block.get("sign", 1)),
    )


def _block(kind, lam, aux=None, sign=1):
    b = {"kind": kind, "lambda": lam}
    if aux is not None:
        b["aux"] = aux
    if sign != 1:
        b["sign"] = sign
    return b


def _stack(*cols):
    return np.stack(cols, axis=-1)


def example_trig(p=2.0, q=1.0, n=1, m=2):
    """Circle-frame family with l+ = (1, cos nt, sin nt) and alpha, beta proportional to sin mt."""
    n, m = int(n), int(m)
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive integers")
    p, q = float(p), float(q)

    def closed(ts):
        if n != m:
            g = _stack(
                -(p / m) * np.cos(m * ts),
                -(q / 2) * (np.cos((m - n) * ts) / (m - n) + np.cos((m + n) * ts) / (m + n)),
                (q / 2) * (np.sin((m - n) * ts) / (m - n) - np.sin((m + n) * ts) / (m + n)),
            )
        else:
            g = _stack(
                -(p / m) * np.cos(m * ts),
                -(q / (4 * m)) * np.cos(2 * m * ts),
                (q / 2) * ts - (q / (4 * m)) * np.sin(2 * m * ts),
            )
        one = np.ones_like(ts)
        lp = _stack(one, np.cos(n * ts), np.sin(n * ts))
        lm = _stack(one, -np.cos(n * ts), -np.sin(n * ts))
        return g, lp, lm

    g0 = closed(np.array([0.0]))[0][0]
    mates = {}
    if p != q:
        for kind in ("LpLp", "LpLm"):
            mates[kind] = _block(kind, "(p - q)/n*sin(m*t)", "1")
    if p + q != 0:
        for kind in ("LmLp", "LmLm"):
            mates[kind] = _block(kind, "-(p + q)/n*sin(m*t)", "1")
    tp = ("1", "(p + q)/n*sin(m*t)") if p + q != 0 else ("-1", "(q - p)/n*sin(m*t)")
    tm = ("1", "(p - q)/n*sin(m*t)") if p != q else ("-1", "-(p + q)/n*sin(m*t)")
    if p != 0 or q != 0:
        for kind in ("TpLp", "TpLm"):
            mates[kind] = _block(kind, tp[1], tp[0])
        for kind in ("TmLp", "TmLm"):
            mates[kind] = _block(kind, tm[1], tm[0])
    mates["NT"] = _block("NT", "1 + 0.5*sin(t)", "n*pi")
    theta = "0.3 + 0.2*sin(t)"
    if p != 0:
        mates["NSNS"] = _block("NSNS", f"p*tanh({theta})/n*sin(m*t)", theta)
        mates["NSNS-"] = _block("NSNS", f"p*tanh({theta})/n*sin(m*t)", theta, -1)
    mates["NNS"] = _block("NNS", f"(q - p*tanh({theta}))/n*sin(m*t)", theta)
    mates["NNS-"] = _block("NNS", f"(q - p*tanh({theta}))/n*sin(m*t)", theta, -1)
    if q != 0:
        mates["NSN"] = _block("NSN", "q/m*cos(m*t)")
    mates["NN"] = _block("NN", "1")
    return GalleryEntry(
        name="trig",
        params={"p": p, "q": q, "n": n, "m": m},
        interval=(0.0, 2 * math.pi),
        curvature={
            "k1": "0",
            "k2": "-n/2",
            "k3": "n/2",
            "alpha": "(p + q)/2*sin(m*t)",
            "beta": "(p - q)/2*sin(m*t)",
        },
        gamma0=tuple(float(x) for x in g0),
        lplus0=(1.0, 1.0, 0.0),
        lminus0=(1.0, -1.0, 0.0),
        closed_form=closed,
        mates=mates,
    )


def example_kappa3(variant="sin"):
    """Curves with k1 = k2 = 0 and constant l- = (1, -1, 0)."""
    if variant == "sin":
        interval = (0.0, 2 * math.pi)
        curvature = {"k1": "0", "k2": "0", "k3": "sin(t)", "alpha": "sin(t)*cos(t)", "beta": "cos(t)"}

        def closed(ts):
            c, s = np.cos(ts), np.sin(ts)
            g = _stack(-c**4 / 4 - c**2 / 2 + s, c**4 / 4 - c**2 / 2 - s, 2 * c**3 / 3)
            lp = _stack(c**2 + 1, 1 - c**2, -2 * c)
            return g, lp, np.broadcast_to([1.0, -1.0, 0.0], lp.shape).copy()

        mates = {
            "LpLp": _block("LpLp", "cos(t)", "sin(t)"),
            "LpLm": _block("LpLm", "cos(t)", "sin(t)"),
            "LmLp": _block("LmLp", "cos(t)", "0"),
            "LmLm": _block("LmLm", "cos(t)", "0"),
            "TpLp": _block("TpLp", "2*cos(t)", "1"),
            "TpLm": _block("TpLm", "2*cos(t)", "1"),
            "TmLp": _block("TmLp", "-2*cos(t)", "-1"),
            "TmLm": _block("TmLm", "-2*cos(t)", "-1"),
            "NT": _block("NT", "sin(t) - 1", "t"),
            "NSN": _block("NSN", "sin(t) - sin(t)^2/2"),
            "NN": _block("NN", "1"),
        }
    elif variant == "sinh":
        interval = (-2.0, 2.0)
        curvature = {"k1": "0", "k2": "0", "k3": "sinh(t)", "alpha": "sinh(t)*cosh(t)", "beta": "-sinh(t)"}

        def closed(ts):
            c = np.cosh(ts)
            g = _stack(c**4 / 4 + c**2 / 2 - c, -(c**4) / 4 + c**2 / 2 + c, 2 * c**3 / 3)
            lp = _stack(c**2 + 1, 1 - c**2, 2 * c)
            return g, lp, np.broadcast_to([1.0, -1.0, 0.0], lp.shape).copy()

        mates = {
            "LpLp": _block("LpLp", "-sinh(t)", "sinh(t)"),
            "LpLm": _block("LpLm", "-sinh(t)", "sinh(t)"),
            "LmLp": _block("LmLp", "cosh(t)", "0"),
            "LmLm": _block("LmLm", "cosh(t)", "0"),
            "TpLp": _block("TpLp", "2*cosh(t)", "1"),
            "TpLm": _block("TpLm", "2*cosh(t)", "1"),
            "TmLp": _block("TmLp", "-2*cosh(t)", "-1"),
            "TmLm": _block("TmLm", "-2*cosh(t)", "-1"),
            "NT": _block("NT", "(cosh(t) + 1)*tan(0.3)", "0.3"),
            "NSNS": _block("NSNS", "tanh(0.4 + 0.1*t)*(cosh(t) - 1)", "0.4 + 0.1*t"),
            "NNS": _block("NNS", "exp(-2*(0.3*t))*cosh(t) + 1", "0.3*t"),
            "NNS-": _block("NNS", "exp(-2*(0.3*t))*cosh(t) + 1", "0.3*t", -1),
            "NSN": _block("NSN", "-(sinh(t)^2/2 + cosh(t))"),
            "NN": _block("NN", "1"),
        }
    else:
        raise ValueError(f"unknown variant {variant!r}; expected 'sin' or 'sinh'")
    g0, lp0, lm0 = (x[0] for x in closed(np.array([interval[0]])))
    return GalleryEntry(
        name=f"kappa3-{variant}",
        params={},
        interval=interval,
        curvature=curvature,
        gamma0=tuple(float(x) for x in g0),
        lplus0=tuple(float(x) for x in lp0),
        lminus0=tuple(float(x) for x in lm0),
        closed_form=closed,
        mates=mates,
    )


GALLERY_NAMES = ("trig", "kappa3-sin", "kappa3-sinh")


def get_entry(name, **params):
    if name == "trig":
        return example_trig(**params)
    if params:
        raise ValueError(f"{name} takes no parameters")
    if name == "kappa3-sin":
        return example_kappa3("sin")
    if name == "kappa3-sinh":
        return example_kappa3("sinh")
    raise KeyError(f"unknown gallery entry {name!r}; expected one of {GALLERY_NAMES}")


def all_entries():
    """Default instances of every entry, plus the equal-frequency trig branch."""
    return [example_trig(2, 1, 1, 2), example_trig(1, 1, 1, 1), example_kappa3("sin"), example_kappa3("sinh")]

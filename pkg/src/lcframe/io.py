"""Curve spec files and path tables.

A spec file is YAML (or JSON) with keys::

    interval: {t0: 0, t1: 2*pi}          # numbers or constant expressions
    samples: 2001
    params: {p: 2, q: 1}
    curvature: {k1: "0", k2: "-n/2", k3: "n/2", alpha: "...", beta: "..."}
    initial_frame: {gamma0: [0, 0, 0], lplus: [1, 1, 0], lminus: [1, -1, 0]}
    mate:                                 # optional
      kind: LpLp
      lambda: "sin(2*t)"                  # optional: solved for when absent
      aux: "1"                            # k or theta
      sign: 1                             # NSNS / NNS branch
      base: 0                             # NSN: antiderivative base point
      const: 0                            # NSN: value of lambda at base

Path tables have one row per grid node with the columns in HEADER.
"""

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np
import yaml

from .dsl import ExprField, evaluate, parse_expr
from .engine import DEFAULT_SAMPLES, CurvatureQuintuple, FramedCurvePath, InitialFrame, classify_grid
from .dsl import free_params
from .errors import ExprSyntaxError, LightconeError
from .mates import MateKind, MateSpec, solve_lambda
from .minkowski import CausalType

HEADER = (
    ["t"]
    + [f"gamma{i}" for i in (1, 2, 3)]
    + [f"lplus{i}" for i in (1, 2, 3)]
    + [f"lminus{i}" for i in (1, 2, 3)]
    + [f"n{i}" for i in (1, 2, 3)]
    + ["k1", "k2", "k3", "alpha", "beta", "causal", "singular"]
)


class SpecError(LightconeError):
    """Malformed spec file; the message names the offending key."""


@dataclass
class CurveSpec:
    interval: tuple
    samples: int
    params: dict
    quintuple: CurvatureQuintuple
    initial: InitialFrame
    mate: MateSpec | None
    document: dict


def _number(value, where, params):
    if isinstance(value, bool):
        raise SpecError(f"{where}: expected a number")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(evaluate(parse_expr(value), 0.0, params))
        except LightconeError as e:
            raise SpecError(f"{where}: {e}") from e
    raise SpecError(f"{where}: expected a number or constant expression, got {value!r}")


def _triple(value, where, params):
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise SpecError(f"{where}: expected a list of three numbers")
    return [_number(v, f"{where}[{i}]", params) for i, v in enumerate(value)]


def _expr(value, where, params, interval):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = repr(float(value))
    if not isinstance(value, str):
        raise SpecError(f"{where}: expected an expression string")
    try:
        f = ExprField(value, params, interval)
    except ExprSyntaxError as e:
        raise SpecError(f"{where}: {e}") from e
    missing = sorted(free_params(f.ast) - set(params))
    if missing:
        raise SpecError(f"{where}: unbound parameter(s) {', '.join(missing)}")
    return f


def _section(doc, key):
    v = doc.get(key)
    if not isinstance(v, dict):
        raise SpecError(f"{key}: missing or not a mapping")
    return v


def build_spec(doc, samples=None):
    """Validate a parsed spec document and build the library objects."""
    if not isinstance(doc, dict):
        raise SpecError("spec document must be a mapping")
    params = doc.get("params") or {}
    if not isinstance(params, dict):
        raise SpecError("params: expected a mapping")
    params = {str(k): _number(v, f"params.{k}", {}) for k, v in params.items()}
    iv = _section(doc, "interval")
    t0 = _number(iv.get("t0"), "interval.t0", params)
    t1 = _number(iv.get("t1"), "interval.t1", params)
    if not t1 > t0:
        raise SpecError("interval: t1 must exceed t0")
    interval = (t0, t1)
    n = samples if samples is not None else doc.get("samples", DEFAULT_SAMPLES)
    if isinstance(n, bool) or not isinstance(n, int):
        raise SpecError("samples: expected an integer")
    if n < 5:
        raise SpecError(f"samples: need N >= 5, got {n}")
    cur = _section(doc, "curvature")
    fields = []
    for key in ("k1", "k2", "k3", "alpha", "beta"):
        if key not in cur:
            raise SpecError(f"curvature.{key}: missing")
        fields.append(_expr(cur[key], f"curvature.{key}", params, interval))
    q = CurvatureQuintuple(*fields, interval=interval)
    fr = _section(doc, "initial_frame")
    try:
        init = InitialFrame.checked(
            _triple(fr.get("gamma0"), "initial_frame.gamma0", params),
            _triple(fr.get("lplus"), "initial_frame.lplus", params),
            _triple(fr.get("lminus"), "initial_frame.lminus", params),
        )
    except SpecError:
        raise
    except LightconeError as e:
        raise SpecError(f"initial_frame: NullPair validation failed: {e}") from e
    mate = None
    if doc.get("mate") is not None:
        mate = _build_mate(doc["mate"], params, q)
    return CurveSpec(interval, n, params, q, init, mate, doc)


def _build_mate(block, params, q):
    if not isinstance(block, dict):
        raise SpecError("mate: expected a mapping")
    if "kind" not in block:
        raise SpecError("mate.kind: missing")
    try:
        kind = MateKind(str(block["kind"]))
    except ValueError:
        raise SpecError(f"mate.kind: unknown kind {block['kind']!r}; expected one of {[k.value for k in MateKind]}") from None
    iv = q.interval
    aux = None if block.get("aux") is None else _expr(block["aux"], "mate.aux", params, iv)
    sign = block.get("sign", 1)
    if sign not in (1, -1):
        raise SpecError("mate.sign: expected 1 or -1")
    if block.get("lambda") is None:
        if kind is MateKind.NSN:
            base = None if block.get("base") is None else _number(block["base"], "mate.base", params)
            const = _number(block.get("const", 0.0), "mate.const", params)
            lam = solve_lambda(q, kind, base=base, const=const)
        else:
            lam = solve_lambda(q, kind, aux)
    else:
        lam = _expr(block["lambda"], "mate.lambda", params, iv)
    return MateSpec(kind, lam, aux, sign)


def load_spec(path, samples=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SpecError(f"cannot read spec file: {e}") from e
    try:
        doc = json.loads(text) if str(path).endswith(".json") else yaml.safe_load(text)
    except (ValueError, yaml.YAMLError) as e:
        raise SpecError(f"cannot parse spec file: {e}") from e
    return build_spec(doc, samples)


def dump_spec(doc):
    return yaml.safe_dump(doc, sort_keys=False)


# ---------------------------------------------------------------- path tables


@dataclass
class PathTable:
    path: FramedCurvePath
    curvature: np.ndarray  # (5, N)
    causal: list
    singular: np.ndarray

    @classmethod
    def from_path(cls, path, q):
        labels, sing = classify_grid(q, path.t)
        return cls(path, q.sample(path.t), [c.value for c in labels], np.asarray(sing, dtype=bool))

    def rows(self):
        p = self.path
        cols = np.column_stack([p.t, p.gamma, p.lplus, p.lminus, p.n, self.curvature.T])
        for i, row in enumerate(cols):
            yield [float(x) for x in row] + [self.causal[i], int(bool(self.singular[i]))]


def _fmt(x):
    return repr(float(x))


def table_to_csv(table):
    lines = [",".join(HEADER)]
    for row in table.rows():
        lines.append(",".join([_fmt(x) for x in row[:-2]] + [row[-2], str(row[-1])]))
    return "\n".join(lines) + "\n"


def table_from_csv(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split(",") != HEADER:
        raise SpecError("path table: unexpected header")
    nums, causal, sing = [], [], []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != len(HEADER):
            raise SpecError(f"path table line {k}: expected {len(HEADER)} fields")
        nums.append([float(x) for x in parts[:-2]])
        CausalType(parts[-2])
        causal.append(parts[-2])
        sing.append(parts[-1] == "1")
    a = np.array(nums)
    path = FramedCurvePath(a[:, 0], a[:, 1:4], a[:, 4:7], a[:, 7:10], a[:, 10:13])
    return PathTable(path, a[:, 13:18].T.copy(), causal, np.array(sing))


def table_to_json(table):
    return json.dumps({"columns": HEADER, "rows": list(table.rows())}) + "\n"


def table_from_json(text):
    doc = json.loads(text)
    if doc.get("columns") != HEADER:
        raise SpecError("path table: unexpected columns")
    rows = doc["rows"]
    a = np.array([r[:-2] for r in rows], dtype=float)
    path = FramedCurvePath(a[:, 0], a[:, 1:4], a[:, 4:7], a[:, 7:10], a[:, 10:13])
    return PathTable(path, a[:, 13:18].T.copy(), [r[-2] for r in rows], np.array([bool(r[-1]) for r in rows]))


def atomic_write(path, text):
    """Write text to path via a temporary file in the same directory and a rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_table(path, table, fmt="csv"):
    atomic_write(path, table_to_csv(table) if fmt == "csv" else table_to_json(table))


def read_table(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return table_from_json(text) if text.lstrip().startswith("{") else table_from_csv(text)

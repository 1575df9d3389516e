"""Scalar fields on a parameter interval and the calculus used downstream.

Three concrete kinds share one interface (call with a scalar or an array of
parameter values):

* ExprField: a parsed expression with parameter bindings,
* GridField: uniform samples with local cubic interpolation,
* FuncField: any vectorized callable (used for derived quantities).
"""

import numpy as np

from ..errors import IntervalError
from . import expr as ex

DEFAULT_SIMPSON_N = 200
DEFAULT_ANTIDERIVATIVE_M = 4096


class ScalarField:
    interval = None

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = self._eval(arr)
        return float(out) if arr.ndim == 0 else out

    def _eval(self, t):
        raise NotImplementedError

    def sample(self, ts):
        return np.asarray(self._eval(np.asarray(ts, dtype=float)), dtype=float)

    def with_interval(self, interval):
        raise NotImplementedError

    # arithmetic builds new fields lazily
    def _binary(self, other, op):
        other = as_field(other, interval=self.interval)
        interval = _merge_intervals(self.interval, other.interval)
        if isinstance(self, ExprField) and isinstance(other, ExprField):
            params = _merge_params(self.params, other.params)
            if params is not None:
                return ExprField(ex.BinOp(op, self.ast, other.ast), params, interval)
        fn = _OPS[op]
        a, b = self, other
        return FuncField(lambda t: fn(a._eval(t), b._eval(t)), interval)

    def _rbinary(self, other, op):
        return as_field(other, interval=self.interval)._binary(self, op)

    def __add__(self, other):
        return self._binary(other, "+")

    def __radd__(self, other):
        return self._rbinary(other, "+")

    def __sub__(self, other):
        return self._binary(other, "-")

    def __rsub__(self, other):
        return self._rbinary(other, "-")

    def __mul__(self, other):
        return self._binary(other, "*")

    def __rmul__(self, other):
        return self._rbinary(other, "*")

    def __truediv__(self, other):
        return self._binary(other, "/")

    def __rtruediv__(self, other):
        return self._rbinary(other, "/")

    def __neg__(self):
        return _NegField(self)


_OPS = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
}


def _merge_intervals(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if not np.allclose(a, b, rtol=0, atol=1e-12):
        raise IntervalError(f"fields live on different intervals {a} and {b}")
    return a


def _merge_params(a, b):
    merged = dict(a)
    for k, v in b.items():
        if k in merged and merged[k] != v:
            return None
        merged[k] = v
    return merged


def _check_interval(interval):
    if interval is None:
        return None
    t0, t1 = (float(x) for x in interval)
    if not (np.isfinite(t0) and np.isfinite(t1) and t1 > t0):
        raise IntervalError(f"invalid interval [{t0}, {t1}]")
    return (t0, t1)


class ExprField(ScalarField):
    """Field defined by expression text (or an already parsed tree)."""

    def __init__(self, source, params=None, interval=None):
        self.ast = ex.parse_expr(source) if isinstance(source, str) else source
        self.params = dict(params or {})
        self.interval = _check_interval(interval)

    @property
    def text(self):
        return ex.pretty(self.ast)

    def is_constant(self):
        return not ex.depends_on_t(self.ast)

    def _eval(self, t):
        return ex.evaluate(self.ast, t, self.params)

    def with_interval(self, interval):
        return ExprField(self.ast, self.params, interval)

    def __neg__(self):
        if isinstance(self.ast, ex.Neg):
            return ExprField(self.ast.operand, self.params, self.interval)
        return ExprField(ex.Neg(self.ast), self.params, self.interval)

    def __repr__(self):
        return f"ExprField({self.text!r}, params={self.params})"


class GridField(ScalarField):
    """Uniform samples on [t0, t1]; evaluated by cubic interpolation through the 4 nearest nodes."""

    def __init__(self, t0, t1, values):
        self.interval = _check_interval((t0, t1))
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or v.size < 5:
            raise IntervalError("grid field needs at least 5 samples")
        if not np.all(np.isfinite(v)):
            raise IntervalError("grid field values must be finite")
        self.values = v
        self.h = (self.interval[1] - self.interval[0]) / (v.size - 1)

    @property
    def nodes(self):
        return np.linspace(self.interval[0], self.interval[1], self.values.size)

    def _eval(self, t):
        t0, t1 = self.interval
        slack = 1e-12 * (t1 - t0)
        if np.any(t < t0 - slack) or np.any(t > t1 + slack):
            raise IntervalError(f"query outside grid interval [{t0}, {t1}]")
        n = self.values.size
        s = (np.clip(t, t0, t1) - t0) / self.h
        j0 = np.clip(np.floor(s).astype(int) - 1, 0, n - 4)
        x = s - j0  # position relative to node j0, in units of h
        out = np.zeros_like(s)
        for k in range(4):
            w = np.ones_like(s)
            for m in range(4):
                if m != k:
                    w = w * (x - m) / (k - m)
            out = out + w * self.values[j0 + k]
        return out

    def with_interval(self, interval):
        if not np.allclose(interval, self.interval, rtol=0, atol=1e-12):
            raise IntervalError("cannot move a grid field to another interval")
        return self

    def __neg__(self):
        return GridField(self.interval[0], self.interval[1], -self.values)

    def __repr__(self):
        return f"GridField({self.interval}, N={self.values.size})"


class FuncField(ScalarField):
    """Field backed by a vectorized callable."""

    def __init__(self, fn, interval=None, label=""):
        self.fn = fn
        self.interval = _check_interval(interval)
        self.label = label

    def _eval(self, t):
        return np.asarray(self.fn(t), dtype=float) * np.ones_like(t)

    def with_interval(self, interval):
        return FuncField(self.fn, interval, self.label)

    def __repr__(self):
        return f"FuncField({self.label or self.fn!r})"


class _NegField(FuncField):
    def __init__(self, inner):
        self.inner = inner
        super().__init__(lambda t: -inner._eval(t), inner.interval)

    def __neg__(self):
        return self.inner


def constant(c, interval=None):
    return ExprField(ex.Const(float(c)), {}, interval)


def as_field(x, params=None, interval=None):
    """Coerce a number, expression text, or field into a ScalarField."""
    if isinstance(x, ScalarField):
        return x
    if isinstance(x, str):
        return ExprField(x, params, interval)
    if np.isscalar(x):
        return constant(x, interval)
    raise TypeError(f"cannot make a scalar field from {x!r}")


def default_step(interval):
    """Finite-difference step (t1 - t0) * 1e-5, clamped below at 1e-8."""
    if interval is None:
        return 1e-5
    return max((interval[1] - interval[0]) * 1e-5, 1e-8)


def differentiate(f, t, h=None):
    """Derivative of f at t (scalar or array).

    Central difference in the interior; second-order one-sided differences
    where the central stencil would leave the field's interval.
    """
    f = as_field(f)
    if h is None:
        h = default_step(f.interval)
    if h <= 0:
        raise ValueError("step must be positive")
    arr = np.asarray(t, dtype=float)
    ta = np.atleast_1d(arr)
    out = np.empty_like(ta)
    if f.interval is None:
        out[:] = (f._eval(ta + h) - f._eval(ta - h)) / (2 * h)
    else:
        t0, t1 = f.interval
        if t1 - t0 < 2 * h:
            raise IntervalError("interval too short for the difference stencil")
        lo = ta - h < t0
        hi = ta + h > t1
        mid = ~(lo | hi)
        if np.any(mid):
            x = ta[mid]
            out[mid] = (f._eval(x + h) - f._eval(x - h)) / (2 * h)
        if np.any(lo):
            x = ta[lo]
            out[lo] = (-3 * f._eval(x) + 4 * f._eval(x + h) - f._eval(x + 2 * h)) / (2 * h)
        if np.any(hi):
            x = ta[hi]
            out[hi] = (3 * f._eval(x) - 4 * f._eval(x - h) + f._eval(x - 2 * h)) / (2 * h)
    return float(out[0]) if arr.ndim == 0 else out


def integrate(f, t0, t, N=DEFAULT_SIMPSON_N):
    """Composite Simpson approximation of the integral of f from t0 to t.

    ``t`` may be an array; each entry gets its own N-panel rule. The result
    is exactly 0 at t == t0.
    """
    f = as_field(f)
    if N < 2:
        raise ValueError("Simpson rule needs N >= 2")
    if N % 2:
        N += 1
    arr = np.asarray(t, dtype=float)
    ta = np.atleast_1d(arr)
    s = np.linspace(0.0, 1.0, N + 1)
    w = np.ones(N + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    span = ta - t0
    nodes = t0 + span[:, None] * s[None, :]
    vals = f._eval(nodes)
    out = (span / (3.0 * N)) * (vals @ w)
    return float(out[0]) if arr.ndim == 0 else out


def cumulative_integral(f, ts):
    """Running integral of f from ts[0] to each ts[i], one Simpson panel per grid step."""
    f = as_field(f)
    ts = np.asarray(ts, dtype=float)
    fx = f._eval(ts)
    fm = f._eval(0.5 * (ts[:-1] + ts[1:]))
    panels = np.diff(ts) / 6.0 * (fx[:-1] + 4 * fm + fx[1:])
    return np.concatenate([[0.0], np.cumsum(panels)])


def antiderivative(f, interval=None, base=None, const=0.0, M=DEFAULT_ANTIDERIVATIVE_M):
    """Grid field F with F' = f and F(base) = const (base defaults to the left endpoint).

    Built by per-panel Simpson sums on an M-panel grid, so F is accurate to
    roughly the fourth power of the panel width.
    """
    f = as_field(f)
    interval = _check_interval(interval or f.interval)
    if interval is None:
        raise IntervalError("antiderivative needs an interval")
    a, b = interval
    x = np.linspace(a, b, M + 1)
    h = (b - a) / M
    fx = f._eval(x)
    fm = f._eval(0.5 * (x[:-1] + x[1:]))
    panels = h / 6.0 * (fx[:-1] + 4 * fm + fx[1:])
    F = np.concatenate([[0.0], np.cumsum(panels)])
    G = GridField(a, b, F)
    base = a if base is None else float(base)
    return GridField(a, b, F - G(base) + const)

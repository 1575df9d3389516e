"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 integration or invariant failure,
3 mate condition failure.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import engine, gallery
from .errors import (
    ConditionError,
    IntegrationError,
    LightconeError,
    MateConstructionError,
    UnsolvableError,
)
from .io import PathTable, SpecError, atomic_write, dump_spec, load_spec, write_table
from .mates import PRE_CONDITION_TOL, construct_mate, mate_curvature_formula, verify_mate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTEGRATION = 2
EXIT_CONDITION = 3

METRIC_TOL = 1e-5
RESIDUAL_TOL = 1e-4
ROUNDTRIP_TOL = 1e-5


def _fmt(x):
    return f"{x:.3e}"


def _reconstruct(spec, args):
    return engine.reconstruct(spec.quintuple, spec.initial, spec.samples, renormalize=args.renormalize)


def cmd_reconstruct(args):
    spec = load_spec(args.spec, args.samples)
    path = _reconstruct(spec, args)
    write_table(args.out, PathTable.from_path(path, spec.quintuple), args.format)
    drift = path.drift()
    print(f"samples={path.N}")
    print(f"drift={_fmt(drift)}")
    print(f"drift_ok={'true' if drift <= args.tol else 'false'}")
    print(f"wedge_drift={_fmt(path.wedge_drift())}")
    print(f"output={args.out}")
    return EXIT_OK


def cmd_mate(args):
    spec = load_spec(args.spec, args.samples)
    if spec.mate is None:
        raise SpecError("mate: block missing (required by the mate command)")
    path = _reconstruct(spec, args)
    q = spec.quintuple
    report = verify_mate(path, q, spec.mate)
    if report.condition_residual > PRE_CONDITION_TOL:
        i = int(np.argmin(np.abs(path.t - report.condition_argmax_t)))
        raise ConditionError(report.condition_residual, i, report.condition_argmax_t)
    mate = construct_mate(path, q, spec.mate, check=False)
    os.makedirs(args.out, exist_ok=True)
    ext = "csv" if args.format == "csv" else "json"
    write_table(os.path.join(args.out, f"source.{ext}"), PathTable.from_path(path, q), args.format)
    mq = mate_curvature_formula(q, spec.mate)
    write_table(os.path.join(args.out, f"mate.{ext}"), PathTable.from_path(mate, mq), args.format)
    atomic_write(os.path.join(args.out, "report.json"), json.dumps(report.as_dict(), indent=2) + "\n")
    print(f"mate_kind={report.kind.value}")
    print(f"condition_residual={_fmt(report.condition_residual)}")
    print(f"drift={_fmt(report.drift)}")
    print(f"tangency={_fmt(report.tangency)}")
    print(f"max_discrepancy={_fmt(report.max_discrepancy)}")
    print(f"direction_sign={report.direction_sign}")
    print(f"status={'pass' if report.passed else 'fail'}")
    return EXIT_OK if report.passed else EXIT_INTEGRATION


def cmd_verify(args):
    spec = load_spec(args.spec, args.samples)
    q = spec.quintuple
    path = _reconstruct(spec, args)
    checks = []  # (name, value, limit)
    checks.append(("drift", path.drift(), args.tol))
    checks.append(("wedge_drift", path.wedge_drift(), args.tol))
    checks.append(("tangency", path.tangency_residual(), RESIDUAL_TOL))
    checks.append(("frame_residual", max(engine.frame_residuals(path, q).values()), RESIDUAL_TOL))
    checks.append(("dual_frame_residual", max(engine.dual_frame_residuals(path, q).values()), RESIDUAL_TOL))
    checks.append(("metric_identity", engine.metric_identity_residual(path, q), METRIC_TOL))
    rt = engine.sup_distance(engine.extract_curvature(path, tol=np.inf), q, ts=path.t)
    checks.append(("roundtrip", max(rt.values()), ROUNDTRIP_TOL))
    for name, value, _ in checks:
        print(f"{name}={_fmt(value)}")
    sing = engine.singular_times(q, path.t)
    print("singular_t=" + (",".join(f"{t:.4f}" for t in sing) if sing else "none"))
    labels, _ = engine.classify_grid(q, path.t)
    kinds = sorted({c.value for c in labels} - {"zero"})
    print("causal_types=" + (",".join(kinds) if kinds else "none"))
    failed = [name for name, value, limit in checks if not value <= limit]
    code = EXIT_OK if not failed else EXIT_INTEGRATION
    if spec.mate is not None:
        rep = verify_mate(path, q, spec.mate)
        print(f"mate_kind={rep.kind.value}")
        print(f"mate_condition_residual={_fmt(rep.condition_residual)}")
        print(f"mate_drift={_fmt(rep.drift)}")
        print(f"mate_tangency={_fmt(rep.tangency)}")
        for k, v in rep.discrepancy.items():
            print(f"mate_discrepancy_{k}={_fmt(v)}")
        print(f"mate_direction_error={_fmt(rep.direction_error)}")
        print(f"mate_direction_sign={rep.direction_sign}")
        failed += [f"mate_{f}" for f in rep.failures]
        if "condition" in rep.failures:
            code = EXIT_CONDITION
        elif rep.failures:
            code = EXIT_INTEGRATION
    if failed:
        print(f"failed={failed[0]}")
    print(f"status={'pass' if not failed else 'fail'}")
    return code


def _parse_sets(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise SpecError(f"--set expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise SpecError(f"--set {k}: not a number: {v!r}") from None
    return out


def cmd_gallery(args):
    if args.gallery_cmd == "list":
        for name in gallery.GALLERY_NAMES:
            e = gallery.get_entry(name)
            print(f"{name}\tinterval=[{e.interval[0]:.6g}, {e.interval[1]:.6g}]\tmates={','.join(e.mates)}")
        return EXIT_OK
    params = _parse_sets(args.set)
    try:
        entry = gallery.get_entry(args.name, **params)
    except (KeyError, ValueError, TypeError) as e:
        raise SpecError(str(e.args[0] if e.args else e)) from None
    if args.mate is not None and args.mate not in entry.mates:
        raise SpecError(f"--mate: {args.name} has no mate {args.mate!r}; available: {', '.join(entry.mates)}")
    text = dump_spec(entry.spec_document(args.mate, args.samples or 2001))
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1), keeping exit code 2 for integration failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="lcframe", description="Lightcone framed curves and their Bertrand mates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("spec", help="curve spec file (YAML or JSON)")
        sp.add_argument("--samples", type=int, default=None, help="grid size N (overrides the spec file)")
        sp.add_argument("--tol", type=float, default=1e-6, help="constraint tolerance (default 1e-6)")
        sp.add_argument("--renormalize", action="store_true", help="re-project the frame after every step")

    r = sub.add_parser("reconstruct", help="integrate a curvature spec and export the path")
    common(r)
    r.add_argument("-o", "--out", required=True)
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.set_defaults(func=cmd_reconstruct)

    m = sub.add_parser("mate", help="construct and check the mate described in the spec file")
    common(m)
    m.add_argument("-o", "--out", required=True, help="output directory")
    m.add_argument("--format", choices=("csv", "json"), default="csv")
    m.set_defaults(func=cmd_mate)

    v = sub.add_parser("verify", help="run the invariant battery and print key=value lines")
    common(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gallery", help="built-in examples")
    gsub = g.add_subparsers(dest="gallery_cmd", required=True, parser_class=_Parser)
    gsub.add_parser("list")
    e = gsub.add_parser("emit-spec")
    e.add_argument("name", choices=gallery.GALLERY_NAMES)
    e.add_argument("--mate", default=None, help="include this entry's mate block")
    e.add_argument("--set", action="append", metavar="NAME=VALUE", help="override a parameter (trig only)")
    e.add_argument("--samples", type=int, default=None)
    e.add_argument("-o", "--out", default=None)
    g.set_defaults(func=cmd_gallery)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IntegrationError, MateConstructionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTEGRATION
    except (ConditionError, UnsolvableError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONDITION
    except LightconeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

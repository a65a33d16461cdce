"""Command-line front end.

Exit status is 0 on success, 1 when the input is rejected and 2 when a
numerical procedure breaks down.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .audit import (DEFAULT_AUDIT_TOL, audit_g_normal, audit_null_rectifying,
                    audit_spacelike_rectifying, classify, hyperbolic_form_audit)
from .coeffs import anchored_initial_value
from .errors import NumericError, ParseError, SpecError, ValidationError
from .expr import parse_scalar_fn
from .frenet import CurvatureSpec, FrameKind, frame_residuals, n_curvatures, synthesize_from_curvatures
from .gfield import g_position_vector
from .report import write_audit_json, write_frames_csv, write_points_csv, write_trace_csv

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2
MODES = ("frame", "synthesize", "classify", "audit", "export")
THEOREMS = ("3.2", "3.3", "3.4", "4.2")


@dataclass
class JobSpec:
    mode: str
    dim: int
    kind: FrameKind
    kappas: list
    sigs: list | None
    g: str | None
    s_range: tuple
    step: float
    s0: float
    tol: float
    theorems: list = field(default_factory=list)
    out: str = "."
    G0: float = 0.0
    anchor: str = "zero"
    basis: str = "rectifying"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--job", metavar="FILE", help="JSON job file; flags override its entries")
    common.add_argument("--dim", type=int)
    common.add_argument("--kind", choices=[k.value for k in FrameKind])
    common.add_argument("--kappa", action="append", metavar="EXPR",
                        help="curvature function of s; repeat in order kappa1, kappa2, ...")
    common.add_argument("--sig", action="append", type=int, metavar="{1,-1}",
                        help="frame signature eps_i; repeat in order (spacelike curves)")
    common.add_argument("--g", metavar="EXPR")
    common.add_argument("--range", nargs=2, type=float, metavar=("A", "B"), dest="s_range")
    common.add_argument("--step", type=float)
    common.add_argument("--s0", type=float)
    common.add_argument("--tol", type=float)
    common.add_argument("--theorem", action="append", choices=THEOREMS)
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--G0", type=float, help="value of the primitive G at s0")
    common.add_argument("--anchor", choices=["zero", "rectifying", "normal"],
                        help="choice of xi_g(s0): zero, or the value that puts xi_g in that subspace")
    common.add_argument("--basis", choices=["rectifying", "normal"], help="coefficients in the export")
    parser = _Parser(prog="lcurve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    helps = {
        "frame": "integrate the Frenet system and write the frames",
        "synthesize": "write the curve and its frames",
        "classify": "decide g-rectifying / g-normal / both / neither",
        "audit": "audit the characterization theorems",
        "export": "write per-node s, xi, G, xi_g, curvatures and coefficients",
    }
    for mode in MODES:
        sub.add_parser(mode, parents=[common], help=helps[mode])
    return parser


def _default_tol():
    env = os.environ.get("LCURVE_TOL")
    if env is None:
        return DEFAULT_AUDIT_TOL
    try:
        return float(env)
    except ValueError:
        raise SpecError(f"LCURVE_TOL: not a number: {env!r}") from None


def _load_job(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecError(f"job: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"job: {path} is not valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise SpecError("job: top level must be an object")
    aliases = {"range": "s_range", "kappas": "kappa", "sigs": "sig", "theorems": "theorem"}
    return {aliases.get(k, k): v for k, v in data.items()}


def job_from_args(args) -> JobSpec:
    """Merge a job file with command-line flags and validate the result."""
    vals = _load_job(args.job) if args.job else {}
    for key, v in vars(args).items():
        if key not in ("job", "mode") and v is not None:
            vals[key] = v
    if vals.get("dim") is None:
        raise SpecError("dim: required")
    try:
        dim = int(vals["dim"])
    except (TypeError, ValueError):
        raise SpecError("dim: must be an integer") from None
    if dim < 3:
        raise SpecError("dim: must be at least 3")
    try:
        kind = FrameKind(vals.get("kind", "spacelike"))
    except ValueError:
        raise SpecError("kind: must be 'spacelike' or 'null'") from None
    kappas = vals.get("kappa") or []
    want = n_curvatures(dim, kind)
    if len(kappas) != want:
        raise SpecError(f"kappa: expected {want} functions for a {kind.value} curve in dim {dim}, "
                        f"got {len(kappas)}")
    sigs = vals.get("sig")
    if kind is FrameKind.NULL and sigs:
        raise SpecError("sig: signatures apply to spacelike curves only")
    if vals.get("s_range") is None:
        raise SpecError("range: required")
    try:
        a, b = (float(x) for x in vals["s_range"])
    except (TypeError, ValueError):
        raise SpecError("range: expected two numbers A B") from None
    if not a < b:
        raise SpecError("range: A must be less than B")
    step = float(vals.get("step", 1e-3))
    if not step > 0:
        raise SpecError("step: must be positive")
    if step > b - a:
        raise SpecError("step: larger than the range")
    mode = args.mode
    g = vals.get("g")
    if mode in ("classify", "audit", "export") and g is None:
        raise SpecError("g: required")
    s0 = float(vals.get("s0", a))
    if not a <= s0 <= b:
        raise SpecError("s0: outside the range")
    tol = float(vals["tol"]) if vals.get("tol") is not None else _default_tol()
    if not tol > 0:
        raise SpecError("tol: must be positive")
    theorems = list(vals.get("theorem") or [])
    for t in theorems:
        if t not in THEOREMS:
            raise SpecError(f"theorem: unknown theorem {t!r}")
    return JobSpec(mode, dim, kind, list(kappas), sigs, g, (a, b), step, s0, tol, theorems,
                   vals.get("out", "."), float(vals.get("G0", 0.0)), vals.get("anchor", "zero"),
                   vals.get("basis", "rectifying"))


def _parse_field(name, text):
    try:
        return parse_scalar_fn(str(text))
    except ParseError as exc:
        raise SpecError(f"{name}: {exc}") from None


def _pipeline(job: JobSpec):
    kappas = [_parse_field(f"kappa{i + 1}", k) for i, k in enumerate(job.kappas)]
    spec = CurvatureSpec(kappas, job.dim, job.s_range, job.step, kind=job.kind, sigs=job.sigs)
    trace, fd = synthesize_from_curvatures(spec)
    s = fd.s_grid
    i0 = int(np.argmin(np.abs(s - job.s0)))
    s0 = float(s[i0])
    g = _parse_field("g", job.g) if job.g is not None else None
    return trace, fd, g, s0


def _gfield(job, trace, fd, g, s0):
    xi0 = None
    if job.anchor != "zero":
        if job.anchor == "normal" and job.kind is FrameKind.NULL:
            raise SpecError("anchor: the normal anchor needs a spacelike curve")
        xi0 = anchored_initial_value(fd, g, job.anchor, s0, job.G0)
    return g_position_vector(trace, fd, g, s0, xi0)


def run_job(job: JobSpec, stdout=None):
    """Execute a validated job; returns the list of files written."""
    stdout = sys.stdout if stdout is None else stdout
    os.makedirs(job.out, exist_ok=True)
    trace, fd, g, s0 = _pipeline(job)
    written = []

    def out(name):
        path = os.path.join(job.out, name)
        written.append(path)
        return path

    if job.mode in ("frame", "synthesize"):
        write_frames_csv(fd, out("frames.csv"))
        if job.mode == "synthesize":
            write_points_csv(trace, out("trace.csv"))
        print(f"frame residual {float(frame_residuals(fd).max()):.3e}, drift {fd.drift:.3e}", file=stdout)
        return written

    gft = _gfield(job, trace, fd, g, s0)
    if job.mode == "export":
        if job.basis == "normal" and job.kind is FrameKind.NULL:
            raise SpecError("basis: the normal basis needs a spacelike curve")
        write_trace_csv(trace, fd, gft, out("export.csv"), job.basis)
        return written
    if job.mode == "classify":
        res = classify(trace, fd, gft, job.tol)
        write_audit_json(res.report, out("classify.json"))
        print(res.classification.value, file=stdout)
        return written

    theorems = job.theorems or (["3.4"] if job.kind is FrameKind.NULL else ["3.2"])
    c_est = None
    for thm in theorems:
        if thm in ("3.2", "3.3", "4.2") and job.kind is FrameKind.NULL:
            raise SpecError(f"theorem: {thm} concerns spacelike curves")
        if thm == "3.4" and job.kind is FrameKind.SPACELIKE:
            raise SpecError("theorem: 3.4 concerns null curves")
        if thm == "3.2":
            rep = audit_spacelike_rectifying(trace, fd, g, s0, job.tol, gft=gft)
            c_est = rep.c_estimate
        elif thm == "3.3":
            if c_est is None:
                c_est = audit_spacelike_rectifying(trace, fd, g, s0, job.tol, gft=gft).c_estimate
            rep = hyperbolic_form_audit(gft, g, c_est, job.tol)
        elif thm == "3.4":
            rep = audit_null_rectifying(trace, fd, g, s0, job.tol, gft=gft)
        else:
            rep = audit_g_normal(trace, fd, g, s0, job.tol, gft=gft)
        write_audit_json(rep, out(f"audit_{thm}.json"))
        for ident in rep.identities:
            print(f"{thm} {ident.label} {ident.verdict.value} max={ident.max_residual:.3e}", file=stdout)
    return written


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        job = job_from_args(args)
        run_job(job)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        where = f" (node {exc.node})" if exc.node is not None else ""
        print(f"numeric failure: {exc}{where}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

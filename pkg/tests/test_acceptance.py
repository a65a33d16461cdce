"""Acceptance criteria 1-11, one test per criterion.

Every test logs a single ``criterion N: PASS|FAIL`` line with the measured
quantities, and the lines are repeated in the terminal summary.
"""
import math
import os
import subprocess
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

import curves
from ast_strategies import asts, central_difference, smooth_asts
from lcurve.audit import (Verdict, audit_g_normal, audit_null_rectifying, audit_spacelike_rectifying,
                          hyperbolic_form_audit)
from lcurve.coeffs import rectifying_coeffs_null, rectifying_coeffs_spacelike, system_residuals
from lcurve.errors import DomainError
from lcurve.expr import ScalarFn, differentiate, parse_scalar_fn, to_text
from lcurve.frenet import (CurvatureSpec, FrameKind, frame_residuals, frenet_from_trace, n_curvatures,
                           synthesize_from_curvatures)
from lcurve.gfield import g_position_vector, primitive_G
from lcurve.metric import CausalCharacter, causal_character, lorentz_inner
from lcurve.report import write_audit_json

SP, NULL = FrameKind.SPACELIKE, FrameKind.NULL
GOLDEN = Path(__file__).parent / "golden"
SEEDS = (0, 1, 2)
# an observed convergence order approaches its asymptotic value from either
# side, so "order >= 4" is read with this much estimator slack
ORDER_SLACK = 0.05


@contextmanager
def criterion(record, number):
    """Collect ``facts`` in the body; log PASS with them, or FAIL with the error."""
    facts = []
    try:
        yield facts
    except BaseException as exc:
        first = (str(exc).strip().splitlines() or [type(exc).__name__])[0]
        record(number, False, "; ".join(facts + [first[:160]]))
        raise
    record(number, True, "; ".join(facts))


def random_spec(seed, n, kind, step, s_range=(0.0, 2.0)):
    rng = np.random.default_rng(seed)
    sigs = curves.random_sigs(rng, n) if kind is SP else None
    return CurvatureSpec(curves.smooth_kappas(rng, n_curvatures(n, kind)), n, s_range, step, kind=kind, sigs=sigs)


def grid(a, b, h):
    return np.linspace(a, b, int(round((b - a) / h)) + 1)


def interior(a):
    k = len(a)
    return a[k // 10: 9 * k // 10]


def test_criterion_01_metric(acceptance):
    rng = np.random.default_rng(2024)
    total = 100_000
    dims = range(3, 9)
    worst_sym = worst_lin = 0.0
    flips = checked = 0
    with criterion(acceptance, 1) as facts:
        for k, n in enumerate(dims):
            m = total // len(dims) + (1 if k < total % len(dims) else 0)
            scale = 10.0 ** rng.uniform(-3, 3, (3, m, 1))
            x, y, z = rng.standard_normal((3, m, n)) * scale
            a, b = rng.standard_normal((2, m))
            nx, ny, nz = (np.linalg.norm(v, axis=1) for v in (x, y, z))
            sym = np.abs(lorentz_inner(x, y) - lorentz_inner(y, x)) / (nx * ny)
            mix = a[:, None] * x + b[:, None] * z
            left = lorentz_inner(mix, y) - (a * lorentz_inner(x, y) + b * lorentz_inner(z, y))
            right = lorentz_inner(y, mix) - (a * lorentz_inner(y, x) + b * lorentz_inner(y, z))
            bound = (np.abs(a) * nx + np.abs(b) * nz) * ny
            worst_sym = max(worst_sym, float(sym.max()))
            worst_lin = max(worst_lin, float((np.maximum(np.abs(left), np.abs(right)) / bound).max()))
            # scale invariance on generic, null and near-null vectors
            null = x.copy()
            null[:, 0] = np.linalg.norm(x[:, 1:], axis=1)
            near = null.copy()
            near[: m // 2, 0] *= 1 + 1e-6
            lam = 10.0 ** rng.uniform(-6, 6, m) * rng.choice([-1.0, 1.0], m)
            for batch in (x, null[:2000], near[:2000]):
                for v, c in zip(batch, lam):
                    checked += 1
                    flips += causal_character(c * v) is not causal_character(v)
            assert causal_character(null[0]) is CausalCharacter.NULL
        facts += [f"pairs={total}", f"symmetry={worst_sym:.2e}", f"bilinearity={worst_lin:.2e}",
                  f"scale flips={flips}/{checked}"]
        assert worst_sym <= 1e-12 and worst_lin <= 1e-12
        assert flips == 0


def test_criterion_02_frames(acceptance):
    with criterion(acceptance, 2) as facts:
        worst_res, worst_ratio = 0.0, math.inf
        for n in (3, 4, 5):
            for kind in (SP, NULL):
                for seed in SEEDS:
                    _, fd = synthesize_from_curvatures(random_spec(seed, n, kind, 1e-3))
                    worst_res = max(worst_res, float(frame_residuals(fd).max()))
                    # drift sits at roundoff for h = 1e-3, so its order is observed on coarse grids
                    d = [synthesize_from_curvatures(random_spec(seed, n, kind, h))[1].drift for h in (0.04, 0.02)]
                    worst_ratio = min(worst_ratio, d[0] / d[1])
        facts += [f"max frame residual={worst_res:.2e}", f"min drift ratio={worst_ratio:.1f}"]
        assert worst_res <= 1e-8
        assert worst_ratio >= 8


def test_criterion_03_round_trip(acceptance):
    with criterion(acceptance, 3) as facts:
        worst = 0.0
        for n in (3, 4, 5):
            for kind in (SP, NULL):
                for seed in SEEDS:
                    trace, fd = synthesize_from_curvatures(random_spec(seed, n, kind, 1e-3))
                    rec = frenet_from_trace(trace, kind)
                    ref = interior(fd.curvatures)
                    worst = max(worst, float((np.abs(interior(rec.curvatures) - ref) / np.abs(ref)).max()))
        facts.append(f"max relative curvature error={worst:.2e}")
        assert worst <= 1e-4


def test_criterion_04_g_field(acceptance):
    with criterion(acceptance, 4) as facts:
        C = []
        for h in (0.02, 0.01, 0.005):
            trace, fd = curves.circle(step=h)
            C.append(g_position_vector(trace, fd, "cos(s)").derivative_residual / h ** 2)
        facts.append(f"residual/h^2 in [{min(C):.3f}, {max(C):.3f}]")
        trace, fd, *_ = curves.rectifying4()
        disp = float(np.abs(g_position_vector(trace, fd, "1", 0.5).xi_g - (trace.points - trace.points[500])).max())
        facts.append(f"g=1 displacement error={disp:.2e}")
        hs = np.array([0.1, 0.05, 0.025, 0.0125])
        errs = np.array([abs(primitive_G("exp(s)", 0.0, grid(0, 1, h))[-1] - (math.e - 1)) for h in hs])
        order = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
        facts.append(f"quadrature order={order:.4f}")
        assert max(C) / min(C) < 1.1 and max(C) < 1.0
        assert disp <= 1e-9
        assert order >= 4 - ORDER_SLACK


def test_criterion_05_rectifying(acceptance):
    g = "1.3+0.4*cos(s)"
    with criterion(acceptance, 5) as facts:
        worst = 0.0
        for n in (3, 4, 5):
            for seed in SEEDS:
                _, fd = synthesize_from_curvatures(random_spec(seed, n, SP, 1e-3))
                prof = rectifying_coeffs_spacelike(fd, g)
                res = system_residuals(prof.frame_coeffs, fd, g)
                res[:, -1] -= prof.closure_residual
                worst = max(worst, float(np.abs(res).max()))
        facts.append(f"max system residual={worst:.2e}")
        held = []
        for make in curves.SPACELIKE_RECTIFYING.values():
            trace, fd, g_ex, s0, gft = make()
            rep = audit_spacelike_rectifying(trace, fd, g_ex, s0, gft=gft)
            held.append(rep["3.1-N"].verdict is Verdict.HOLDS and rep["thm3.2-item2"].verdict is Verdict.HOLDS)
        trace, fd = curves.circle()
        circle = audit_spacelike_rectifying(trace, fd, "1")["3.1-N"].verdict
        facts += [f"examples holding={sum(held)}/{len(held)}", f"circle={circle.value}"]
        assert worst <= 1e-6
        assert all(held)
        assert circle is Verdict.FAILS


def test_criterion_06_constancy(acceptance):
    with criterion(acceptance, 6) as facts:
        spreads = {}
        for name, make in curves.SPACELIKE_RECTIFYING.items():
            trace, fd, g, s0, gft = make()
            rep = audit_spacelike_rectifying(trace, fd, g, s0, gft=gft)
            spreads[f"3.9/{name}"] = rep["3.9"].max_residual
            assert isinstance(rep["3.6-literal"].verdict, Verdict)
        for name, make in curves.NULL_RECTIFYING.items():
            trace, fd, g, s0, gft = make()
            spreads[f"3.29/{name}"] = audit_null_rectifying(trace, fd, g, s0, gft=gft)["3.29"].max_residual
        facts.append(f"max spread={max(spreads.values()):.2e} over {len(spreads)} examples")
        assert max(spreads.values()) <= 1e-5


AUDIT_RUNS = ([(m, audit_spacelike_rectifying, "3.7-literal") for m in curves.SPACELIKE_RECTIFYING.values()]
              + [(m, audit_null_rectifying, "3.30-literal") for m in curves.NULL_RECTIFYING.values()]
              + [(curves.null4_c1, audit_null_rectifying, "3.30-literal")]
              + [(m, audit_g_normal, "4.6-literal") for m in curves.NORMAL.values()])


def test_criterion_07_expansion_and_verdicts(acceptance):
    with criterion(acceptance, 7) as facts:
        worst, verdicts = 0.0, {}
        for make, audit, literal in AUDIT_RUNS:
            found = []
            for h in (2e-3, 1e-3):
                trace, fd, g, s0, gft = make(step=h)
                rep = audit(trace, fd, g, s0, gft=gft)
                worst = max(worst, rep["orthogonal-expansion"].max_residual)
                found.append(rep[literal].verdict)
            assert isinstance(found[0], Verdict)
            assert found[0] is found[1], (make.__name__, literal, found)
            verdicts.setdefault(literal, set()).add(found[0].value)
        facts.append(f"max expansion residual={worst:.2e} over {2 * len(AUDIT_RUNS)} audits")
        facts += [f"{k}: {'/'.join(sorted(v))}" for k, v in sorted(verdicts.items())]
        assert worst <= 1e-9


def test_criterion_08_hyperbolic(acceptance):
    with criterion(acceptance, 8) as facts:
        for s_range in ((-1.5, -0.2), (-1.5, 0.5)):
            trace, fd, g, s0, gft = curves.rectifying3(s_range=s_range)
            c = audit_spacelike_rectifying(trace, fd, g, s0, gft=gft).c_estimate
            rep = hyperbolic_form_audit(gft, g, c)
            norm, trip = rep["3.15"].max_residual, rep["3.21-roundtrip"].max_residual
            recon, up = rep["3.23"].max_residual, rep["3.16"].max_residual
            facts.append(f"s in {list(rep.grid['range'])}: unit={norm:.1e} roundtrip={trip:.1e} "
                         f"recon={recon:.1e} upstream={up:.1e}")
            assert norm <= 1e-6
            assert trip <= 1e-9
            assert recon <= 10 * max(up, 1e-12)


def test_criterion_09_null_contradiction(acceptance):
    g = "0.7+0.2*s"
    with criterion(acceptance, 9) as facts:
        count, fails = 0, 0
        for nodes in range(4, 61):
            for n in (3, 4, 5):
                for c1 in (-1.0, 0.0, 0.5):
                    rng = np.random.default_rng(nodes * 31 + n)
                    spec = CurvatureSpec(curves.smooth_kappas(rng, n - 2), n, (0.0, 1.0), 1.0 / (nodes - 1),
                                         kind=NULL, drift_tol=1.0)
                    trace, fd = synthesize_from_curvatures(spec)
                    xi0 = rectifying_coeffs_null(fd, g, c1=c1).frame_coeffs[0] @ fd.frames[0]
                    rep = audit_null_rectifying(trace, fd, g, gft=g_position_vector(trace, fd, g, xi0=xi0))
                    count += 1
                    fails += rep["3.27b-literal"].verdict is Verdict.FAILS
        facts.append(f"3.27b-literal fails on {fails}/{count} grids (4..60 nodes, n=3..5)")
        assert fails == count


def test_criterion_10_parser(acceptance):
    with criterion(acceptance, 10) as facts:
        @settings(max_examples=1000, deadline=None, database=None)
        @given(asts)
        def round_trip(ast):
            assert parse_scalar_fn(to_text(ast)).ast == ast

        round_trip()
        facts.append("1000 fuzzed ASTs round-trip")

        @settings(max_examples=200, deadline=None, database=None, suppress_health_check=[HealthCheck.filter_too_much])
        @given(smooth_asts, st.integers(0, 2 ** 32 - 1))
        def derivative(ast, seed):
            f, df = ScalarFn.from_ast(ast), ScalarFn.from_ast(differentiate(ast))
            checked = 0
            for s in np.random.default_rng(seed).uniform(-2, 2, 50):
                try:
                    fd1, fd2, sym = central_difference(f, s, 1e-5), central_difference(f, s, 2e-5), df(s)
                except DomainError:
                    continue
                # near a singularity the two difference quotients disagree; skip those points
                if abs(fd1 - fd2) > 1e-6 * (1 + abs(fd1)) or abs(f(s)) > 1e4:
                    continue
                checked += 1
                assert abs(sym - fd1) <= 1e-5 * (1 + abs(sym)), (to_text(ast), s, sym, fd1)
            assume(checked > 0)

        derivative()
        facts.append("symbolic derivatives match finite differences within 1e-5")


def test_criterion_11_cli_determinism(acceptance, tmp_path):
    from test_cli import AUDIT_ARGS, hand_made_report

    env = dict(os.environ)
    env.pop("LCURVE_TOL", None)
    with criterion(acceptance, 11) as facts:
        runs = []
        for name in ("golden", "rerun"):
            proc = subprocess.run([sys.executable, "-m", "lcurve"] + AUDIT_ARGS + ["--out", name], cwd=tmp_path,
                                  env=env, capture_output=True, text=True, check=False)
            assert proc.returncode == 0, proc.stderr
            runs.append({p.name: p.read_bytes() for p in sorted((tmp_path / name).iterdir())})
        facts.append(f"{len(runs[0])} audit files byte-equal across two runs")
        assert runs[0] == runs[1] and len(runs[0]) == 2
        write_audit_json(hand_made_report(), tmp_path / "r.json")
        assert (tmp_path / "r.json").read_bytes() == (GOLDEN / "audit_report.json").read_bytes()
        facts.append("serializer matches stored golden")

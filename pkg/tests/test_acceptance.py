"""Acceptance gate: the nine criteria the package must meet.

Each test covers one numbered criterion and records a single
"criterion N: PASS/FAIL - label" line, echoed in the terminal summary.
Tolerances are pinned here and nowhere looser.
"""

import json
import math
import time
from contextlib import contextmanager

import numpy as np

from etaquad import (
    BoundSpec,
    DerivativeData,
    DifferenceMap,
    Domain,
    FAMILIES,
    PathSegment,
    PiecewiseSignMap,
    THEOREM_ORDER,
    abs_moment,
    beta_moment,
    bound,
    check_hh_classical,
    check_preinvex,
    corrected_trapezoid,
    holder_weighted_moment,
    integrate,
    integrate_certified,
    moment_c1,
    moment_c2,
    parse,
    run_inequality_suite,
    true_error,
    verify_identity,
)
from etaquad.cli import run as cli_run

IDENTITY_ANCHOR_ABS = 1e-10
IDENTITY_REL = 1e-9
CUBIC_REL = 1e-12
MOMENT_ABS = 1e-10
RATIO_SLACK = 1e-9
DOMINANCE_REL = 1e-12
T33_RATIO_REL = 1e-12
CERT_SLOPE_WINDOW = (-3.1, -2.9)
MEAN_ABS = 1e-9

CRITERION_LINES = []


@contextmanager
def criterion(number, label):
    try:
        yield
    except BaseException:
        line = f"criterion {number}: FAIL - {label}"
        CRITERION_LINES.append(line)
        print(line)
        raise
    else:
        line = f"criterion {number}: PASS - {label}"
        CRITERION_LINES.append(line)
        print(line)


def test_criterion_1_identity():
    with criterion(1, "remainder identity: quartic anchor + 250 random instances"):
        start = time.perf_counter()
        rep = verify_identity(parse("pow(x,4)"), PathSegment(0.0, 1.0))
        assert abs(rep.lhs - 1.0 / 30.0) <= IDENTITY_ANCHOR_ABS
        assert abs(rep.rhs - 1.0 / 30.0) <= IDENTITY_ANCHOR_ABS
        assert rep.passed

        rng = np.random.Generator(np.random.Philox(101))
        draws = [("poly6", 200), ("exp", 50)]
        for name, count in draws:
            fam = FAMILIES[name]
            for _ in range(count):
                f, b, h = fam.build(fam.sample(rng))
                rep = verify_identity(f, PathSegment(b, h))
                assert abs(rep.lhs - rep.rhs) <= IDENTITY_REL * max(1.0, abs(rep.lhs))
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"identity corpus took {elapsed:.2f}s"


def test_criterion_2_cubic_exactness():
    with criterion(2, "corrected trapezoid exact on 100 random cubics"):
        rng = np.random.Generator(np.random.Philox(103))
        for _ in range(100):
            c = [float(v) for v in rng.uniform(-4.0, 4.0, size=4)]
            f = parse(
                f"({c[0]!r}) + ({c[1]!r})*x + ({c[2]!r})*pow(x,2) + ({c[3]!r})*pow(x,3)"
            )
            b = float(rng.uniform(-2.0, 2.0))
            h = float(rng.uniform(0.3, 1.5)) * (1.0 if rng.uniform() < 0.5 else -1.0)
            seg = PathSegment(b, h)
            q_value = corrected_trapezoid(f, seg)
            lo, hi = seg.b, seg.end
            exact = sum(c[k] * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1) for k in range(4))
            assert abs(q_value - exact) <= CUBIC_REL * max(1.0, abs(exact))


def _quad01(fn):
    left, _ = integrate(fn, 0.0, 0.5, tol=1e-13)
    right, _ = integrate(fn, 0.5, 1.0, tol=1e-13)
    return left + right


def test_criterion_3_moment_constants():
    with criterion(3, "kernel moment constants match the quadrature oracle"):
        got = _quad01(lambda t: t * (1 - t) * np.abs(2 * t - 1))
        assert abs(got - moment_c1()) <= MOMENT_ABS and moment_c1() == 1.0 / 16.0
        got = _quad01(lambda t: t * t * (1 - t) * np.abs(2 * t - 1))
        assert abs(got - moment_c2()) <= MOMENT_ABS and moment_c2() == 1.0 / 32.0
        for p in (2.0, 3.0, 7.5):
            got = _quad01(lambda t: t * (1 - t) * np.abs(2 * t - 1) ** p)
            assert abs(got - holder_weighted_moment(p)) <= MOMENT_ABS
            assert abs(got - 1.0 / (2.0 * (p + 1.0) * (p + 3.0))) <= MOMENT_ABS
        for p in (1.0, 2.0, 3.5):
            got = _quad01(lambda t: (t - t * t) ** p)
            closed = (
                2.0 ** (-1.0 - 2.0 * p)
                * math.sqrt(math.pi)
                * math.exp(math.lgamma(1.0 + p) - math.lgamma(1.5 + p))
            )
            assert abs(got - beta_moment(p)) <= MOMENT_ABS
            assert abs(got - closed) <= MOMENT_ABS
        for q in (1.0, 2.0, 5.0):
            got = _quad01(lambda t: t * np.abs(2 * t - 1) ** q)
            assert abs(got - abs_moment(q)) <= MOMENT_ABS
            assert abs(got - 1.0 / (2.0 * (q + 1.0))) <= MOMENT_ABS


def test_criterion_4_inequality_validity():
    with criterion(4, "0 violations across >=1000 gated trials per bound"):
        start = time.perf_counter()
        specs = [BoundSpec(t, 2.0) for t in THEOREM_ORDER]
        rep = run_inequality_suite("exp", specs, trials=1100, seed=41)
        assert rep.violations == 0
        for entry in rep.table:
            assert entry["hypothesis_passed"] >= 1000, entry
            assert entry["violations"] == 0
        extra = run_inequality_suite("poly6", specs, trials=600, seed=43)
        assert extra.violations == 0

        # quartic anchor: segment straddling the origin symmetrically
        f = parse("pow(x,4)")
        seg = PathSegment(-1.0, 2.0)
        integral, _ = integrate(f.value, seg.b, seg.end, tol=1e-12)
        lhs = abs(integral - corrected_trapezoid(f, seg))
        c21 = bound(BoundSpec("C2.1", 1.0), seg.h, DerivativeData.from_function(f, seg.end, seg.b))
        assert abs(lhs / c21.value - 8.0 / 15.0) <= RATIO_SLACK
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"campaigns took {elapsed:.2f}s"


def test_criterion_5_dominance():
    with criterion(5, "power-mean bounds never exceed their max-form pairs"):
        rng = np.random.Generator(np.random.Philox(107))
        pairs = (("T2.1", "T3.1"), ("T2.2", "T3.2"), ("T2.3", "T3.3"))
        for _ in range(10_000):
            h = float(rng.uniform(0.05, 2.0))
            d = DerivativeData(float(rng.uniform(0.0, 50.0)), float(rng.uniform(0.0, 50.0)))
            q = float(rng.uniform(1.001, 10.0))
            for t2, t3 in pairs:
                lo = bound(BoundSpec(t2, q), h, d).value
                hi = bound(BoundSpec(t3, q), h, d).value
                assert lo <= hi * (1.0 + DOMINANCE_REL)
        for _ in range(200):
            v = float(rng.uniform(0.0, 50.0))
            d = DerivativeData(v, v)
            q = float(rng.uniform(1.0, 10.0))
            h = float(rng.uniform(0.05, 2.0))
            assert bound(BoundSpec("T2.1", q), h, d).value == bound(BoundSpec("T3.1", q), h, d).value


def test_criterion_6_t33_slack():
    with criterion(6, "printed/tight T3.3 ratio is 2^(1/p)"):
        d = DerivativeData(2.0, 3.0)
        for p in (1.5, 2.0, 4.0):
            q = p / (p - 1.0)
            spec = BoundSpec("T3.3", q)
            printed = bound(spec, 1.2, d).value
            tight = bound(spec, 1.2, d, tight=True).value
            assert abs(printed / tight - 2.0 ** (1.0 / p)) <= T33_RATIO_REL * 2.0 ** (1.0 / p)


def test_criterion_7_certified_quadrature():
    with criterion(7, "certificate decays at cubic order and stays sound"):
        start = time.perf_counter()
        f = parse("exp(x)")
        seg = PathSegment(0.0, 1.0)
        ns = [8, 16, 32, 64, 128, 256, 512, 1024]
        certs, errs = [], []
        for n in ns:
            res = integrate_certified(f, seg, fixed_n=n)
            err = abs(true_error(f, res))
            assert err <= res.certificate
            certs.append(res.certificate)
            errs.append(max(err, 1e-300))
        log_n = np.log(np.asarray(ns, dtype=float))
        cert_slope = float(np.polyfit(log_n, np.log(certs), 1)[0])
        err_slope = float(np.polyfit(log_n, np.log(errs), 1)[0])
        assert CERT_SLOPE_WINDOW[0] <= cert_slope <= CERT_SLOPE_WINDOW[1], cert_slope
        assert err_slope <= -3.0, err_slope
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"convergence sweep took {elapsed:.2f}s"


def test_criterion_8_hypothesis_checker():
    with criterion(8, "sign-map preinvexity for -|x| and the classical chain"):
        f = parse("0 - abs(x)")
        dom = Domain(-2.0, 2.0)
        rep = check_preinvex(f, PiecewiseSignMap(), dom)
        assert rep.passed

        rep = check_preinvex(f, DifferenceMap(), dom)
        assert not rep.passed and rep.witness is not None
        u, v, t = rep.witness
        path = v + t * (u - v)
        chord = t * f.value(u) + (1.0 - t) * f.value(v)
        assert f.value(path) > chord + 1e-9  # the witness certifies itself

        hh = check_hh_classical(parse("pow(x,2)"), 0.0, 2.0)
        assert hh.passed
        integral, _ = integrate(lambda x: x * x, 0.0, 2.0, tol=1e-12)
        assert abs(integral / 2.0 - 4.0 / 3.0) <= MEAN_ABS


def test_criterion_9_reproducibility(tmp_path):
    with criterion(9, "seeded suite reruns are byte-identical"):
        out = tmp_path / "suite.json"
        argv = ["suite", "--seed", "7", "--out", str(out)]
        assert cli_run(list(argv)) == 0
        first = out.read_bytes()
        assert cli_run(list(argv)) == 0
        assert out.read_bytes() == first
        report = json.loads(first)
        assert report["config"]["seed"] == 7
        assert report["result"]["violations"] == 0

"""Acceptance checks, one test per shipped guarantee.

Each test states a user-facing promise of the library and verifies it
end to end at the published tolerance.  Every test runs in seconds.
"""

import math
import random

from alphacut import (alpha_cut, check_smoother_conditions, class_membership,
                      classify_points, convolve, default_schedule, family,
                      left_deriv, lipschitz_estimate, membership,
                      preservation_report, right_deriv, scale, strong_cut,
                      sup_metric, synthesize_smoother, validate,
                      verify_smoothness, approximate, FuzzyNum,
                      SmootherFamilySpec)
from alphacut.convolve import EndpointSpec, predicted_derivative

import oracles
from conftest import EXAMPLE_NAMES, load_fixture
from conftest import _curve_from_plan

ROOT_HALF = math.sqrt(0.5)


def w_unit():
    return family(SmootherFamilySpec("parabola", p=1.0))


def test_criterion_01_one_sided_slopes_at_the_smoothed_kink():
    """The asymmetric kink convolved with the unit parabola keeps one
    nondifferentiable point; both one-sided slopes there have closed
    forms, and the numeric probe agrees with the symbolic route."""
    g = convolve(load_fixture("asymmetric-kink"), w_unit())
    x0 = -ROOT_HALF
    want_left = 2.0 - math.sqrt(2.0)
    want_right = (4.0 - math.sqrt(2.0)) / 7.0

    sym_left = left_deriv(g, x0)
    sym_right = right_deriv(g, x0)
    assert sym_left.is_finite() and sym_right.is_finite()
    assert abs(sym_left.value - want_left) <= 1e-9
    assert abs(sym_right.value - want_right) <= 1e-9

    mu = lambda t: membership(g, t)
    num_left = oracles.richardson_one_sided(mu, x0, "left")
    num_right = oracles.richardson_one_sided(mu, x0, "right")
    assert abs(num_left - want_left) <= 1e-4
    assert abs(num_right - want_right) <= 1e-4

    rep = verify_smoothness(g)
    assert not rep.overall
    assert any(abs(p.x - x0) <= 1e-9 for p in rep.failures)


def test_criterion_02_split_peak_kinks_sit_at_root_half():
    """Smoothing the split peak leaves kinks exactly at +-sqrt(0.5) and
    nowhere else on a thousand-point probe grid."""
    g = convolve(load_fixture("split-peak"), w_unit())
    rep = verify_smoothness(g, grid=1000)
    assert not rep.overall
    xs = sorted(p.x for p in rep.failures)
    assert len(xs) == 2
    assert abs(xs[0] + ROOT_HALF) <= 1e-6
    assert abs(xs[1] - ROOT_HALF) <= 1e-6


def test_criterion_03_plateau_convolution_matches_closed_form():
    """Cuts of the smoothed plateau-quadratic match the closed form."""
    g = convolve(load_fixture("plateau-quadratic"), w_unit())
    for k in range(11):
        a = k / 10
        lo, hi = oracles.conv_plateau_quadratic_w1_cut(a)
        iv = alpha_cut(g, a)
        assert abs(iv.lo - lo) <= 1e-12
        assert abs(iv.hi - hi) <= 1e-12


def test_criterion_04_reciprocal_family_converges_like_one_over_n():
    """d(u conv v_n, u) <= 1/n at every certified step, n = 1..100."""
    u = load_fixture("plateau-quadratic")
    w = w_unit()
    for n in range(1, 101):
        v = scale(1.0 / n, w)
        d, gap = sup_metric(convolve(u, v), u)
        assert d <= 1.0 / n + gap, (n, d, gap)


def test_criterion_05_synthesized_bound_holds_for_all_targets():
    """The measured distance never exceeds the support-reach bound."""
    for name in EXAMPLE_NAMES:
        u = load_fixture(name)
        for p in (1.0, 0.5, 0.1, 0.01):
            w = synthesize_smoother(u, p)
            bound = max(abs(w.support.lo), abs(w.support.hi))
            d, gap = sup_metric(convolve(u, w), u)
            assert d <= bound + 1e-9, (name, p, d, bound)


def test_criterion_06_checker_calibration_on_known_pairs():
    """Four known target/smoother pairs get exactly the known verdicts."""
    rep = check_smoother_conditions(load_fixture("triangle"),
                                    load_fixture("clipped-parabola"))
    assert "i" in rep.failing()
    assert rep.theorem == "none"

    rep = check_smoother_conditions(load_fixture("asymmetric-kink"), w_unit())
    assert rep.failing() == ["iv-1"]
    assert rep.theorem == "none"

    rep = check_smoother_conditions(load_fixture("asymmetric-kink"),
                                    load_fixture("sine-bridge"))
    assert rep.failing() == []
    assert rep.theorem == "continuous"

    rep = check_smoother_conditions(
        load_fixture("triangle"),
        family(SmootherFamilySpec("parabola", p=0.7)))
    assert rep.failing() == []
    assert rep.theorem == "differentiable-branches"


# largest membership slope of each stored fixture, for grid tolerances
SLOPE_CAP = {
    "triangle": 1.0, "parabola": 2.0, "plateau-quadratic": 2.0,
    "asymmetric-kink": 2.0, "tail-jump": 1.0, "split-peak": 2.0,
    "sine-bridge": 2.0, "cosine-tail": 2.0,
}

SUPMIN_PAIRS = [
    ("plateau-quadratic", "parabola"),
    ("asymmetric-kink", "sine-bridge"),
    ("tail-jump", "triangle"),
    ("split-peak", "cosine-tail"),
    ("triangle", "parabola"),
]


def test_criterion_07_membership_matches_brute_force_supmin():
    """Exact convolution membership agrees with a 10^4-point brute-force
    sup-min scan at 100 random abscissae per pair, within a grid step."""
    n = 10001
    for a, b in SUPMIN_PAIRS:
        u, v = load_fixture(a), load_fixture(b)
        w = convolve(u, v)
        fu, fv = oracles.MEMBERSHIPS[a], oracles.MEMBERSHIPS[b]
        usup = u.support
        step = usup.width / (n - 1)
        slack = max(SLOPE_CAP[a], SLOPE_CAP[b]) * step + 1e-9
        rng = random.Random(hash((a, b)) & 0xffff)
        for _ in range(100):
            x = w.support.lo + rng.random() * w.support.width
            got = membership(w, x)
            brute = oracles.grid_supmin(fu, (usup.lo, usup.hi), fv, x, n=n)
            assert brute - 1e-9 <= got <= brute + slack, (a, b, x)


def test_criterion_08_predicted_slopes_match_measured_slopes():
    """At least 50 qualifying endpoint specs across fixture pairs give a
    prediction, and every prediction matches the measured slope."""
    rng = random.Random(41)
    names = EXAMPLE_NAMES + ["parabola", "sine-bridge", "cosine-tail"]
    levels = [k / 20 for k in range(21)]
    checked = 0
    for _ in range(400):
        u = load_fixture(rng.choice(names))
        v = load_fixture(rng.choice(names))
        spec = EndpointSpec(rng.choice(("left", "right")),
                            rng.choice(("cut", "strong-cut")),
                            rng.choice(levels))
        side = rng.choice(("left", "right"))
        got = predicted_derivative(u, v, spec, side)
        if got is None:
            continue
        g = convolve(u, v)
        curve = g.left if spec.branch == "left" else g.right
        x = (curve.value(spec.level) if spec.kind == "cut"
             else curve.strong_value(spec.level))
        meas = left_deriv(g, x) if side == "left" else right_deriv(g, x)
        assert abs(got.value - meas.value) <= 1e-6 * (1.0 + abs(got.value))
        checked += 1
    assert checked >= 50


def test_criterion_09_core_and_lipschitz_survive_the_schedule():
    """Core-shifted smoothers keep the core exact at every step and the
    step constants stay under the scaled smoother constant."""
    schedule = default_schedule(6)
    for name in ("triangle", "plateau-quadratic", "asymmetric-kink"):
        u = load_fixture(name)
        w = synthesize_smoother(u, 1.0, preserve_core=True)
        steps, _ = approximate(u, w, schedule, verify=False)
        ucore = u.core
        for step in steps:
            assert step.core.lo == ucore.lo
            assert step.core.hi == ucore.hi
        pres = preservation_report(u, steps, w, schedule)
        assert pres.premises_hold
        assert pres.core_preserved
        assert pres.lipschitz_ok
        k_w = lipschitz_estimate(w)
        for row, p in zip(pres.rows, schedule):
            assert row["k_step"] <= k_w / p + 1e-6


_KNOTS = (0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875)
_SLOPES = (0.25, 0.5, 1.0, 2.0)
_GAPS = (0.0, 0.0, 0.5, 1.0)


def _random_plan(rng):
    inner = sorted(rng.sample(_KNOTS, rng.randint(0, 2)))
    knots = [0.0] + inner + [1.0]
    segs = []
    for i in range(len(knots) - 1):
        kind = rng.choice(("move", "move", "move", "const"))
        slope = rng.choice(_SLOPES) if kind == "move" else 0.0
        gap = rng.choice(_GAPS) if i > 0 else 0.0
        segs.append((knots[i], knots[i + 1], slope, gap))
    return segs


def _random_fuzzy(rng):
    lplan, rplan = _random_plan(rng), _random_plan(rng)
    start = rng.choice((-2.0, -1.0, 0.0, 1.0))
    left, ltop = _curve_from_plan(lplan, start, 1.0)
    corew = rng.choice((0.0, 0.0, 0.5))
    rise = sum(gap + slope * (hi - lo) for lo, hi, slope, gap in rplan)
    right, _ = _curve_from_plan(rplan, ltop + corew + rise, -1.0)
    return FuzzyNum(left, right, name="random")


def test_criterion_10_randomized_invariants_hold_in_bulk():
    """The structural invariants hold on at least 50 random piecewise
    fuzzy numbers with at most 6 singular points each."""
    rng = random.Random(2026)
    tri = load_fixture("triangle")
    levels = [k / 8 for k in range(9)]
    accepted = 0
    attempts = 0
    while accepted < 60 and attempts < 400:
        attempts += 1
        fz = _random_fuzzy(rng)
        if len(classify_points(fz)) > 6:
            continue
        accepted += 1

        assert validate(fz).ok
        prev = alpha_cut(fz, 0.0)
        for a in levels[1:]:
            cur = alpha_cut(fz, a)
            assert prev.lo <= cur.lo <= cur.hi <= prev.hi
            sv = strong_cut(fz, a)
            assert cur.lo <= sv.lo <= sv.hi <= cur.hi
            prev = cur

        w = convolve(fz, tri)
        for a in levels:
            cf, ct, cw = (alpha_cut(fz, a), alpha_cut(tri, a),
                          alpha_cut(w, a))
            assert cw.lo == cf.lo + ct.lo
            assert cw.hi == cf.hi + ct.hi

        flags = class_membership(fz)
        if flags.in_FT:
            assert flags.in_FN
        if flags.in_FD:
            assert flags.in_FC
    assert accepted >= 50

"""Shared fixtures and random fuzzy-number strategies."""

import functools
import os

import pytest
from hypothesis import HealthCheck, assume, settings, strategies as st

from alphacut import (CutCurve, FuzzyNum, Segment, classify_points,
                      validate)
from alphacut.cli import load_document

settings.register_profile(
    "ci",
    max_examples=50,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow,
                           HealthCheck.filter_too_much,
                           HealthCheck.data_too_large],
)
settings.load_profile("ci")

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), "fixtures")

FIXTURE_NAMES = [
    "triangle",
    "parabola",
    "clipped-parabola",
    "plateau-quadratic",
    "split-peak",
    "asymmetric-kink",
    "tail-jump",
    "sine-bridge",
    "cosine-tail",
    "point",
]

# the u fuzzy numbers of the four worked examples plus the double peak
EXAMPLE_NAMES = ["triangle", "plateau-quadratic", "asymmetric-kink",
                 "tail-jump", "split-peak"]

SMOOTH_NAMES = ["parabola", "sine-bridge", "cosine-tail"]


@functools.lru_cache(maxsize=None)
def load_fixture(name):
    return load_document(os.path.join(FIXTURE_DIR, name + ".fz"))


@pytest.fixture(scope="session")
def fixtures():
    return {n: load_fixture(n) for n in FIXTURE_NAMES}


# --- randomized piecewise fuzzy numbers ---------------------------------
#
# Cut curves are assembled directly from affine segments on a dyadic
# level grid.  Moving segments give sloped membership, constant runs
# give membership jumps, junction gaps give membership plateaus.  All
# arithmetic stays float-exact, and every draw keeps at most a handful
# of singular points.

_KNOTS = (0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875)
_SLOPES = (0.25, 0.5, 1.0, 2.0)
_GAPS = (0.0, 0.0, 0.5, 1.0)


@st.composite
def _branch_plan(draw, allow_flat):
    inner = draw(st.lists(st.sampled_from(_KNOTS), unique=True,
                          min_size=0, max_size=2))
    knots = [0.0] + sorted(inner) + [1.0]
    segs = []
    for i in range(len(knots) - 1):
        if allow_flat:
            kind = draw(st.sampled_from(("move", "move", "move", "const")))
        else:
            kind = "move"
        slope = draw(st.sampled_from(_SLOPES)) if kind == "move" else 0.0
        gap = draw(st.sampled_from(_GAPS)) if (allow_flat and i > 0) else 0.0
        segs.append((knots[i], knots[i + 1], slope, gap))
    return segs


def _curve_from_plan(plan, start, sign):
    x = float(start)
    segs = []
    for lo, hi, slope, gap in plan:
        x += sign * gap
        if slope == 0.0:
            segs.append(Segment(lo, hi, "%r" % x, "const"))
        else:
            rate = sign * slope
            text = "%r + %r*(a - %r)" % (x, rate, lo)
            segs.append(Segment(lo, hi, text,
                                "inc" if sign > 0 else "dec"))
            x += rate * (hi - lo)
    return CutCurve(segs), x


def _plan_drop(plan):
    total = 0.0
    for _, _, slope, gap in plan:
        total += gap + slope  # upper bound; widths are at most 1
    return total


@st.composite
def fuzzy_numbers(draw, allow_flat=True):
    """A random valid fuzzy number with few singular points."""
    lplan = draw(_branch_plan(allow_flat))
    rplan = draw(_branch_plan(allow_flat))
    start = draw(st.sampled_from((-2.0, -1.0, 0.0, 1.0)))
    left, ltop = _curve_from_plan(lplan, start, 1.0)
    corew = draw(st.sampled_from((0.0, 0.0, 0.5)))
    rise = sum(gap + slope * (hi - lo) for lo, hi, slope, gap in rplan)
    right, _ = _curve_from_plan(rplan, ltop + corew + rise, -1.0)
    fz = FuzzyNum(left, right, name="random")
    assert validate(fz).ok
    assume(len(classify_points(fz)) <= 6)
    return fz


@st.composite
def fuzzy_pairs(draw, allow_flat=True):
    return (draw(fuzzy_numbers(allow_flat)), draw(fuzzy_numbers(allow_flat)))

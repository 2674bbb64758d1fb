"""Sup-min convolution as exact cut addition, scaling, and predictions.

The convolution of two fuzzy numbers adds their cut curves level by
level, so the implementation merges the two segment partitions and
adds segment functions symbolically.  The derivative predictor only
answers when a slope-combination rule applies; it refuses otherwise
instead of extrapolating.
"""

import math

from .calculus import ExtendedSlope, _as_left_slope, _as_right_slope
from .cutcore import expr as ex
from .cutcore.curve import (CutCurve, ExprFn, FuzzyNum, Segment, fn_add,
                            fn_scale, membership, validate)
from .errors import StructuralError

TOL = 1e-9


class EndpointSpec:
    """Addresses one cut endpoint: branch, cut kind, and level."""

    def __init__(self, branch, kind, level):
        if branch not in ("left", "right"):
            raise ValueError("branch must be 'left' or 'right'")
        if kind not in ("cut", "strong-cut"):
            raise ValueError("kind must be 'cut' or 'strong-cut'")
        level = float(level)
        if not 0.0 <= level <= 1.0:
            raise ValueError("level %r outside [0, 1]" % (level,))
        self.branch = branch
        self.kind = kind
        self.level = level

    def __repr__(self):
        return "EndpointSpec(%s, %s, %r)" % (
            self.branch, self.kind, self.level)


def crisp_point(x):
    """The crisp fuzzy number sitting at a single abscissa."""
    x = float(x)
    left = CutCurve([Segment(0.0, 1.0, ExprFn(ex.const(x)), "const")])
    right = CutCurve([Segment(0.0, 1.0, ExprFn(ex.const(x)), "const")])
    return FuzzyNum(left, right, name="point(%r)" % (x,))


def _segment_at(curve, a, b):
    """The segment of curve covering the open interval (a, b)."""
    mid = 0.5 * (a + b)
    for s in curve.segments:
        if s.lo <= mid <= s.hi and s.width > 0.0:
            return s
    raise StructuralError("no segment covers (%r, %r)" % (a, b))


def _merge_curves(cu, cv, rising):
    knots = sorted({0.0, 1.0}
                   | {s.lo for s in cu.segments} | {s.hi for s in cu.segments}
                   | {s.lo for s in cv.segments} | {s.hi for s in cv.segments})
    segs = []
    for a, b in zip(knots, knots[1:]):
        if b <= a:
            continue
        su = _segment_at(cu, a, b)
        sv = _segment_at(cv, a, b)
        moving = "inc" if rising else "dec"
        mono = moving if moving in (su.mono, sv.mono) else "const"
        segs.append(Segment(a, b, fn_add(su.fn, sv.fn), mono))
    return CutCurve(segs)


def convolve(u, v):
    """Sup-min convolution by exact levelwise cut addition."""
    left = _merge_curves(u.left, v.left, True)
    right = _merge_curves(u.right, v.right, False)
    out = FuzzyNum(left, right)
    rep = validate(out)
    if not rep.ok:
        raise StructuralError(
            "convolution violated representation conditions %s"
            % (rep.failures(),))
    return out


def _flip_curve(curve, r):
    """Scale a curve by a negative factor, reversing its direction."""
    swap = {"inc": "dec", "dec": "inc", "const": "const"}
    return CutCurve([
        Segment(s.lo, s.hi, fn_scale(r, s.fn), swap[s.mono], s.own_right)
        for s in curve.segments])


def scale(r, v):
    """Scalar multiple of a fuzzy number; r = 0 collapses to a point."""
    r = float(r)
    if r == 0.0:
        return crisp_point(0.0)
    if r > 0.0:
        return FuzzyNum(v.left.scaled(r), v.right.scaled(r))
    return FuzzyNum(_flip_curve(v.right, r), _flip_curve(v.left, r))


def _component_endpoint(fz, spec):
    curve = fz.left if spec.branch == "left" else fz.right
    if spec.kind == "cut":
        return curve.value(spec.level)
    return curve.strong_value(spec.level)


def endpoint_value(u, v, spec):
    """Membership of the convolution at the summed cut endpoint."""
    return min(membership(u, _component_endpoint(u, spec)),
               membership(v, _component_endpoint(v, spec)))


def _outer_limit_on_branch(fz, spec_branch, x):
    """Membership limit approaching x from outside the number."""
    from .cutcore.curve import _scan_left, _scan_right
    if spec_branch == "left":
        return _scan_left(fz.left, x, True)
    return _scan_right(fz.right, x, True)


def _const_above(curve, q):
    """True when the curve is constant on a level neighborhood above q."""
    if q >= 1.0:
        return False
    for s in curve.segments:
        if s.hi > q:
            return s.mono == "const"
    return False


def _predict_outward(u, v, q, branch):
    """Slope on the approach side away from the core (clean side)."""
    cu = u.left if branch == "left" else u.right
    cv = v.left if branch == "left" else v.right
    conv = _as_left_slope if branch == "left" else _as_right_slope
    if q <= 0.0:
        return None
    if _const_above(cu, q) and _const_above(cv, q):
        # both factors flat just above q: the summed endpoint carries a
        # membership jump, so there is no finite one-sided slope there
        return None
    du = cu.deriv_below(q)
    dv = cv.deriv_below(q)
    if math.isinf(du) or math.isinf(dv):
        return 0.0
    if du == 0.0 and dv == 0.0:
        return None
    if du == 0.0 or dv == 0.0:
        # pass-through needs the flat factor to be a genuine jump
        jumper, other_d = (u, dv) if du == 0.0 else (v, du)
        jc = jumper.left if branch == "left" else jumper.right
        lam = _outer_limit_on_branch(jumper, branch, jc.value(q))
        if q - lam > TOL:
            return conv(other_d)
        return None
    return conv(du + dv)


def _predict_inward(u, v, q, branch):
    """Slope on the core side, gated by endpoint membership values."""
    cu = u.left if branch == "left" else u.right
    cv = v.left if branch == "left" else v.right
    conv = _as_left_slope if branch == "left" else _as_right_slope
    if q >= 1.0:
        return None
    if (abs(cu.right_limit(q) - cu.value(q)) > TOL
            or abs(cv.right_limit(q) - cv.value(q)) > TOL):
        # a cut jump in either factor lays a constant membership run on
        # the core side of the summed endpoint
        return conv(0.0)
    mu = membership(u, cu.value(q))
    mv = membership(v, cv.value(q))
    u_attains = abs(mu - q) <= TOL
    v_attains = abs(mv - q) <= TOL
    if u_attains and v_attains:
        du = cu.deriv_above(q)
        dv = cv.deriv_above(q)
        if math.isinf(du) or math.isinf(dv):
            return 0.0
        if du == 0.0 or dv == 0.0:
            return None
        return conv(du + dv)
    if u_attains and mv > q + TOL:
        d = cu.deriv_above(q)
        if math.isinf(d):
            return 0.0
        if d == 0.0:
            return None
        return conv(d)
    if v_attains and mu > q + TOL:
        d = cv.deriv_above(q)
        if math.isinf(d):
            return 0.0
        if d == 0.0:
            return None
        return conv(d)
    return None


def _predict_strong(u, v, spec, side):
    q = spec.level
    branch = spec.branch
    cu = u.left if branch == "left" else u.right
    cv = v.left if branch == "left" else v.right
    outward_side = "left" if branch == "left" else "right"
    if side == outward_side:
        # approaching the strong endpoint from outside: a cut jump in
        # either factor lays a constant membership run on that side
        if q >= 1.0:
            return None
        ju = abs(cu.right_limit(q) - cu.value(q)) > TOL
        jv = abs(cv.right_limit(q) - cv.value(q)) > TOL
        if ju or jv:
            return 0.0
        return None
    # core side of the strong endpoint
    if q >= 1.0:
        return None
    mu = membership(u, cu.strong_value(q))
    mv = membership(v, cv.strong_value(q))
    if abs(mu - q) <= TOL and abs(mv - q) <= TOL:
        du = cu.deriv_above(q)
        dv = cv.deriv_above(q)
        if math.isinf(du) or math.isinf(dv):
            return 0.0
        if du == 0.0 or dv == 0.0:
            return None
        conv = _as_left_slope if branch == "left" else _as_right_slope
        return conv(du + dv)
    return None


def predicted_derivative(u, v, spec, side):
    """Predicted one-sided slope of convolve(u, v) at a cut endpoint.

    Returns an ExtendedSlope when a combination rule applies, or None
    when no rule covers the configuration.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    q = spec.level
    branch = spec.branch
    if spec.kind == "strong-cut":
        val = _predict_strong(u, v, spec, side)
        return None if val is None else ExtendedSlope(val, side)
    outward_side = "left" if branch == "left" else "right"
    if side == outward_side:
        val = _predict_outward(u, v, q, branch)
    else:
        val = _predict_inward(u, v, q, branch)
    return None if val is None else ExtendedSlope(val, side)

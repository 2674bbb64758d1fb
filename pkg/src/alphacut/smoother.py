"""Smoother candidates: condition checks, stock families, synthesis.

A smoother is a fuzzy number w whose convolution with u removes the
non-differentiable points of u.  The checker evaluates the zero-slope
conditions that the supporting results require, names the weakest
result whose premises hold, and reports every verdict.  The
synthesizer builds a smoother from half-cosine membership steps whose
knots sit exactly at the levels u makes dangerous.
"""

import math

from .calculus import class_membership, classify_points, singular_at
from .cutcore import expr as ex
from .cutcore.build import _unit_affine, from_membership_pieces
from .cutcore.curve import (CutCurve, ExprFn, FuzzyNum, Segment,
                            _scan_left, _scan_right, membership)
from .errors import SmootherConditionError

TOL = 1e-9

CONDITION_KEYS = ("i", "ii-1", "ii-2", "iii-1", "iii-2",
                  "iv-1", "iv-2", "v-1", "v-2")

THEOREMS = ("differentiable-branches", "continuous", "general", "none")


class ConditionReport:
    """Verdicts for the smoother conditions plus the applicable result.

    theorem names the weakest guarantee whose premises hold:
    'differentiable-branches' when u has differentiable branch
    membership, 'continuous' when u is merely continuous, 'general'
    for any u, 'none' when some required condition fails.
    """

    def __init__(self):
        self.conditions = {
            k: {"verdict": "not-applicable", "levels": ()}
            for k in CONDITION_KEYS}
        self.theorem = "none"
        self.candidate_in_FD = False

    def set(self, key, verdict, levels=()):
        self.conditions[key] = {"verdict": verdict,
                                "levels": tuple(levels)}

    def verdict(self, key):
        return self.conditions[key]["verdict"]

    def passes(self, *keys):
        return all(self.verdict(k) != "fail" for k in keys)

    def failing(self):
        return [k for k in CONDITION_KEYS if self.verdict(k) == "fail"]

    def lines(self):
        out = []
        for k in CONDITION_KEYS:
            c = self.conditions[k]
            if c["levels"]:
                lv = ", ".join("%.17g" % v for v in c["levels"])
                out.append("%-6s %s (level %s)" % (k, c["verdict"], lv))
            else:
                out.append("%-6s %s" % (k, c["verdict"]))
        out.append("candidate-in-FD: %s"
                   % ("true" if self.candidate_in_FD else "false"))
        out.append("theorem: %s" % self.theorem)
        return out

    def __repr__(self):
        return "ConditionReport(theorem=%s)" % self.theorem


def _is_zero_slope(d):
    """True when a level derivative means zero membership slope."""
    if math.isinf(d):
        return True
    if d == 0.0:
        return False
    return abs(1.0 / d) <= TOL


def _zero_above(curve, level):
    if level >= 1.0:
        return False
    return _is_zero_slope(curve.deriv_above(level))


def _zero_below_top(curve):
    return _is_zero_slope(curve.deriv_below(1.0))


def _requirement_levels(u, branch):
    """Levels on one branch of u that force zero slope in a smoother.

    Returns a dict with the base level, the interior defect levels,
    the jump limit levels, whether the core endpoint is defective,
    and the base strong-endpoint level when that point is defective.
    """
    sup = u.support
    core = u.core
    if branch == "left":
        curve, x_end, x_core = u.left, sup.lo, core.lo
        scan = lambda x: _scan_left(u.left, x, True)
    else:
        curve, x_end, x_core = u.right, sup.hi, core.hi
        scan = lambda x: _scan_right(u.right, x, True)
    base = membership(u, x_end)
    interior = set()
    limits = set()
    for pt in classify_points(u):
        if pt.branch == branch:
            interior.add(pt.level)
            if pt.kind == "jump":
                limits.add(pt.outer_limit)
    core_inside = sup.lo + TOL < x_core < sup.hi - TOL
    core_defect = core_inside and singular_at(u, x_core) is not None
    if core_inside:
        lam = scan(x_core)
        if 1.0 - lam > TOL:
            limits.add(lam)
    base_strong = None
    if base < 1.0:
        x_str = curve.strong_value(base)
        if sup.lo + TOL < x_str < sup.hi - TOL and \
                singular_at(u, x_str) is not None:
            base_strong = base
    return {"base": base, "interior": sorted(interior),
            "limits": sorted(limits), "core_defect": core_defect,
            "base_strong": base_strong}


def _check_levels(w_curve, levels):
    """Split levels into (passing, failing) zero-slope checks on w."""
    good, bad = [], []
    for lv in levels:
        (good if _zero_above(w_curve, lv) else bad).append(lv)
    return good, bad


def check_smoother_conditions(u, w):
    """Evaluate every smoother condition of w against u."""
    rep = ConditionReport()
    wl, wr = w.left, w.right

    wb_l = membership(w, w.support.lo)
    wb_r = membership(w, w.support.hi)
    ub_l = membership(u, u.support.lo)
    ub_r = membership(u, u.support.hi)
    base_ok = abs(wb_l - ub_l) <= TOL and abs(wb_r - ub_r) <= TOL
    rep.set("i", "pass" if base_ok else "fail",
            () if base_ok else (ub_l, ub_r))

    req_l = _requirement_levels(u, "left")
    req_r = _requirement_levels(u, "right")

    for key, req, wc in (("ii-1", req_l, wl), ("ii-2", req_r, wr)):
        if not req["core_defect"]:
            continue
        ok = _zero_below_top(wc)
        rep.set(key, "pass" if ok else "fail", (1.0,))

    for key, req, wc in (("iii-1", req_l, wl), ("iii-2", req_r, wr)):
        if req["base_strong"] is None:
            continue
        # the requirement lives at w's own base level
        wb = wb_l if key == "iii-1" else wb_r
        ok = wb >= 1.0 or _zero_above(wc, wb)
        rep.set(key, "pass" if ok else "fail", (req["base_strong"],))

    for key, req, wc in (("iv-1", req_l, wl), ("iv-2", req_r, wr)):
        if not req["interior"]:
            continue
        good, bad = _check_levels(wc, req["interior"])
        rep.set(key, "fail" if bad else "pass",
                bad if bad else good)

    for key, req, wc in (("v-1", req_l, wl), ("v-2", req_r, wr)):
        if not req["limits"]:
            continue
        good, bad = _check_levels(wc, req["limits"])
        rep.set(key, "fail" if bad else "pass",
                bad if bad else good)

    rep.candidate_in_FD = class_membership(w).in_FD

    uf = class_membership(u)
    i_ok = rep.passes("i")
    ii_ok = rep.passes("ii-1", "ii-2")
    iv_ok = rep.passes("iv-1", "iv-2")
    v_ok = rep.passes("v-1", "v-2")
    if not rep.candidate_in_FD:
        rep.theorem = "none"
    elif uf.in_FN and uf.in_FC and i_ok and ii_ok:
        rep.theorem = "differentiable-branches"
    elif uf.in_FC and i_ok and ii_ok and iv_ok:
        rep.theorem = "continuous"
    elif i_ok and ii_ok and iv_ok and v_ok:
        rep.theorem = "general"
    else:
        rep.theorem = "none"
    return rep


class SmootherFamilySpec:
    """Names one stock smoother construction and its parameters."""

    FAMILIES = ("parabola", "generator", "clipped", "two-generator",
                "synthesized")

    def __init__(self, family, p=1.0, l=0.0, r=0.0, f=None, g=None,
                 knots=None):
        if family not in self.FAMILIES:
            raise ValueError("unknown family %r" % (family,))
        self.family = family
        self.p = float(p)
        self.l = float(l)
        self.r = float(r)
        self.f = f
        self.g = g
        self.knots = knots

    def __repr__(self):
        return "SmootherFamilySpec(%r, p=%r)" % (self.family, self.p)


def _parabola_cuts(p, l=0.0, r=0.0):
    """Cut curves of the parabola bump, optionally base-clipped."""
    one = ex.const(1.0)
    left = []
    if l > 0.0:
        left.append(Segment(0.0, l,
                            ExprFn(ex.const(-p * math.sqrt(1.0 - l))),
                            "const"))
    left.append(Segment(l, 1.0,
                        ExprFn(ex.scal(-p, ex.sqrt(ex.sub(one, ex.var())))),
                        "inc"))
    right = []
    if r > 0.0:
        right.append(Segment(0.0, r,
                             ExprFn(ex.const(p * math.sqrt(1.0 - r))),
                             "const"))
    right.append(Segment(r, 1.0,
                         ExprFn(ex.scal(p, ex.sqrt(ex.sub(one, ex.var())))),
                         "dec"))
    return CutCurve(left), CutCurve(right)


def _as_expr(f, varname="a"):
    if isinstance(f, str):
        return ex.parse(f, varname=varname)
    return f


def _validate_generator(fe):
    """Check the level-generator hypotheses, naming the violated one."""
    f0 = ex.evaluate(fe, 0.0)
    f1 = ex.evaluate(fe, 1.0)
    if abs(f0 - 1.0) > TOL:
        raise ValueError("generator must satisfy f(0) = 1, got %r" % (f0,))
    if abs(f1) > TOL:
        raise ValueError("generator must satisfy f(1) = 0, got %r" % (f1,))
    d = ex.derivative(fe)
    for k in range(1, 32):
        a = k / 32.0
        if ex.evaluate(d, a) > -1e-12:
            raise ValueError(
                "generator must be strictly decreasing on [0, 1]; "
                "slope fails at %r" % (a,))
    probes = [abs(ex.evaluate(d, 1.0 - h)) for h in (1e-4, 1e-7, 1e-10)]
    if not (probes[0] < probes[1] < probes[2] and probes[2] > 1e4):
        raise ValueError(
            "generator slope must diverge at level 1 so the smoother "
            "flattens at its core")


def _generator_cuts(p, fe):
    _validate_generator(fe)
    left = CutCurve([Segment(0.0, 1.0, ExprFn(ex.scal(-p, fe)), "inc")])
    right = CutCurve([Segment(0.0, 1.0, ExprFn(ex.scal(p, fe)), "dec")])
    return left, right


def _two_generator(spec):
    """Plateau smoother from two membership generators.

    f rises from the left base level l to 1 with zero slope at 1;
    g falls from 1 to the right base level r with zero slope at 0.
    knots give the four support multipliers a < b <= c < d scaled
    by p, with b..c the plateau.
    """
    p = spec.p
    fe = _as_expr(spec.f, varname="x")
    ge = _as_expr(spec.g, varname="x")
    if spec.knots is None:
        raise ValueError("two-generator family needs knots (a, b, c, d)")
    ka, kb, kc, kd = [float(t) for t in spec.knots]
    if not (ka < kb <= kc < kd):
        raise ValueError("knots must satisfy a < b <= c < d")
    xa, xb, xc, xd = ka * p, kb * p, kc * p, kd * p
    f0 = ex.evaluate(fe, 0.0)
    f1 = ex.evaluate(fe, 1.0)
    g0 = ex.evaluate(ge, 0.0)
    g1 = ex.evaluate(ge, 1.0)
    if abs(f0 - spec.l) > TOL or abs(f1 - 1.0) > TOL:
        raise ValueError(
            "rising generator must map 0 to the left base level and "
            "1 to 1, got f(0)=%r f(1)=%r" % (f0, f1))
    if abs(g0 - 1.0) > TOL or abs(g1 - spec.r) > TOL:
        raise ValueError(
            "falling generator must map 0 to 1 and 1 to the right "
            "base level, got g(0)=%r g(1)=%r" % (g0, g1))
    if abs(ex.evaluate(ex.derivative(fe), 1.0)) > 1e-6:
        raise ValueError("rising generator needs zero slope at 1")
    if abs(ex.evaluate(ex.derivative(ge), 0.0)) > 1e-6:
        raise ValueError("falling generator needs zero slope at 0")
    sub_f = ex.scal(1.0 / (xb - xa), ex.sub(ex.var(), ex.const(xa)))
    sub_g = ex.scal(1.0 / (xd - xc), ex.sub(ex.var(), ex.const(xc)))
    pieces = [(xa, xb, ex.substitute(fe, sub_f), "inc")]
    if xb < xc:
        pieces.append((xb, xc, ex.const(1.0), "const"))
    pieces.append((xc, xd, ex.substitute(ge, sub_g), "dec"))
    return from_membership_pieces(pieces, name="two-generator")


def family(spec):
    """Instantiate a stock smoother family from its spec."""
    if spec.p <= 0.0:
        raise ValueError("family spread p must be positive")
    if spec.family == "parabola":
        left, right = _parabola_cuts(spec.p)
        return FuzzyNum(left, right, name="parabola(p=%r)" % spec.p)
    if spec.family == "generator":
        if spec.f is None:
            raise ValueError("generator family needs a level function f")
        left, right = _generator_cuts(spec.p, _as_expr(spec.f))
        return FuzzyNum(left, right, name="generator(p=%r)" % spec.p)
    if spec.family == "clipped":
        if not (0.0 <= spec.l < 1.0 and 0.0 <= spec.r < 1.0):
            raise ValueError("clip levels must sit in [0, 1)")
        left, right = _parabola_cuts(spec.p, spec.l, spec.r)
        return FuzzyNum(left, right,
                        name="clipped(p=%r, l=%r, r=%r)"
                        % (spec.p, spec.l, spec.r))
    if spec.family == "two-generator":
        return _two_generator(spec)
    raise ValueError(
        "family 'synthesized' is built per target; call "
        "synthesize_smoother(u, p) instead")


def _branch_step_levels(u, branch):
    """Knot levels for one synthesized branch: base, defects, top."""
    req = _requirement_levels(u, branch)
    base = req["base"]
    inner = sorted(set(req["interior"]) | set(req["limits"]))
    levels = [base]
    for lv in inner:
        if lv > levels[-1] + TOL and lv < 1.0 - TOL:
            levels.append(lv)
    levels.append(1.0)
    return levels


def _cosine_step(s0, s1, x0, dx, rising, last):
    """Segment tracing a half-cosine membership step on [s0, s1].

    The inverse is x0 +- (dx/pi) * acos(z) with z affine from +1 at
    s0 to -1 at s1; the arc ends are anchored bitwise because acos
    has unbounded slope there.  The last step per branch is anchored
    at the core end instead so the curve hits 0 exactly at level 1.
    """
    z = _unit_affine(s0, s1, 1.0, -1.0)
    if z is None:
        slope = -2.0 / (s1 - s0)
        z = ex.add(ex.const(-1.0),
                   ex.scal(slope, ex.sub(ex.var(), ex.const(s1))))
    c = dx / math.pi
    if rising:
        if last:
            body = ex.scal(c, ex.sub(ex.acos(z), ex.const(math.pi)))
        else:
            body = ex.add(ex.const(x0), ex.scal(c, ex.acos(z)))
        return Segment(s0, s1, ExprFn(body), "inc")
    if last:
        body = ex.scal(c, ex.sub(ex.const(math.pi), ex.acos(z)))
    else:
        body = ex.add(ex.const(x0), ex.scal(-c, ex.acos(z)))
    return Segment(s0, s1, ExprFn(body), "dec")


def _synth_branch(u, branch, p, lipschitz_cap):
    """One cut curve of the synthesized smoother, plus its halfwidth."""
    levels = _branch_step_levels(u, branch)
    base = levels[0]
    if base >= 1.0 - TOL:
        # this side of u is already crisp; pin the branch at zero
        fn = ExprFn(ex.const(0.0))
        mono = "const"
        return CutCurve([Segment(0.0, 1.0, fn, mono)]), 0.0
    m = len(levels) - 1
    half = p
    if lipschitz_cap is not None:
        ds_max = max(b - a for a, b in zip(levels, levels[1:]))
        half = max(half, math.pi * m * ds_max / (2.0 * lipschitz_cap))
    dx = half / m
    segs = []
    rising = branch == "left"
    start = -half if rising else half
    if base > 0.0:
        segs.append(Segment(0.0, base, ExprFn(ex.const(start)),
                            "const"))
    for j in range(m):
        x0 = start + j * dx if rising else start - j * dx
        segs.append(_cosine_step(levels[j], levels[j + 1], x0, dx,
                                 rising, j == m - 1))
    return CutCurve(segs), half


def synthesize_smoother(u, p, preserve_core=False, lipschitz_cap=None):
    """Build a smoother tailored to u with halfwidth roughly p.

    Raises SmootherConditionError when no smoother can satisfy the
    request, which happens only for crisp u with preserve_core set.
    """
    p = float(p)
    if p <= 0.0:
        raise ValueError("smoother halfwidth p must be positive")
    if lipschitz_cap is not None and lipschitz_cap <= 0.0:
        raise ValueError("lipschitz cap must be positive")
    base_l = membership(u, u.support.lo)
    base_r = membership(u, u.support.hi)
    if base_l >= 1.0 - TOL and base_r >= 1.0 - TOL:
        # crisp target: only the wide indicator matches its base levels
        if preserve_core:
            raise SmootherConditionError(
                "a crisp target admits only indicator smoothers, whose "
                "core cannot shrink to a point; core preservation is "
                "impossible")
        left = CutCurve([Segment(0.0, 1.0, ExprFn(ex.const(-p)), "const")])
        right = CutCurve([Segment(0.0, 1.0, ExprFn(ex.const(p)), "const")])
        return FuzzyNum(left, right, name="synthesized(p=%r)" % (p,))
    left, _ = _synth_branch(u, "left", p, lipschitz_cap)
    right, _ = _synth_branch(u, "right", p, lipschitz_cap)
    w = FuzzyNum(left, right, name="synthesized(p=%r)" % (p,))
    if preserve_core:
        w = core_preserving_shift(w)
    rep = check_smoother_conditions(u, w)
    if rep.theorem == "none":
        raise SmootherConditionError(
            "synthesized smoother failed its own conditions: %s"
            % (rep.failing(),), report=rep)
    return w


def core_preserving_shift(w):
    """Shift each branch so the core collapses onto zero."""
    return FuzzyNum(w.left.shifted(w.left.value(1.0)),
                    w.right.shifted(w.right.value(1.0)),
                    name=w.name)

"""Piecewise-monotone level curves and the fuzzy-number value type.

A fuzzy number is stored by its two cut curves: the left endpoint
u^-(alpha) (nondecreasing) and the right endpoint u^+(alpha)
(nonincreasing), each a list of segments covering [0,1].  Segment
functions are symbolic where possible; numeric inverses plug in the
same protocol.
"""

import math

from ..errors import ParseError, RepresentationError, StructuralError
from . import expr as ex

MONO_TAGS = ("inc", "dec", "const")

LEVEL_TOL = 1e-12


class ExprFn:
    """Segment function backed by a symbolic expression in the level."""

    def __init__(self, e):
        if isinstance(e, str):
            e = ex.parse(e)
        self.expr = e
        self._deriv = None

    def __call__(self, alpha):
        return ex.evaluate(self.expr, alpha)

    def deriv(self, alpha):
        if self._deriv is None:
            self._deriv = ex.derivative(self.expr)
        return ex.evaluate(self._deriv, alpha)

    def text(self, varname="a"):
        return ex.to_text(self.expr, varname)

    def __repr__(self):
        return "ExprFn(%s)" % self.text()


class InverseFn:
    """Generalized inverse of a monotone membership expression.

    Solves m(x) = alpha for x on [xlo, xhi] by bisection to an
    absolute abscissa tolerance of 1e-12 (at most 200 iterations).
    """

    def __init__(self, m_expr, xlo, xhi, increasing):
        self.m = m_expr
        self.xlo = float(xlo)
        self.xhi = float(xhi)
        self.increasing = bool(increasing)
        self._md = ex.derivative(m_expr)

    def __call__(self, alpha):
        lo, hi = self.xlo, self.xhi
        flo = ex.evaluate(self.m, lo)
        fhi = ex.evaluate(self.m, hi)
        if self.increasing:
            if alpha <= flo:
                return lo
            if alpha >= fhi:
                return hi
        else:
            if alpha >= flo:
                return lo
            if alpha <= fhi:
                return hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            v = ex.evaluate(self.m, mid)
            below = v < alpha if self.increasing else v > alpha
            if below:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-12:
                break
        return 0.5 * (lo + hi)

    def deriv(self, alpha):
        x = self(alpha)
        slope = ex.evaluate(self._md, x)
        if slope == 0.0:
            return math.inf if self.increasing else -math.inf
        return 1.0 / slope

    def text(self, varname="a"):
        return None

    def __repr__(self):
        return "InverseFn(%s on [%g, %g])" % (
            ex.to_text(self.m, "x"), self.xlo, self.xhi)


class ShiftedFn:
    def __init__(self, fn, c):
        self.fn = fn
        self.c = float(c)

    def __call__(self, alpha):
        return self.fn(alpha) - self.c

    def deriv(self, alpha):
        return self.fn.deriv(alpha)

    def text(self, varname="a"):
        return None


class ScaledFn:
    def __init__(self, fn, c):
        self.fn = fn
        self.c = float(c)

    def __call__(self, alpha):
        return self.c * self.fn(alpha)

    def deriv(self, alpha):
        return self.c * self.fn.deriv(alpha)

    def text(self, varname="a"):
        return None


class SumFn:
    def __init__(self, f, g):
        self.f = f
        self.g = g

    def __call__(self, alpha):
        return self.f(alpha) + self.g(alpha)

    def deriv(self, alpha):
        return self.f.deriv(alpha) + self.g.deriv(alpha)

    def text(self, varname="a"):
        return None


def fn_shift(fn, c):
    if c == 0.0:
        return fn
    if isinstance(fn, ExprFn):
        return ExprFn(ex.sub(fn.expr, ex.const(c)))
    return ShiftedFn(fn, c)


def fn_scale(c, fn):
    if c == 1.0:
        return fn
    if isinstance(fn, ExprFn):
        return ExprFn(ex.scal(c, fn.expr))
    return ScaledFn(fn, c)


def fn_add(f, g):
    if isinstance(f, ExprFn) and isinstance(g, ExprFn):
        return ExprFn(ex.add(f.expr, g.expr))
    return SumFn(f, g)


class Segment:
    """One piece of a cut curve on the level interval [lo, hi].

    own_right says whether the segment's value is the curve value at
    hi; setting it False hands the point to the next segment, which
    is how discontinuity conventions that break the representation
    axioms are written down for negative tests.
    """

    def __init__(self, lo, hi, fn, mono, own_right=True):
        if not (0.0 <= lo <= hi <= 1.0):
            raise StructuralError(
                "segment levels must satisfy 0 <= lo <= hi <= 1, got "
                "[%r, %r]" % (lo, hi))
        if mono not in MONO_TAGS:
            raise StructuralError("unknown monotonicity tag %r" % (mono,))
        if isinstance(fn, (str, ex.Expr)):
            fn = ExprFn(fn)
        self.lo = float(lo)
        self.hi = float(hi)
        self.fn = fn
        self.mono = mono
        self.own_right = bool(own_right)

    @property
    def width(self):
        return self.hi - self.lo

    def check_mono(self):
        """Raise if the sampled derivative contradicts the tag."""
        if self.width == 0.0:
            return
        pts = [self.lo + self.width * t for t in
               (0.1, 0.3, 0.5, 0.7, 0.9)]
        for a in pts:
            d = self.fn.deriv(a)
            if self.mono == "inc" and d < -1e-9:
                raise StructuralError(
                    "segment tagged inc decreases at level %r" % (a,))
            if self.mono == "dec" and d > 1e-9:
                raise StructuralError(
                    "segment tagged dec increases at level %r" % (a,))
            if self.mono == "const" and abs(d) > 1e-9:
                raise StructuralError(
                    "segment tagged const varies at level %r" % (a,))

    def __repr__(self):
        t = self.fn.text()
        return "Segment[%g, %g] %s: %s" % (
            self.lo, self.hi, self.mono, t if t else repr(self.fn))


class CutCurve:
    """Segments covering [0,1] with explicit point ownership.

    Ownership: the first segment owns its lo; every segment owns its
    hi when own_right is set (the last one always does); a segment
    owns its lo when the previous segment declined its hi.
    """

    def __init__(self, segments):
        segs = list(segments)
        if not segs:
            raise StructuralError("cut curve needs at least one segment")
        if segs[0].lo != 0.0:
            raise StructuralError("first segment must start at level 0")
        if segs[-1].hi != 1.0:
            raise StructuralError("last segment must end at level 1")
        for i in range(len(segs) - 1):
            if segs[i].hi != segs[i + 1].lo:
                raise StructuralError(
                    "segment gap or overlap at level %r vs %r" % (
                        segs[i].hi, segs[i + 1].lo))
        for i, s in enumerate(segs):
            if s.width == 0.0:
                if i > 0 and segs[i - 1].own_right:
                    raise StructuralError(
                        "zero-width segment at level %r is unreachable: "
                        "previous segment owns the point" % (s.lo,))
                if not s.own_right and i < len(segs) - 1:
                    raise StructuralError(
                        "zero-width segment at level %r owns nothing"
                        % (s.lo,))
            s.check_mono()
        self.segments = segs

    def owner_index(self, alpha):
        segs = self.segments
        last = len(segs) - 1
        for i, s in enumerate(segs):
            if s.lo < alpha < s.hi:
                return i
            if alpha == s.hi and (s.own_right or i == last):
                return i
            if alpha == s.lo and (i == 0 or not segs[i - 1].own_right):
                return i
        raise StructuralError("level %r not covered" % (alpha,))

    def value(self, alpha):
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("level %r outside [0, 1]" % (alpha,))
        return self.segments[self.owner_index(alpha)].fn(alpha)

    def right_limit(self, alpha):
        """Limit of the curve value from above the level; needs alpha < 1."""
        if not 0.0 <= alpha < 1.0:
            raise ValueError("right limit needs a level in [0, 1)")
        for s in self.segments:
            if s.hi > alpha:
                return s.fn(max(alpha, s.lo))
        raise StructuralError("level %r not covered" % (alpha,))

    def left_limit(self, alpha):
        """Limit of the curve value from below the level; needs alpha > 0."""
        if not 0.0 < alpha <= 1.0:
            raise ValueError("left limit needs a level in (0, 1]")
        for s in reversed(self.segments):
            if s.lo < alpha:
                return s.fn(min(alpha, s.hi))
        raise StructuralError("level %r not covered" % (alpha,))

    def deriv_above(self, alpha):
        """One-sided level derivative from above; needs alpha < 1."""
        if not 0.0 <= alpha < 1.0:
            raise ValueError("derivative from above needs a level in [0, 1)")
        for s in self.segments:
            if s.hi > alpha:
                return s.fn.deriv(max(alpha, s.lo))
        raise StructuralError("level %r not covered" % (alpha,))

    def deriv_below(self, alpha):
        """One-sided level derivative from below; needs alpha > 0."""
        if not 0.0 < alpha <= 1.0:
            raise ValueError("derivative from below needs a level in (0, 1]")
        for s in reversed(self.segments):
            if s.lo < alpha:
                return s.fn.deriv(min(alpha, s.hi))
        raise StructuralError("level %r not covered" % (alpha,))

    def strong_value(self, alpha):
        if alpha >= 1.0:
            return self.value(1.0)
        return self.right_limit(alpha)

    def breakpoints(self):
        """Interior junction levels, ascending, without duplicates."""
        out = []
        for s in self.segments[:-1]:
            if 0.0 < s.hi < 1.0 and (not out or out[-1] != s.hi):
                out.append(s.hi)
        return out

    def shifted(self, c):
        return CutCurve([
            Segment(s.lo, s.hi, fn_shift(s.fn, c), s.mono, s.own_right)
            for s in self.segments])

    def scaled(self, c):
        if c <= 0.0:
            raise ValueError("scaled() needs a positive factor")
        return CutCurve([
            Segment(s.lo, s.hi, fn_scale(c, s.fn), s.mono, s.own_right)
            for s in self.segments])

    def __repr__(self):
        return "CutCurve(%r)" % (self.segments,)


class Interval:
    def __init__(self, lo, hi):
        self.lo = float(lo)
        self.hi = float(hi)

    def __iter__(self):
        return iter((self.lo, self.hi))

    def __eq__(self, other):
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        if isinstance(other, tuple) and len(other) == 2:
            return (self.lo, self.hi) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    @property
    def width(self):
        return self.hi - self.lo

    def __repr__(self):
        return "Interval(%r, %r)" % (self.lo, self.hi)


class FuzzyNum:
    """A fuzzy number as its pair of cut curves."""

    def __init__(self, left, right, name=None, doc=None):
        self.left = left
        self.right = right
        self.name = name
        self.doc = doc

    @property
    def support(self):
        return Interval(self.left.value(0.0), self.right.value(0.0))

    @property
    def core(self):
        return Interval(self.left.value(1.0), self.right.value(1.0))

    def is_crisp_point(self):
        s = self.support
        return s.lo == s.hi

    def __repr__(self):
        return "FuzzyNum(%s)" % (self.name or "unnamed")


class ValidationReport:
    """Verdicts for the four cut-representation conditions.

    i: left curve nondecreasing and left-continuous on (0,1];
    ii: right curve nonincreasing and left-continuous on (0,1];
    iii: both curves right-continuous at 0;
    iv: left core endpoint does not exceed the right one.
    """

    def __init__(self):
        self.conditions = {}

    def set(self, key, verdict, witness=None):
        self.conditions[key] = {"verdict": verdict, "witness": witness}

    @property
    def ok(self):
        return all(c["verdict"] == "pass" for c in self.conditions.values())

    def failures(self):
        return [k for k, c in self.conditions.items()
                if c["verdict"] == "fail"]

    def lines(self):
        out = []
        for key in ("i", "ii", "iii", "iv"):
            c = self.conditions[key]
            if c["witness"] is None:
                out.append("%-4s %s" % (key, c["verdict"]))
            else:
                out.append("%-4s %s (level %.17g)" % (
                    key, c["verdict"], c["witness"]))
        return out

    def __repr__(self):
        return "ValidationReport(%s)" % ", ".join(
            "%s=%s" % (k, v["verdict"]) for k, v in self.conditions.items())


def _check_direction(curve, nondecreasing, tol):
    """Return a witness level where monotonicity fails, or None."""
    for s in curve.segments:
        bad = s.mono == ("dec" if nondecreasing else "inc")
        if bad and s.width > 0.0:
            return s.lo
    for i in range(len(curve.segments) - 1):
        a = curve.segments[i]
        b = curve.segments[i + 1]
        va = a.fn(a.hi)
        vb = b.fn(b.lo)
        if nondecreasing and vb < va - tol:
            return a.hi
        if not nondecreasing and vb > va + tol:
            return a.hi
    return None


def _check_left_continuity(curve, tol):
    for s in curve.segments[1:]:
        c = s.lo
        if c == 0.0:
            continue
        if abs(curve.value(c) - curve.left_limit(c)) > tol:
            return c
    return None


def validate(fz, tol=LEVEL_TOL):
    """Check the representation conditions; structural errors raise."""
    rep = ValidationReport()

    w = _check_direction(fz.left, True, tol)
    if w is None:
        w = _check_left_continuity(fz.left, tol)
    rep.set("i", "fail" if w is not None else "pass", w)

    w = _check_direction(fz.right, False, tol)
    if w is None:
        w = _check_left_continuity(fz.right, tol)
    rep.set("ii", "fail" if w is not None else "pass", w)

    w = None
    for curve in (fz.left, fz.right):
        if abs(curve.value(0.0) - curve.right_limit(0.0)) > tol:
            w = 0.0
    rep.set("iii", "fail" if w is not None else "pass", w)

    bad_iv = fz.left.value(1.0) > fz.right.value(1.0) + tol
    rep.set("iv", "fail" if bad_iv else "pass", 1.0 if bad_iv else None)
    return rep


def alpha_cut(fz, alpha):
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("level %r outside [0, 1]" % (alpha,))
    return Interval(fz.left.value(alpha), fz.right.value(alpha))


def strong_cut(fz, alpha):
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("level %r outside [0, 1]" % (alpha,))
    return Interval(fz.left.strong_value(alpha),
                    fz.right.strong_value(alpha))


def _scan_left(curve, x, strict):
    """sup of levels whose left endpoint sits at or below x.

    strict=True computes sup{level : value < x} instead, which is the
    membership limit from the left at x.
    """
    best = 0.0
    for s in curve.segments:
        if s.width == 0.0:
            v = s.fn(s.lo)
            if (v < x) if strict else (v <= x):
                best = max(best, s.lo)
                continue
            break
        flo = s.fn(s.lo)
        fhi = s.fn(s.hi)
        if (fhi < x) if strict else (fhi <= x):
            best = s.hi
            continue
        if strict and fhi == x and s.mono != "const":
            # strictly increasing piece: every lower level is below x,
            # so the supremum is the junction level itself, exactly
            best = s.hi
            continue
        if (flo >= x) if strict else (flo > x):
            break
        if s.mono == "const":
            # constant run equal to x under the strict scan stops here
            break
        if not strict and flo == x:
            # a strictly monotone piece leaves x immediately, so the
            # supremum is the start level itself; bisection would creep
            # a few ulps past it through cancellation in fn
            best = max(best, s.lo)
            break
        lo, hi = s.lo, s.hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            v = s.fn(mid)
            ok = (v < x) if strict else (v <= x)
            if ok:
                lo = mid
            else:
                hi = mid
        best = max(best, lo)
        break
    return best


def _scan_right(curve, x, strict):
    """sup of levels whose right endpoint sits at or above x."""
    best = 0.0
    for s in curve.segments:
        if s.width == 0.0:
            v = s.fn(s.lo)
            if (v > x) if strict else (v >= x):
                best = max(best, s.lo)
                continue
            break
        flo = s.fn(s.lo)
        fhi = s.fn(s.hi)
        if (fhi > x) if strict else (fhi >= x):
            best = s.hi
            continue
        if strict and fhi == x and s.mono != "const":
            best = s.hi
            continue
        if (flo <= x) if strict else (flo < x):
            break
        if s.mono == "const":
            break
        if not strict and flo == x:
            # mirror of the left-scan exact-start shortcut
            best = max(best, s.lo)
            break
        lo, hi = s.lo, s.hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            v = s.fn(mid)
            ok = (v > x) if strict else (v >= x)
            if ok:
                lo = mid
            else:
                hi = mid
        best = max(best, lo)
        break
    return best


def membership(fz, x):
    """Membership level of x, exact at stored breakpoint images."""
    sup = fz.support
    if x < sup.lo or x > sup.hi:
        return 0.0
    core = fz.core
    if core.lo <= x <= core.hi:
        return 1.0
    if x < core.lo:
        return _scan_left(fz.left, x, strict=False)
    return _scan_right(fz.right, x, strict=False)


def membership_outer_limit(fz, x):
    """Membership limit at x from the side away from the core.

    On the left branch this is the limit from the left, on the right
    branch the limit from the right; it is the level written lambda
    in jump classifications.
    """
    sup = fz.support
    core = fz.core
    if x <= sup.lo or x >= sup.hi:
        return 0.0
    if x <= core.lo:
        return _scan_left(fz.left, x, strict=True)
    if x >= core.hi:
        return _scan_right(fz.right, x, strict=True)
    return 1.0


def sample(fz, grid):
    levels = sorted(set(float(a) for a in grid))
    if not levels:
        raise ValueError("sample needs a nonempty level grid")
    if levels[0] < 0.0 or levels[-1] > 1.0:
        raise ValueError("sample grid must lie in [0, 1]")
    merged = set(levels)
    merged.update(fz.left.breakpoints())
    merged.update(fz.right.breakpoints())
    rows = []
    for a in sorted(merged):
        rows.append((a, fz.left.value(a), fz.right.value(a)))
    return rows

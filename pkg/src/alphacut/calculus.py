"""One-sided membership derivatives, singular points, classes, metrics.

The symbolic route turns cut-curve level derivatives into membership
slopes: on the left branch the slope at u^-(alpha) is the reciprocal
of du^-/dalpha, an infinite level derivative (constant membership run)
gives slope 0, and a zero level derivative (membership jump, written
as a constant cut segment) gives an infinite slope.
"""

import math

from .cutcore.curve import membership, membership_outer_limit

TOL_X = 1e-9
TOL_SLOPE = 1e-6
FD_LADDER = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7)


class ExtendedSlope:
    """A one-sided membership slope; value may be +-inf."""

    def __init__(self, value, side):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.value = float(value)
        self.side = side

    def __float__(self):
        return self.value

    def is_finite(self):
        return math.isfinite(self.value)

    def __eq__(self, other):
        if isinstance(other, ExtendedSlope):
            return self.value == other.value and self.side == other.side
        if isinstance(other, (int, float)):
            return self.value == float(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.side))

    def __repr__(self):
        return "ExtendedSlope(%r, %r)" % (self.value, self.side)


class SingularPoint:
    """A point where the membership function is not differentiable."""

    def __init__(self, x, kind, branch, level, outer_limit,
                 left_slope, right_slope):
        self.x = x
        self.kind = kind
        self.branch = branch
        self.level = level
        self.outer_limit = outer_limit
        self.left_slope = left_slope
        self.right_slope = right_slope

    def __repr__(self):
        extra = ""
        if self.kind == "jump":
            extra = ", outer limit %r" % (self.outer_limit,)
        return "SingularPoint(x=%r, %s, %s branch, level %r%s)" % (
            self.x, self.kind, self.branch, self.level, extra)


class ClassFlags:
    """Membership of the four fuzzy-number families."""

    def __init__(self, in_FT, in_FN, in_FC, in_FD):
        self.in_FT = bool(in_FT)
        self.in_FN = bool(in_FN)
        self.in_FC = bool(in_FC)
        self.in_FD = bool(in_FD)

    def as_dict(self):
        return {"in_FT": self.in_FT, "in_FN": self.in_FN,
                "in_FC": self.in_FC, "in_FD": self.in_FD}

    def __eq__(self, other):
        if isinstance(other, ClassFlags):
            return self.as_dict() == other.as_dict()
        if isinstance(other, tuple) and len(other) == 4:
            return (self.in_FT, self.in_FN, self.in_FC, self.in_FD) == other
        return NotImplemented

    def __repr__(self):
        return "ClassFlags(in_FT=%r, in_FN=%r, in_FC=%r, in_FD=%r)" % (
            self.in_FT, self.in_FN, self.in_FC, self.in_FD)


def _as_left_slope(level_deriv):
    """Left-branch membership slope from a left-curve level derivative."""
    if math.isinf(level_deriv):
        return 0.0
    if level_deriv == 0.0:
        return math.inf
    return 1.0 / level_deriv


def _as_right_slope(level_deriv):
    """Right-branch membership slope from a right-curve level derivative."""
    if math.isinf(level_deriv):
        return 0.0
    if level_deriv == 0.0:
        return -math.inf
    return 1.0 / level_deriv


def _check_in_support(fz, x):
    sup = fz.support
    if x < sup.lo - TOL_X or x > sup.hi + TOL_X:
        raise ValueError("x=%r outside the support [%r, %r]"
                         % (x, sup.lo, sup.hi))


def _snap_level(rho, *curves):
    """Pull a scanned level onto the nearest junction level.

    The membership scans carry up to a few ulp of dust; a level that
    lands dust-close to a segment junction must be treated as exactly
    that junction or the one-sided level derivatives read the wrong
    segment.
    """
    best, err = rho, TOL_X
    if abs(rho - 1.0) <= err:
        best, err = 1.0, abs(rho - 1.0)
    for curve in curves:
        for s in curve.segments[:-1]:
            d = abs(rho - s.hi)
            if d <= err:
                best, err = s.hi, d
    return best


def _left_slope_at(fz, x, rho):
    """Membership slope at x from the left."""
    core = fz.core
    if x > core.lo + TOL_X:
        if x <= core.hi + TOL_X:
            return 0.0
        # right branch: nonzero only where x is the inner cut image
        if rho >= 1.0:
            return 0.0
        inner = fz.right.right_limit(rho)
        if abs(x - inner) <= TOL_X:
            return _as_right_slope(fz.right.deriv_above(rho))
        return 0.0
    # left branch, including the core start
    if rho == 0.0:
        return 0.0
    outer = fz.left.value(rho)
    if abs(x - outer) <= TOL_X:
        return _as_left_slope(fz.left.deriv_below(rho))
    return 0.0


def _right_slope_at(fz, x, rho):
    """Membership slope at x from the right."""
    core = fz.core
    if x < core.hi - TOL_X:
        if x >= core.lo - TOL_X:
            return 0.0
        # left branch: nonzero only where x is the inner cut image
        if rho >= 1.0:
            return 0.0
        inner = fz.left.right_limit(rho)
        if abs(x - inner) <= TOL_X:
            return _as_left_slope(fz.left.deriv_above(rho))
        return 0.0
    # right branch, including the core end
    if rho == 0.0:
        return 0.0
    outer = fz.right.value(rho)
    if abs(x - outer) <= TOL_X:
        return _as_right_slope(fz.right.deriv_below(rho))
    return 0.0


def left_deriv(fz, x):
    """One-sided membership derivative at x from the left."""
    _check_in_support(fz, x)
    rho = _snap_level(membership(fz, x), fz.left, fz.right)
    return ExtendedSlope(_left_slope_at(fz, x, rho), "left")


def right_deriv(fz, x):
    """One-sided membership derivative at x from the right."""
    _check_in_support(fz, x)
    rho = _snap_level(membership(fz, x), fz.left, fz.right)
    return ExtendedSlope(_right_slope_at(fz, x, rho), "right")


def numeric_slope(fz, x, side):
    """Richardson-extrapolated one-sided difference quotient.

    Cross-checks the symbolic route; the ladder refines h until two
    consecutive extrapolations agree or the ladder is exhausted.
    """
    sgn = -1.0 if side == "left" else 1.0
    m0 = membership(fz, x)

    def quot(h):
        return (membership(fz, x + sgn * h) - m0) / (sgn * h)

    prev = None
    for h in FD_LADDER:
        val = 2.0 * quot(0.5 * h) - quot(h)
        if prev is not None and abs(val - prev) <= 1e-8 * (1.0 + abs(val)):
            return val
        prev = val
    return prev


def _candidate_points(fz):
    """Breakpoint images of both curves plus the core endpoints."""
    xs = []
    for curve in (fz.left, fz.right):
        for b in curve.breakpoints():
            xs.append(curve.value(b))
            xs.append(curve.right_limit(b))
    core = fz.core
    xs.append(core.lo)
    xs.append(core.hi)
    xs.sort()
    out = []
    for x in xs:
        if not out or x - out[-1] > TOL_X:
            out.append(x)
    return out


def singular_at(fz, x):
    """SingularPoint at x, or None if membership is differentiable there."""
    rho = _snap_level(membership(fz, x), fz.left, fz.right)
    ls = _left_slope_at(fz, x, rho)
    rs = _right_slope_at(fz, x, rho)
    lam = _snap_level(membership_outer_limit(fz, x), fz.left, fz.right)
    jump = rho - lam > TOL_X
    kink = (math.isinf(ls) or math.isinf(rs)
            or abs(ls - rs) > TOL_SLOPE)
    if not (jump or kink):
        return None
    core = fz.core
    if abs(x - core.lo) <= TOL_X or abs(x - core.hi) <= TOL_X:
        branch = "core-endpoint"
    elif x < core.lo:
        branch = "left"
    else:
        branch = "right"
    return SingularPoint(x, "jump" if jump else "kink", branch, rho,
                         lam if jump else None, ls, rs)


def classify_points(fz):
    """All membership singular points strictly inside the support."""
    sup = fz.support
    out = []
    for x in _candidate_points(fz):
        if x - sup.lo <= TOL_X or sup.hi - x <= TOL_X:
            continue
        p = singular_at(fz, x)
        if p is not None:
            out.append(p)
    return out


def _base_run_end(curve):
    """Index of the first segment past the leading constant base run."""
    segs = curve.segments
    if segs[0].mono != "const" and segs[0].width > 0.0:
        return 0
    base_x = segs[0].fn(segs[0].lo)
    i = 0
    while i < len(segs) and (segs[i].width == 0.0 or
                             segs[i].mono == "const") \
            and abs(segs[i].fn(segs[i].lo) - base_x) <= TOL_X:
        i += 1
    return i


def _strictly_monotone_above_base(curve):
    """No constant runs above the base level (no membership jumps)."""
    for s in curve.segments[_base_run_end(curve):]:
        if s.mono == "const" and s.width > 0.0:
            return False
    return True


def _has_cut_jump(curve):
    """Any level where the cut endpoint differs from its right limit."""
    for b in curve.breakpoints():
        if abs(curve.right_limit(b) - curve.value(b)) > TOL_X:
            return True
    return False


def class_membership(fz):
    """Class flags for the four families."""
    pts = classify_points(fz)
    in_fc = (_strictly_monotone_above_base(fz.left)
             and _strictly_monotone_above_base(fz.right))
    in_fn = not any(p.branch in ("left", "right") for p in pts)
    in_ft = (in_fn and not _has_cut_jump(fz.left)
             and not _has_cut_jump(fz.right))
    in_fd = in_fc and not pts and fz.support.width > 0.0
    return ClassFlags(in_ft, in_fn, in_fc, in_fd)


def _golden_max(f, a, b, iters=90):
    invphi = 0.5 * (math.sqrt(5.0) - 1.0)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        if b - a <= 1e-13:
            break
    return fc if fc >= fd else fd


def sup_metric(u, v):
    """(sup endpoint deviation, certified residual bound)."""
    best = 0.0
    gap = 0.0
    for cu, cv in ((u.left, v.left), (u.right, v.right)):
        knots = sorted(set([0.0, 1.0]
                           + cu.breakpoints() + cv.breakpoints()))
        for a in knots:
            best = max(best, abs(cu.value(a) - cv.value(a)))
            if a < 1.0:
                best = max(best,
                           abs(cu.right_limit(a) - cv.right_limit(a)))
        for a, b in zip(knots, knots[1:]):
            if b <= a:
                continue
            n = 128
            h = (b - a) / n
            diff = lambda t: abs(cu.value(t) - cv.value(t))
            seq = [abs(cu.right_limit(a) - cv.right_limit(a))]
            seq.extend(diff(a + h * k) for k in range(1, n))
            seq.append(abs(cu.left_limit(b) - cv.left_limit(b)))
            mloc = max(seq)
            best = max(best, mloc)
            k = seq.index(mloc)
            lo = a + h * max(0, k - 1)
            hi = a + h * min(n, k + 1)
            if hi > lo:
                best = max(best, _golden_max(diff, lo, hi))
            smax = 0.0
            for f0, f1 in zip(seq, seq[1:]):
                if math.isfinite(f0) and math.isfinite(f1):
                    smax = max(smax, abs(f1 - f0) / h)
            gap = max(gap, 0.5 * smax * h)
    return best, gap


def _min_abs_deriv(fn, lo, hi):
    n = 64
    h = (hi - lo) / n
    pts = [lo + h * k for k in range(n + 1)]
    vals = [abs(fn.deriv(t)) for t in pts]
    m = min(vals)
    k = vals.index(m)
    a = pts[max(0, k - 1)]
    b = pts[min(n, k + 1)]
    if b > a:
        refined = -_golden_max(lambda t: -abs(fn.deriv(t)), a, b)
        m = min(m, refined)
    return m


def lipschitz_estimate(fz):
    """Smallest slope bound of the membership on its support, or inf."""
    if not class_membership(fz).in_FC:
        return math.inf
    best = 0.0
    for curve in (fz.left, fz.right):
        for s in curve.segments[_base_run_end(curve):]:
            if s.width == 0.0 or s.mono == "const":
                continue
            dmin = _min_abs_deriv(s.fn, s.lo, s.hi)
            if dmin <= 0.0 or not math.isfinite(1.0 / dmin):
                return math.inf
            best = max(best, 1.0 / dmin)
    return best

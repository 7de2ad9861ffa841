"""Exact planar predicates over rationals.

Coordinates are gmpy2 ``mpq`` values: exact like ``fractions.Fraction`` (they
compare and hash equal to it) but far faster in the inner loops.
"""
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

from gmpy2 import mpq

from .errors import InputError


class Point(NamedTuple):
    x: mpq
    y: mpq

    def __add__(self, o):
        return Point(self.x + o[0], self.y + o[1])

    def __sub__(self, o):
        return Point(self.x - o[0], self.y - o[1])

    def scale(self, k):
        return Point(self.x * k, self.y * k)


def Q(v):
    """Coerce an int, a rational or a "p/q" string to mpq."""
    if isinstance(v, bool):
        raise InputError("booleans are not coordinates")
    if isinstance(v, (int, Rational)) or type(v).__name__ in ("mpq", "mpz"):
        return mpq(v)
    if isinstance(v, str):
        try:
            return mpq(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError):
            raise InputError("bad rational %r" % v) from None
    raise InputError("coordinates must be ints or 'p/q' strings, got %r" % (v,))


def P(x, y):
    return Point(Q(x), Q(y))


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def orient(a, b, c):
    """Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def midpoint(a, b):
    return Point((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


def lerp(a, b, t):
    return Point(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def on_segment(p, a, b):
    """p on the closed segment ab."""
    if not (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])):
        return False
    return orient(a, b, p) == 0


def seg_param(p, a, b):
    """Parameter of p along a -> b (p assumed on the line)."""
    if a[0] != b[0]:
        return (p[0] - a[0]) / (b[0] - a[0])
    return (p[1] - a[1]) / (b[1] - a[1])


def boxes_meet(a, b, c, d):
    return not (max(a[0], b[0]) < min(c[0], d[0]) or max(c[0], d[0]) < min(a[0], b[0])
                or max(a[1], b[1]) < min(c[1], d[1]) or max(c[1], d[1]) < min(a[1], b[1]))


def seg_intersection(a, b, c, d):
    """Intersection of closed segments ab and cd.

    Returns None, ("point", p) or ("overlap", p, q) for a collinear overlap
    of positive length.
    """
    if not boxes_meet(a, b, c, d):
        return None
    o1, o2 = orient(a, b, c), orient(a, b, d)
    if o1 * o2 > 0:
        return None
    if o1 != 0 or o2 != 0:
        o3, o4 = orient(c, d, a), orient(c, d, b)
        if o3 * o4 > 0:
            return None
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    den = cross(r, s)
    qp = (c[0] - a[0], c[1] - a[1])
    if den == 0:
        if cross(qp, r) != 0:
            return None
        # collinear: project on r
        rr = dot(r, r)
        t0 = dot(qp, r) / rr
        t1 = t0 + dot(s, r) / rr
        lo, hi = max(min(t0, t1), 0), min(max(t0, t1), 1)
        if lo > hi:
            return None
        p = lerp(a, b, lo)
        if lo == hi:
            return ("point", p)
        return ("overlap", p, lerp(a, b, hi))
    t = cross(qp, s) / den
    u = cross(qp, r) / den
    if 0 <= t <= 1 and 0 <= u <= 1:
        return ("point", lerp(a, b, t))
    return None


def segments_cross_properly(a, b, c, d):
    """Interiors cross at a single point that is interior to both."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def area2(poly):
    """Twice the signed area of a closed polygon (vertex list, not repeated)."""
    s = 0
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        s += a[0] * b[1] - a[1] * b[0]
    return s


def winding(poly, p):
    """Winding number of a closed polygon around p (p must not lie on it)."""
    w = 0
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if a[1] <= p[1]:
            if b[1] > p[1] and orient(a, b, p) > 0:
                w += 1
        elif b[1] <= p[1] and orient(a, b, p) < 0:
            w -= 1
    return w


def on_polygon(poly, p):
    n = len(poly)
    return any(on_segment(p, poly[i], poly[(i + 1) % n]) for i in range(n))


def on_polyline(pts, p):
    return any(on_segment(p, pts[i], pts[i + 1]) for i in range(len(pts) - 1))


def point_in_polygon(poly, p):
    """'boundary', 'inside' or 'outside' for a simple polygon."""
    if on_polygon(poly, p):
        return "boundary"
    return "inside" if winding(poly, p) != 0 else "outside"


def polyline_is_simple(pts, closed=False):
    """No self-intersections besides consecutive segments sharing a vertex."""
    segs = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    if closed:
        segs.append((pts[-1], pts[0]))
    m = len(segs)
    for i in range(m):
        a, b = segs[i]
        if a == b:
            return False
        for j in range(i + 1, m):
            c, d = segs[j]
            hit = seg_intersection(a, b, c, d)
            if hit is None:
                continue
            adjacent = j == i + 1 or (closed and i == 0 and j == m - 1)
            if not adjacent or hit[0] == "overlap":
                return False
            shared = b if j == i + 1 else a
            if hit[1] != shared:
                return False
    return True


def remove_collinear(pts, closed=False):
    """Drop repeated vertices and vertices in the middle of straight runs."""
    out = []
    for p in pts:
        if out and out[-1] == p:
            continue
        out.append(p)
    if closed and len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) > 2:
        changed = False
        n = len(out)
        rng = range(n) if closed else range(1, n - 1)
        for i in rng:
            a, b, c = out[i - 1], out[i], out[(i + 1) % n]
            if orient(a, b, c) == 0 and dot(b - a, c - b) > 0:
                del out[i]
                changed = True
                break
    return out


def snap(v, grid):
    """Round a rational to the nearest multiple of 1/grid."""
    return mpq(int(round(v * grid)), grid)


def snap_point(p, grid):
    return Point(snap(p[0], grid), snap(p[1], grid))

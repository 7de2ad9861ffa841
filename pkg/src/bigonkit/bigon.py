"""Transversality, minimal bigons and their removal, straightening of arcs and loops.

Two curves are handled as a *frame*: a fixed curve and a moving curve.  Only
the moving curve is ever modified.  Positions along a curve are Fractions
``j + t`` (segment index plus parameter, vertices at integers).

For a LinePair the first and last segments of both paths coincide (the pinned
tails); only the middle segments take part in crossing computations and the
tail corners P1 = vertices[1], Pm-1 = vertices[-2] act as fixed corners of
bigons.  A pinned loop has its pin at vertex 0 of both loops and the pin is a
fixed corner.
"""
import math
import random
from collections import deque
from dataclasses import dataclass

from gmpy2 import mpq

from . import curves as cv
from .arrangement import Arrangement, candidate_pairs
from .curves import Curve
from .errors import (ConstraintConflict, HypothesisViolated, Inessential, NonTransverse,
                     NotFreelyHomotopic, NotHomotopic)
from .freegroup import format_word
from .geometry import (P, Point, area2, cross, dot, lerp, midpoint, on_polyline, on_segment,
                       point_in_polygon, remove_collinear, seg_intersection, seg_param,
                       snap_point, winding)

MAX_HALVINGS = 48


def _fmt(p):
    return [str(p[0]), str(p[1])]


# ---------------------------------------------------------------- polylines

def _segs(pts, closed):
    out = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    if closed:
        out.append((pts[-1], pts[0]))
    return out


def is_simple(pts, closed=False):
    """Sweep-filtered exact simplicity test for a polyline."""
    segs = _segs(pts, closed)
    m = len(segs)
    for a, b in segs:
        if a == b:
            return False
    for i, j in candidate_pairs(segs):
        if i > j:
            i, j = j, i
        hit = seg_intersection(*segs[i], *segs[j])
        if hit is None:
            continue
        adjacent = j == i + 1 or (closed and i == 0 and j == m - 1)
        if not adjacent or hit[0] == "overlap":
            return False
        shared = segs[i][1] if j == i + 1 else segs[i][0]
        if hit[1] != shared:
            return False
    return True


def _point_at(pts, pos):
    n = len(pts)
    j = math.floor(pos)
    t = pos - j
    if t == 0:
        return pts[j % n]
    return lerp(pts[j % n], pts[(j + 1) % n], t)


def _arc_points(pts, pa, pb):
    """Curve points from position pa forward to pb (pb may pass n on a loop)."""
    n = len(pts)
    out = [_point_at(pts, pa)]
    k = math.floor(pa) + 1
    while k < pb:
        out.append(pts[k % n])
        k += 1
    q = _point_at(pts, pb)
    if q != out[-1]:
        out.append(q)
    return out


def _rays(pts, closed, pos):
    """Directions leaving a curve point backward and forward along the curve."""
    n = len(pts)
    q = _point_at(pts, pos)
    j = math.floor(pos)
    if pos == j:
        if not closed and (j == 0 or j == n - 1):
            return None
        return pts[(j - 1) % n] - q, pts[(j + 1) % n] - q
    return pts[j % n] - q, pts[(j + 1) % n] - q


def _half(base, d):
    c = cross(base, d)
    return 0 if c > 0 or (c == 0 and dot(base, d) > 0) else 1


def _ccw_before(base, d1, d2):
    """Is the CCW angle from base to d1 smaller than the one to d2?"""
    h1, h2 = _half(base, d1), _half(base, d2)
    if h1 != h2:
        return h1 < h2
    return cross(d1, d2) > 0


def _same_dir(a, b):
    return cross(a, b) == 0 and dot(a, b) > 0


def _side(r, r_in, r_out):
    """+1 if r points to the left of a curve passing r_in -> r_out, -1 right, 0 along."""
    if _same_dir(r, r_in) or _same_dir(r, r_out):
        return 0
    return 1 if _ccw_before(r_out, r, r_in) else -1


# ---------------------------------------------------------------- crossings

@dataclass(frozen=True)
class Node:
    point: Point
    pos1: mpq    # position on the fixed curve
    pos2: mpq    # position on the moving curve
    sign: int         # +1 when the moving curve crosses from right to left
    fixed: bool = False


def _pos_of(q, seg, j, n, closed):
    p = j + seg_param(q, *seg)
    return mpq(p % n) if closed else mpq(p)


def crossings(fixed, fixed_closed, moving, moving_closed, fixed_range=None,
              moving_range=None, skip=()):
    """Transversal intersection nodes of two embedded polylines.

    Raises NonTransverse on overlaps, touches, or endpoint contact.  Points in
    ``skip`` (shared corners) are ignored.
    """
    fs, ms = _segs(fixed, fixed_closed), _segs(moving, moving_closed)
    fr = list(fixed_range) if fixed_range is not None else list(range(len(fs)))
    mr = list(moving_range) if moving_range is not None else list(range(len(ms)))
    A, B = [fs[i] for i in fr], [ms[j] for j in mr]
    found = {}
    for a, b in candidate_pairs(A, B):
        hit = seg_intersection(*A[a], *B[b])
        if hit is None:
            continue
        if hit[0] == "overlap":
            raise NonTransverse("curves overlap along a segment",
                                locus=[_fmt(hit[1]), _fmt(hit[2])])
        q = hit[1]
        if q in skip or q in found:
            continue
        found[q] = (_pos_of(q, A[a], fr[a], len(fixed), fixed_closed),
                    _pos_of(q, B[b], mr[b], len(moving), moving_closed))
    nodes = []
    for q, (p1, p2) in found.items():
        r1, r2 = _rays(fixed, fixed_closed, p1), _rays(moving, moving_closed, p2)
        if r1 is None or r2 is None:
            raise NonTransverse("a curve endpoint lies on the other curve", locus=_fmt(q))
        s_in, s_out = _side(r2[0], *r1), _side(r2[1], *r1)
        if s_in == 0 or s_out == 0 or s_in == s_out:
            raise NonTransverse("curves touch without crossing", locus=_fmt(q))
        nodes.append(Node(q, p1, p2, 1 if s_out > 0 else -1))
    nodes.sort(key=lambda nd: nd.pos1)
    return nodes


def _has_tails(c1, c2):
    v, w = c1.vertices, c2.vertices
    return (not c1.closed and not c2.closed and len(v) >= 4 and len(w) >= 4
            and v[:2] == w[:2] and v[-2:] == w[-2:])


def intersect_transverse(c1, c2):
    """List of (point, sign) along c1; sign +1 when c2 crosses c1 right to left.

    Two paths sharing their first and last segments are treated as a line
    pair: the common tails are ignored.
    """
    if _has_tails(c1, c2):
        fr = _Frame.for_lines(c1, c2)
        nodes = fr.crossing_nodes()
    else:
        nodes = crossings(c1.vertices, c1.closed, c2.vertices, c2.closed)
    return [(nd.point, nd.sign) for nd in nodes]


# ---------------------------------------------------------------- frames

@dataclass(frozen=True)
class LinePair:
    alpha: Curve
    alpha_prime: Curve

    def __post_init__(self):
        a, b = self.alpha, self.alpha_prime
        if a.closed or b.closed:
            raise HypothesisViolated("a line pair consists of two paths")
        if not _has_tails(a, b):
            raise HypothesisViolated("paths must share their first and last segments "
                                     "and have at least 4 vertices")
        for c in (a, b):
            if not is_simple(list(c.vertices)):
                raise HypothesisViolated("line pair curves must be embedded")


@dataclass
class _Frame:
    fixed: tuple
    fixed_closed: bool
    moving: list
    moving_closed: bool
    lines: bool = False
    pinned: bool = False

    @classmethod
    def for_lines(cls, alpha, alpha_prime):
        return cls(tuple(alpha.vertices), False, list(alpha_prime.vertices), False, lines=True)

    def ranges(self):
        if self.lines:
            return range(1, len(self.fixed) - 2), range(1, len(self.moving) - 2)
        return None, None

    def corners(self):
        if self.lines:
            f, m = self.fixed, self.moving
            return [Node(f[1], mpq(1), mpq(1), 0, True),
                    Node(f[-2], mpq(len(f) - 2), mpq(len(m) - 2), 0, True)]
        if self.pinned:
            return [Node(self.fixed[0], mpq(0), mpq(0), 0, True)]
        return []

    def crossing_nodes(self):
        fr, mr = self.ranges()
        skip = {c.point for c in self.corners()}
        return crossings(self.fixed, self.fixed_closed, self.moving, self.moving_closed,
                         fr, mr, skip)

    def try_nodes(self):
        try:
            return self.crossing_nodes()
        except NonTransverse:
            return None

    def components(self, nodes):
        if self.same_set():
            return 1
        return len(nodes) + len(self.corners())

    def same_set(self):
        return (remove_collinear(list(self.fixed), self.fixed_closed)
                == remove_collinear(list(self.moving), self.moving_closed))

    def moving_curve(self, pts=None):
        return Curve(tuple(self.moving if pts is None else pts), self.moving_closed)

    def word(self, F, pts=None):
        c = self.moving_curve(pts)
        if c.closed and not self.pinned:
            return cv.crossing_word(c, F, strict=False)
        return cv.based_word(c, F, strict=False)

    def movable(self):
        n = len(self.moving)
        if self.lines:
            return set(range(2, n - 2))
        if self.pinned:
            return set(range(1, n))
        if not self.moving_closed:
            return set(range(1, n - 1))
        return set(range(n))


# ---------------------------------------------------------------- steps and traces

@dataclass(frozen=True)
class IsotopyStep:
    kind: str                 # perturb | bigon-removal | final-coincidence
    support: tuple            # regions; each region is a tuple of rings (even-odd)
    before: tuple
    after: tuple
    components: tuple         # (before, after)
    cprime: tuple = ()        # image of the C' points after this step
    curve: tuple = ()         # the whole moving curve after this step

    def to_json(self):
        return {"kind": self.kind,
                "support": [[[_fmt(p) for p in ring] for ring in reg] for reg in self.support],
                "before": [_fmt(p) for p in self.before],
                "after": [_fmt(p) for p in self.after],
                "components": list(self.components),
                "curve": [_fmt(p) for p in self.curve]}


@dataclass(frozen=True)
class StraighteningTrace:
    steps: tuple
    counts: tuple
    final: Curve
    cprime: tuple = ()
    initial: Curve = None

    def to_json(self):
        return {"steps": [s.to_json() for s in self.steps],
                "counts": list(self.counts),
                "final": [_fmt(p) for p in self.final.vertices]}


def region_contains(support, p):
    """Closed-region membership of a point in a step support."""
    for reg in support:
        if any(on_polyline(list(r) + [r[0]], p) for r in reg):
            return True
        if sum(1 for r in reg if winding(r, p) != 0) % 2 == 1:
            return True
    return False


# ---------------------------------------------------------------- float helpers

def _f(p):
    return (float(p[0]), float(p[1]))


def _unit(v):
    x, y = float(v[0]), float(v[1])
    ln = math.hypot(x, y)
    return (x / ln, y / ln)


def _pt_seg_dist(p, a, b):
    px, py = p
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    ll = dx * dx + dy * dy
    t = 0.0 if ll == 0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / ll))
    return math.hypot(px - ax - t * dx, py - ay - t * dy)


def _dyadic_below(x):
    """Largest power of two not exceeding the positive float x."""
    if x <= 0 or not math.isfinite(x):
        return mpq(1, 2 ** 40)
    return mpq(2) ** math.floor(math.log2(x))


def _grid_for(t):
    return 2 ** max(0, math.ceil(math.log2(64 / t)))


def _side_normal(d, side):
    u = _unit(d)
    return (-u[1] * side, u[0] * side)


def _vertex_dir(prev, cur, nxt, side):
    """Unit-ish direction into the sector on ``side`` of the polyline at cur."""
    c = cross(nxt - cur, prev - cur)
    if c == 0:
        return _side_normal(nxt - cur, side)
    di, do = _unit(prev - cur), _unit(nxt - cur)
    b = (di[0] + do[0], di[1] + do[1])
    reflex = c > 0 if side < 0 else c < 0
    if reflex:
        b = (-b[0], -b[1])
    ln = math.hypot(*b)
    return (b[0] / ln, b[1] / ln)


def _anchors(chain, side, closed=False):
    """Chain points (segment midpoints, interior vertices) with offset directions.

    Each anchor also carries the sine of the half-angle of its sector, which
    bounds how far an offset point may be rounded and stay in the sector.
    """
    out = []
    n = len(chain)
    last = n if closed else n - 1
    for k in range(last):
        a, b = chain[k], chain[(k + 1) % n]
        out.append((midpoint(a, b), _side_normal(b - a, side), 1.0))
        if closed or k + 1 < n - 1:
            c = chain[(k + 2) % n]
            d = _vertex_dir(a, b, c, side)
            u = _unit(c - b)
            if cross(c - b, a - b) == 0 or d[0] * u[0] + d[1] * u[1] > 0:
                out.append((b, d, max(abs(d[0] * u[1] - d[1] * u[0]), 1e-300)))
            else:
                # wide sector: walk around the vertex at distance t
                out.append((b, _side_normal(b - a, side), 1.0))
                out.append((b, d, 1.0))
                out.append((b, _side_normal(c - b, side), 1.0))
    return out


def _offset(anchors, t, mult):
    out = []
    for a, d, s in anchors:
        q = Point(a[0] + mpq(d[0]) * t * mult, a[1] + mpq(d[1]) * t * mult)
        q = snap_point(q, _grid_for(t * mpq(s)))
        if not out or out[-1] != q:
            out.append(q)
    return out


def _clearance(anchors, segs, points):
    best = math.inf
    fs = [(_f(a), _f(b)) for a, b in segs]
    fp = [_f(p) for p in points]
    for a, _, _ in anchors:
        fa = _f(a)
        for u, v in fs:
            d = _pt_seg_dist(fa, u, v)
            if d > 1e-12:    # anchors lie on their own segments
                best = min(best, d)
        for q in fp:
            best = min(best, math.hypot(fa[0] - q[0], fa[1] - q[1]))
    return best


def _chain_hits(chain, segs, allowed):
    """Does the polyline meet any of segs outside the allowed points?"""
    cs = _segs(chain, False)
    for i, j in candidate_pairs(cs, segs):
        hit = seg_intersection(*cs[i], *segs[j])
        if hit is None:
            continue
        if hit[0] == "overlap" or hit[1] not in allowed:
            return True
    return False


def _constraint_points(C):
    pts, polys = [], []
    for c in C:
        if hasattr(c, "segments"):
            polys.append(c)
        else:
            pts.append(P(*c))
    return pts, polys


def _region_avoids(poly, pts, polys):
    for p in pts:
        if point_in_polygon(poly, p) != "outside":
            return False
    ring = _segs(poly, True)
    for c in polys:
        for v in c.vertices:
            if point_in_polygon(poly, v) != "outside":
                return False
        if _chain_hits(list(c.vertices) + ([c.vertices[0]] if c.closed else []), ring, ()):
            return False
    return True


# ---------------------------------------------------------------- perturbation

def _perturb(fr, F, avoid=(), seed=0):
    """Move the free vertices of the moving curve until it is transverse.

    Midpoints are inserted first so that every movable segment has a free
    vertex.  The displacement shrinks by halving until the moved curve is
    embedded, transverse, homotopic, and the swept triangles avoid F and the
    ``avoid`` points.
    """
    old = list(fr.moving)
    n = len(old)
    keep = set(range(n)) - fr.movable()
    pts, free = [], []
    segs_idx = range(n) if fr.moving_closed else range(n - 1)
    for i in range(n):
        pts.append(old[i])
        if i not in keep:
            free.append(len(pts) - 1)
        if i in segs_idx and not (fr.lines and (i == 0 or i == n - 2)):
            pts.append(midpoint(old[i], old[(i + 1) % n]))
            free.append(len(pts) - 1)
    word = fr.word(F)
    nodes_before = fr.try_nodes()
    comps_before = fr.components(nodes_before) if nodes_before is not None else None
    xs = [p[0] for p in old] + [p[0] for p in fr.fixed]
    ys = [p[1] for p in old] + [p[1] for p in fr.fixed]
    t = _dyadic_below(float(max(max(xs) - min(xs), max(ys) - min(ys))) / 16)
    rng = random.Random(seed)
    blockers = list(F.points) + [P(*p) for p in avoid]
    for attempt in range(4 * MAX_HALVINGS):
        if attempt % 8 == 0:
            dirs = {}
            for k in free:
                d = (0, 0)
                while d == (0, 0):
                    d = (rng.randint(-4, 4), rng.randint(-4, 4))
                dirs[k] = d
        grid = _grid_for(t) * 8
        new = list(pts)
        for k in free:
            d = dirs[k]
            new[k] = snap_point(Point(pts[k][0] + d[0] * t / 4, pts[k][1] + d[1] * t / 4), grid)
        t /= 2
        trial = _Frame(fr.fixed, fr.fixed_closed, new, fr.moving_closed, fr.lines, fr.pinned)
        if any(a == b for a, b in _segs(new, fr.moving_closed)):
            continue
        if not is_simple(new, fr.moving_closed):
            continue
        nodes = trial.try_nodes()
        if nodes is None:
            continue
        tris = []
        for (a, b), (a2, b2) in zip(_segs(pts, fr.moving_closed), _segs(new, fr.moving_closed)):
            for tri in ((a, b, b2), (a, b2, a2)):
                if area2(tri) != 0:
                    tris.append(tri)
        if any(any(point_in_polygon(tri, q) != "outside" for tri in tris) for q in blockers):
            continue
        if any(any(on_segment(q, *s) for s in _segs(new, fr.moving_closed)) for q in blockers):
            continue
        try:
            if trial.word(F) != word:
                continue
        except Exception:
            continue
        step = IsotopyStep("perturb", tuple((tri,) for tri in tris), tuple(old), tuple(new),
                           (comps_before if comps_before is not None else -1,
                            trial.components(nodes)), curve=tuple(trial.moving))
        return trial, step
    raise NonTransverse("could not perturb the moving curve into transverse position")


def make_quasi_transverse(pair, F=(), seed=0, avoid=()):
    """Return a LinePair whose alpha_prime is transverse to alpha off the tails."""
    F = cv._as_punctures(F)
    fr = _Frame.for_lines(pair.alpha, pair.alpha_prime)
    if fr.same_set() or fr.try_nodes() is not None:
        return pair
    fr, _ = _perturb(fr, F, avoid, seed)
    return LinePair(pair.alpha, Curve(tuple(fr.moving), False, pair.alpha_prime.id))


# ---------------------------------------------------------------- bigons

@dataclass(frozen=True)
class BigonCert:
    face_id: int
    alpha_chain: tuple        # along the fixed curve, from corners[0] to corners[1]
    alpha_prime_chain: tuple  # along the moving curve, from corners[0] to corners[1]
    corners: tuple            # ordered by the moving curve's direction
    polygon: tuple
    moving_arc: tuple         # (start, end) positions on the moving curve
    corner_fixed: tuple       # is each corner a fixed tail corner / pin

    def to_json(self):
        return {"face": self.face_id,
                "alpha_chain": [_fmt(p) for p in self.alpha_chain],
                "alpha_prime_chain": [_fmt(p) for p in self.alpha_prime_chain],
                "corners": [_fmt(p) for p in self.corners]}


def _arcs(nodes, key, n, closed):
    order = sorted(range(len(nodes)), key=lambda k: key(nodes[k]))
    out = [(u, v, key(nodes[u]), key(nodes[v])) for u, v in zip(order, order[1:])]
    if closed and len(order) >= 2:
        u, v = order[-1], order[0]
        out.append((u, v, key(nodes[u]), key(nodes[v]) + n))
    return out


def _open_ends(nodes, key, n, closed):
    if closed or not nodes:
        return []
    ks = sorted(key(nd) for nd in nodes)
    out = []
    if ks[0] > 0:
        out.append(ks[0] / 2)
    if ks[-1] < n - 1:
        out.append((ks[-1] + n - 1) / 2)
    return out


def _find_bigon(fr, nodes, F):
    nodes = nodes + fr.corners()
    nf, nm = len(fr.fixed), len(fr.moving)
    fa = _arcs(nodes, lambda nd: nd.pos1, nf, fr.fixed_closed)
    ma = _arcs(nodes, lambda nd: nd.pos2, nm, fr.moving_closed)
    samples_f = ([(arc, _point_at(fr.fixed, (arc[2] + arc[3]) / 2)) for arc in fa]
                 + [(None, _point_at(fr.fixed, p))
                    for p in _open_ends(nodes, lambda nd: nd.pos1, nf, fr.fixed_closed)])
    samples_m = ([(arc, _point_at(fr.moving, (arc[2] + arc[3]) / 2)) for arc in ma]
                 + [(None, _point_at(fr.moving, p))
                    for p in _open_ends(nodes, lambda nd: nd.pos2, nm, fr.moving_closed)])
    by_pair = {}
    for arc in ma:
        by_pair.setdefault(frozenset(arc[:2]), []).append(arc)
    best = None
    fid = 0
    for f in fa:
        u, v = f[0], f[1]
        if u == v or (nodes[u].fixed and nodes[v].fixed):
            continue
        for m in by_pair.get(frozenset((u, v)), []):
            cid = fid
            fid += 1
            farc = _arc_points(fr.fixed, f[2], f[3])
            marc = _arc_points(fr.moving, m[2], m[3])
            if m[0] == v:
                poly = farc + marc[1:-1]
            else:
                poly = farc + list(reversed(marc))[1:-1]
            if any(winding(poly, q) != 0 for q in F.points):
                continue
            if any(arc is not f and winding(poly, s) != 0 for arc, s in samples_f):
                continue
            if any(arc is not m and winding(poly, s) != 0 for arc, s in samples_m):
                continue
            key = (len(remove_collinear(poly, True)), cid)
            if best is not None and key >= best[0]:
                continue
            x, y = nodes[m[0]], nodes[m[1]]
            achain = farc if f[0] == m[0] else list(reversed(farc))
            best = (key, BigonCert(cid, tuple(achain), tuple(marc), (x.point, y.point),
                                   tuple(poly), (m[2], m[3]), (x.fixed, y.fixed)))
    return None if best is None else best[1]


def find_minimal_bigon(pair, F=()):
    """A puncture-free bigon with no other curve piece inside, or None."""
    F = cv._as_punctures(F)
    fr = _Frame.for_lines(pair.alpha, pair.alpha_prime)
    if fr.same_set():
        return None
    return _find_bigon(fr, fr.crossing_nodes(), F)


def _cyclic_equal(a, b):
    if len(a) != len(b):
        return False
    if not a:
        return True
    try:
        k = b.index(a[0])
    except ValueError:
        return False
    return list(b[k:]) + list(b[:k]) == list(a)


def verify_bigon(curve_a, curve_b, cert, F=()):
    """Re-check a certificate against the arrangement of both curves.

    The polygon must be a bounded face of the arrangement, its boundary must
    consist of one run of edges from each curve, and it must hold no puncture.
    """
    F = cv._as_punctures(F)
    poly = remove_collinear(list(cert.polygon), True)
    if area2(poly) < 0:
        poly = [poly[0]] + list(reversed(poly[1:]))
    arr = Arrangement([("a", curve_a.segments()), ("b", curve_b.segments())])
    for face in arr.bounded_faces:
        walk = remove_collinear(list(face.walk), True)
        if not _cyclic_equal(walk, poly):
            continue
        tags = [("a" if "a" in o else "") + ("b" if "b" in o else "") for o in face.owners]
        if any(t not in ("a", "b") for t in tags):
            return False
        runs = sum(1 for i in range(len(tags)) if tags[i] != tags[i - 1])
        if runs != 2:
            return False
        return all(winding(face.walk, q) == 0 for q in F.points)
    return False


# ---------------------------------------------------------------- rerouting

class _Fail(Exception):
    pass


def _leg_param(t0, t, seg, direction):
    """Dyadic parameter on seg near t0, about distance t away, on the given side."""
    length = math.hypot(*_f(seg[1] - seg[0]))
    k = max(1, math.ceil(math.log2(max(1.0, length / float(t)))))
    while True:
        scale = 2 ** k
        if direction < 0:
            tau = mpq(math.floor(t0 * scale), scale)
            if tau == t0:
                tau -= mpq(1, scale)
            if tau > 0:
                return tau
        else:
            tau = mpq(math.ceil(t0 * scale), scale)
            if tau == t0:
                tau += mpq(1, scale)
            if tau < 1:
                return tau
        k += 1


def _moves_cprime(V, L, cp):
    """Does the step move a C' point?  Moved points end up inside L."""
    return any(point_in_polygon(V, p) != "outside" or point_in_polygon(L, p) != "outside"
               for p in cp)


def _check_cprime(V, L, rep, cp, C_pts, C_polys):
    out = []
    for p in cp:
        if point_in_polygon(V, p) != "outside":
            out.append(rep)
        elif point_in_polygon(L, p) == "boundary":
            raise _Fail("cprime")
        else:
            out.append(p)
    if rep in out:
        if point_in_polygon(L, rep) != "inside":
            raise _Fail("cprime")
        if rep in C_pts or any(on_polyline(list(c.vertices), rep) for c in C_polys):
            raise _Fail("constraint")
    return tuple(out)


def _reroute(fr, cert, nodes, F, C, cp):
    """Push the moving curve's bigon side across the fixed chain (one isotopy step)."""
    moving = list(fr.moving)
    n = len(moving)
    ps, pe = cert.moving_arc
    xfix, yfix = cert.corner_fixed
    if fr.moving_closed and not fr.pinned:
        shift = (math.floor(pe) + 1) % n
        moving = moving[shift:] + moving[:shift]
        length = pe - ps
        ps = (ps - shift) % n
        pe = ps + length
    A = list(cert.alpha_chain)
    x, y = cert.corners
    mchain = list(cert.alpha_prime_chain)
    side = -1 if area2(A + list(reversed(mchain))[1:-1]) > 0 else 1
    # the moving curve leaves x on the segment (j_u, j_u + 1) and enters y on (j_v, j_v + 1)
    if xfix:
        prefix = moving[:int(ps) + 1]
    else:
        j_u = math.floor(ps) if ps != math.floor(ps) else int(ps) - 1
        t_x = ps - j_u
        prefix = moving[:j_u + 1]
        seg_u = (moving[j_u], moving[(j_u + 1) % n])
    if yfix:
        suffix = moving[int(pe):]
    else:
        j_v = math.floor(pe)
        t_y = pe - j_v
        suffix = moving[j_v + 1:]
        seg_v = (moving[j_v % n], moving[(j_v + 1) % n])
    anchors = _anchors(A, side)
    lo, hi = math.floor(ps), math.floor(pe)
    arc_idx = {k % n for k in range(lo - 1, hi + 2)}
    other_m = [s for k, s in enumerate(_segs(moving, fr.moving_closed)) if k not in arc_idx]
    C_pts, C_polys = _constraint_points(C)
    clear = _clearance(anchors, _segs(fr.fixed, fr.fixed_closed) + other_m,
                       list(F.points) + C_pts + list(cp)
                       + [v for c in C_polys for v in c.vertices])
    seglen = min(math.hypot(*(_f(b - a))) for a, b in zip(A, A[1:]))
    t = _dyadic_below(min(clear, seglen) / 4)
    fixed_segs = _segs(fr.fixed, fr.fixed_closed)
    word = fr.word(F)
    expect = len(nodes) - (0 if xfix else 1) - (0 if yfix else 1)
    reason = None
    for _ in range(MAX_HALVINGS):
        try:
            inner = _offset(anchors, t, 1)
            outer = _offset(anchors, t, 2)
            p_u = x if xfix else lerp(*seg_u, _leg_param(t_x, t, seg_u, -1))
            p_v = y if yfix else lerp(*seg_v, _leg_param(t_y, t, seg_v, 1))
            head = [] if xfix else [p_u]
            tail = [] if yfix else [p_v]
            new = prefix + head + inner + tail + suffix
            if any(a == b for a, b in _segs(new, fr.moving_closed)):
                raise _Fail("degenerate")
            before = [p_u] + [q for q in mchain if q not in (p_u, p_v)] + [p_v]
            after = [p_u] + inner + [p_v]
            S = before + list(reversed(outer))
            if not is_simple(S, True):
                raise _Fail("support")
            if any(point_in_polygon(S, q) != "outside" for q in F.points):
                raise _Fail("support")
            if not is_simple(new, fr.moving_closed):
                raise _Fail("embedding")
            trial = _Frame(fr.fixed, fr.fixed_closed, new, fr.moving_closed, fr.lines, fr.pinned)
            new_nodes = trial.try_nodes()
            if new_nodes is None or len(new_nodes) != expect:
                raise _Fail("crossings")
            if _chain_hits([p_u] + outer + [p_v], fixed_segs + _segs(new, fr.moving_closed),
                           {p_u, p_v}):
                raise _Fail("layer")
            L = after + list(reversed(outer))
            V = before + list(reversed(inner))
            if _moves_cprime(V, L, cp) and not _region_avoids(L, C_pts, C_polys):
                raise _Fail("constraint")
            rep = midpoint(inner[0], outer[0])
            new_cp = _check_cprime(V, L, rep, cp, C_pts, C_polys)
            if trial.word(F) != word:
                raise _Fail("homotopy")
        except _Fail as e:
            reason = e.args[0]
            t /= 2
            continue
        step = IsotopyStep("bigon-removal", ((tuple(S),),), tuple(before), tuple(after),
                           (fr.components(nodes), trial.components(new_nodes)), new_cp,
                           tuple(trial.moving))
        return trial, step, new_nodes
    if reason in ("constraint", "cprime"):
        raise ConstraintConflict("support cannot avoid the constraint sets",
                                 corners=[_fmt(x), _fmt(y)])
    raise AssertionError("bigon rerouting failed (%s)" % reason)


def remove_bigon(pair, cert, F=(), C=(), Cp=()):
    """Remove one minimal bigon; returns (new pair, IsotopyStep)."""
    F = cv._as_punctures(F)
    fr = _Frame.for_lines(pair.alpha, pair.alpha_prime)
    _check_constraints(fr, C, Cp)
    new, step, _ = _reroute(fr, cert, fr.crossing_nodes(), F, C,
                            tuple(P(*p) for p in Cp))
    return LinePair(pair.alpha, Curve(tuple(new.moving), False, pair.alpha_prime.id)), step


def _final_lines(fr, F, C, cp):
    """Last move of a line pair: sweep the disc between the middles onto alpha."""
    fmid, mmid = list(fr.fixed[1:-1]), list(fr.moving[1:-1])
    D = fmid + list(reversed(mmid))[1:-1]
    side = -1 if area2(D) > 0 else 1
    anchors = _anchors(fmid, side)
    C_pts, C_polys = _constraint_points(C)
    fixed_segs = _segs(fr.fixed, False)
    moving_segs = _segs(fr.moving, False)
    clear = _clearance(anchors, fixed_segs + moving_segs,
                       list(F.points) + C_pts + list(cp)
                       + [v for c in C_polys for v in c.vertices])
    seglen = min(math.hypot(*(_f(b - a))) for a, b in zip(fmid, fmid[1:]))
    t = _dyadic_below(min(clear, seglen) / 4)
    P1, Pm = fmid[0], fmid[-1]
    reason = None
    for _ in range(MAX_HALVINGS):
        try:
            outer = _offset(anchors, t, 1)
            S = mmid + list(reversed(outer))
            if not is_simple(S, True):
                raise _Fail("support")
            if any(point_in_polygon(S, q) != "outside" for q in F.points):
                raise _Fail("support")
            if _chain_hits([P1] + outer + [Pm], fixed_segs + moving_segs, {P1, Pm}):
                raise _Fail("layer")
            L = fmid + list(reversed(outer))
            if _moves_cprime(D, L, cp) and not _region_avoids(L, C_pts, C_polys):
                raise _Fail("constraint")
            rep = midpoint(anchors[0][0], outer[0])
            new_cp = _check_cprime(D, L, rep, cp, C_pts, C_polys)
        except _Fail as e:
            reason = e.args[0]
            t /= 2
            continue
        trial = _Frame(fr.fixed, False, list(fr.fixed), False, True)
        step = IsotopyStep("final-coincidence", ((tuple(S),),), tuple(mmid), tuple(fmid),
                           (2, 1), new_cp, tuple(trial.moving))
        return trial, step
    if reason in ("constraint", "cprime"):
        raise ConstraintConflict("final sweep cannot avoid the constraint sets")
    raise AssertionError("final sweep failed (%s)" % reason)


def _check_constraints(fr, C, Cp):
    C_pts, C_polys = _constraint_points(C)
    fixed_c = Curve(fr.fixed, fr.fixed_closed)
    for p in C_pts:
        if any(on_segment(p, *s) for s in fixed_c.segments()):
            raise HypothesisViolated("a C point lies on alpha", point=_fmt(p))
    for c in C_polys:
        try:
            crossings(fr.fixed, fr.fixed_closed, c.vertices, c.closed)
        except NonTransverse:
            raise HypothesisViolated("a C curve meets alpha") from None
        if crossings(fr.fixed, fr.fixed_closed, c.vertices, c.closed):
            raise HypothesisViolated("a C curve meets alpha")
    for p in Cp:
        if hasattr(p, "segments"):
            raise HypothesisViolated("C' must be a finite point set")
        p = P(*p)
        if any(on_segment(p, *s) for s in _segs(fr.moving, fr.moving_closed)):
            raise HypothesisViolated("a C' point lies on alpha'", point=_fmt(p))


# ---------------------------------------------------------------- straightening

def _reduce_all(fr, F, C=(), cp=(), steps=None):
    nodes = fr.crossing_nodes()
    while nodes:
        cert = _find_bigon(fr, nodes, F)
        if cert is None:
            break
        fr, step, nodes = _reroute(fr, cert, nodes, F, C, cp)
        cp = step.cprime
        if steps is not None:
            steps.append(step)
    return fr, nodes, cp


def _counts(steps, first):
    return tuple([first] + [s.components[1] for s in steps])


def straighten_arc(pair, F=(), C=(), Cp=(), seed=0):
    """Isotope alpha_prime onto alpha rel tails, keeping C ∩ image(C') ⊆ C ∩ C'."""
    F = cv._as_punctures(F)
    w1 = cv.based_word(pair.alpha, F, strict=False)
    w2 = cv.based_word(pair.alpha_prime, F, strict=False)
    if w1 != w2:
        raise NotHomotopic("arcs are not homotopic rel tails",
                           words=[format_word(w1), format_word(w2)])
    fr = _Frame.for_lines(pair.alpha, pair.alpha_prime)
    _check_constraints(fr, C, Cp)
    cp = tuple(P(*p) for p in Cp)
    steps = []
    nodes = fr.try_nodes()
    if nodes is None and not fr.same_set():
        fr, step = _perturb(fr, F, avoid=cp, seed=seed)
        steps.append(step)
        nodes = fr.crossing_nodes()
    first = steps[0].components[1] if steps else fr.components(nodes or [])
    if not fr.same_set():
        fr, nodes, cp = _reduce_all(fr, F, C, cp, steps)
        if nodes:
            raise AssertionError("homotopic arcs left with an irreducible crossing")
        fr, step = _final_lines(fr, F, C, cp)
        cp = step.cprime
        steps.append(step)
    return StraighteningTrace(tuple(steps), _counts(steps, first),
                              Curve(tuple(fr.moving), False), cp, pair.alpha_prime)


def _rotate_to(loop, z):
    """Loop vertices starting at z, inserting z when it is interior to a segment."""
    v = list(loop.vertices)
    if z in v:
        k = v.index(z)
        return v[k:] + v[:k]
    for k, (a, b) in enumerate(loop.segments()):
        if on_segment(z, a, b):
            v = v[:k + 1] + [z] + v[k + 1:]
            k += 1
            return v[k:] + v[:k]
    raise HypothesisViolated("pin does not lie on the loop", point=_fmt(z))


def _enclosed(pts, F):
    return frozenset(i for i, q in enumerate(F.points, 1) if winding(pts, q) != 0)


def straighten_loop(c, cp, F=(), pin=None, seed=0):
    """Isotope the loop cp onto c, optionally fixing a common pin point."""
    F = cv._as_punctures(F)
    for loop in (c, cp):
        if not loop.closed or not is_simple(list(loop.vertices), True):
            raise HypothesisViolated("straighten_loop needs embedded loops")
        if cv.is_contractible(loop, F, strict=False):
            raise Inessential("loop is contractible in the punctured plane")
    w1, w2 = cv.crossing_word(c, F, strict=False), cv.crossing_word(cp, F, strict=False)
    if w1 != w2:
        raise NotFreelyHomotopic("loops are not freely homotopic",
                                 words=[format_word(w1), format_word(w2)])
    if pin is not None:
        z = P(*pin)
        fixed, moving = _rotate_to(c, z), _rotate_to(cp, z)
        b1 = cv.based_word(Curve(tuple(fixed), True), F, strict=False)
        b2 = cv.based_word(Curve(tuple(moving), True), F, strict=False)
        if b1 != b2:
            raise NotHomotopic("loops are not homotopic rel the pin",
                               words=[format_word(b1), format_word(b2)])
        fr = _Frame(tuple(fixed), True, moving, True, pinned=True)
    else:
        fr = _Frame(tuple(c.vertices), True, list(cp.vertices), True)
    steps = []
    nodes = fr.try_nodes()
    if nodes is None and not fr.same_set():
        fr, step = _perturb(fr, F, seed=seed)
        steps.append(step)
        nodes = fr.crossing_nodes()
    first = steps[0].components[1] if steps else fr.components(nodes or [])
    if not fr.same_set():
        fr, nodes, _ = _reduce_all(fr, F, steps=steps)
        if nodes:
            raise AssertionError("homotopic loops left with an irreducible crossing")
        if _enclosed(list(fr.fixed), F) != _enclosed(fr.moving, F):
            raise NotFreelyHomotopic("disjoint loops enclose different punctures")
        ring_out, ring_in = tuple(fr.moving), tuple(fr.fixed)
        comps = fr.components([])
        fr = _Frame(fr.fixed, True, list(fr.fixed), True, pinned=fr.pinned)
        steps.append(IsotopyStep("final-coincidence", ((ring_out, ring_in),), ring_out,
                                 ring_in, (comps, 1), curve=tuple(fr.moving)))
    return StraighteningTrace(tuple(steps), _counts(steps, first),
                              Curve(tuple(fr.moving), True), (), cp)


def geometric_intersection_number(c1, c2, F=(), seed=0):
    """Crossing count of c2 against c1 after exhaustive bigon removal."""
    F = cv._as_punctures(F)
    for c in (c1, c2):
        if not is_simple(list(c.vertices), c.closed):
            raise HypothesisViolated("curves must be embedded")
    if _has_tails(c1, c2):
        fr = _Frame.for_lines(c1, c2)
    else:
        fr = _Frame(tuple(c1.vertices), c1.closed, list(c2.vertices), c2.closed)
    if fr.same_set():
        return 0
    if fr.try_nodes() is None:
        fr, _ = _perturb(fr, F, seed=seed)
    fr, nodes, _ = _reduce_all(fr, F)
    return len(nodes)


# ---------------------------------------------------------------- incidence levels

def _meets(c1, c2):
    s1, s2 = c1.segments(), c2.segments()
    return any(seg_intersection(*s1[i], *s2[j]) is not None for i, j in candidate_pairs(s1, s2))


def incidence_edges(arcs, images):
    n = len(arcs)
    return sorted({(i, j) for i in range(n) for j in range(i + 1, n)
                   if _meets(images[i], arcs[j]) or _meets(images[j], arcs[i])})


def incidence_levels(arcs, images):
    """BFS levels of the incidence graph, rooted at the least index of each component."""
    n = len(arcs)
    if len(images) != n:
        raise HypothesisViolated("need one image per arc")
    adj = {i: [] for i in range(n)}
    for i, j in incidence_edges(arcs, images):
        adj[i].append(j)
        adj[j].append(i)
    level = {}
    for root in range(n):
        if root in level:
            continue
        level[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in level:
                    level[v] = level[u] + 1
                    queue.append(v)
    depth = max(level.values(), default=-1) + 1
    return [sorted(i for i in range(n) if level[i] == r) for r in range(depth)]

"""Planar arrangements of segments and the filling of a set in the punctured plane."""
from dataclasses import dataclass, field
from functools import cmp_to_key

from gmpy2 import mpq

from .geometry import (P, Point, area2, midpoint, on_segment, seg_intersection, seg_param,
                       winding)

_TOL = 1e-9


def _fbox(a, b):
    ax, ay, bx, by = float(a[0]), float(a[1]), float(b[0]), float(b[1])
    return (min(ax, bx) - _TOL, min(ay, by) - _TOL, max(ax, bx) + _TOL, max(ay, by) + _TOL)


def candidate_pairs(segs_a, segs_b=None):
    """Index pairs of segments whose (padded float) bounding boxes overlap.

    The padding makes this a conservative filter: every pair that really
    meets is returned; the exact test is left to the caller.
    """
    same = segs_b is None
    if same:
        segs_b = segs_a
    boxes_a = [_fbox(a, b) for a, b in segs_a]
    boxes_b = boxes_a if same else [_fbox(a, b) for a, b in segs_b]
    events = sorted([(bx[0], 0, i) for i, bx in enumerate(boxes_a)]
                    + ([] if same else [(bx[0], 1, j) for j, bx in enumerate(boxes_b)]))
    active_a, active_b = [], []
    out = []
    for x0, side, i in events:
        if side == 0:
            box = boxes_a[i]
            active_a = [k for k in active_a if boxes_a[k][2] >= x0]
            pool = active_a if same else [k for k in active_b if boxes_b[k][2] >= x0]
            if not same:
                active_b = pool
            for k in pool:
                ob = boxes_b[k]
                if ob[1] <= box[3] and box[1] <= ob[3]:
                    out.append((k, i) if same else (i, k))
            active_a.append(i)
        else:
            box = boxes_b[i]
            active_b = [k for k in active_b if boxes_b[k][2] >= x0]
            active_a = [k for k in active_a if boxes_a[k][2] >= x0]
            for k in active_a:
                oa = boxes_a[k]
                if oa[1] <= box[3] and box[1] <= oa[3]:
                    out.append((k, i))
            active_b.append(i)
    return out


def _angle_cmp(d1, d2):
    def half(d):
        return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1
    h1, h2 = half(d1), half(d2)
    if h1 != h2:
        return h1 - h2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass
class Face:
    id: int
    walk: tuple       # vertex cycle, face on the left
    owners: tuple     # owner set of each walk edge
    area2: object
    component: int

    @property
    def bounded(self):
        return self.area2 > 0


class Arrangement:
    """Subdivision of the plane induced by owned segments and isolated points.

    ``pieces`` is a list of (owner, segment list).  Edges remember the set of
    owners whose segments cover them.
    """

    def __init__(self, pieces, points=()):
        segs = []
        for owner, seglist in pieces:
            for a, b in seglist:
                if a != b:
                    segs.append((P(*a), P(*b), owner))
        pts = [P(*p) for p in points]
        cuts = [{s[0], s[1]} for s in segs]
        plain = [(a, b) for a, b, _ in segs]
        for i, j in candidate_pairs(plain):
            a, b, _ = segs[i]
            c, d, _ = segs[j]
            hit = seg_intersection(a, b, c, d)
            if hit is None:
                continue
            for q in hit[1:]:
                cuts[i].add(q)
                cuts[j].add(q)
        for p in pts:
            for i, (a, b, _) in enumerate(segs):
                if on_segment(p, a, b):
                    cuts[i].add(p)
        edges = {}
        for (a, b, owner), cs in zip(segs, cuts):
            chain = sorted(cs, key=lambda q: seg_param(q, a, b))
            for u, v in zip(chain, chain[1:]):
                key = (u, v) if u < v else (v, u)
                edges.setdefault(key, set()).add(owner)
        self.edges = {k: frozenset(v) for k, v in edges.items()}
        verts = set(pts)
        for u, v in self.edges:
            verts.add(u)
            verts.add(v)
        self.vertices = sorted(verts)
        self._build()

    def _build(self):
        nbrs = {v: [] for v in self.vertices}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        for v, lst in nbrs.items():
            lst.sort(key=cmp_to_key(lambda p, q, v=v: _angle_cmp(p - v, q - v)))
        self.nbrs = nbrs
        pos = {v: {w: i for i, w in enumerate(lst)} for v, lst in nbrs.items()}
        # union-find for components
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        roots = sorted({find(v) for v in self.vertices})
        comp_id = {r: i for i, r in enumerate(roots)}
        self.component_of = {v: comp_id[find(v)] for v in self.vertices}
        self.n_components = len(roots)
        seen = set()
        faces = []
        for u in self.vertices:
            for v in nbrs[u]:
                if (u, v) in seen:
                    continue
                walk, owners = [], []
                a, b = u, v
                while (a, b) not in seen:
                    seen.add((a, b))
                    walk.append(a)
                    owners.append(self.edges[(a, b) if a < b else (b, a)])
                    lst = nbrs[b]
                    k = pos[b][a]
                    a, b = b, lst[k - 1]
                faces.append(Face(len(faces), tuple(walk), tuple(owners), area2(walk),
                                  self.component_of[u]))
        self.faces = faces
        self.bounded_faces = [f for f in faces if f.bounded]

    def euler_ok(self):
        V, E = len(self.vertices), len(self.edges)
        F = len(self.bounded_faces) + 1
        return V - E + F == 1 + self.n_components

    def on_graph(self, p):
        if p in self.nbrs:
            return True
        return any(on_segment(p, u, v) for u, v in self.edges)

    def locate(self, p):
        """Bounded face containing p (p off the graph), or None for the outer face."""
        best = None
        for f in self.bounded_faces:
            if winding(f.walk, p) != 0 and (best is None or f.area2 < best.area2):
                best = f
        return best

    def face_sample(self, face):
        """An exact point in the interior of a bounded face."""
        for i in range(len(face.walk)):
            u, v = face.walk[i], face.walk[(i + 1) % len(face.walk)]
            m = midpoint(u, v)
            n = Point(u[1] - v[1], v[0] - u[0])  # left normal
            t = mpq(1)
            for _ in range(80):
                q = Point(m[0] + n[0] * t, m[1] + n[1] * t)
                if not self.on_graph(q):
                    g = self.locate(q)
                    if g is not None and g.id == face.id:
                        return q
                t /= 2
        raise AssertionError("no interior sample found for face %d" % face.id)

    def probes(self):
        """One point per cell: vertices, edge midpoints, face interiors."""
        out = [("vertex", v) for v in self.vertices]
        out += [("edge", midpoint(u, v)) for u, v in sorted(self.edges)]
        out += [("face", self.face_sample(f)) for f in self.bounded_faces]
        return out


@dataclass
class Region:
    """E together with the filled faces of its arrangement."""
    arrangement: Arrangement
    filled: frozenset
    punctures: tuple
    curves: tuple = field(default_factory=tuple)
    points: tuple = field(default_factory=tuple)

    def contains(self, p):
        p = P(*p)
        if p in self.punctures:
            return False
        arr = self.arrangement
        if arr.on_graph(p):
            return True
        f = arr.locate(p)
        return f is not None and f.id in self.filled

    def filled_faces(self):
        return [self.arrangement.faces[i] for i in sorted(self.filled)]


def _pieces(curves):
    return [(k, c.segments()) for k, c in enumerate(curves)]


def fill(E, F=()):
    """Filling of E in the plane minus F.

    ``E`` is a Region or a list whose items are Curves or points.  The result
    is E plus every bounded complementary face whose closure meets no puncture.
    """
    if isinstance(E, Region):
        curves, points, already = E.curves, E.points, E.filled
    else:
        curves = tuple(e for e in E if hasattr(e, "segments"))
        points = tuple(P(*e) for e in E if not hasattr(e, "segments"))
        already = frozenset()
    punctures = tuple(P(*q) for q in F)
    arr = Arrangement(_pieces(curves), points)
    blocked = set()
    for q in punctures:
        if arr.on_graph(q):
            for f in arr.bounded_faces:
                if q in f.walk or any(on_segment(q, f.walk[i], f.walk[(i + 1) % len(f.walk)])
                                      for i in range(len(f.walk))):
                    blocked.add(f.id)
        else:
            f = arr.locate(q)
            if f is not None:
                blocked.add(f.id)
    chosen = frozenset(f.id for f in arr.bounded_faces if f.id not in blocked) | already
    return Region(arr, chosen, punctures, tuple(curves), points)

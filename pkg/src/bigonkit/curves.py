"""PL curves in the plane minus a finite puncture set, and their crossing words.

Puncture ``i`` (1-based, in the order given) carries an upward vertical ray.
A curve crossing that ray contributes the letter ``x_i`` when it moves left
to right (the clockwise sense around the puncture) and ``x_i^-1`` when it
moves right to left.  So ``x_i`` is a clockwise loop around puncture i; this
is the orientation under which the braid generators act by the usual Artin
formulas (see the braid module).  A crossing at a segment endpoint is resolved by the
half-open rule: a segment counts iff the ray's abscissa lies in
``[min x, max x)`` of the segment, which amounts to nudging every ray an
infinitesimal amount to the right.
"""
from dataclasses import dataclass, field

from . import freegroup as fg
from .errors import GeneralPositionError, HypothesisViolated, InputError
from .geometry import P, on_segment, polyline_is_simple, remove_collinear


@dataclass(frozen=True)
class Curve:
    vertices: tuple
    closed: bool = False
    id: str = None
    embedded: bool = False

    def __post_init__(self):
        verts = tuple(P(*v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        need = 3 if self.closed else 2
        if len(verts) < need:
            raise InputError("a %s needs at least %d vertices"
                             % ("loop" if self.closed else "path", need))
        for i, j in self.segment_indices():
            if verts[i] == verts[j]:
                raise InputError("consecutive vertices coincide at index %d" % i)
        if self.embedded and not self.is_simple():
            raise InputError("curve flagged embedded is not simple")

    def segment_indices(self):
        n = len(self.vertices)
        idx = [(i, i + 1) for i in range(n - 1)]
        if self.closed:
            idx.append((n - 1, 0))
        return idx

    def segments(self):
        v = self.vertices
        return [(v[i], v[j]) for i, j in self.segment_indices()]

    def is_simple(self):
        return polyline_is_simple(list(self.vertices), closed=self.closed)

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[0] if self.closed else self.vertices[-1]

    def reversed(self):
        v = self.vertices
        if self.closed:
            v = (v[0],) + tuple(reversed(v[1:]))
        else:
            v = tuple(reversed(v))
        return Curve(v, self.closed, self.id, self.embedded)

    def point_set_key(self):
        """Canonical vertex list of the underlying oriented point set."""
        return tuple(remove_collinear(list(self.vertices), self.closed))


def PLPath(vertices, embedded=False, id=None):
    return Curve(tuple(vertices), False, id, embedded)


def PLLoop(vertices, embedded=False, id=None):
    return Curve(tuple(vertices), True, id, embedded)


@dataclass(frozen=True)
class PunctureSet:
    points: tuple = field(default_factory=tuple)

    def __post_init__(self):
        pts = tuple(P(*p) for p in self.points)
        object.__setattr__(self, "points", pts)
        xs = [p.x for p in pts]
        if len(set(pts)) != len(pts):
            raise InputError("punctures must be pairwise distinct")
        if len(set(xs)) != len(xs):
            # equal abscissas would put one puncture on the other's ray
            raise InputError("punctures must have pairwise distinct x-coordinates")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _as_punctures(F):
    return F if isinstance(F, PunctureSet) else PunctureSet(tuple(F))


def validate_general_position(curve, F, strict=True):
    """Return None when ``curve`` is in general position w.r.t. ``F``.

    Otherwise return a report for the first violating segment/puncture pair.
    With ``strict=False`` only contact with a puncture is a violation; the
    half-open rule handles vertices on rays consistently in that mode.
    """
    F = _as_punctures(F)
    for s, (a, b) in enumerate(curve.segments()):
        for i, p in enumerate(F.points, 1):
            if on_segment(p, a, b):
                return {"segment": s, "puncture": i, "reason": "curve meets puncture"}
            if not strict:
                continue
            if a.x == b.x == p.x:
                return {"segment": s, "puncture": i, "reason": "vertical segment collinear with ray"}
            for v in (a, b):
                if v.x == p.x and v.y > p.y:
                    return {"segment": s, "puncture": i, "reason": "vertex on ray"}
    return None


def _check(curve, F, strict):
    bad = validate_general_position(curve, F, strict)
    if bad is not None:
        raise GeneralPositionError("curve not in general position", **bad)


def segment_letters(a, b, F):
    """Signed ray crossings of the segment a -> b, in travel order."""
    out = []
    if a.x == b.x:
        return out
    rightward = a.x < b.x
    lo, hi = (a.x, b.x) if rightward else (b.x, a.x)
    for i, p in enumerate(F.points, 1):
        if lo <= p.x < hi:
            y = a.y + (p.x - a.x) * (b.y - a.y) / (b.x - a.x)
            if y > p.y:
                out.append((p.x, i if rightward else -i))
    out.sort(key=lambda t: t[0], reverse=not rightward)
    return [l for _, l in out]


def raw_letters(curve, F):
    F = _as_punctures(F)
    letters = []
    for a, b in curve.segments():
        letters.extend(segment_letters(a, b, F))
    return letters


def based_word(curve, F, strict=True):
    """Reduced crossing word read from the first vertex (no cyclic reduction)."""
    F = _as_punctures(F)
    _check(curve, F, strict)
    return fg.reduce(raw_letters(curve, F))


def crossing_word(curve, F, strict=True):
    """Reduced crossing word; canonical cyclic word for loops."""
    w = based_word(curve, F, strict)
    return fg.cyclic_word(w) if curve.closed else w


def homotopic_rel_endpoints(g1, g2, F, strict=True):
    if g1.closed or g2.closed:
        raise InputError("homotopy rel endpoints is for paths")
    if g1.start != g2.start or g1.end != g2.end:
        raise HypothesisViolated("paths have different endpoints")
    return based_word(g1, F, strict) == based_word(g2, F, strict)


def freely_homotopic(l1, l2, F, strict=True):
    if not (l1.closed and l2.closed):
        raise InputError("free homotopy is for loops")
    return crossing_word(l1, F, strict) == crossing_word(l2, F, strict)


def is_contractible(loop, F, strict=True):
    if not loop.closed:
        raise InputError("contractibility is for loops")
    return crossing_word(loop, F, strict) == ()


def winding_number(loop, p):
    """Winding number of a loop around p via signed upward-ray crossings."""
    p = P(*p)
    for a, b in loop.segments():
        if on_segment(p, a, b):
            raise HypothesisViolated("point lies on the loop", point=[str(p.x), str(p.y)])
    F = PunctureSet((p,))
    # a counterclockwise turn crosses the ray right to left, i.e. emits x^-1
    return -sum(1 if l > 0 else -1 for l in raw_letters(loop, F))


def commutation_check(alpha, beta, F, strict=True):
    """Do the based classes of two loops at a common basepoint commute?"""
    if not (alpha.closed and beta.closed):
        raise InputError("commutation check is for loops")
    if alpha.start != beta.start:
        raise HypothesisViolated("loops have different basepoints")
    F = _as_punctures(F)
    if alpha.start in F.points:
        raise HypothesisViolated("basepoint is a puncture")
    return fg.commute(based_word(alpha, F, strict), based_word(beta, F, strict))

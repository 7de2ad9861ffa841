"""Geometric pure braids: motions of finitely many points of the plane.

Sign conventions:

* ``linking_number(b, i, j)`` counts counterclockwise turns of the vector
  from strand i to strand j as +1.
* In a braid word, ``(i, +1)`` is the generator s_i: the strands in x-slots i
  and i+1 exchange and the one coming from the left passes in front, meaning
  it has the greater y-coordinate at the moment the two x-coordinates agree.
* ``artin_action`` lets s_i act by x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i.
  Here x_k is the loop around the puncture in x-slot k, as read by the
  crossing words of the curves module.
"""
import random
from dataclasses import dataclass
from itertools import combinations

from gmpy2 import mpq

from . import freegroup as fg
from .errors import Collision, HypothesisViolated, InputError, NonGenericProjection
from .geometry import P, Point, lerp, on_segment, seg_param, winding

ORIGIN = Point(mpq(0), mpq(0))


@dataclass(frozen=True)
class Strand:
    times: tuple
    points: tuple

    def __post_init__(self):
        from .geometry import Q
        ts = tuple(Q(t) for t in self.times)
        pts = tuple(P(*p) for p in self.points)
        object.__setattr__(self, "times", ts)
        object.__setattr__(self, "points", pts)
        if len(ts) != len(pts) or len(ts) < 2:
            raise InputError("a strand needs matching times and points, at least two")
        if ts[0] != 0 or ts[-1] != 1:
            raise InputError("strand times must run from 0 to 1")
        if any(a >= b for a, b in zip(ts, ts[1:])):
            raise InputError("strand times must increase")

    def at(self, t):
        ts = self.times
        lo, hi = 0, len(ts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ts[mid] <= t:
                lo = mid
            else:
                hi = mid
        a, b = ts[lo], ts[hi]
        return lerp(self.points[lo], self.points[hi], (t - a) / (b - a))


@dataclass(frozen=True)
class PureBraid:
    strands: tuple

    def __post_init__(self):
        object.__setattr__(self, "strands", tuple(self.strands))
        if not self.strands:
            raise InputError("a braid needs at least one strand")
        for k, s in enumerate(self.strands):
            if s.points[0] != s.points[-1]:
                raise HypothesisViolated("strand %d does not return to its start" % k,
                                         strand=k)

    @property
    def n(self):
        return len(self.strands)

    def base(self):
        return [s.points[0] for s in self.strands]

    def grid(self):
        return sorted({t for s in self.strands for t in s.times})

    def positions(self, t):
        return [s.at(t) for s in self.strands]

    def table(self):
        """Common breakpoint times and every strand's position at each."""
        ts = self.grid()
        return ts, [[s.at(t) for s in self.strands] for t in ts]


@dataclass(frozen=True)
class CollisionWitness:
    t: object
    i: int
    j: int

    def to_json(self):
        return {"t": _fmt_q(self.t), "i": self.i, "j": self.j}


def _fmt_q(v):
    return str(v)


def validate(braid):
    """None when strands stay pairwise distinct, else the first collision."""
    ts, rows = braid.table()
    for k in range(len(ts) - 1):
        t0, t1 = ts[k], ts[k + 1]
        for i, j in combinations(range(braid.n), 2):
            d0 = rows[k][j] - rows[k][i]
            d1 = rows[k + 1][j] - rows[k + 1][i]
            if on_segment(ORIGIN, d0, d1):
                s = 0 if d0 == ORIGIN else seg_param(ORIGIN, d0, d1)
                return CollisionWitness(t0 + s * (t1 - t0), i, j)
    return None


def check(braid):
    w = validate(braid)
    if w is not None:
        raise Collision("strands %d and %d collide" % (w.i, w.j), **w.to_json())
    return braid


# ---------------------------------------------------------------- linking

def _difference_loop(braid, i, j):
    ts, rows = braid.table()
    return [row[j] - row[i] for row in rows[:-1]]


def linking_number(braid, i, j):
    """Net counterclockwise turns of the vector from strand i to strand j."""
    if i == j:
        raise InputError("linking number needs two distinct strands")
    check(braid)
    loop = _difference_loop(braid, i, j)
    if len(loop) < 2:
        return 0
    return winding(loop, ORIGIN)


def linking_matrix(braid):
    check(braid)
    n = braid.n
    m = [[None] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        m[i][j] = m[j][i] = linking_number(braid, i, j)
    return m


# ---------------------------------------------------------------- building braids

def identity_braid(points):
    return PureBraid(tuple(Strand((0, 1), (p, p)) for p in points))


def _retime(strand, a, b):
    return [a + (b - a) * t for t in strand.times], list(strand.points)


def concat(b1, b2):
    """b1 on [0, 1/2] followed by b2 on [1/2, 1]."""
    if b1.n != b2.n or b1.base() != b2.base():
        raise HypothesisViolated("braids must share their base points")
    half = mpq(1, 2)
    out = []
    for s1, s2 in zip(b1.strands, b2.strands):
        t1, p1 = _retime(s1, 0, half)
        t2, p2 = _retime(s2, half, 1)
        out.append(Strand(tuple(t1 + t2[1:]), tuple(p1 + p2[1:])))
    return PureBraid(tuple(out))


def reverse(braid):
    return PureBraid(tuple(Strand(tuple(1 - t for t in reversed(s.times)),
                                  tuple(reversed(s.points))) for s in braid.strands))


# tan of half the angle for the eight breakpoints of one counterclockwise turn;
# consecutive angles differ by less than a half turn, so chords keep the winding.
# The quarter turns are skipped so points on a horizontal line never reach a
# common x-coordinate at a breakpoint.
_HALF_TANGENTS = (0, mpq(1, 3), mpq(2, 3), mpq(3, 2), None, mpq(-3, 2), mpq(-2, 3),
                  mpq(-1, 3))


def _rotation(s):
    if s is None:
        return mpq(-1), mpq(0)
    s = mpq(s)
    d = 1 + s * s
    return (1 - s * s) / d, 2 * s / d


def _rotate(p, center, cs):
    c, s = cs
    x, y = p[0] - center[0], p[1] - center[1]
    return Point(center[0] + c * x - s * y, center[1] + s * x + c * y)


def rotation_braid(points, k, center=(0, 0)):
    """k rigid counterclockwise turns of the points about center (PL, exact)."""
    points = [P(*p) for p in points]
    center = P(*center)
    if k == 0:
        return identity_braid(points)
    turn = [_rotation(s) for s in _HALF_TANGENTS]
    if k < 0:
        turn = [turn[0]] + turn[:0:-1]
    steps = [turn[m % 8] for m in range(8 * abs(k))] + [turn[0]]
    total = len(steps) - 1
    times = tuple(mpq(m, total) for m in range(total + 1))
    return PureBraid(tuple(Strand(times, tuple(_rotate(p, center, cs) for cs in steps))
                           for p in points))


def rotation_compose(braid, k, center=(0, 0)):
    """The braid followed by k full turns of its base points about center.

    Pointwise composition with a loop of rotations is homotopic to this
    concatenation, so every linking number shifts by exactly k.
    """
    if k == 0:
        return braid
    return concat(braid, rotation_braid(braid.base(), k, center))


def jitter(braid, seed=0):
    """Shift interior breakpoint times by distinct tiny rationals (deterministic)."""
    rng = random.Random(seed)
    gaps = [b - a for s in braid.strands for a, b in zip(s.times, s.times[1:])]
    count = sum(len(s.times) for s in braid.strands)
    scale = min(gaps) / (4 * (count + 1) * 1024)
    offsets = rng.sample(range(1, 1024 * (count + 1)), count)
    out, k = [], 0
    for s in braid.strands:
        ts = list(s.times)
        for m in range(1, len(ts) - 1):
            ts[m] += offsets[k] * scale / (count + 1)
            k += 1
        out.append(Strand(tuple(ts), s.points))
    return PureBraid(tuple(out))


# ---------------------------------------------------------------- braid words

def braid_word(braid):
    """Signed adjacent exchanges of the x-order, in time order."""
    check(braid)
    ts, rows = braid.table()
    n = braid.n
    xs0 = [p.x for p in rows[0]]
    if len(set(xs0)) != n:
        raise NonGenericProjection("base points share an x-coordinate", t="0")
    events = []
    for k in range(len(ts) - 1):
        t0, t1 = ts[k], ts[k + 1]
        for i, j in combinations(range(n), 2):
            a0 = rows[k][j].x - rows[k][i].x
            a1 = rows[k + 1][j].x - rows[k + 1][i].x
            if a0 == 0 and a1 == 0:
                raise NonGenericProjection("strands %d and %d share x over an interval"
                                           % (i, j), t=_fmt_q(t0))
            if a1 == 0:
                if k + 1 == len(ts) - 1:
                    continue    # the end positions were checked at t = 0
                raise NonGenericProjection("x-coordinates of strands %d and %d agree at "
                                           "a breakpoint" % (i, j), t=_fmt_q(t1))
            if a0 == 0 or (a0 > 0) == (a1 > 0):
                continue
            s = a0 / (a0 - a1)
            t = t0 + s * (t1 - t0)
            pi = lerp(rows[k][i], rows[k + 1][i], s)
            pj = lerp(rows[k][j], rows[k + 1][j], s)
            events.append((t, i, j, pi, pj))
    events.sort(key=lambda e: e[0])
    for e1, e2 in zip(events, events[1:]):
        if e1[0] == e2[0]:
            raise NonGenericProjection("two exchanges happen at once", t=_fmt_q(e1[0]))
    order = sorted(range(n), key=lambda i: xs0[i])
    word = []
    for t, i, j, pi, pj in events:
        a, b = order.index(i), order.index(j)
        if abs(a - b) != 1:
            raise NonGenericProjection("non-adjacent strands exchange", t=_fmt_q(t))
        lo = min(a, b)
        left = order[lo]
        py_left, py_right = (pi.y, pj.y) if left == i else (pj.y, pi.y)
        word.append((lo + 1, 1 if py_left > py_right else -1))
        order[lo], order[lo + 1] = order[lo + 1], order[lo]
    return tuple(word)


def parse_braid_word(text):
    text = text.strip()
    if text in ("", "e"):
        return ()
    out = []
    for tok in text.split():
        base, _, exp = tok.partition("^")
        if not base.startswith("s") or not base[1:].isdigit() or int(base[1:]) < 1:
            raise InputError("bad braid generator %r" % tok)
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise InputError("bad exponent in %r" % tok) from None
        out.extend([(int(base[1:]), 1 if e > 0 else -1)] * abs(e))
    return tuple(out)


def format_braid_word(word):
    if not word:
        return "e"
    return " ".join("s%d" % i if e > 0 else "s%d^-1" % i for i, e in word)


def _generator_action(n, i, sign):
    imgs = [(k,) for k in range(1, n + 1)]
    a, b = i, i + 1
    if sign > 0:
        imgs[a - 1] = (a, b, -a)
        imgs[b - 1] = (a,)
    else:
        imgs[a - 1] = (b,)
        imgs[b - 1] = (-b, a, b)
    return fg.EndoSpec(n, tuple(imgs))


def artin_action(word, n):
    """Automorphism of F_n induced by the braid word (first letter acts first)."""
    for i, e in word:
        if not 1 <= i < n or e not in (1, -1):
            raise InputError("generator s%d is not valid on %d strands" % (i, n))
    phi = fg.EndoSpec.identity(n)
    for i, e in word:
        phi = _generator_action(n, i, e).compose(phi)
    inv = fg.EndoSpec.identity(n)
    for i, e in reversed(word):
        inv = _generator_action(n, i, -e).compose(inv)
    if not inv.compose(phi).is_identity():
        raise AssertionError("Artin action failed to invert")
    return phi


def is_trivial(braid):
    return artin_action(braid_word(braid), braid.n).is_identity()


def jittered_word(braid, seeds=range(8)):
    """braid_word, retrying on jittered copies when the projection is not generic.

    Returns (word, seed) where seed is None when no jitter was needed.  The
    jitter is far smaller than any strand separation, so the jittered braid is
    isotopic to the original.
    """
    try:
        return braid_word(braid), None
    except NonGenericProjection as err:
        last = err
    for seed in seeds:
        try:
            return braid_word(jitter(braid, seed)), seed
        except NonGenericProjection as err:
            last = err
    raise last


def unlinked_finite(braid):
    phi = artin_action(braid_word(braid), braid.n)
    witness = None
    for k, img in enumerate(phi.images, 1):
        if img != (k,):
            witness = {"generator": "x%d" % k, "image": fg.format_word(img)}
            break
    return {"trivial": witness is None, "linking_matrix": linking_matrix(braid),
            "witness": witness}


def _centroid(points):
    n = len(points)
    return Point(sum(p.x for p in points) / n, sum(p.y for p in points) / n)


def _constancy(matrix, block):
    pairs = list(combinations(sorted(block), 2))
    if not pairs:
        return {"strands": sorted(block), "constant": True, "value": None}
    first = matrix[pairs[0][0]][pairs[0][1]]
    for i, j in pairs:
        if matrix[i][j] != first:
            return {"strands": sorted(block), "constant": False, "value": None,
                    "witness": [[pairs[0][0], pairs[0][1], first], [i, j, matrix[i][j]]]}
    return {"strands": sorted(block), "constant": True, "value": first}


def connected_set_criterion(braid, components=None, seeds=range(8)):
    """Finite-sample check behind the unlinkedness of connected fixed sets.

    Each block of ``components`` stands for one connected piece.  Linking
    numbers must be constant on pairs inside a block.  When the whole matrix
    is constant with value L (always so for a single constant block), the
    braid corrected by -L turns is tested for triviality; otherwise the
    report carries the constancy table only (``unlinked`` is None), except
    that a non-constant block already rules unlinkedness out.  A rigid
    rotation of collinear points has simultaneous x-exchanges, so the word is
    read from a jittered copy when needed; ``jitter_seed`` records which.
    """
    n = braid.n
    if components is None:
        components = [list(range(n))]
    seen = sorted(i for block in components for i in block)
    if seen != list(range(n)):
        raise InputError("components must partition the strand indices")
    matrix = linking_matrix(braid)
    table = [_constancy(matrix, block) for block in components]
    report = {"components": table, "linking_matrix": matrix, "unlinked": None,
              "correction": None, "jitter_seed": None}
    bad = next((c for c in table if not c["constant"]), None)
    if bad is not None:
        report["unlinked"] = False
        report["witness"] = bad["witness"]
        return report
    whole = _constancy(matrix, range(n))
    if whole["constant"]:
        L = whole["value"] or 0
        fixed = rotation_compose(braid, -L, _centroid(braid.base()))
        word, seed = jittered_word(fixed, seeds)
        report["correction"] = -L
        report["jitter_seed"] = seed
        report["unlinked"] = artin_action(word, n).is_identity()
    return report

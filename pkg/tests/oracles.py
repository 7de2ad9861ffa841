"""Brute-force reference implementations used to pin DERIVED values."""
from fractions import Fraction

from bigonkit import freegroup as fg


def all_reduced_words(rank, max_len):
    letters = [i for g in range(1, rank + 1) for i in (g, -g)]
    yield ()
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for a in letters:
                if w and w[-1] == -a:
                    continue
                nxt.append(w + (a,))
        yield from nxt
        frontier = nxt


def brute_conjugator(w1, w2, rank, max_len):
    """Search t with w1 = t w2 t^-1 among reduced words up to max_len."""
    for t in all_reduced_words(rank, max_len):
        if fg.concat(t, w2, fg.invert(t)) == fg.reduce(w1):
            return t
    return None


def brute_inner(spec, max_len):
    for c in all_reduced_words(spec.rank, max_len):
        if all(fg.concat(c, (i,), fg.invert(c)) == img
               for i, img in enumerate(spec.images, 1)):
            return c
    return None


def brute_roots(w, rank, max_len):
    """All (r, m) with r^m = w, m >= 2, |r| <= max_len."""
    out = []
    for r in all_reduced_words(rank, max_len):
        if not r:
            continue
        for m in range(2, len(w) + 2):
            if fg.power(r, m) == fg.reduce(w):
                out.append((r, m))
    return out


def ray_crossings_bruteforce(vertices, closed, punctures):
    """Signed crossings of each puncture's upward ray by direct enumeration.

    Works segment by segment with explicit intersection of the segment with
    the vertical line through the puncture, nudged right by a symbolic
    epsilon: a vertex exactly on the line counts as lying left of it.
    """
    def fr(v):
        return Fraction(int(v.numerator), int(v.denominator))
    pts = [(fr(x), fr(y)) for x, y in vertices]
    punctures = [(fr(x), fr(y)) for x, y in punctures]
    segs = list(zip(pts, pts[1:]))
    if closed:
        segs.append((pts[-1], pts[0]))
    letters = []
    for a, b in segs:
        hits = []
        for i, (px, py) in enumerate(punctures, 1):
            left_a = a[0] <= px
            left_b = b[0] <= px
            if left_a == left_b:
                continue
            t = (px - a[0]) / (b[0] - a[0])
            y = a[1] + t * (b[1] - a[1])
            if y > py:
                hits.append((t, i if b[0] > a[0] else -i))
        hits.sort()
        letters.extend(l for _, l in hits)
    return letters


# ---------------------------------------------------------------- braid action by pushing loops

def _q(v):
    from gmpy2 import mpq
    return mpq(v)


def _pos(times, points, t):
    from bigonkit.geometry import lerp
    for k in range(len(times) - 1):
        if times[k] <= t <= times[k + 1]:
            return lerp(points[k], points[k + 1], (t - times[k]) / (times[k + 1] - times[k]))
    raise ValueError("time outside the strand")


def _tri_clear(tri, punct):
    from bigonkit.geometry import area2, point_in_polygon
    if area2(tri) == 0:
        return all(not _on_poly(tri, q) for q in punct)
    return all(point_in_polygon(tri, q) == "outside" for q in punct)


def _on_poly(poly, q):
    from bigonkit.geometry import on_polygon
    return on_polygon(poly, q)


def _nudge(loop, p, q, punct):
    """Move loop vertices off the closed segment pq and split segments through q."""
    from bigonkit.geometry import Point, on_segment, orient
    d = q - p
    nrm = Point(-d[1], d[0])
    out = list(loop)
    changed = True
    while changed:
        changed = False
        n = len(out)
        for k in range(n):
            a, b = out[k], out[(k + 1) % n]
            if on_segment(q, a, b) and q not in (a, b):
                out.insert(k + 1, q)
                changed = True
                break
        if changed:
            continue
        for k in range(1, len(out)):
            v = out[k]
            on_line = orient(p, q, v) == 0
            if on_segment(v, p, q) or (on_line and any(orient(p, q, w) == 0 for w in
                                                       (out[k - 1], out[(k + 1) % len(out)]))):
                e = _q(1) / 64
                while True:
                    w = Point(v[0] + nrm[0] * e, v[1] + nrm[1] * e)
                    prev, nxt = out[k - 1], out[(k + 1) % len(out)]
                    if (_tri_clear((prev, v, w), punct) and _tri_clear((v, w, nxt), punct)
                            and orient(p, q, w) != 0):
                        break
                    e /= 2
                out[k] = w
                changed = True
                break
    return out


def push_loop(loop, p, q, punct):
    """Image of a loop (vertex 0 is the fixed base) when a puncture slides from p to q.

    ``punct`` are the positions of the other punctures.  Every crossing of
    the loop with the segment pq is replaced by a detour around q, which is
    where a finger move along pq drags it.
    """
    from bigonkit.geometry import Point, orient, point_in_polygon, seg_intersection
    if p == q:
        return list(loop)
    loop = _nudge(loop, p, q, punct + [p])
    loop = [v for k, v in enumerate(loop) if k == 0 or v != loop[k - 1]]
    if len(loop) > 1 and loop[-1] == loop[0]:
        loop.pop()
    d = q - p
    nrm = Point(-d[1], d[0])
    out = []
    n = len(loop)
    for k in range(n):
        a, b = loop[k], loop[(k + 1) % n]
        out.append(a)
        hit = seg_intersection(a, b, p, q)
        if hit is None:
            continue
        assert hit[0] == "point"
        r = hit[1]
        s = orient(p, q, a)
        e = _q(1) / 16
        while True:
            r1 = r + nrm.scale(e * s)
            r2 = r - nrm.scale(e * s)
            c1 = q + d.scale(e) + nrm.scale(e * s)
            c2 = q + d.scale(e) - nrm.scale(e * s)
            rect = [r1, c1, c2, r2]
            ok = all(point_in_polygon(rect, x) == "outside" for x in punct)
            ok = ok and _tri_clear((a, r, r1), punct + [q]) and _tri_clear((r, r2, b), punct + [q])
            if ok:
                break
            e /= 2
        out.extend([r1, c1, c2, r2])
    return out


def braid_action_oracle(strands):
    """Images of x_1..x_n under a geometric braid, computed by pushing loops.

    ``strands`` is a list of (times, points); the motion may permute the
    points.  Generator k is a loop from a far base point around the puncture
    in x-slot k; images are read off with ray_crossings_bruteforce against
    the final positions in x-slot order.
    """
    from bigonkit.geometry import Point, seg_intersection
    strands = [([_q(t) for t in ts], [Point(_q(x), _q(y)) for x, y in ps])
               for ts, ps in strands]
    n = len(strands)
    grid = sorted({t for ts, _ in strands for t in ts})
    rows = [[_pos(ts, ps, t) for ts, ps in strands] for t in grid]
    xs = [p[0] for row in rows for p in row]
    ys = [p[1] for row in rows for p in row]
    low = min(ys) - 10
    left = min(xs) - 10
    start = rows[0]
    slots = sorted(range(n), key=lambda i: start[i][0])
    gap = min([abs(start[i][0] - start[j][0]) for i in range(n) for j in range(i)] + [_q(8)])
    dlt = gap / 8
    loops = []
    for i in slots:
        cx, cy = start[i]
        base = Point(left, low)
        # clockwise square, which reads as the single letter x_k
        loops.append([base, Point(cx, low), Point(cx, cy - dlt), Point(cx - dlt, cy - dlt),
                      Point(cx - dlt, cy + dlt), Point(cx + dlt, cy + dlt),
                      Point(cx + dlt, cy - dlt), Point(cx, cy - dlt), Point(cx, low)])
    cur = list(start)
    for k in range(len(grid) - 1):
        a_row, b_row = rows[k], rows[k + 1]
        m = 1
        while True:
            ok = True
            for step in range(m):
                segs = [(a_row[i] + (b_row[i] - a_row[i]).scale(_q(step) / m),
                         a_row[i] + (b_row[i] - a_row[i]).scale(_q(step + 1) / m))
                        for i in range(n)]
                for i in range(n):
                    for j in range(i):
                        if seg_intersection(*segs[i], *segs[j]) is not None:
                            ok = False
            if ok:
                break
            m *= 2
        for step in range(m):
            for i in range(n):
                p = a_row[i] + (b_row[i] - a_row[i]).scale(_q(step) / m)
                q = a_row[i] + (b_row[i] - a_row[i]).scale(_q(step + 1) / m)
                others = [cur[j] for j in range(n) if j != i]
                loops = [push_loop(lp, p, q, others) for lp in loops]
                cur[i] = q
    final = sorted(cur, key=lambda p: p[0])
    return tuple(fg.reduce(ray_crossings_bruteforce(lp, True, final)) for lp in loops)


def generator_motion(n, word, h=1):
    """Strands realizing a braid word on slots x = 1..n (not necessarily pure).

    In s_i the strand in slot i moves right over the top (greater y) for a
    positive letter and under for a negative one; the other strand takes the
    opposite side on a slightly different route so x-exchanges are generic.
    """
    from fractions import Fraction
    pos = {k: k for k in range(1, n + 1)}      # slot -> strand id
    paths = {k: [(Fraction(0), (k, 0))] for k in range(1, n + 1)}
    L = max(len(word), 1)
    for step, (i, e) in enumerate(word):
        tm, t1 = Fraction(2 * step + 1, 2 * L), Fraction(step + 1, L)
        a, b = pos[i], pos[i + 1]
        paths[a] += [(tm, (Fraction(2 * i + 1, 2), e * h)), (t1, (i + 1, 0))]
        paths[b] += [(tm, (i + Fraction(1, 3), -e * h)), (t1, (i, 0))]
        for k in range(1, n + 1):
            if k not in (i, i + 1):
                s = pos[k]
                paths[s] += [(t1, (k, 0))]
        pos[i], pos[i + 1] = b, a
    if not word:
        for k in paths:
            paths[k].append((Fraction(1), (k, 0)))
    return [([t for t, _ in paths[k]], [p for _, p in paths[k]]) for k in range(1, n + 1)]

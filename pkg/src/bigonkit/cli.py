"""Batch front end: ``bigonkit VERB INPUT.json [-o OUT] [--svg FILE] [--single-svg]``.

Exit status 0 on success, 1 on a domain error (the error object is printed as
JSON), 2 on unreadable or malformed input.  Output is JSON with sorted keys;
rationals are "p/q" strings.  BIGONKIT_SEED seeds the perturbations used to
reach general position (default 0).
"""
import argparse
import os
import sys
from pathlib import Path

from . import bigon, braid as br, curves as cv, freegroup as fg, serialize as ser, svg
from .arrangement import fill
from .errors import (BigonkitError, InputError, NotFreelyHomotopic, NotHomotopic)

JITTER_TRIES = 8


def _seed():
    raw = os.environ.get("BIGONKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError("BIGONKIT_SEED must be an integer, got %r" % raw) from None


def _word(doc, key="word"):
    v = ser._field(doc, key, str)
    return fg.parse_word(v)


def _need(items, k, what):
    if len(items) < k:
        raise InputError("%s needs %d paths, got %d" % (what, k, len(items)))
    return items[:k]


# ---------------------------------------------------------------- free group verbs

def do_reduce_word(doc, args):
    w = _word(doc)
    return {"word": fg.format_word(w), "cyclic": fg.format_word(fg.cyclic_word(w))}


def do_conjugate(doc, args):
    words = ser._field(doc, "words", list)
    if len(words) != 2 or not all(isinstance(w, str) for w in words):
        raise InputError("'words' must hold two word strings")
    w1, w2 = (fg.parse_word(w) for w in words)
    t = fg.are_conjugate(w1, w2)
    return {"conjugate": t is not None, "conjugator": None if t is None else fg.format_word(t)}


def do_inner(doc, args):
    images = ser._field(doc, "images", list)
    rank = doc.get("rank", len(images))
    if not isinstance(rank, int) or rank != len(images):
        raise InputError("'rank' must equal the number of images")
    spec = fg.EndoSpec(rank, tuple(fg.parse_word(w) for w in images))
    c = fg.detect_inner(spec)
    return {"inner": c is not None, "conjugator": None if c is None else fg.format_word(c)}


# ---------------------------------------------------------------- curve verbs

def do_word(doc, args):
    F = ser.punctures(doc)
    return {"words": [{"id": c.id, "word": fg.format_word(cv.crossing_word(c, F, args.strict))}
                      for c in ser.curves(doc)]}


def do_homotopic(doc, args):
    F = ser.punctures(doc)
    c1, c2 = _need(ser.curves(doc), 2, "homotopic")
    if c1.closed != c2.closed:
        raise InputError("compare two paths or two loops")
    w1, w2 = cv.crossing_word(c1, F, args.strict), cv.crossing_word(c2, F, args.strict)
    if c1.closed:
        ok = cv.freely_homotopic(c1, c2, F, args.strict)
        err = NotFreelyHomotopic
    else:
        ok = cv.homotopic_rel_endpoints(c1, c2, F, args.strict)
        err = NotHomotopic
    if not ok:
        raise err("curves are not homotopic", words=[fg.format_word(w1), fg.format_word(w2)])
    return {"homotopic": True, "word": fg.format_word(w1)}


def do_contractible(doc, args):
    F = ser.punctures(doc)
    return {"loops": [{"id": c.id, "contractible": cv.is_contractible(c, F, args.strict)}
                      for c in ser.curves(doc) if c.closed]}


def do_fill(doc, args):
    F = ser.punctures(doc)
    items = list(ser.curves(doc)) + list(ser.points(doc.get("points", [])))
    region = fill(items, F)
    out = {"faces": [[[p.x, p.y] for p in f.walk] for f in region.filled_faces()]}
    if "query" in doc:
        out["contains"] = [region.contains(p) for p in ser.points(doc["query"])]
    return out


def _constraints(doc):
    C = []
    for k, item in enumerate(doc.get("C", [])):
        C.append(ser.curve(item, k) if isinstance(item, dict) else ser.point(item))
    return C, list(ser.points(doc.get("Cprime", [])))


def _emit_svg(trace, fixed, closed, F, args):
    if not args.svg:
        return []
    path = Path(args.svg)
    if args.single_svg:
        path.write_text(svg.trace_overlay(trace, fixed, closed, F.points), encoding="utf-8")
        return [str(path)]
    written = []
    for k, text in enumerate(svg.trace_frames(trace, fixed, closed, F.points)):
        p = path.with_name("%s-%03d%s" % (path.stem, k, path.suffix or ".svg"))
        p.write_text(text, encoding="utf-8")
        written.append(str(p))
    return written


def do_straighten_arc(doc, args):
    F = ser.punctures(doc)
    a, b = _need(ser.curves(doc), 2, "straighten-arc")
    C, Cp = _constraints(doc)
    trace = bigon.straighten_arc(bigon.LinePair(a, b), F, C, Cp, seed=_seed())
    out = trace.to_json()
    out["cprime"] = [[p.x, p.y] for p in trace.cprime]
    out["svg"] = _emit_svg(trace, a.vertices, False, F, args)
    return out


def do_straighten_loop(doc, args):
    F = ser.punctures(doc)
    a, b = _need(ser.curves(doc), 2, "straighten-loop")
    pin = ser.point(doc["pin"]) if doc.get("pin") is not None else None
    trace = bigon.straighten_loop(a, b, F, pin, seed=_seed())
    out = trace.to_json()
    out["svg"] = _emit_svg(trace, a.vertices, True, F, args)
    return out


def do_gin(doc, args):
    F = ser.punctures(doc)
    a, b = _need(ser.curves(doc), 2, "gin")
    return {"gin": bigon.geometric_intersection_number(a, b, F, seed=_seed())}


def do_levels(doc, args):
    arcs, images = [], {}
    for c, d in zip(ser.curves(doc), doc["paths"]):
        if "image_of" in d:
            images[str(d["image_of"])] = c
        else:
            arcs.append(c)
    missing = [c.id for c in arcs if c.id not in images]
    if missing:
        raise InputError("no image given for arcs %s" % ", ".join(missing))
    imgs = [images[c.id] for c in arcs]
    levels = bigon.incidence_levels(arcs, imgs)
    return {"edges": [[arcs[i].id, arcs[j].id] for i, j in bigon.incidence_edges(arcs, imgs)],
            "levels": [[arcs[i].id for i in lvl] for lvl in levels]}


# ---------------------------------------------------------------- braid verbs

def _seeds():
    s = _seed()
    return range(s, s + JITTER_TRIES)


def _braid_word(b):
    word, seed = br.jittered_word(b, _seeds())
    return word, ({} if seed is None else {"jitter_seed": seed})


def do_braid_validate(doc, args):
    br.check(ser.braid(doc))
    return {"valid": True}


def do_braid_link(doc, args):
    return {"linking_matrix": br.linking_matrix(ser.braid(doc))}


def do_braid_word(doc, args):
    word, extra = _braid_word(ser.braid(doc))
    return dict(word=br.format_braid_word(word), **extra)


def do_braid_trivial(doc, args):
    b = ser.braid(doc)
    word, extra = _braid_word(b)
    return dict(trivial=br.artin_action(word, b.n).is_identity(), **extra)


def do_unlinked(doc, args):
    b = ser.braid(doc)
    word, extra = _braid_word(b)
    phi = br.artin_action(word, b.n)
    witness = None
    for k, img in enumerate(phi.images, 1):
        if img != (k,):
            witness = {"generator": "x%d" % k, "image": fg.format_word(img)}
            break
    return dict(trivial=witness is None, linking_matrix=br.linking_matrix(b),
                witness=witness, **extra)


def do_connected_criterion(doc, args):
    b = ser.braid(doc)
    comps = doc.get("components")
    if comps is not None and not (isinstance(comps, list)
                                  and all(isinstance(c, list) for c in comps)):
        raise InputError("'components' must be a list of index lists")
    return br.connected_set_criterion(b, comps, _seeds())


VERBS = {
    "reduce-word": do_reduce_word,
    "conjugate": do_conjugate,
    "inner": do_inner,
    "word": do_word,
    "homotopic": do_homotopic,
    "contractible": do_contractible,
    "fill": do_fill,
    "straighten-arc": do_straighten_arc,
    "straighten-loop": do_straighten_loop,
    "gin": do_gin,
    "levels": do_levels,
    "braid-validate": do_braid_validate,
    "braid-link": do_braid_link,
    "braid-word": do_braid_word,
    "braid-trivial": do_braid_trivial,
    "unlinked": do_unlinked,
    "connected-criterion": do_connected_criterion,
}


def parser():
    ap = argparse.ArgumentParser(prog="bigonkit", description=__doc__.splitlines()[0])
    ap.add_argument("verb", choices=sorted(VERBS))
    ap.add_argument("input", help="JSON input file")
    ap.add_argument("-o", "--output", help="write the JSON result here instead of stdout")
    ap.add_argument("--svg", help="SVG trace path (straighten verbs); one file per step")
    ap.add_argument("--single-svg", action="store_true",
                    help="overlay all steps in the --svg file with an opacity ramp")
    ap.add_argument("--relaxed", dest="strict", action="store_false",
                    help="resolve vertices on puncture rays by the half-open rule")
    return ap


def _write(text, args):
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = parser().parse_args(argv)
    try:
        doc = ser.load(args.input)
        if not isinstance(doc, dict):
            raise InputError("input must be a JSON object")
        result = VERBS[args.verb](doc, args)
    except BigonkitError as err:
        _write(ser.dumps(err.to_json()), args)
        return 1
    except (InputError, OSError) as err:
        sys.stderr.write(ser.dumps({"error": "InputError", "message": str(err)}))
        return 2
    _write(ser.dumps(result), args)
    return 0


if __name__ == "__main__":
    sys.exit(main())

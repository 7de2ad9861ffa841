"""JSON interchange: rationals travel as "p/q" strings, integers are accepted on input."""
import json
from fractions import Fraction

from gmpy2 import mpq

from .braid import PureBraid, Strand
from .curves import Curve, PunctureSet
from .errors import InputError
from .geometry import P


def plain(obj):
    """Recursively turn rationals into strings and tuples into lists."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, (Fraction,)) or type(obj).__name__ in ("mpq", "mpz"):
        return str(mpq(obj))
    if hasattr(obj, "to_json"):
        return plain(obj.to_json())
    return obj


def dumps(obj):
    return json.dumps(plain(obj), sort_keys=True, indent=2) + "\n"


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise InputError("cannot read %s: %s" % (path, err.strerror)) from None
    except json.JSONDecodeError as err:
        raise InputError("%s is not valid JSON: %s" % (path, err)) from None


def _field(doc, key, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError("missing field %r" % key)
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise InputError("field %r must be a %s" % (key, kind.__name__))
    return v


def point(v):
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise InputError("a point is a pair [x, y], got %r" % (v,))
    return P(*v)


def points(vs):
    if not isinstance(vs, list):
        raise InputError("expected a list of points")
    return tuple(point(v) for v in vs)


def punctures(doc):
    return PunctureSet(points(doc.get("punctures", [])))


def curve(d, index):
    if not isinstance(d, dict):
        raise InputError("path %d must be an object" % index)
    closed = d.get("closed", False)
    if not isinstance(closed, bool):
        raise InputError("path %d: 'closed' must be a boolean" % index)
    cid = d.get("id", str(index))
    return Curve(points(_field(d, "vertices", list)), closed, str(cid))


def curves(doc):
    return [curve(d, k) for k, d in enumerate(_field(doc, "paths", list))]


def curve_to_json(c):
    return {"id": c.id, "closed": c.closed, "vertices": [[p.x, p.y] for p in c.vertices]}


def braid(doc):
    strands = []
    for k, s in enumerate(_field(doc, "strands", list)):
        times = _field(s, "times", list)
        strands.append(Strand(tuple(times), points(_field(s, "points", list))))
    return PureBraid(tuple(strands))


def braid_to_json(b):
    return {"strands": [{"times": list(s.times), "points": [[p.x, p.y] for p in s.points]}
                        for s in b.strands]}

"""Words in finitely generated free groups.

A word is a tuple of nonzero ints: ``k`` is generator ``x_k`` and ``-k`` its
inverse.  Every public function returns freely reduced tuples.
"""
from dataclasses import dataclass

from .errors import HypothesisViolated, InputError

Word = tuple


def letter_key(letter):
    # lexicographic order on (generator_index, sign)
    return (abs(letter), 1 if letter > 0 else -1)


def reduce(letters):
    out = []
    for a in letters:
        if a == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def concat(*words):
    return reduce(a for w in words for a in w)


def invert(w):
    return tuple(-a for a in reversed(w))


def power(w, k):
    if k < 0:
        w, k = invert(w), -k
    return reduce(tuple(w) * k)


def conjugate_by(t, w):
    """t w t^-1"""
    return concat(t, w, invert(t))


def cyclic_reduce(w):
    """Split a reduced word as conjugator . core . conjugator^-1."""
    w = reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j], w[:i]


def least_rotation(core):
    """Index of the lexicographically least rotation of a cyclic sequence."""
    n = len(core)
    if n == 0:
        return 0
    keys = [letter_key(a) for a in core]
    doubled = keys + keys
    return min(range(n), key=lambda i: doubled[i:i + n])


def cyclic_word(w):
    """Canonical representative of the conjugacy class of w."""
    core, _ = cyclic_reduce(w)
    i = least_rotation(core)
    return core[i:] + core[:i]


def are_conjugate(w1, w2):
    """Return t with w1 = t w2 t^-1, or None."""
    c1, t1 = cyclic_reduce(w1)
    c2, t2 = cyclic_reduce(w2)
    if len(c1) != len(c2):
        return None
    n = len(c1)
    # c1 = s p where c2 = p s  =>  c1 = p^-1 c2 p
    shift = None
    if n == 0:
        shift = 0
    else:
        doubled = c2 + c2
        for k in range(n):
            if doubled[k:k + n] == c1:
                shift = k
                break
    if shift is None:
        return None
    p = c2[:shift]
    t = concat(t1, invert(p), invert(t2))
    if conjugate_by(t, reduce(w2)) != reduce(w1):
        raise AssertionError("conjugator failed to verify")
    return t


def primitive_root(w):
    """Return (root, exponent) with w = root**exponent and root primitive."""
    w = reduce(w)
    if not w:
        raise ValueError("the trivial word has no primitive root")
    core, t = cyclic_reduce(w)
    n = len(core)
    for d in range(1, n + 1):
        if n % d == 0 and core[:d] * (n // d) == core:
            return conjugate_by(t, core[:d]), n // d
    raise AssertionError("unreachable")


def commute(w1, w2):
    return concat(w1, w2) == concat(w2, w1)


def product_conjugacy_decompose(c, a=1, b=2):
    """Return (k, l) with c = a^k b^l, or None.

    Exactly these c make a.c.b.c^-1 conjugate to a.b in a free group.
    """
    c = reduce(c)
    i = 0
    while i < len(c) and abs(c[i]) == a:
        i += 1
    head, tail = c[:i], c[i:]
    if any(abs(x) != b for x in tail):
        return None
    return sum(1 if x > 0 else -1 for x in head), sum(1 if x > 0 else -1 for x in tail)


@dataclass(frozen=True)
class EndoSpec:
    rank: int
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise ValueError("need one image per generator")
        object.__setattr__(self, "images", tuple(reduce(w) for w in self.images))

    @classmethod
    def identity(cls, rank):
        return cls(rank, tuple((i,) for i in range(1, rank + 1)))

    @classmethod
    def inner(cls, rank, c):
        return cls(rank, tuple(conjugate_by(c, (i,)) for i in range(1, rank + 1)))

    def apply(self, w):
        out = []
        for a in w:
            img = self.images[abs(a) - 1]
            out.extend(img if a > 0 else invert(img))
        return reduce(out)

    def compose(self, other):
        """self after other."""
        return EndoSpec(self.rank, tuple(self.apply(img) for img in other.images))

    def is_identity(self):
        return all(img == (i,) for i, img in enumerate(self.images, 1))


def _power_conjugate_exponent(u, g, h):
    """Find m with u == g^m h g^-m (g, h distinct generators), else None."""
    if len(u) % 2 == 0:
        return None
    m = len(u) // 2
    if u[m] != h:
        return None
    left, right = u[:m], u[m + 1:]
    if m == 0:
        return 0
    s = left[0]
    if abs(s) != g or any(x != s for x in left) or any(x != -s for x in right):
        return None
    return m if s > 0 else -m


def detect_inner(spec):
    """Return the unique c with images[i] = c g_i c^-1 for all i, or None."""
    n = spec.rank
    if n < 2:
        raise InputError("detect_inner needs rank >= 2")
    for i, img in enumerate(spec.images, 1):
        if are_conjugate(img, (i,)) is None:
            raise HypothesisViolated(
                "image of x%d is not conjugate to x%d" % (i, i), generator=i)
    # all solutions of images[0] = c x1 c^-1 form the coset c0 <x1>
    c0 = are_conjugate(spec.images[0], (1,))
    u = conjugate_by(invert(c0), spec.images[1])
    m = _power_conjugate_exponent(u, 1, 2)
    if m is None:
        return None
    c = concat(c0, power((1,), m))
    if EndoSpec.inner(n, c).images != spec.images:
        return None
    return c


# text form: "x1 x2^-1", empty word "e"

def parse_word(text, reduced=True):
    text = text.strip()
    if text in ("", "e"):
        return ()
    out = []
    for tok in text.split():
        base, _, exp = tok.partition("^")
        if not base.startswith("x") or not base[1:].isdigit():
            raise InputError("bad letter %r" % tok)
        idx = int(base[1:])
        if idx < 1:
            raise InputError("generator index must be >= 1: %r" % tok)
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise InputError("bad exponent in %r" % tok) from None
        out.extend([idx if e > 0 else -idx] * abs(e))
    return reduce(out) if reduced else tuple(out)


def format_word(w):
    if not w:
        return "e"
    return " ".join("x%d" % a if a > 0 else "x%d^-1" % -a for a in w)

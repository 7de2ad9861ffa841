"""SVG frames for straightening traces: punctures as crosses, alpha solid, alpha' dashed."""

PAD = 1.0
SIZE = 480


def _bbox(pts):
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    return min(xs) - PAD, min(ys) - PAD, max(xs) + PAD, max(ys) + PAD


class _View:
    def __init__(self, pts):
        x0, y0, x1, y1 = _bbox(pts)
        self.x0, self.y1 = x0, y1
        self.k = SIZE / max(x1 - x0, y1 - y0)
        self.w = round((x1 - x0) * self.k, 3)
        self.h = round((y1 - y0) * self.k, 3)

    def xy(self, p):
        # flip y so the picture has the usual orientation
        return "%.3f,%.3f" % ((float(p[0]) - self.x0) * self.k, (self.y1 - float(p[1])) * self.k)


def _poly(view, pts, closed, style):
    tag = "polygon" if closed else "polyline"
    return '<%s points="%s" %s/>' % (tag, " ".join(view.xy(p) for p in pts), style)


def _cross(view, p, r=5):
    x, y = (float(v) for v in view.xy(p).split(","))
    return ('<path d="M%.3f %.3fL%.3f %.3fM%.3f %.3fL%.3f %.3f" stroke="black" '
            'stroke-width="1.5"/>' % (x - r, y - r, x + r, y + r, x - r, y + r, x + r, y - r))


def _layer(view, fixed, moving, closed, step, punctures, opacity=1.0):
    out = ['<g opacity="%.3f">' % opacity]
    if step is not None:
        for region in step.support:
            d = " ".join("M" + " L".join(view.xy(p) for p in ring) + " Z" for ring in region)
            out.append('<path d="%s" fill="#f4c542" fill-opacity="0.35" '
                       'fill-rule="evenodd" stroke="none"/>' % d)
    out.append(_poly(view, fixed, closed, 'fill="none" stroke="#1f4e9c" stroke-width="2"'))
    out.append(_poly(view, moving, closed, 'fill="none" stroke="#c0392b" stroke-width="2" '
                                           'stroke-dasharray="6 4"'))
    out.extend(_cross(view, p) for p in punctures)
    out.append("</g>")
    return out


def _doc(view, body):
    head = ('<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" '
            'viewBox="0 0 %s %s">' % (view.w, view.h, view.w, view.h))
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>'] + body
                     + ["</svg>"]) + "\n"


def _frames(trace):
    """(moving curve, step) for the start state and after every step."""
    start = trace.initial.vertices if trace.initial is not None else trace.final.vertices
    return [(start, None)] + [(s.curve, s) for s in trace.steps]


def trace_frames(trace, fixed, closed, punctures):
    """One SVG document per frame: the initial state, then each step with its support."""
    frames = _frames(trace)
    pts = list(fixed) + list(punctures) + [p for m, _ in frames for p in m]
    view = _View(pts)
    return [_doc(view, _layer(view, fixed, m, closed, s, punctures)) for m, s in frames]


def trace_overlay(trace, fixed, closed, punctures):
    """All frames in one document, later steps more opaque."""
    frames = _frames(trace)
    pts = list(fixed) + list(punctures) + [p for m, _ in frames for p in m]
    view = _View(pts)
    body = []
    n = len(frames)
    for k, (m, s) in enumerate(frames):
        body += _layer(view, fixed, m, closed, s, punctures, opacity=(k + 1) / n)
    return _doc(view, body)

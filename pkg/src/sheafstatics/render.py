"""Static SVG drawings of form diagrams, member forces, reciprocals and edge rotations."""
from __future__ import annotations

import numpy as np

from .complex import Diagram

TENSION = "#c0392b"
COMPRESSION = "#2c6fbb"
FORM = "#000000"
LAYERS = ("form", "forces", "dual", "rotations")


class _Frame:
    """Maps world coordinates into a square viewport with the y axis pointing up."""

    def __init__(self, points, size=400.0, margin=30.0, offset=0.0):
        P = np.asarray(points, dtype=float).reshape(-1, 2)
        lo, hi = P.min(axis=0), P.max(axis=0)
        span = max(float((hi - lo).max()), 1e-12)
        self.lo, self.k, self.size, self.margin, self.offset = lo, (size - 2 * margin) / span, size, margin, offset

    def __call__(self, p):
        x = self.offset + self.margin + (p[0] - self.lo[0]) * self.k
        y = self.size - self.margin - (p[1] - self.lo[1]) * self.k
        return x, y


def _line(a, b, color, width=2.0, dashed=False, cls=""):
    dash = ' stroke-dasharray="6,4"' if dashed else ""
    return (f'<line class="{cls}" x1="{a[0]:.3f}" y1="{a[1]:.3f}" x2="{b[0]:.3f}" y2="{b[1]:.3f}" '
            f'stroke="{color}" stroke-width="{width:.3f}"{dash}/>')


def _open_edge_end(diagram, e, frame):
    v = diagram.complex.edge_vertices(e)[0]
    p = diagram.point(v)
    return frame(p), frame(p + 0.25 * diagram.scale() * diagram.directions[e])


def _segments(diagram, frame):
    cx = diagram.complex
    for e in cx.edges:
        if cx.is_open_edge(e):
            a, b = _open_edge_end(diagram, e, frame)
        else:
            head, tail = cx.head_tail(e)
            a, b = frame(diagram.point(tail)), frame(diagram.point(head))
        yield e, a, b


def _arc(center, radius, sense, color):
    # a three-quarter arc with an arrow head; sense +1 is counterclockwise on screen
    cx_, cy = center
    start = (cx_ + radius, cy)
    end = (cx_, cy - sense * radius)
    sweep = 0 if sense > 0 else 1
    tip = np.array(end)
    wing = np.array([sense * 4.0, -3.0 * sense])
    return (f'<path class="rotation" d="M {start[0]:.3f} {start[1]:.3f} A {radius:.3f} {radius:.3f} 0 1 {sweep} '
            f'{end[0]:.3f} {end[1]:.3f}" fill="none" stroke="{color}" stroke-width="1.2"/>'
            f'<path class="rotation" d="M {tip[0] - wing[0]:.3f} {tip[1] - 4:.3f} L {tip[0]:.3f} {tip[1]:.3f} '
            f'L {tip[0] - wing[0]:.3f} {tip[1] + 4:.3f}" fill="none" stroke="{color}" stroke-width="1.2"/>')


def render_svg(diagram: Diagram, stress=None, dual=None, rotations=None, layers=LAYERS, size: float = 400.0) -> str:
    """Draw the requested layers.

    ``stress`` maps edges to forces (tension positive, red; compression blue),
    ``dual`` is a DualRealization drawn dashed beside the form, and
    ``rotations`` maps edges to rotation rates shown as arc glyphs.
    A missing or zero stress suppresses the force and dual layers.
    """
    layers = set(layers)
    cx = diagram.complex
    pts = diagram.coordinate_array()
    if any(cx.is_open_edge(e) for e in cx.edges):
        extra = [diagram.point(cx.edge_vertices(e)[0]) + 0.25 * diagram.scale() * diagram.directions[e]
                 for e in cx.edges if cx.is_open_edge(e)]
        pts = np.vstack([pts, extra])
    frame = _Frame(pts, size)
    has_stress = stress is not None and any(abs(float(stress.get(e, 0.0))) > 1e-12 for e in cx.edges)
    show_dual = "dual" in layers and dual is not None and has_stress
    width = 2 * size if show_dual else size
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{size:.0f}" '
           f'viewBox="0 0 {width:.0f} {size:.0f}">', '<rect width="100%" height="100%" fill="white"/>']
    if "form" in layers:
        out.append('<g id="form">')
        out.extend(_line(a, b, FORM, 1.5, cls="form") for _, a, b in _segments(diagram, frame))
        for v in cx.vertices:
            x, y = frame(diagram.point(v))
            out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{FORM}"/>')
        out.append("</g>")
    if "forces" in layers and has_stress:
        top = max(abs(float(stress.get(e, 0.0))) for e in cx.edges)
        out.append('<g id="forces">')
        for e, a, b in _segments(diagram, frame):
            w = float(stress.get(e, 0.0))
            if abs(w) <= 1e-12 * top:
                continue
            color = TENSION if w > 0 else COMPRESSION
            out.append(_line(a, b, color, 1.0 + 5.0 * abs(w) / top, cls="tension" if w > 0 else "compression"))
        out.append("</g>")
    if show_dual:
        q = dual.coordinate_array()
        dframe = _Frame(q, size, offset=size)
        out.append('<g id="dual">')
        for e in dual.complex.edges:
            head, tail = dual.complex.head_tail(e)
            out.append(_line(dframe(dual.coordinates[tail]), dframe(dual.coordinates[head]), FORM, 1.5, True, "dual"))
        out.append("</g>")
    if "rotations" in layers and rotations:
        top = max(abs(r) for r in rotations.values()) or 1.0
        out.append('<g id="rotations">')
        for e, a, b in _segments(diagram, frame):
            r = float(rotations.get(e, 0.0))
            if abs(r) <= 1e-9 * top:
                continue
            mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            out.append(_arc(mid, 4.0 + 8.0 * abs(r) / top, 1 if r > 0 else -1, "#555555"))
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


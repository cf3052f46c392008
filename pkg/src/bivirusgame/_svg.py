"""Minimal deterministic SVG rendering of phase-portrait primitives.

Hand-rolled rather than delegated to a plotting library so identical
inputs produce byte-identical files: polylines for trajectories, circles
for initial conditions, crosses for fixed points, dashed segments for
lines of fixed points, all in the (y1, y2) unit simplex.
"""

from __future__ import annotations

SIZE = 480
MARGIN = 48
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _sx(x: float) -> float:
    return MARGIN + x * (SIZE - 2 * MARGIN)


def _sy(y: float) -> float:
    return SIZE - MARGIN - y * (SIZE - 2 * MARGIN)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_phase_svg(trajectories, initials, equilibria, segments,
                     xlabel: str = "y1", ylabel: str = "y2") -> str:
    """Build the SVG document text for one phase portrait.

    ``trajectories`` is a sequence of (n, 2) coordinate arrays,
    ``initials`` a sequence of (x, y) pairs, ``equilibria`` a sequence of
    (x, y, label) triples, and ``segments`` a sequence of
    ((x0, y0), (x1, y1), label) triples.
    """
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    # Axes frame and simplex boundary y1 + y2 = 1.
    out.append(
        f'<rect x="{_fmt(_sx(0))}" y="{_fmt(_sy(1))}" '
        f'width="{_fmt(_sx(1) - _sx(0))}" height="{_fmt(_sy(0) - _sy(1))}" '
        'fill="none" stroke="#000000" stroke-width="1"/>')
    out.append(
        f'<line x1="{_fmt(_sx(1))}" y1="{_fmt(_sy(0))}" '
        f'x2="{_fmt(_sx(0))}" y2="{_fmt(_sy(1))}" '
        'stroke="#bbbbbb" stroke-width="1"/>')
    for tick in (0.0, 0.5, 1.0):
        out.append(f'<text x="{_fmt(_sx(tick))}" y="{_fmt(_sy(0) + 16)}" '
                   f'font-size="11" text-anchor="middle">{tick:g}</text>')
        out.append(f'<text x="{_fmt(_sx(0) - 8)}" y="{_fmt(_sy(tick) + 4)}" '
                   f'font-size="11" text-anchor="end">{tick:g}</text>')
    out.append(f'<text x="{_fmt(_sx(0.5))}" y="{_fmt(SIZE - 10)}" '
               f'font-size="13" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="14" y="{_fmt(_sy(0.5))}" font-size="13" '
               f'text-anchor="middle" transform="rotate(-90 14 {_fmt(_sy(0.5))})">'
               f'{ylabel}</text>')

    for seg_a, seg_b, label in segments:
        out.append(
            f'<line x1="{_fmt(_sx(seg_a[0]))}" y1="{_fmt(_sy(seg_a[1]))}" '
            f'x2="{_fmt(_sx(seg_b[0]))}" y2="{_fmt(_sy(seg_b[1]))}" '
            'stroke="#2ca02c" stroke-width="1.5" stroke-dasharray="6,4">'
            f'<title>{label}</title></line>')

    for k, pts in enumerate(trajectories):
        color = COLORS[k % len(COLORS)]
        coords = " ".join(f"{_fmt(_sx(float(a)))},{_fmt(_sy(float(b)))}"
                          for a, b in pts)
        out.append(f'<polyline points="{coords}" fill="none" '
                   f'stroke="{color}" stroke-width="1.2"/>')

    for x, y in initials:
        out.append(f'<circle cx="{_fmt(_sx(x))}" cy="{_fmt(_sy(y))}" r="4" '
                   'fill="#17becf" stroke="#000000" stroke-width="0.5"/>')

    for x, y, label in equilibria:
        cx, cy = _sx(x), _sy(y)
        out.append(
            f'<path d="M {_fmt(cx - 4)} {_fmt(cy - 4)} L {_fmt(cx + 4)} {_fmt(cy + 4)} '
            f'M {_fmt(cx - 4)} {_fmt(cy + 4)} L {_fmt(cx + 4)} {_fmt(cy - 4)}" '
            f'stroke="#d62728" stroke-width="1.6"><title>{label}</title></path>')

    out.append("</svg>")
    return "\n".join(out) + "\n"

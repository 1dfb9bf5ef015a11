"""Minimal dependency-free SVG line plot."""

from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 20, 50


def line_plot_svg(xs, ys, xlabel: str, ylabel: str) -> str:
    xs, ys = [float(x) for x in xs], [float(y) for y in ys]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * ph

    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    bottom, left = MARGIN_T + ph, MARGIN_L
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<line id="x-axis" x1="{left}" y1="{bottom}" x2="{left + pw}" y2="{bottom}" stroke="black"/>',
        f'<line id="y-axis" x1="{left}" y1="{MARGIN_T}" x2="{left}" y2="{bottom}" stroke="black"/>',
        f'<text x="{left + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="16" y="{MARGIN_T + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN_T + ph / 2:.1f})">{escape(ylabel)}</text>',
        f'<text x="{left}" y="{bottom + 18}" text-anchor="middle">{x0:g}</text>',
        f'<text x="{left + pw}" y="{bottom + 18}" text-anchor="middle">{x1:g}</text>',
        f'<text x="{left - 6}" y="{bottom}" text-anchor="end">{y0:g}</text>',
        f'<text x="{left - 6}" y="{MARGIN_T + 4}" text-anchor="end">{y1:g}</text>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>',
        "</svg>",
        "",
    ])

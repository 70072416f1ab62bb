"""Line charts of per-window accuracy, rendered as standalone SVG text.

The chart is a pure view: every coordinate derives from the mean-series
numbers handed in, which themselves come straight out of the results CSV,
so the picture can always be recomputed from the data files. SVG keeps
the output diffable and renderer-free. Rendering is deterministic: same
series, same bytes.
"""

from __future__ import annotations

from pathlib import Path

# One color per detection schedule, assigned in sorted-ds order.
PALETTE = ("#1f6fb2", "#d1495b", "#3e8e5e", "#b68b2c", "#7a5aa0", "#4a4a4a")

WIDTH = 720
HEIGHT = 440
MARGIN_L = 64
MARGIN_R = 24
MARGIN_T = 40
MARGIN_B = 48


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def render_accuracy_chart(
    series: dict[int, list[float | None]],
    title: str = "Prediction accuracy per week",
) -> str:
    """SVG for one accuracy line per detection schedule.

    ``series`` maps ds to per-window mean accuracies; None entries
    (windows without data) break the line. The y axis is fixed to [0, 1]
    so charts from different runs are comparable at a glance.
    """
    if not series:
        raise ValueError("nothing to chart: empty series")
    n = max(len(vals) for vals in series.values())
    if n == 0:
        raise ValueError("nothing to chart: series have no windows")
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def x_at(w: int) -> float:
        if n == 1:
            return MARGIN_L + plot_w / 2
        return MARGIN_L + plot_w * w / (n - 1)

    def y_at(v: float) -> float:
        return MARGIN_T + plot_h * (1.0 - v)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{MARGIN_L}" y="24" font-family="sans-serif" '
        f'font-size="15" fill="#222">{title}</text>',
    ]

    # horizontal grid and y labels at 0.0, 0.1, ..., 1.0
    for i in range(11):
        v = i / 10
        y = y_at(v)
        parts.append(
            f'<line x1="{MARGIN_L}" y1="{_fmt(y)}" x2="{WIDTH - MARGIN_R}" '
            f'y2="{_fmt(y)}" stroke="#ddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L - 8}" y="{_fmt(y + 4)}" font-family="sans-serif" '
            f'font-size="11" fill="#555" text-anchor="end">{v:.1f}</text>'
        )

    # x labels: week numbers, thinned to at most ~12 labels
    step = max(1, (n + 11) // 12)
    for w in range(0, n, step):
        x = x_at(w)
        parts.append(
            f'<text x="{_fmt(x)}" y="{HEIGHT - MARGIN_B + 18}" '
            f'font-family="sans-serif" font-size="11" fill="#555" '
            f'text-anchor="middle">{w}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_L + plot_w / 2:.2f}" y="{HEIGHT - 10}" '
        f'font-family="sans-serif" font-size="12" fill="#222" '
        f'text-anchor="middle">week</text>'
    )
    parts.append(
        f'<text x="16" y="{MARGIN_T + plot_h / 2:.2f}" font-family="sans-serif" '
        f'font-size="12" fill="#222" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN_T + plot_h / 2:.2f})">'
        "prediction accuracy</text>"
    )

    # one polyline per ds; None values split the line into segments
    for color_i, ds in enumerate(sorted(series)):
        color = PALETTE[color_i % len(PALETTE)]
        segment: list[str] = []
        segments: list[list[str]] = []
        for w, v in enumerate(series[ds]):
            if v is None:
                if segment:
                    segments.append(segment)
                    segment = []
                continue
            segment.append(f"{_fmt(x_at(w))},{_fmt(y_at(v))}")
        if segment:
            segments.append(segment)
        for seg in segments:
            if len(seg) == 1:
                x, y = seg[0].split(",")
                parts.append(f'<circle cx="{x}" cy="{y}" r="3" fill="{color}"/>')
            else:
                parts.append(
                    f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                    f'points="{" ".join(seg)}"/>'
                )
        # legend entry
        lx = WIDTH - MARGIN_R - 110
        ly = MARGIN_T + 8 + color_i * 18
        parts.append(
            f'<rect x="{lx}" y="{ly - 9}" width="12" height="12" fill="{color}"/>'
        )
        label = "fixed (ds=0)" if ds == 0 else f"ds={ds}"
        parts.append(
            f'<text x="{lx + 18}" y="{ly + 2}" font-family="sans-serif" '
            f'font-size="12" fill="#222">{label}</text>'
        )

    # axes
    parts.append(
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="#222" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{MARGIN_L}" y1="{HEIGHT - MARGIN_B}" '
        f'x2="{WIDTH - MARGIN_R}" y2="{HEIGHT - MARGIN_B}" '
        f'stroke="#222" stroke-width="1"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_chart(series: dict[int, list[float | None]], path, title=None) -> None:
    svg = (
        render_accuracy_chart(series)
        if title is None
        else render_accuracy_chart(series, title)
    )
    Path(path).write_text(svg, encoding="utf-8", newline="\n")

"""SVG rendering of packings.  Floats appear only here, for drawing."""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

from .geometry import Box, Packing, Violation, bounding_box, is_skeleton, shape_rects, shape_segments

PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7", "#9c755f"]


def _f(v) -> str:
    return f"{float(v):.6g}"


def render_svg(packing: Packing, violations: Optional[Sequence[Violation]] = None, scale: int = 240, margin: int = 12) -> str:
    """One ``<g>`` per bin, laid out left to right; offending items are outlined in red."""
    bad = {i for v in (violations or []) for i in v.items}
    bins = packing.bins()
    frames = {}
    for b, members in bins.items():
        parts = [Box(0, 0, 1, 1)]
        for i in members:
            s, p = packing.items[i]
            parts.extend(shape_segments(s, p) if is_skeleton(s) else shape_rects(s, p))
        frames[b] = bounding_box(parts)
    order = sorted(bins)
    widths = [float(frames[b].x1 - frames[b].x0) * scale for b in order]
    height = max((float(frames[b].y1 - frames[b].y0) * scale for b in order), default=scale)
    total_w = sum(widths) + margin * (len(order) + 1) if order else scale + 2 * margin
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.0f}" height="{height + 2 * margin:.0f}" '
        f'viewBox="0 0 {total_w:.0f} {height + 2 * margin:.0f}">'
    ]
    x_off = float(margin)
    for b, wpx in zip(order, widths):
        fr = frames[b]

        def tx(x, fr=fr, x_off=x_off):
            return x_off + float(x - fr.x0) * scale

        def ty(y, fr=fr):
            return margin + height - float(y - fr.y0) * scale

        out.append(f'<g id="bin-{b}">')
        out.append(
            f'<rect x="{tx(0):.3f}" y="{ty(1):.3f}" width="{scale}" height="{scale}" '
            'fill="none" stroke="#333" stroke-width="1"/>'
        )
        for i in bins[b]:
            s, p = packing.items[i]
            color = PALETTE[i % len(PALETTE)]
            stroke = "#d00" if i in bad else "#222"
            if is_skeleton(s):
                d = " ".join(
                    f"M{tx(g.x0):.3f},{ty(g.y0):.3f} L{tx(g.x1):.3f},{ty(g.y1):.3f}" for g in shape_segments(s, p)
                )
                out.append(f'<path d="{d}" fill="none" stroke="{color if i not in bad else stroke}" stroke-width="1.5"/>')
            else:
                d = " ".join(
                    f"M{tx(r.x0):.3f},{ty(r.y0):.3f} H{tx(r.x1):.3f} V{ty(r.y1):.3f} H{tx(r.x0):.3f} Z"
                    for r in shape_rects(s, p)
                )
                out.append(f'<path d="{d}" fill="{color}" fill-opacity="0.55" stroke="{stroke}" stroke-width="0.6"/>')
        out.append("</g>")
        x_off += wpx + margin
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Planar figures of a toric arrangement on the fundamental square."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .arrangement import Stratification

SIZE = 600
MARGIN = 30
LINE_COLOR = "#000000"
GRID_COLOR = "#1f4fd8"
VERTEX_COLOR = "#d11a1a"


def _xy(p: Sequence[Fraction]) -> str:
    x = SIZE * p[0]
    y = SIZE * (1 - p[1])
    return f'{float(x):.3f}', f'{float(y):.3f}'


def _clip_to_square(v: Sequence[int], c: int) -> Optional[tuple]:
    """Segment of ``v.x == c`` inside ``[0, 1]^2``, or ``None``."""
    a, b = v
    hits = set()
    if b:
        for x in (Fraction(0), Fraction(1)):
            y = (c - a * x) / Fraction(b)
            if 0 <= y <= 1:
                hits.add((x, y))
    if a:
        for y in (Fraction(0), Fraction(1)):
            x = (c - b * y) / Fraction(a)
            if 0 <= x <= 1:
                hits.add((x, y))
    if len(hits) < 2:
        return None
    pts = sorted(hits)
    return pts[0], pts[-1]


def _marker(shape: int, x: str, y: str) -> str:
    if shape == 0:
        return f'<circle cx="{x}" cy="{y}" r="4" fill="{GRID_COLOR}"/>'
    if shape == 1:
        return (
            f'<rect x="{float(x) - 4:.3f}" y="{float(y) - 4:.3f}" width="8" height="8" '
            f'fill="none" stroke="{GRID_COLOR}" stroke-width="1.5"/>'
        )
    fx, fy = float(x), float(y)
    return (
        f'<polygon points="{fx:.3f},{fy - 5:.3f} {fx + 5:.3f},{fy:.3f} '
        f'{fx:.3f},{fy + 5:.3f} {fx - 5:.3f},{fy:.3f}" fill="none" '
        f'stroke="{GRID_COLOR}" stroke-width="1.5"/>'
    )


def render_svg(
    S: Stratification,
    m: Union[None, int, Iterable[int]] = None,
    path: Union[None, str, Path] = None,
) -> str:
    """Draw the arrangement on ``[0, 1]^2`` as SVG text (written to ``path`` if given).

    Hyperplanes are black, zero-dimensional strata red; each requested
    ``L_m`` gets its own blue marker shape (circle, square, diamond, ...).
    """
    A = S.A
    if A.n != 2:
        raise ValueError("figures are only drawn for n = 2")
    ms = [] if m is None else [m] if isinstance(m, int) else list(m)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE + 2 * MARGIN}" '
        f'height="{SIZE + 2 * MARGIN}" viewBox="{-MARGIN} {-MARGIN} '
        f'{SIZE + 2 * MARGIN} {SIZE + 2 * MARGIN}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff" '
        f'stroke="{LINE_COLOR}" stroke-width="2"/>',
        '<g id="hyperplanes">',
    ]
    for i, v in enumerate(A.vectors):
        lo, hi = A.value_range(i)
        for c in range(lo, hi + 1):
            seg = _clip_to_square(v, c)
            if seg is None:
                continue
            (x1, y1), (x2, y2) = _xy(seg[0]), _xy(seg[1])
            out.append(
                f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                f'stroke="{LINE_COLOR}" stroke-width="2" data-family="{i}"/>'
            )
    out.append("</g>")

    for shape, mm in enumerate(ms):
        out.append(f'<g id="grid-{mm}">')
        for i in range(mm + 1):
            for j in range(mm + 1):
                out.append(_marker(shape % 3, *_xy((Fraction(i, mm), Fraction(j, mm)))))
        out.append("</g>")

    out.append('<g id="vertices">')
    dots = set()
    for s in S.strata:
        if s.dim != 0:
            continue
        x, y = s.representative
        for dx in (0, 1):
            for dy in (0, 1):
                if x + dx <= 1 and y + dy <= 1:
                    dots.add((x + dx, y + dy))
    for p in sorted(dots):
        cx, cy = _xy(p)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="6" fill="{VERTEX_COLOR}"/>')
    out.append("</g>")
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text

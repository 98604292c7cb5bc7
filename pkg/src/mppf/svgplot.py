"""Hand-rolled SVG views of a run; no plotting dependency.

Two projections: a top view in world x-y, and a profile view of depth
against horizontal arc length along the trajectory. Both contain exactly
one trajectory polyline plus one shape per obstacle, each tagged with a
class attribute so the files double as structured, testable output.
"""

from __future__ import annotations

import math
from typing import Sequence

from mppf.environment import SPHERE, Bounds, Obstacle
from mppf.geometry import Vec3

_MARGIN = 8.0


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _header(width: float, height: float) -> str:
    return (f'<svg xmlns="http://www.w3.org/2000/svg" '
            f'viewBox="{_fmt(-_MARGIN)} {_fmt(-_MARGIN)} '
            f'{_fmt(width + 2 * _MARGIN)} {_fmt(height + 2 * _MARGIN)}" '
            f'width="640" height="{_fmt(640.0 * (height + 2 * _MARGIN) / (width + 2 * _MARGIN))}">')


def _polyline(points: Sequence[tuple[float, float]]) -> str:
    coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    return (f'<polyline class="trajectory" points="{coords}" '
            f'fill="none" stroke="#0b6e99" stroke-width="0.6"/>')


def _marker(x: float, y: float, color: str) -> str:
    return (f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="1.2" '
            f'fill="{color}" stroke="none"/>')


def top_view_svg(samples, obstacles: Sequence[Obstacle], bounds: Bounds,
                 start: Vec3, goal: Vec3) -> str:
    """x-y view; world y (north) points up the page."""
    def sy(y: float) -> float:
        return bounds.y - y

    parts = [_header(bounds.x, bounds.y)]
    parts.append(f'<rect x="0" y="0" width="{_fmt(bounds.x)}" '
                 f'height="{_fmt(bounds.y)}" fill="#f7fafc" stroke="#888" '
                 f'stroke-width="0.3"/>')
    for ob in obstacles:
        fill = "#c66" if ob.velocity.norm2() > 0.0 else "#999"
        parts.append(f'<circle class="obstacle" cx="{_fmt(ob.center.x)}" '
                     f'cy="{_fmt(sy(ob.center.y))}" r="{_fmt(ob.radius)}" '
                     f'fill="{fill}" fill-opacity="0.45" stroke="#555" '
                     f'stroke-width="0.3"/>')
    parts.append(_polyline([(s.position.x, sy(s.position.y)) for s in samples]))
    parts.append(_marker(start.x, sy(start.y), "#2a7"))
    parts.append(_marker(goal.x, sy(goal.y), "#d33"))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def profile_view_svg(samples, obstacles: Sequence[Obstacle],
                     bounds: Bounds) -> str:
    """Depth against horizontal arc length; depth grows down the page.

    Obstacles are placed at the arc length where the trajectory passes
    closest to them horizontally, the usual convention for glider
    profile plots.
    """
    arcs = [0.0]
    for a, b in zip(samples, samples[1:]):
        arcs.append(arcs[-1] + a.position.hdist(b.position))
    total = max(arcs[-1], 1.0)

    parts = [_header(total, bounds.depth)]
    parts.append(f'<rect x="0" y="0" width="{_fmt(total)}" '
                 f'height="{_fmt(bounds.depth)}" fill="#f7fafc" stroke="#888" '
                 f'stroke-width="0.3"/>')
    for ob in obstacles:
        near = min(range(len(samples)),
                   key=lambda i: samples[i].position.hdist(ob.center))
        s_at = arcs[near]
        if ob.shape == SPHERE:
            parts.append(f'<circle class="obstacle" cx="{_fmt(s_at)}" '
                         f'cy="{_fmt(ob.center.z)}" r="{_fmt(ob.radius)}" '
                         f'fill="#999" fill-opacity="0.45" stroke="#555" '
                         f'stroke-width="0.3"/>')
        else:
            parts.append(f'<rect class="obstacle" x="{_fmt(s_at - ob.radius)}" '
                         f'y="0" width="{_fmt(2 * ob.radius)}" '
                         f'height="{_fmt(bounds.depth)}" fill="#999" '
                         f'fill-opacity="0.45" stroke="#555" stroke-width="0.3"/>')
    parts.append(_polyline([(s, smp.position.z) for s, smp in zip(arcs, samples)]))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

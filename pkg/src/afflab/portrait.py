"""SVG geodesic portraits: a fan of rays from the origin, clipped to a viewport."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalogue import CanonicalLabel
from .completeness import _resolve
from .errors import DomainError
from .geodesics import BLOWUP, T_MAX, integrate

DEFAULT_RAYS = 24
DEFAULT_VIEW = (-3.0, 3.0, -3.0, 3.0)
SIZE = 480
SAMPLES_PER_UNIT = 40


@dataclass(frozen=True)
class PortraitSpec:
    model: object                     # CanonicalLabel, TypeAModel or Connection
    rays: int = DEFAULT_RAYS
    t_max: float = T_MAX
    view: tuple = DEFAULT_VIEW        # (x_lo, x_hi, y_lo, y_hi)
    out: str | None = None

    def __post_init__(self):
        x0, x1, y0, y1 = self.view
        if not (x1 > x0 and y1 > y0):
            raise DomainError(f"empty viewport {self.view}")
        if self.rays < 4:
            raise DomainError("a portrait needs at least 4 rays")


@dataclass(frozen=True)
class Portrait:
    svg: str
    polylines: tuple                  # per ray, (x1, x2) points from the origin to the viewport edge
    blowups: int


def _ray_points(conn, u, spec):
    """Sample ``x(t)`` from the origin until the ray first leaves the viewport."""
    x0, x1, y0, y1 = spec.view
    tr = integrate(conn, (0.0, 0.0), u, spec.t_max)
    n = max(2, int(abs(tr.t_end) * SAMPLES_PER_UNIT))
    pts = []
    for t in np.linspace(0.0, tr.t_end, n):
        p = tr.position_at(float(t))
        if not np.all(np.isfinite(p)):
            break
        inside = x0 <= p[0] <= x1 and y0 <= p[1] <= y1
        if not inside:
            pts.append(_exit_point(pts[-1], p, spec.view) if pts else None)
            break
        pts.append((float(p[0]), float(p[1])))
    return [q for q in pts if q is not None], tr.termination.kind == BLOWUP


def _exit_point(inside, outside, view):
    """Where the segment from ``inside`` to ``outside`` crosses the viewport edge."""
    x0, x1, y0, y1 = view
    (ax, ay), (bx, by) = inside, outside
    s = 1.0
    for lo, hi, a, b in ((x0, x1, ax, bx), (y0, y1, ay, by)):
        if b > hi:
            s = min(s, (hi - a) / (b - a))
        elif b < lo:
            s = min(s, (lo - a) / (b - a))
    return (ax + s * (bx - ax), ay + s * (by - ay))


def render(spec: PortraitSpec) -> Portrait:
    conn, name, _ = _resolve(spec.model)
    x0, x1, y0, y1 = spec.view
    sx, sy = SIZE / (x1 - x0), SIZE / (y1 - y0)

    def px(p):
        return f"{(p[0] - x0) * sx:.2f},{(y1 - p[1]) * sy:.2f}"

    lines, blowups, body = [], 0, []
    for k in range(spec.rays):
        a = 2 * math.pi * k / spec.rays
        pts, blown = _ray_points(conn, (math.cos(a), math.sin(a)), spec)
        blowups += blown
        lines.append(pts)
        body.append(f'<polyline fill="none" stroke="black" stroke-width="1" '
                    f'points="{" ".join(px(p) for p in pts)}"/>')
    title = str(spec.model) if isinstance(spec.model, CanonicalLabel) else name
    svg = "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{title}</title>",
        f'<rect width="{SIZE}" height="{SIZE}" fill="white" stroke="gray"/>',
        *body,
        "</svg>",
    ]) + "\n"
    return Portrait(svg, tuple(lines), blowups)


def cmd_portrait(spec: PortraitSpec) -> Portrait:
    """Render and, if ``spec.out`` is set, write the SVG."""
    p = render(spec)
    if spec.out:
        with open(spec.out, "w") as fh:
            fh.write(p.svg)
    return p

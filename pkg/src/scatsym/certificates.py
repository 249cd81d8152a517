"""Verdict objects and grid helpers for numerical certification."""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .geometry import Chart, GeometryError

DEFAULT_POINTS_PER_AXIS = 17
MAX_GRID_POINTS = 20000


@dataclass(frozen=True)
class Certificate:
    kind: str  # "proven" | "numerically-verified" | "refuted"
    grid_points: int = 0
    tolerance: float = 0.0
    min_margin: Optional[float] = None
    witness: Optional[tuple] = None  # ((name, value), ...) for refutations
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.kind in ("proven", "numerically-verified")


def proven(detail: str = "") -> Certificate:
    return Certificate("proven", detail=detail)


def verified(grid_points: int, tol: float, min_margin: float,
             detail: str = "") -> Certificate:
    return Certificate("numerically-verified", grid_points, tol, min_margin,
                       detail=detail)


def refuted(witness: Mapping[str, float], value: float = 0.0,
            detail: str = "") -> Certificate:
    return Certificate("refuted", witness=tuple(sorted(witness.items())),
                       min_margin=value, detail=detail)


def axis_points(lo: float, hi: float, count: int, include: Sequence[float] = ()):
    """Evenly spaced interior points plus any requested values in range."""
    pts = []
    for i in range(count):
        t = (i + 0.5) / count
        pts.append(lo + t * (hi - lo))
    for v in include:
        if lo <= v <= hi and v not in pts:
            pts.append(v)
    return sorted(pts)


def chart_grid(chart_: Chart, per_axis: int = DEFAULT_POINTS_PER_AXIS,
               max_points: int = MAX_GRID_POINTS):
    """Tensor grid over the chart, always including the x = 0 slice.

    Axis counts shrink uniformly until the total stays under max_points.
    """
    n = chart_.dim
    count = per_axis
    while count > 2 and count ** n > max_points:
        count -= 1
    axes = []
    for name, (lo, hi) in zip(chart_.names, chart_.ranges):
        include = (0.0,) if name == chart_.x else ()
        axes.append([(name, v) for v in axis_points(lo, hi, count, include)])
    return [dict(combo) for combo in itertools.product(*axes)]


def certify_positive(fn: Callable[[dict], float], points, tol: float,
                     detail: str = "") -> Certificate:
    """fn(point) > tol on every grid point, reporting the minimum margin.

    With SCATSYM_THREADS > 1 the evaluations run on a thread pool; the
    scan order stays fixed, so the verdict is identical to the serial one.
    """
    points = list(points)
    workers = thread_count()
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(fn, points))
    else:
        values = None
    min_margin = math.inf
    for i, pt in enumerate(points):
        v = values[i] if values is not None else fn(pt)
        if v <= tol:
            return refuted(pt, v, detail=detail)
        min_margin = min(min_margin, v)
    return verified(len(points), tol, min_margin, detail=detail)


def geometric_refinement(locus: float, lo: float, hi: float, base: int = 64,
                         closest: float = 1e-6):
    """Points on (lo, hi) accumulating geometrically toward `locus`."""
    pts = []
    span = max(abs(hi - locus), abs(locus - lo))
    d = span
    while d > closest:
        for s in (-1.0, 1.0):
            v = locus + s * d
            if lo < v < hi:
                pts.append(v)
        d *= 0.5
    for i in range(base):
        t = (i + 0.5) / base
        pts.append(lo + t * (hi - lo))
    return sorted(set(pts))


def thread_count() -> int:
    raw = os.environ.get("SCATSYM_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1

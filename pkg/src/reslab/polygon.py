"""Rectilinear polygons, side-parameter sets, the energy partition, and the
scaled-angle image of the table at a given (E, theta).

Coordinates may be floats or fractions.Fraction; validation and geometry
predicates avoid irrational operations so exact inputs stay exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from shapely.geometry import Polygon as ShPolygon
from shapely.geometry import box as sh_box

from .errors import DegenerateClip
from .periods import hit_time, quarter_period
from .potential import Potential, eval_v_capped, eval_v_inverse, reflect

Point = Tuple[object, object]

CONVEX = "convex"
CONCAVE = "concave"


@dataclass(frozen=True)
class RectilinearPolygon:
    """Axis-parallel polygon; outer loops counter-clockwise, holes clockwise."""

    loops: tuple  # tuple of loops, each a tuple of (x, y) vertices

    def edges(self):
        """Yield (loop_index, a, b) over all directed boundary edges."""
        for li, loop in enumerate(self.loops):
            n = len(loop)
            for i in range(n):
                yield li, loop[i], loop[(i + 1) % n]

    def vertices(self):
        for loop in self.loops:
            yield from loop

    def corner_types(self) -> list:
        """Per-loop list of convex/concave labels, aligned with vertices."""
        out = []
        for loop in self.loops:
            n = len(loop)
            labels = []
            for i in range(n):
                a, v, b = loop[i - 1], loop[i], loop[(i + 1) % n]
                din = (v[0] - a[0], v[1] - a[1])
                dout = (b[0] - v[0], b[1] - v[1])
                cross = din[0] * dout[1] - din[1] * dout[0]
                labels.append(CONVEX if cross > 0 else CONCAVE)
            out.append(labels)
        return out

    def area(self):
        return sum(_signed_area(loop) for loop in self.loops)

    def diameter(self) -> float:
        xs = [float(v[0]) for v in self.vertices()]
        ys = [float(v[1]) for v in self.vertices()]
        return ((max(xs) - min(xs)) ** 2 + (max(ys) - min(ys)) ** 2) ** 0.5

    def to_shapely(self) -> ShPolygon:
        outer = [l for l in self.loops if _signed_area(l) > 0]
        holes = [l for l in self.loops if _signed_area(l) < 0]
        from shapely.ops import unary_union

        polys = []
        for o in outer:
            inner = [
                [(float(x), float(y)) for x, y in h]
                for h in holes
                if _loop_contains(o, h[0])
            ]
            polys.append(ShPolygon([(float(x), float(y)) for x, y in o], inner))
        return unary_union(polys)

    def to_json(self) -> dict:
        return {"loops": [[[float(x), float(y)] for x, y in l] for l in self.loops]}

    @staticmethod
    def from_json(d: dict) -> "RectilinearPolygon":
        return make_polygon(d["loops"])


def _signed_area(loop) -> object:
    acc = 0
    n = len(loop)
    for i in range(n):
        x0, y0 = loop[i]
        x1, y1 = loop[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return acc / 2 if isinstance(acc, Fraction) else acc * 0.5


def _loop_contains(loop, pt) -> bool:
    """Even-odd test against a single loop; boundary points count as outside."""
    x, y = pt
    inside = False
    n = len(loop)
    for i in range(n):
        x0, y0 = loop[i]
        x1, y1 = loop[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            # rectilinear loops only cross a horizontal ray at vertical edges
            if x0 > x:
                inside = not inside
    return inside


def point_in_polygon(P: RectilinearPolygon, pt) -> bool:
    """Strict interior test (even-odd over all loops)."""
    count = 0
    for loop in P.loops:
        if _loop_contains(loop, pt):
            count += 1
    return count % 2 == 1


def point_on_boundary(P: RectilinearPolygon, pt) -> bool:
    x, y = pt
    for _, a, b in P.edges():
        if a[0] == b[0]:  # vertical
            if x == a[0] and min(a[1], b[1]) <= y <= max(a[1], b[1]):
                return True
        else:
            if y == a[1] and min(a[0], b[0]) <= x <= max(a[0], b[0]):
                return True
    return False


def _segments_cross(a, b, c, d) -> bool:
    """Improper intersection test for axis-parallel segments ab, cd sharing
    no endpoint.  Exact for rational inputs."""
    av, cv = a[0] == b[0], c[0] == d[0]
    if av and cv:
        if a[0] != c[0]:
            return False
        lo1, hi1 = sorted((a[1], b[1]))
        lo2, hi2 = sorted((c[1], d[1]))
        return max(lo1, lo2) < min(hi1, hi2)
    if not av and not cv:
        if a[1] != c[1]:
            return False
        lo1, hi1 = sorted((a[0], b[0]))
        lo2, hi2 = sorted((c[0], d[0]))
        return max(lo1, lo2) < min(hi1, hi2)
    if av:
        vx, vlo, vhi = a[0], min(a[1], b[1]), max(a[1], b[1])
        hy, hlo, hhi = c[1], min(c[0], d[0]), max(c[0], d[0])
    else:
        vx, vlo, vhi = c[0], min(c[1], d[1]), max(c[1], d[1])
        hy, hlo, hhi = a[1], min(a[0], b[0]), max(a[0], b[0])
    return hlo < vx < hhi and vlo < hy < vhi


def make_polygon(loops: Sequence[Sequence[Point]]) -> RectilinearPolygon:
    """Validate loops and normalize orientation (outer CCW, holes CW)."""
    cleaned = []
    for loop in loops:
        vs = [tuple(v) for v in loop]
        if len(vs) < 4:
            raise ValueError("each loop needs at least 4 vertices")
        n = len(vs)
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            if a == b:
                raise ValueError("zero-length edge")
            if a[0] != b[0] and a[1] != b[1]:
                raise ValueError(f"edge {a}->{b} is not axis-parallel")
        for i in range(n):
            a, b = vs[i - 1], vs[i]
            c, d = vs[i], vs[(i + 1) % n]
            if (a[0] == b[0]) == (c[0] == d[0]):
                raise ValueError(f"consecutive edges at {vs[i]} share an axis")
        cleaned.append(vs)

    # simplicity within and across loops
    all_edges = []
    for li, vs in enumerate(cleaned):
        n = len(vs)
        for i in range(n):
            all_edges.append((li, i, vs[i], vs[(i + 1) % n]))
    for i in range(len(all_edges)):
        for j in range(i + 1, len(all_edges)):
            li, ii, a, b = all_edges[i]
            lj, jj, c, d = all_edges[j]
            adjacent = li == lj and (
                ii == jj
                or (ii + 1) % len(cleaned[li]) == jj
                or (jj + 1) % len(cleaned[lj]) == ii
            )
            if adjacent:
                continue
            if _segments_cross(a, b, c, d) or a in (c, d) or b in (c, d):
                raise ValueError("loops must be simple and pairwise disjoint")

    # nesting depth fixes the orientation convention
    normalized = []
    for i, vs in enumerate(cleaned):
        depth = sum(
            1 for j, other in enumerate(cleaned) if j != i and _loop_contains(other, vs[0])
        )
        area = _signed_area(vs)
        want_ccw = depth % 2 == 0
        if (area > 0) != want_ccw:
            vs = [vs[0]] + vs[1:][::-1]
        normalized.append(tuple(vs))
    return RectilinearPolygon(loops=tuple(normalized))


def rectangle(x0, y0, x1, y1) -> RectilinearPolygon:
    return make_polygon([[(x0, y0), (x1, y0), (x1, y1), (x0, y1)]])


@dataclass(frozen=True)
class SideParameterSets:
    x_plus: tuple
    x_minus: tuple
    y_plus: tuple
    y_minus: tuple

    @property
    def x_plus_extreme(self):
        return max(self.x_plus) if self.x_plus else 0

    @property
    def x_minus_extreme(self):
        return max(self.x_minus) if self.x_minus else 0

    @property
    def y_plus_extreme(self):
        return max(self.y_plus) if self.y_plus else 0

    @property
    def y_minus_extreme(self):
        return max(self.y_minus) if self.y_minus else 0


def side_parameter_sets(P: RectilinearPolygon) -> SideParameterSets:
    xp, xm, yp, ym = set(), set(), set(), set()
    for _, a, b in P.edges():
        if a[0] == b[0]:
            (xp if a[0] >= 0 else xm).add(a[0] if a[0] >= 0 else -a[0])
        else:
            (yp if a[1] >= 0 else ym).add(a[1] if a[1] >= 0 else -a[1])
    return SideParameterSets(
        x_plus=tuple(sorted(xp)),
        x_minus=tuple(sorted(xm)),
        y_plus=tuple(sorted(yp)),
        y_minus=tuple(sorted(ym)),
    )


@dataclass(frozen=True)
class EnergyPartition:
    E: float
    breakpoints: tuple
    intervals: tuple  # ((lo, hi), stable_sets_dict) pairs


def energy_partition(
    P: RectilinearPolygon, V1: Potential, V2: Potential, E: float
) -> EnergyPartition:
    """Breakpoints of theta in (0, E) where the table's combinatorics change."""
    if E <= 0:
        raise ValueError("E must be positive")
    sets = side_parameter_sets(P)
    v1b, v2b = reflect(V1), reflect(V2)
    cand = []
    for x in sets.x_plus:
        if x > 0:
            cand.append(eval_v_capped(V1, float(x)))
    for x in sets.x_minus:
        cand.append(eval_v_capped(v1b, float(x)))
    for y in sets.y_plus:
        if y > 0:
            cand.append(E - eval_v_capped(V2, float(y)))
    for y in sets.y_minus:
        cand.append(E - eval_v_capped(v2b, float(y)))
    bps = sorted({b for b in cand if 0 < b < E})
    bounds = [0.0] + bps + [E]
    intervals = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        mid = 0.5 * (lo + hi)
        stable = {
            "x_plus": tuple(
                x for x in sets.x_plus if x > 0 and eval_v_capped(V1, float(x)) < mid
            ),
            "x_minus": tuple(x for x in sets.x_minus if eval_v_capped(v1b, float(x)) < mid),
            "y_plus": tuple(
                y for y in sets.y_plus if y > 0 and eval_v_capped(V2, float(y)) < E - mid
            ),
            "y_minus": tuple(
                y for y in sets.y_minus if eval_v_capped(v2b, float(y)) < E - mid
            ),
        }
        intervals.append(((lo, hi), stable))
    return EnergyPartition(E=E, breakpoints=tuple(bps), intervals=tuple(intervals))


INTERNAL = "internal"
MARGINAL = "marginal"
BOTH = "both"


@dataclass(frozen=True)
class ClippedTable:
    """The table P_{E, theta} in scaled-angle coordinates.

    `polygon` is the mapped table; `tags` mirrors polygon.loops edgewise;
    `marginal_params` records the four turning-point wall positions.
    """

    polygon: RectilinearPolygon
    raw_polygon: RectilinearPolygon  # clipped but not yet mapped
    tags: tuple
    E: float
    theta: float
    rect: tuple  # (xmin, xmax, ymin, ymax) of the clip rectangle
    marginal_params: dict  # right/left/top/bottom -> a, abar, bE, bEbar


def build_p_e_theta(
    P: RectilinearPolygon,
    V1: Potential,
    V2: Potential,
    E: float,
    theta: float,
    tol: float = 1e-9,
) -> ClippedTable:
    """Clip P to the energy rectangle and map by the scaled-angle transform."""
    if not (0 < theta < E):
        raise ValueError("theta must lie strictly between 0 and E")
    v1b, v2b = reflect(V1), reflect(V2)
    xr = eval_v_inverse(V1, theta)
    xl = eval_v_inverse(v1b, theta)
    yt = eval_v_inverse(V2, E - theta)
    yb = eval_v_inverse(v2b, E - theta)
    rect = (-xl, xr, -yb, yt)

    inter = P.to_shapely().intersection(sh_box(-xl, -yb, xr, yt))
    if inter.is_empty or inter.area == 0:
        raise DegenerateClip("table region is empty")

    raw_loops = _shapely_to_loops(inter)
    raw = make_polygon(raw_loops)

    scale = max(abs(v) for pt in raw.vertices() for v in pt) + 1.0
    edge_tol = tol * scale

    sides_v = {float(a[0]) for _, a, b in P.edges() if a[0] == b[0]}
    sides_h = {float(a[1]) for _, a, b in P.edges() if a[0] != b[0]}

    tags = []
    for loop in raw.loops:
        n = len(loop)
        loop_tags = []
        for i in range(n):
            a, b = loop[i], loop[(i + 1) % n]
            if a[0] == b[0]:
                c = float(a[0])
                marg = abs(c - xr) <= edge_tol or abs(c + xl) <= edge_tol
                intern = any(abs(c - s) <= edge_tol for s in sides_v)
            else:
                c = float(a[1])
                marg = abs(c - yt) <= edge_tol or abs(c + yb) <= edge_tol
                intern = any(abs(c - s) <= edge_tol for s in sides_h)
            if marg and intern:
                loop_tags.append(BOTH)
            elif marg:
                loop_tags.append(MARGINAL)
            else:
                loop_tags.append(INTERNAL)
        tags.append(tuple(loop_tags))

    # At a turning point the hit-time integral loses half the digits of the
    # barrier position (square-root sensitivity), so marginal coordinates are
    # mapped to the exact quarter period instead of going through hit_time.
    def eta1(q: float) -> float:
        if q == 0:
            return 0.0
        if q > 0:
            if q >= xr - edge_tol:
                return quarter_period(V1, theta)
            return hit_time(V1, q, theta)
        if -q >= xl - edge_tol:
            return -quarter_period(v1b, theta)
        return -hit_time(v1b, -q, theta)

    def eta2(q: float) -> float:
        if q == 0:
            return 0.0
        if q > 0:
            if q >= yt - edge_tol:
                return quarter_period(V2, E - theta)
            return hit_time(V2, q, E - theta)
        if -q >= yb - edge_tol:
            return -quarter_period(v2b, E - theta)
        return -hit_time(v2b, -q, E - theta)

    mapped_loops = [
        [(eta1(float(x)), eta2(float(y))) for x, y in loop] for loop in raw.loops
    ]
    mapped = make_polygon(mapped_loops)

    params = {
        "right": quarter_period(V1, theta),
        "left": quarter_period(v1b, theta),
        "top": quarter_period(V2, E - theta),
        "bottom": quarter_period(v2b, E - theta),
    }
    return ClippedTable(
        polygon=mapped,
        raw_polygon=raw,
        tags=tuple(tags),
        E=E,
        theta=theta,
        rect=rect,
        marginal_params=params,
    )


def _shapely_to_loops(geom) -> List[List[Tuple[float, float]]]:
    from shapely.geometry import MultiPolygon

    polys = list(geom.geoms) if isinstance(geom, MultiPolygon) else [geom]
    loops = []
    for poly in polys:
        loops.append(_clean_ring(list(poly.exterior.coords)[:-1]))
        for ring in poly.interiors:
            loops.append(_clean_ring(list(ring.coords)[:-1]))
    return loops


def _clean_ring(pts: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """Drop repeated and collinear-run vertices so edges alternate axes."""
    out = []
    n = len(pts)
    for i in range(n):
        prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % n]
        if cur == prev:
            continue
        same_axis = (prev[0] == cur[0] == nxt[0]) or (prev[1] == cur[1] == nxt[1])
        if not same_axis:
            out.append(cur)
    return out


def load_polygon(path: str) -> RectilinearPolygon:
    with open(path) as fh:
        return RectilinearPolygon.from_json(json.load(fh))


def save_polygon(P: RectilinearPolygon, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(P.to_json(), fh, indent=2)
        fh.write("\n")

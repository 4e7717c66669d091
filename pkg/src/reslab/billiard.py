"""45-degree billiard dynamics, four-copy unfolding, and saddle connections.

The flow never leaves the four diagonal directions, so a state is a position
plus a sign pair (sx, sy).  Unfolding glues the four reflected copies of the
polygon into a translation surface on which every orbit develops into a
straight line of direction pi/4; the developing map is tracked as a running
offset so corner-to-corner orbits can be certified against the displacement
identity.  All bookkeeping stays in exact rational arithmetic when the
polygon (and start point) have rational coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import (
    IdentityViolation,
    NotPeriodic,
    NumericalCornerAmbiguity,
    ZeroVector,
)
from .polygon import CONCAVE, CONVEX, RectilinearPolygon, point_in_polygon

SignPair = Tuple[int, int]

HIT_TOL = 1e-9
CORNER_TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    id: int
    axis: str  # "v" or "h"
    c: object  # the fixed coordinate
    lo: object
    hi: object
    hit_sign: int  # sign of the incoming velocity component that can hit


def _exactable(x) -> bool:
    return isinstance(x, (int, Fraction))


class BilliardGeometry:
    """Edge/vertex tables shared by tracing, unfolding and displacement data."""

    def __init__(self, P: RectilinearPolygon):
        self.polygon = P
        self.exact = all(
            _exactable(v[0]) and _exactable(v[1]) for v in P.vertices()
        )
        self.edges: List[Edge] = []
        self.vertex_type: Dict[tuple, str] = {}
        self.vertex_edges: Dict[tuple, Dict[str, int]] = {}
        types = P.corner_types()
        eid = 0
        for li, loop in enumerate(P.loops):
            n = len(loop)
            for i in range(n):
                a, b = loop[i], loop[(i + 1) % n]
                if a[0] == b[0]:
                    # directed up -> interior west -> hit while moving right
                    hs = 1 if b[1] > a[1] else -1
                    e = Edge(eid, "v", a[0], min(a[1], b[1]), max(a[1], b[1]), hs)
                else:
                    # directed right -> interior north -> hit while moving down
                    hs = -1 if b[0] > a[0] else 1
                    e = Edge(eid, "h", a[1], min(a[0], b[0]), max(a[0], b[0]), hs)
                self.edges.append(e)
                for v in (a, b):
                    self.vertex_edges.setdefault(v, {})[e.axis] = eid
                eid += 1
            for i in range(n):
                self.vertex_type[loop[i]] = types[li][i]
        self.min_feature = min(
            (e.hi - e.lo) for e in self.edges
        )
        xs = [float(v[0]) for v in P.vertices()]
        ys = [float(v[1]) for v in P.vertices()]
        self.scale = max(
            max(map(abs, xs)), max(map(abs, ys)), 1.0
        )

    def admissible_out(self, v: tuple) -> List[SignPair]:
        """Outgoing diagonal directions from a vertex that enter the interior."""
        if self.exact:
            d = Fraction(self.min_feature) / 4
        else:
            d = float(self.min_feature) / 1024.0
        out = []
        for sx in (1, -1):
            for sy in (1, -1):
                if point_in_polygon(self.polygon, (v[0] + sx * d, v[1] + sy * d)):
                    out.append((sx, sy))
        return out

    def displacement(self, e: Edge):
        """The unfolding offset picked up when the flow crosses side e."""
        if e.axis == "v":
            return (2 * e.hit_sign * e.c, 0 * e.c)
        return (0 * e.c, 2 * e.hit_sign * e.c)


@dataclass
class SideHit:
    t: object
    point: tuple
    edge_id: int
    axis: str


@dataclass
class ConvexCornerHit:
    t: object
    point: tuple
    vertex: tuple


@dataclass
class ConcaveCornerHit:
    t: object
    point: tuple
    vertex: tuple
    continuations: List[SignPair]


@dataclass
class Trajectory:
    points: List[tuple]
    signs: List[SignPair]
    events: list
    total_t: object
    dev: tuple  # accumulated crossing offsets (real, imag parts)
    counts: Dict[int, int]
    exact: bool
    terminated: str  # "max_reflections" | "concave" | "length" | "corner"


def _first_hit(geom: BilliardGeometry, pos, sx, sy):
    x, y = pos
    exact = geom.exact and _exactable(x) and _exactable(y)
    eps = 0 if exact else 1e-12 * geom.scale
    span_tol = 0 if exact else HIT_TOL * geom.scale
    best_t = None
    best: List[Edge] = []
    for e in geom.edges:
        if e.axis == "v":
            t = (e.c - x) * sx  # dividing by sx == multiplying (sx = +-1)
            if t <= eps:
                continue
            other = y + t * sy
        else:
            t = (e.c - y) * sy
            if t <= eps:
                continue
            other = x + t * sx
        if other < e.lo - span_tol or other > e.hi + span_tol:
            continue
        if best_t is None or t < best_t - (0 if exact else eps):
            best_t = t
            best = [e]
        elif abs(t - best_t) <= (0 if exact else eps):
            best.append(e)
    if best_t is None:
        return None
    hit = (x + best_t * sx, y + best_t * sy)
    return best_t, hit, best


def _near_vertex(geom: BilliardGeometry, edges: List[Edge], hit):
    """The vertex this hit lands on, or None for an interior side hit."""
    ctol = 0 if geom.exact and _exactable(hit[0]) else CORNER_TOL * geom.scale
    found = []
    for e in edges:
        for endv in _edge_endpoints(geom, e):
            d = max(abs(hit[0] - endv[0]), abs(hit[1] - endv[1]))
            if d <= ctol:
                found.append(endv)
    if not found:
        return None
    uniq = {v for v in found}
    if len(uniq) > 1:
        raise NumericalCornerAmbiguity(f"hit {hit} near several vertices: {uniq}")
    return found[0]


def _edge_endpoints(geom: BilliardGeometry, e: Edge):
    if e.axis == "v":
        return ((e.c, e.lo), (e.c, e.hi))
    return ((e.lo, e.c), (e.hi, e.c))


def trace(
    P,
    start: tuple,
    signs: SignPair,
    max_reflections: int = 1000,
    length_bound: Optional[float] = None,
    on_vertex=None,
):
    """Run the billiard from `start` with diagonal direction `signs`.

    `on_vertex(vertex, incoming_signs, total_t, dev, counts)` is invoked on
    every corner arrival; returning False stops the trace there (used by the
    saddle-connection search).  Without a callback, convex corners reflect
    (both components flip) and concave corners terminate with the three
    admissible continuations reported.
    """
    geom = P if isinstance(P, BilliardGeometry) else BilliardGeometry(P)
    x, y = start
    sx, sy = signs
    exact = geom.exact and _exactable(x) and _exactable(y)
    zero = Fraction(0) if exact else 0.0
    total_t = zero
    dev = (zero, zero)
    counts: Dict[int, int] = {}
    points = [(x, y)]
    sign_hist = [(sx, sy)]
    events: list = []
    terminated = "max_reflections"
    for _ in range(max_reflections):
        res = _first_hit(geom, (x, y), sx, sy)
        if res is None:
            terminated = "escaped"
            break
        t, hit, hit_edges = res
        if length_bound is not None and float(total_t + t) * math.sqrt(2) > length_bound:
            terminated = "length"
            break
        total_t = total_t + t
        points.append(hit)
        v = _near_vertex(geom, hit_edges, hit)
        if v is not None:
            hit = v
            points[-1] = v
            if on_vertex is not None:
                keep = on_vertex(v, (sx, sy), total_t, dev, dict(counts))
                if keep is False:
                    terminated = "corner"
                    break
            ctype = geom.vertex_type[v]
            if ctype == CONVEX:
                events.append(ConvexCornerHit(t, v, v))
                # passing through a fake singularity crosses both incident sides
                dev = (dev[0] + 2 * sx * v[0], dev[1] + 2 * sy * v[1])
                for axis in ("v", "h"):
                    eid = geom.vertex_edges[v].get(axis)
                    if eid is not None:
                        counts[eid] = counts.get(eid, 0) + 1
                sx, sy = -sx, -sy
                x, y = v
                sign_hist.append((sx, sy))
                continue
            else:
                # three admissible 45-degree directions at a concave corner
                conts = geom.admissible_out(v)
                events.append(ConcaveCornerHit(t, v, v, conts))
                terminated = "concave"
                break
        # plain side hit
        e = hit_edges[0]
        events.append(SideHit(t, hit, e.id, e.axis))
        dr, di = geom.displacement(e)
        dev = (dev[0] + dr, dev[1] + di)
        counts[e.id] = counts.get(e.id, 0) + 1
        if e.axis == "v":
            sx = -sx
        else:
            sy = -sy
        x, y = hit
        sign_hist.append((sx, sy))
    return Trajectory(
        points=points,
        signs=sign_hist,
        events=events,
        total_t=total_t,
        dev=dev,
        counts=counts,
        exact=exact,
        terminated=terminated,
    )


@dataclass(frozen=True)
class SaddleConnection:
    start_vertex: tuple
    end_vertex: tuple
    start_signs: SignPair
    end_signs: SignPair
    total_t: object
    tau: float
    direction: float
    crossing_counts: tuple  # sorted ((edge_id, n), ...)
    residual_exact: Optional[tuple]
    residual: complex

    @property
    def is_exact(self) -> bool:
        return self.residual_exact is not None


def _make_connection(geom, v0, s0, v1, s1_in, total_t, dev, counts):
    # developed vector = zeta_end - zeta_start + crossing offsets
    re = s1_in[0] * v1[0] - s0[0] * v0[0] + dev[0]
    im = s1_in[1] * v1[1] - s0[1] * v0[1] + dev[1]
    res_re = total_t - re
    res_im = total_t - im
    exact = isinstance(res_re, Fraction) or isinstance(res_re, int)
    tau = float(total_t) * math.sqrt(2.0)
    return SaddleConnection(
        start_vertex=v0,
        end_vertex=v1,
        start_signs=s0,
        end_signs=s1_in,
        total_t=total_t,
        tau=tau,
        direction=math.atan2(float(im), float(re)),
        crossing_counts=tuple(sorted(counts.items())),
        residual_exact=(res_re, res_im) if exact else None,
        residual=complex(float(res_re), float(res_im)),
    )


def find_saddle_connections(
    P, length_bound: float, max_reflections: int = 200000
) -> List[SaddleConnection]:
    """Corner-to-corner diagonal orbits with developed length <= length_bound."""
    geom = P if isinstance(P, BilliardGeometry) else BilliardGeometry(P)
    found: Dict[tuple, SaddleConnection] = {}
    for v0 in geom.vertex_type:
        for s0 in geom.admissible_out(v0):
            hits: list = []

            def on_vertex(v, s_in, total_t, dev, counts, _v0=v0, _s0=s0, _hits=hits):
                _hits.append(_make_connection(geom, _v0, _s0, v, s_in, total_t, dev, counts))
                return True  # keep going through fake singularities

            trace(
                geom,
                v0,
                s0,
                max_reflections=max_reflections,
                length_bound=length_bound,
                on_vertex=on_vertex,
            )
            for sc in hits:
                key = (sc.start_vertex, sc.end_vertex, sc.start_signs, sc.crossing_counts)
                if key not in found or sc.tau < found[key].tau:
                    found[key] = sc
    return sorted(found.values(), key=lambda s: (s.tau, s.start_vertex, s.end_vertex))


@dataclass(frozen=True)
class TranslationSurface4:
    polygon: RectilinearPolygon
    copies: dict  # sign pair -> transformed loops
    gluings: tuple  # ((copy, edge_id), (copy, edge_id)) pairs
    singularities: tuple  # (vertex, total_angle_multiple_of_pi, kind)
    area: object
    components: int


def unfold(P: RectilinearPolygon) -> TranslationSurface4:
    geom = BilliardGeometry(P)
    copies = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            copies[(s1, s2)] = tuple(
                tuple((s1 * x, s2 * y) for x, y in loop) for loop in P.loops
            )
    gluings = []
    for e in geom.edges:
        for s1 in (1, -1):
            for s2 in (1, -1):
                if e.axis == "v":
                    partner = (-s1, s2)
                else:
                    partner = (s1, -s2)
                pair = tuple(sorted((((s1, s2), e.id), (partner, e.id))))
                gluings.append(pair)
    gluings = tuple(sorted(set(gluings)))
    sing = []
    for v, t in geom.vertex_type.items():
        if t == CONVEX:
            sing.append((v, 2, "fake"))  # total angle 2*pi
        else:
            sing.append((v, 6, "singular"))  # total angle 6*pi, multiplicity 2
    # connected components: one per even-nesting-depth loop
    loops = P.loops
    comp = 0
    for i, l in enumerate(loops):
        depth = 0
        for j, other in enumerate(loops):
            if j != i:
                from .polygon import _loop_contains

                if _loop_contains(other, l[0]):
                    depth += 1
        if depth % 2 == 0:
            comp += 1
    area = P.area()
    return TranslationSurface4(
        polygon=P,
        copies=copies,
        gluings=gluings,
        singularities=tuple(sorted(sing)),
        area=4 * area,
        components=comp,
    )


@dataclass(frozen=True)
class DisplacementData:
    geom: BilliardGeometry
    D_map: dict  # edge_id -> (re, im)
    B_map: dict  # (vertex, outgoing signs) -> (re, im)
    E_map: dict  # (vertex, incoming signs) -> (re, im)
    eps_begin: dict  # (vertex, outgoing signs) -> (eps1, eps2)
    eps_end: dict  # (vertex, incoming signs) -> (eps1, eps2)


def displacement_data(S) -> DisplacementData:
    P = S.polygon if isinstance(S, TranslationSurface4) else S
    geom = BilliardGeometry(P)
    D = {e.id: geom.displacement(e) for e in geom.edges}
    B, E, epsb, epse = {}, {}, {}, {}
    for v in geom.vertex_type:
        for s in geom.admissible_out(v):
            B[(v, s)] = (-(s[0] * v[0]), -(s[1] * v[1]))
            epsb[(v, s)] = (-s[0], -s[1])
            s_in = (-s[0], -s[1])
            E[(v, s_in)] = (s_in[0] * v[0], s_in[1] * v[1])
            epse[(v, s_in)] = s_in
    _assert_extreme_rules(geom, D)
    return DisplacementData(geom=geom, D_map=D, B_map=B, E_map=E, eps_begin=epsb, eps_end=epse)


def _assert_extreme_rules(geom: BilliardGeometry, D: dict) -> None:
    """Global extreme walls must face the interior the obvious way."""
    vx = [e for e in geom.edges if e.axis == "v"]
    hx = [e for e in geom.edges if e.axis == "h"]
    xmax = max(e.c for e in vx)
    xmin = min(e.c for e in vx)
    ymax = max(e.c for e in hx)
    ymin = min(e.c for e in hx)
    for e in vx:
        if e.c == xmax and e.hit_sign != 1:
            raise IdentityViolation("right extreme side not positively oriented")
        if e.c == xmin and e.hit_sign != -1:
            raise IdentityViolation("left extreme side not positively oriented")
    for e in hx:
        if e.c == ymax and e.hit_sign != 1:
            raise IdentityViolation("top extreme side not positively oriented")
        if e.c == ymin and e.hit_sign != -1:
            raise IdentityViolation("bottom extreme side not positively oriented")


def verify_identity(sc: SaddleConnection, dd: DisplacementData, tol: float = 1e-9):
    """Residual of the displacement identity for a found connection."""
    b = dd.B_map[(sc.start_vertex, sc.start_signs)]
    e = dd.E_map[(sc.end_vertex, sc.end_signs)]
    re = b[0] + e[0]
    im = b[1] + e[1]
    for eid, n in sc.crossing_counts:
        dr, di = dd.D_map[eid]
        re = re + n * dr
        im = im + n * di
    lre = sc.total_t - re
    lim = sc.total_t - im
    residual = complex(float(lre), float(lim))
    if abs(residual) > tol * (1.0 + sc.tau):
        raise IdentityViolation(f"identity residual {residual} exceeds tolerance")
    if isinstance(lre, (Fraction, int)):
        return (lre, lim)
    return residual


def direction_of_candidate(
    dd: DisplacementData,
    counts,
    start_vertex,
    start_signs,
    end_vertex,
    end_signs,
) -> float:
    """Direction the same combinatorial data produces with new side values."""
    b = dd.B_map[(start_vertex, start_signs)]
    e = dd.E_map[(end_vertex, end_signs)]
    re = b[0] + e[0]
    im = b[1] + e[1]
    for eid, n in dict(counts).items():
        dr, di = dd.D_map[eid]
        re = re + n * dr
        im = im + n * di
    fre, fim = float(re), float(im)
    if abs(fre) < 1e-15 and abs(fim) < 1e-15:
        raise ZeroVector("all displacement coefficients vanish")
    return math.atan2(fim, fre)


def is_periodic(P, start, signs, max_reflections: int = 1000, tol: float = 1e-9):
    """Return (period_time, reflections) if the orbit closes, else None."""
    geom = P if isinstance(P, BilliardGeometry) else BilliardGeometry(P)
    traj = trace(geom, start, signs, max_reflections=max_reflections)
    x0, y0 = float(start[0]), float(start[1])
    t_acc = 0.0
    pts = traj.points
    for i in range(1, len(pts)):
        a, b = pts[i - 1], pts[i]
        seg = abs(float(b[0]) - float(a[0]))
        # does the closed orbit pass back through the start with start signs?
        sx, sy = traj.signs[i - 1]
        if (sx, sy) == tuple(signs) and i > 1:
            # does the start point lie on this parallel segment?
            tpar = (x0 - float(a[0])) * sx
            if 0 <= tpar <= seg + tol:
                yy = float(a[1]) + tpar * sy
                if abs(yy - y0) <= tol * max(1.0, geom.scale):
                    t_here = t_acc + tpar
                    if t_here > tol:
                        return t_here, i - 1
        t_acc += seg
    return None


def _point_to_orbit_distance(traj: Trajectory, pt) -> float:
    """Min perpendicular distance from pt to any segment of the trajectory."""
    x0, y0 = float(pt[0]), float(pt[1])
    best = math.inf
    for i in range(1, len(traj.points)):
        a, b = traj.points[i - 1], traj.points[i]
        sx, sy = traj.signs[i - 1]
        ax, ay = float(a[0]), float(a[1])
        seg = abs(float(b[0]) - ax)
        tpar = ((x0 - ax) * sx + (y0 - ay) * sy) / 2.0
        h = abs(-sy * (x0 - ax) + sx * (y0 - ay)) / math.sqrt(2.0)
        if -1e-12 <= tpar <= seg + 1e-12:
            best = min(best, h)
    return best


def _orbit_distance(traj: Trajectory, pt, core_signs: SignPair) -> float:
    """Min distance from pt to the trajectory's segments with matching signs.

    Matching the sign pair (not just the slope) matters: the same base point
    of the polygon with different signs is a different point of the unfolded
    surface, so only sign-matching segments witness a genuine wrap.
    """
    x0, y0 = float(pt[0]), float(pt[1])
    best = math.inf
    for i in range(1, len(traj.points)):
        a, b = traj.points[i - 1], traj.points[i]
        sx, sy = traj.signs[i - 1]
        if (sx, sy) != tuple(core_signs):
            continue
        ax, ay = float(a[0]), float(a[1])
        seg = abs(float(b[0]) - ax)
        # parameter of the perpendicular foot of pt on the carrying line
        tpar = ((x0 - ax) * sx + (y0 - ay) * sy) / 2.0
        h = abs(-sy * (x0 - ax) + sx * (y0 - ay)) / math.sqrt(2.0)
        if -1e-12 <= tpar <= seg + 1e-12:
            best = min(best, h)
    return best


def cylinder_of(
    P,
    start,
    signs,
    max_reflections: int = 4000,
    tol: float = 1e-9,
):
    """Width of the band of parallel periodic orbits around a periodic orbit.

    Sweeps both transverse directions (themselves diagonal billiard
    directions) until a singular (concave) corner line is met on each side,
    or until the sweep wraps back onto the starting orbit (closed cylinder,
    width = wrap distance).  Returns (width, status) with status "closed"
    or "bounded".
    """
    geom = P if isinstance(P, BilliardGeometry) else BilliardGeometry(P)
    start = (float(start[0]), float(start[1]))
    per = is_periodic(geom, start, signs, max_reflections=max_reflections, tol=1e-7)
    if per is None:
        raise NotPeriodic("orbit does not close within the reflection budget")
    period_t, _ = per
    sx, sy = signs
    refl_budget = max_reflections

    concave_vs = [v for v, k in geom.vertex_type.items() if k == CONCAVE]

    def sweep(perp: SignPair, lon_of):
        """March transversally; return ('wrap'|'bounded', u) for this side.

        lon_of maps the transverse signs at a point to the billiard signs of
        the longitudinal (pi/4) direction there; the rule differs between
        the two transverse orientations because they live in different
        copies of the unfolding.
        """
        tperp = trace(geom, start, perp, max_reflections=refl_budget)
        # walkable transverse parameterization
        seg_info = []
        t_acc = 0.0
        for i in range(1, len(tperp.points)):
            a = tperp.points[i - 1]
            px, py = tperp.signs[i - 1]
            seg = abs(float(tperp.points[i][0]) - float(a[0]))
            seg_info.append((t_acc, seg, (float(a[0]), float(a[1])), (px, py)))
            t_acc += seg
        t_cap = t_acc

        def point_at(t):
            # prefer the outgoing segment at reflection points so the
            # longitudinal direction derived from it points inward
            for t0, seg, a, (px, py) in seg_info:
                if t0 - 1e-15 <= t < t0 + seg - 1e-15:
                    dt = max(t - t0, 0.0)
                    return (a[0] + dt * px, a[1] + dt * py), (px, py)
            t0, seg, a, (px, py) = seg_info[-1]
            return (a[0] + min(t - t0, seg) * px, a[1] + min(t - t0, seg) * py), (px, py)

        def probe(t, _depth=0):
            """(closes_like_core, dist_to_core_orbit) at transverse time t."""
            pt, (px, py) = point_at(t)
            lon = lon_of(px, py)
            lt = trace(geom, pt, lon, max_reflections=refl_budget)
            if (
                lt.terminated == "escaped"
                and float(lt.total_t) < 1e-12
                and _depth < 3
            ):
                # the probe sat exactly on a wall (transverse reflection
                # point); evaluate just inside the next segment instead
                return probe(t + 1e-7 * (1.0 + abs(t)), _depth + 1)
            closes = lt.terminated != "concave" and is_periodic(
                geom, pt, lon, max_reflections=refl_budget, tol=1e-7
            ) is not None
            dc = min(
                (_point_to_orbit_distance(lt, v) for v in concave_vs),
                default=math.inf,
            )
            return closes, _orbit_distance(lt, start, (sx, sy)), dc

        step = float(geom.min_feature) / 16.0
        t = step
        prev_t = 0.0
        prev_d = 0.0
        prev_dc = math.inf
        while t < t_cap:
            closes, d, dc = probe(t)
            if not closes:
                lo, hi = prev_t, t
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    if probe(mid)[0]:
                        lo = mid
                    else:
                        hi = mid
                return "bounded", 0.5 * (lo + hi) * math.sqrt(2.0)
            if dc < prev_dc and dc < step:
                # the family is about to sweep through a singular corner
                lo, hi = prev_t, min(t + step, t_cap)
                for _ in range(80):
                    m1 = lo + (hi - lo) / 3.0
                    m2 = hi - (hi - lo) / 3.0
                    if probe(m1)[2] <= probe(m2)[2]:
                        hi = m2
                    else:
                        lo = m1
                tm = 0.5 * (lo + hi)
                if probe(tm)[2] < 1e-6:
                    return "bounded", tm * math.sqrt(2.0)
            if d < prev_d and d < step:
                # local minimum of the distance: candidate wrap point
                lo, hi = prev_t, min(t + step, t_cap)
                for _ in range(80):
                    m1 = lo + (hi - lo) / 3.0
                    m2 = hi - (hi - lo) / 3.0
                    if probe(m1)[1] <= probe(m2)[1]:
                        hi = m2
                    else:
                        lo = m1
                tm = 0.5 * (lo + hi)
                if probe(tm)[1] < 1e-6:
                    return "wrap", tm * math.sqrt(2.0)
            prev_t, prev_d = t, d
            prev_dc = dc
            t += step
        # the transverse geodesic itself died on a singular corner
        return "bounded", t_cap * math.sqrt(2.0)

    kind1, u1 = sweep((-sy, sx), lambda px, py: (-px, py))
    if kind1 == "wrap":
        return u1, "closed"
    kind2, u2 = sweep((sy, -sx), lambda px, py: (px, -py))
    if kind2 == "wrap":
        return u2, "closed"
    return u1 + u2, "bounded"

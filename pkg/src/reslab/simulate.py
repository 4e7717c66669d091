"""Direct integration of the two-oscillator flow with elastic wall
reflections, and the action-angle change of variables onto the billiard.

The Hamiltonian is (px^2 + py^2)/2 + U1(x) + U2(y) with U = (W^-1)^m; the
x-energy theta = px^2/2 + U1(x) is conserved even across reflections, so
each orbit is conjugate to the constant-speed diagonal billiard in the
table built at (E, theta): eta(x) advances with unit speed and folds at the
turning points exactly where the table's marginal walls sit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .billiard import trace
from .errors import (
    EnergyDriftExceeded,
    EventLocalizationFailure,
    OffShell,
)
from .periods import hit_time, quarter_period
from .polygon import RectilinearPolygon, build_p_e_theta
from .potential import Potential, eval_v, reflect, w_inverse


def _u(p: Potential, q: float) -> float:
    """U(q) = (W^-1(q))^m; even powers make one branch cover both signs."""
    return w_inverse(p, q) ** p.m


def _u_prime(p: Potential, q: float) -> float:
    r = w_inverse(p, q)
    return p.m * r ** (p.m - 1) / p.w_prime(r)


def hamiltonian(V1: Potential, V2: Potential, state: Sequence[float]) -> float:
    x, y, px, py = state
    return 0.5 * (px * px + py * py) + _u(V1, x) + _u(V2, y)


@dataclass(frozen=True)
class OscillatorTrajectory:
    times: tuple  # reflection times
    states: tuple  # state just after each reflection (and the start)
    segments: tuple  # (t0, t1, dense) per smooth piece
    final_state: tuple
    t_end: float
    energy: float
    max_drift: float

    def __call__(self, t: float):
        for t0, t1, dense in self.segments:
            if t0 - 1e-12 <= t <= t1 + 1e-12:
                return tuple(dense(min(max(t, t0), t1)))
        raise ValueError(f"time {t} outside the integrated span")


def _wall_events(P: RectilinearPolygon):
    """(axis, c, spans) per distinct wall line of the room."""
    walls = {}
    for _, a, b in P.edges():
        if a[0] == b[0]:
            key = (0, float(a[0]))
            span = tuple(sorted((float(a[1]), float(b[1]))))
        else:
            key = (1, float(a[1]))
            span = tuple(sorted((float(a[0]), float(b[0]))))
        walls.setdefault(key, []).append(span)
    return [(axis, c, tuple(spans)) for (axis, c), spans in sorted(walls.items())]


def integrate(
    P: RectilinearPolygon,
    V1: Potential,
    V2: Potential,
    state0: Sequence[float],
    t_end: float,
    max_reflections: int = 1000,
    rtol: float = 1e-11,
    drift_tol: Optional[float] = None,
) -> OscillatorTrajectory:
    """Integrate the reflected flow from state0 = (x, y, px, py) to t_end."""
    E0 = hamiltonian(V1, V2, state0)
    if drift_tol is None:
        drift_tol = 1e-8 * max(E0, 1.0)
    walls = _wall_events(P)
    scale = max(1.0, P.diameter())
    span_tol = 1e-9 * scale

    def rhs(t, s):
        return [s[2], s[3], -_u_prime(V1, s[0]), -_u_prime(V2, s[1])]

    def make_event(axis, c):
        def ev(t, s):
            return s[axis] - c

        ev.terminal = False
        ev.direction = 0
        return ev

    events = [make_event(axis, c) for axis, c, _ in walls]

    t = 0.0
    s = [float(v) for v in state0]
    times: List[float] = []
    states: List[tuple] = [tuple(s)]
    segments = []
    max_drift = 0.0
    for _ in range(max_reflections + 1):
        sol = solve_ivp(
            rhs,
            (t, t_end),
            s,
            method="DOP853",
            rtol=rtol,
            atol=1e-13,
            dense_output=True,
            events=events,
            max_step=t_end - t,
        )
        if not sol.success:
            raise EventLocalizationFailure(sol.message)
        # earliest genuine wall hit: on an edge span, moving outward
        hit = None
        for wi, te_list in enumerate(sol.t_events):
            axis, c, spans = walls[wi]
            for te in te_list:
                if te <= t + 1e-12 or (hit and te >= hit[0]):
                    continue
                st = sol.sol(te)
                other = st[1 - axis]
                vel = st[2 + axis]
                outward = vel != 0.0  # hitting the line from either side
                on_edge = any(lo - span_tol <= other <= hi + span_tol
                              for lo, hi in spans)
                if outward and on_edge:
                    hit = (float(te), axis)
        seg_end = hit[0] if hit else float(sol.t[-1])
        segments.append((t, seg_end, sol.sol))
        probe = sol.sol(seg_end)
        drift = abs(hamiltonian(V1, V2, probe) - E0)
        max_drift = max(max_drift, drift)
        if max_drift > drift_tol:
            raise EnergyDriftExceeded(
                f"energy drift {max_drift:.3e} exceeds {drift_tol:.3e}"
            )
        if hit is None:
            return OscillatorTrajectory(
                times=tuple(times),
                states=tuple(states),
                segments=tuple(segments),
                final_state=tuple(float(v) for v in probe),
                t_end=t_end,
                energy=E0,
                max_drift=max_drift,
            )
        te, axis = hit
        s = [float(v) for v in sol.sol(te)]
        s[2 + axis] = -s[2 + axis]
        t = te
        times.append(te)
        states.append(tuple(s))
    raise EventLocalizationFailure(
        f"exceeded {max_reflections} reflections before t_end"
    )


def eta_map(
    V1: Potential,
    V2: Potential,
    E: float,
    state: Sequence[float],
    tol: float = 1e-9,
) -> Tuple[Tuple[float, float], Tuple[int, int]]:
    """Billiard point and direction signs conjugate to an oscillator state."""
    H = hamiltonian(V1, V2, state)
    if abs(H - E) > tol * max(1.0, abs(E)):
        raise OffShell(f"H = {H} but E = {E}")
    x, y, px, py = (float(v) for v in state)
    theta = 0.5 * px * px + _u(V1, x)

    def coord(V: Potential, q: float, level: float) -> float:
        if q == 0.0:
            return 0.0
        if q > 0:
            return min(hit_time(V, q, level), quarter_period(V, level))
        Vb = reflect(V)
        return -min(hit_time(Vb, -q, level), quarter_period(Vb, level))

    u1 = coord(V1, x, theta)
    u2 = coord(V2, y, E - theta)
    s1 = 1 if px > 0 else (-1 if px < 0 else 1)
    s2 = 1 if py > 0 else (-1 if py < 0 else 1)
    return (u1, u2), (s1, s2)


def _billiard_position(traj, t: float) -> Tuple[float, float]:
    """Point of a unit-speed-per-coordinate billiard trajectory at time t."""
    acc = 0.0
    for i in range(len(traj.points) - 1):
        (x0, y0), (x1, y1) = traj.points[i], traj.points[i + 1]
        dur = abs(float(x1) - float(x0))
        dur = max(dur, abs(float(y1) - float(y0)))
        if t <= acc + dur or i == len(traj.points) - 2:
            if dur == 0.0:
                return float(x0), float(y0)
            lam = min(max((t - acc) / dur, 0.0), 1.0)
            return (
                float(x0) + lam * (float(x1) - float(x0)),
                float(y0) + lam * (float(y1) - float(y0)),
            )
        acc += dur
    return float(traj.points[-1][0]), float(traj.points[-1][1])


def conjugacy_residual(
    P: RectilinearPolygon,
    V1: Potential,
    V2: Potential,
    state0: Sequence[float],
    t_end: float,
    n_samples: int = 100,
    max_reflections: int = 2000,
) -> float:
    """max over sampled times of |eta(oscillator(t)) - billiard(t)|.

    The billiard runs in the table at (E, theta(state0)); agreement at the
    integration tolerance is the conjugacy certificate.
    """
    E = hamiltonian(V1, V2, state0)
    osc = integrate(P, V1, V2, state0, t_end, max_reflections=max_reflections)
    x, y, px, py = (float(v) for v in state0)
    theta = 0.5 * px * px + _u(V1, x)
    table = build_p_e_theta(P, V1, V2, E, theta)
    u0, signs = eta_map(V1, V2, E, state0)
    bil = trace(table.polygon, u0, signs,
                max_reflections=4 * max_reflections)
    worst = 0.0
    for i in range(n_samples):
        t = t_end * (i + 0.5) / n_samples
        st = osc(t)
        (u1, u2), _ = eta_map(V1, V2, E, st)
        bx, by = _billiard_position(bil, t)
        worst = max(worst, abs(u1 - bx), abs(u2 - by))
    return worst

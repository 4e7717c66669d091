"""Resonance verdicts, integer-relation certificates, energy scans and the
three-way classification evidence.

The workhorse chain: build the table at (E, theta), look for corner-to-corner
orbits; failing that, search for an integer relation between the horizontal
and vertical side parameters (whose absence is the non-resonance criterion,
subject to side conditions on the extreme walls).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .billiard import find_saddle_connections
from .errors import BoxTooLarge, BreakpointTheta
from .periods import quarter_period
from .polygon import (
    RectilinearPolygon,
    build_p_e_theta,
    energy_partition,
    side_parameter_sets,
)
from .potential import Potential, eval_v_capped, is_sp, curvature_ratio, reflect

RESONANT_FOUND = "ResonantFound"
CERTIFIED_NON_RESONANT = "CertifiedNonResonant"
NO_RELATION_WITHIN_BOUNDS = "NoRelationFoundWithinBounds"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class IntegerRelationReport:
    bound: int
    tolerance: float
    found_relation: Optional[dict]  # {"n": (...), "m": (...)} or None
    residual: Optional[float]


@dataclass(frozen=True)
class ResonanceVerdict:
    status: str
    E: float
    theta: float
    evidence: object  # SaddleConnection, IntegerRelationReport, or message


def _ordered_coeffs(R: int) -> List[int]:
    out = [0]
    for k in range(1, R + 1):
        out.extend((k, -k))
    return out


def relation_search(
    params_x: Sequence,
    params_y: Sequence,
    M: int = 10,
    tol: float = 1e-9,
) -> IntegerRelationReport:
    """Exhaustive search for sum(n*x) = sum(m*y) with |n|,|m| <= M.

    Each parameter is either a bare value or a (value, flag) pair with flag
    in {"plus_extreme", "minus_extreme", None}; the coefficients of the two
    extreme parameters on each axis must not have opposite signs.  Searching
    proceeds in shells of increasing max |coefficient| and returns the first
    hit in a canonical order (small coefficients, positive before negative),
    so reported relations are deterministic and minimal.
    """
    xv, xflags = _split_params(params_x)
    yv, yflags = _split_params(params_y)
    p, q = len(xv), len(yv)
    if p == 0 and q == 0:
        return IntegerRelationReport(M, tol, None, None)
    if (2 * M + 1) ** (p + q) > 10**9:
        raise BoxTooLarge("coefficient box exceeds 1e9 candidates")
    exact = all(isinstance(v, (int, Fraction)) for v in xv + yv) and tol == 0
    for R in range(1, M + 1):
        hit = (
            _shell_search_exact(xv, xflags, yv, yflags, R)
            if exact
            else _shell_search(xv, xflags, yv, yflags, R, tol)
        )
        if hit is not None:
            n, m, res = hit
            return IntegerRelationReport(
                M, tol, {"n": tuple(n), "m": tuple(m)}, float(abs(res))
            )
    return IntegerRelationReport(M, tol, None, None)


def _split_params(params):
    vals, flags = [], []
    for pr in params:
        if isinstance(pr, tuple) and len(pr) == 2 and isinstance(pr[1], (str, type(None))):
            vals.append(pr[0])
            flags.append(pr[1])
        else:
            vals.append(pr)
            flags.append(None)
    return vals, flags


def _sign_ok_mask(coeff_arrays, flags):
    try:
        i = flags.index("plus_extreme")
        j = flags.index("minus_extreme")
    except ValueError:
        return None
    return coeff_arrays[i] * coeff_arrays[j] >= 0


def _shell_search(xv, xflags, yv, yflags, R, tol):
    ord_c = np.array(_ordered_coeffs(R))
    dims = len(xv) + len(yv)
    grids = np.meshgrid(*([ord_c] * dims), indexing="ij") if dims else []
    xs = grids[: len(xv)]
    ys = grids[len(xv):]
    total = np.zeros(grids[0].shape) if dims else np.zeros(())
    for g, v in zip(xs, xv):
        total = total + g * float(v)
    for g, v in zip(ys, yv):
        total = total - g * float(v)
    ok = np.abs(total) <= tol
    absmax = np.zeros(grids[0].shape, dtype=int)
    for g in grids:
        absmax = np.maximum(absmax, np.abs(g))
    ok &= absmax == R  # inner shells were already searched
    mx = _sign_ok_mask(xs, xflags)
    if mx is not None:
        ok &= mx
    my = _sign_ok_mask(ys, yflags)
    if my is not None:
        ok &= my
    idx = np.argmax(ok.reshape(-1))
    if not ok.reshape(-1)[idx]:
        return None
    multi = np.unravel_index(idx, ok.shape)
    n = [int(ord_c[i]) for i in multi[: len(xv)]]
    m = [int(ord_c[i]) for i in multi[len(xv):]]
    res = sum(c * v for c, v in zip(n, xv)) - sum(c * v for c, v in zip(m, yv))
    return n, m, res


def _shell_search_exact(xv, xflags, yv, yflags, R):
    ord_c = _ordered_coeffs(R)
    p, q = len(xv), len(yv)
    for combo in itertools.product(ord_c, repeat=p + q):
        if max((abs(c) for c in combo), default=0) != R:
            continue
        n, m = combo[:p], combo[p:]
        if not _sign_ok(n, xflags) or not _sign_ok(m, yflags):
            continue
        res = sum(c * v for c, v in zip(n, xv)) - sum(c * v for c, v in zip(m, yv))
        if res == 0:
            return list(n), list(m), 0
    return None


def _sign_ok(coeffs, flags) -> bool:
    try:
        i = flags.index("plus_extreme")
        j = flags.index("minus_extreme")
    except ValueError:
        return True
    return coeffs[i] * coeffs[j] >= 0


def _dedupe(values: Sequence[float], tol: float) -> List[float]:
    out: List[float] = []
    for v in sorted(values):
        if not out or abs(v - out[-1]) > tol:
            out.append(v)
    return out


def table_side_params(table, tol: float = 1e-9):
    """Nonzero side parameters of the mapped table, with extreme flags.

    Parameter values equal across the plus/minus families are merged (an
    even table presents the same wall parameter on both signs; treating
    them as one parameter matches the merged-coefficient form of the
    non-resonance criterion).  Returns (params_x, params_y, violated)
    where `violated` reports a genuine extreme-side collision: the extreme
    of one family coincides with a non-matching member of the other.
    """
    sets = side_parameter_sets(table.polygon)
    scale = max(1.0, table.polygon.diameter())
    ptol = tol * scale

    def build(plus, minus):
        plus = [float(v) for v in plus if float(v) > ptol]
        minus = [float(v) for v in minus if float(v) > ptol]
        pext = max(plus) if plus else 0.0
        mext = max(minus) if minus else 0.0
        violated = False
        for v in minus:
            if abs(pext - v) <= ptol and abs(pext - mext) > ptol and pext > 0:
                violated = True
        for v in plus:
            if abs(mext - v) <= ptol and abs(mext - pext) > ptol and mext > 0:
                violated = True
        merged = _dedupe(plus + minus, ptol)
        params = []
        for v in merged:
            flag = None
            if abs(v - pext) <= ptol and abs(v - mext) <= ptol:
                flag = "plus_extreme"  # one merged extreme; no partner left
            elif abs(v - pext) <= ptol:
                flag = "plus_extreme"
            elif abs(v - mext) <= ptol:
                flag = "minus_extreme"
            params.append((v, flag))
        return params, violated

    px, vx = build(sets.x_plus, sets.x_minus)
    py, vy = build(sets.y_plus, sets.y_minus)
    return px, py, (vx or vy)


def is_resonant_pair(
    P: RectilinearPolygon,
    V1: Potential,
    V2: Potential,
    E: float,
    theta: float,
    length_bound: Optional[float] = None,
    M: int = 10,
    tol: float = 1e-9,
) -> ResonanceVerdict:
    """Classify (E, theta): found orbit, relation evidence, or inconclusive."""
    part = energy_partition(P, V1, V2, E)
    for b in part.breakpoints:
        if abs(theta - b) <= 1e-12 * max(1.0, E):
            raise BreakpointTheta(f"theta={theta} is a partition breakpoint")
    table = build_p_e_theta(P, V1, V2, E, theta)
    if length_bound is None:
        length_bound = 1e3 * table.polygon.diameter()
    scs = find_saddle_connections(table.polygon, length_bound)
    good = [sc for sc in scs if abs(sc.residual) <= 1e-9 * (1.0 + sc.tau)]
    if good:
        return ResonanceVerdict(RESONANT_FOUND, E, theta, good[0])
    px, py, violated = table_side_params(table)
    if violated:
        return ResonanceVerdict(
            INCONCLUSIVE, E, theta, "extreme-side hypothesis violated"
        )
    report = relation_search(px, py, M=M, tol=tol)
    if report.found_relation is not None:
        return ResonanceVerdict(INCONCLUSIVE, E, theta, report)
    return ResonanceVerdict(NO_RELATION_WITHIN_BOUNDS, E, theta, report)


@dataclass(frozen=True)
class ScanReport:
    E: float
    verdicts: tuple
    interval_fractions: tuple  # ((lo, hi), fraction, n_points)
    candidate: bool
    threshold: float


def scan_energy(
    P: RectilinearPolygon,
    V1: Potential,
    V2: Potential,
    E: float,
    theta_grid: Sequence[float],
    length_bound: Optional[float] = None,
    threshold: float = 0.9,
    M: int = 10,
) -> ScanReport:
    """Per-theta verdicts and the resonant fraction per partition interval."""
    part = energy_partition(P, V1, V2, E)
    verdicts = []
    for theta in theta_grid:
        if any(abs(theta - b) <= 1e-12 * max(1.0, E) for b in part.breakpoints):
            continue  # grids are expected to avoid breakpoints
        verdicts.append(
            is_resonant_pair(P, V1, V2, E, theta, length_bound=length_bound, M=M)
        )
    fractions = []
    candidate = False
    for (lo, hi), _stable in part.intervals:
        inside = [v for v in verdicts if lo < v.theta < hi]
        if not inside:
            fractions.append(((lo, hi), 0.0, 0))
            continue
        hits = sum(1 for v in inside if v.status == RESONANT_FOUND)
        frac = hits / len(inside)
        fractions.append(((lo, hi), frac, len(inside)))
        if frac >= threshold:
            candidate = True
    return ScanReport(
        E=E,
        verdicts=tuple(verdicts),
        interval_fractions=tuple(fractions),
        candidate=candidate,
        threshold=threshold,
    )


def energy_bound(P: RectilinearPolygon, V1: Potential, V2: Potential) -> float:
    """Above this energy no level can be resonant (all walls reachable)."""
    sets = side_parameter_sets(P)

    def vmax(pot, plus, minus):
        best = 0.0
        if plus:
            best = max(best, eval_v_capped(pot, float(max(plus))))
        if minus:
            best = max(best, eval_v_capped(reflect(pot), float(max(minus))))
        return best

    return vmax(V1, sets.x_plus, sets.x_minus) + vmax(V2, sets.y_plus, sets.y_minus)


EMPTY_EVIDENCE = "EmptyEvidence"
SINGLETON_CANDIDATE = "SingletonCandidate"
OPEN_SET_CANDIDATE = "OpenSetCandidate"


@dataclass(frozen=True)
class TrichotomyReport:
    status: str
    candidate_levels: tuple
    sp1: bool
    sp2: bool
    ratio: Optional[float]
    ratio_rational: Optional[tuple]  # (p, q, residual)
    warnings: tuple
    scans: tuple


def classify_trichotomy(
    V1: Potential,
    V2: Potential,
    P: RectilinearPolygon,
    E_grid: Sequence[float],
    theta_grid_size: int = 21,
    length_bound: Optional[float] = None,
    M: int = 10,
) -> TrichotomyReport:
    """Scan the energy grid and classify the resonant-level evidence."""
    scans = []
    candidates = []
    for E in E_grid:
        grid = [E * (k + 0.5) / theta_grid_size for k in range(theta_grid_size)]
        rep = scan_energy(
            P, V1, V2, E, grid, length_bound=length_bound, M=M
        )
        scans.append(rep)
        if rep.candidate:
            candidates.append(E)
    sp1 = is_sp(V1).is_sp
    sp2 = is_sp(V2).is_sp
    ratio = None
    ratio_rat = None
    if V1.m == 2 and V2.m == 2:
        r, rep = curvature_ratio(V1, V2)
        ratio = r
        ratio_rat = (rep.p, rep.q, rep.residual)
    warnings = []
    if len(candidates) >= 2 and not (sp1 and sp2):
        warnings.append(
            "multiple candidate levels with a non-isochronous potential "
            "(contradicts the trichotomy)"
        )
    if not candidates:
        status = EMPTY_EVIDENCE
    elif len(candidates) == len(list(E_grid)):
        status = OPEN_SET_CANDIDATE
    elif len(candidates) == 1:
        status = SINGLETON_CANDIDATE
    else:
        status = SINGLETON_CANDIDATE
        warnings.append("several isolated candidate levels found")
    return TrichotomyReport(
        status=status,
        candidate_levels=tuple(candidates),
        sp1=sp1,
        sp2=sp2,
        ratio=ratio,
        ratio_rational=ratio_rat,
        warnings=tuple(warnings),
        scans=tuple(scans),
    )

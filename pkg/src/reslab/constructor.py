"""Constructive recipes for oscillator pairs resonant at one chosen energy.

For even inverse-root maps the quarter period is a polynomial in theta with
moment-weighted coefficients, so matching the vertical-side period at energy
E to the horizontal one reduces to a binomial re-expansion of the moment
transform about E.  The recipes below produce concrete potential pairs:
even pairs, non-even pairs sharing the same even core, self-paired single
potentials, and offset tuning that forces an irrational period ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InfeasiblePositivity, InsufficientOffset, RatioOne
from .periods import quarter_period, sum_a_abar
from .potential import Potential, make_potential, reflect

_SQRT2 = math.sqrt(2.0)


def _cheb(k: int) -> Fraction:
    """(2k-1)!! / (2k)!!, the normalized even Chebyshev-weight moment."""
    out = Fraction(1)
    for i in range(1, k + 1):
        out *= Fraction(2 * i - 1, 2 * i)
    return out


def build_q(coeffs: Sequence, E) -> Tuple:
    """Coefficients q with sum q_n c_{2n} (E-t)^n = sum p_n c_{2n} t^n.

    q_n = (-1)^n sum_{k>=n} C(k, n) E^(k-n) (c_{2k} / c_{2n}) p_k.
    Exact when the inputs are ints/Fractions and E is rational.
    """
    exact = all(isinstance(c, (int, Fraction)) for c in coeffs) and isinstance(
        E, (int, Fraction)
    )
    Ev = E if exact else float(E)
    N = len(coeffs)
    out = []
    for n in range(N):
        acc = Fraction(0) if exact else 0.0
        for k in range(n, N):
            term = math.comb(k, n) * Ev ** (k - n) * coeffs[k]
            ratio = _cheb(k) / _cheb(n)
            acc += term * (ratio if exact else float(ratio))
        out.append((-1) ** n * acc)
    return tuple(out)


@dataclass(frozen=True)
class PairRecipe:
    """A constructed pair together with its period-matching certificate."""

    V1: Potential
    V2: Potential
    E: float
    offset: float
    quarter_match_residual: float  # max |b_E(theta) - a(theta)| on the grid
    sum_match_residual: float  # max |(a+abar) - (bE+bEbar)| on the grid
    grid_size: int


def _wprime_to_w(wp: Sequence[float]) -> List[float]:
    return [0.0] + [c / (j + 1) for j, c in enumerate(wp)]


def _min_on_interval(poly: Sequence[float], R: float, n: int = 2001) -> float:
    best = math.inf
    for i in range(n):
        x = -R + 2.0 * R * i / (n - 1)
        best = min(best, sum(c * x**j for j, c in enumerate(poly)))
    return best


def _even_wprime(core: Sequence[float], d: float) -> List[float]:
    """W'(x) = core(x^2) + d as a coefficient list in x."""
    wp = [0.0] * (2 * len(core) - 1) if core else [0.0]
    for n, c in enumerate(core):
        wp[2 * n] = float(c)
    wp[0] += d
    return wp


def _pick_radius(E: float) -> float:
    """Certified W-argument radius covering all energies up to 2E.

    Turning points at energy theta sit at W(theta^(1/2)), so certifying W
    on [-R, R] with R = sqrt(2E) covers every level the scans visit.
    """
    return 1.05 * math.sqrt(max(2.0 * E, 0.5))


def _certify_pair(V1: Potential, V2: Potential, E: float, grid_size: int):
    qmax = smax = 0.0
    V1b, V2b = reflect(V1), reflect(V2)
    for i in range(grid_size):
        theta = E * (i + 0.5) / grid_size
        a = quarter_period(V1, theta)
        b = quarter_period(V2, E - theta)
        qmax = max(qmax, abs(b - a))
        s1 = a + quarter_period(V1b, theta)
        s2 = b + quarter_period(V2b, E - theta)
        smax = max(smax, abs(s1 - s2))
    return qmax, smax


def _raise_offset(cores: Sequence[Sequence[float]], odd_parts, d: float,
                  E: float, margin: float) -> Tuple[float, float]:
    """Smallest offset >= d keeping every W' >= margin out to the energy radius.

    Both derivatives gain exactly d, so each raise lifts every minimum by
    the same amount; a couple of iterations reach the margin exactly.
    """
    R = _pick_radius(E)
    for _ in range(200):
        wps = [
            [a + b for a, b in _pad_add(_even_wprime(core, d), odd)]
            for core, odd in zip(cores, odd_parts)
        ]
        worst = min(_min_on_interval(wp, R) for wp in wps)
        if worst >= margin * (1.0 - 1e-9):
            return d, R
        d += (margin - worst) + 1e-9  # overshoot so rounding cannot stall
        if d > 1e6:
            break
    raise InfeasiblePositivity(
        "could not reach the positivity margin by raising the offset"
    )


def _pad_add(a: Sequence[float], b: Sequence[float]):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else 0.0, b[i] if i < len(b) else 0.0)
        for i in range(n)
    ]


def build_even_pair(
    core: Sequence[float],
    E: float,
    d: float = 0.0,
    margin: float = 1e-3,
    auto_raise: bool = True,
    grid_size: int = 200,
) -> PairRecipe:
    """Pair W1'(x) = core(x^2) + d, W2'(y) = q(y^2) + d resonant at energy E.

    q is the binomial moment transform of core about E, so the quarter
    periods satisfy b_E(theta) = a(theta) identically and the table at level
    E is a square for every theta.  The shared offset d is raised, when
    allowed, until both derivatives clear the positivity margin.
    """
    core = [float(c) for c in core]
    core_t = list(core)
    core_t[0] = core[0] + d  # offset rides on the constant term
    q_t = [float(c) for c in build_q(core_t, E)]
    q_core = list(q_t)
    q_core[0] -= d
    if auto_raise:
        d2, R = _raise_offset([core, q_core], [[], []], d, E, margin)
        if d2 != d:
            return build_even_pair(core, E, d2, margin, auto_raise=False,
                                   grid_size=grid_size)
    wp1 = _even_wprime(core, d)
    wp2 = _even_wprime(q_core, d)
    R = _pick_radius(E)
    if min(_min_on_interval(wp1, R), _min_on_interval(wp2, R)) < margin * (1.0 - 1e-9):
        raise InsufficientOffset(
            f"offset {d} leaves a derivative below the margin {margin}"
        )
    V1 = make_potential(2, _wprime_to_w(wp1), R)
    V2 = make_potential(2, _wprime_to_w(wp2), R)
    qmax, smax = _certify_pair(V1, V2, E, grid_size)
    return PairRecipe(V1, V2, float(E), d, qmax, smax, grid_size)


def build_noneven_pair(
    core: Sequence[float],
    E: float,
    d1: float,
    d1_bar: float,
    d: float = 0.0,
    margin: float = 1e-3,
    grid_size: int = 200,
) -> PairRecipe:
    """Even-core pair plus linear terms d1 x and d1_bar y.

    Odd parts cancel from a + abar, so the side-length match at level E
    survives; distinct d1, d1_bar give a genuinely non-even, non-isochronous
    pair whose resonance is pinned to the single energy E.
    """
    core = [float(c) for c in core]
    core_t = list(core)
    core_t[0] = core[0] + d
    q_core = list(float(c) for c in build_q(core_t, E))
    q_core[0] -= d
    odd1 = [0.0, float(d1)]
    odd2 = [0.0, float(d1_bar)]
    d2, R = _raise_offset([core, q_core], [odd1, odd2], d, E, margin)
    wp1 = [a + b for a, b in _pad_add(_even_wprime(core, d2), odd1)]
    wp2 = [a + b for a, b in _pad_add(_even_wprime(q_core, d2), odd2)]
    V1 = make_potential(2, _wprime_to_w(wp1), R)
    V2 = make_potential(2, _wprime_to_w(wp2), R)
    _, smax = _certify_pair(V1, V2, E, grid_size)
    qmax, _ = _certify_pair(V1, V2, E, grid_size)
    return PairRecipe(V1, V2, float(E), d2, qmax, smax, grid_size)


def build_self_paired(
    s_coeffs: Sequence[float],
    E: float,
    d: float = 0.0,
    margin: float = 1e-3,
    grid_size: int = 200,
) -> PairRecipe:
    """One potential resonant with itself at E.

    The moment image F(t) = sum a_n c_{2n} t^n is forced to be symmetric
    about E/2 by taking F(t) = S(t) S(E - t); then q = p and V2 = V1.
    """
    S = [float(c) for c in s_coeffs]
    SE = _shift_reflect(S, float(E))  # S(E - t)
    F = _poly_mul(S, SE)
    core = [fn / float(_cheb(n)) for n, fn in enumerate(F)]
    rec = build_even_pair(core, E, d=d, margin=margin, grid_size=grid_size)
    return PairRecipe(rec.V1, rec.V1, rec.E, rec.offset,
                      rec.quarter_match_residual, rec.sum_match_residual,
                      rec.grid_size)


def _shift_reflect(poly: Sequence[float], E: float) -> List[float]:
    out = [0.0] * len(poly)
    for k, c in enumerate(poly):
        for n in range(k + 1):
            out[n] += c * math.comb(k, n) * E ** (k - n) * (-1) ** n
    return out


def _poly_mul(a: Sequence[float], b: Sequence[float]) -> List[float]:
    out = [0.0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def tune_irrational_ratio(
    V1: Potential, V2: Potential, r: float, margin: float = 1e-3
) -> Tuple[Potential, Potential]:
    """Shift both derivatives by a common d so W1'(0)+d = r (W2'(0)+d).

    Intended for isochronous inputs, whose side-length sums are the
    constants pi (W'(0)+d) / sqrt 2: an irrational r then rules out integer
    relations between the sides at every energy.
    """
    if r == 1.0:
        raise RatioOne("ratio 1 cannot be tuned by a common offset")
    a0 = V1.w_prime_coeffs[0]
    b0 = V2.w_prime_coeffs[0]
    d = (a0 - r * b0) / (r - 1.0)
    if a0 + d < margin or b0 + d < margin:
        raise InsufficientOffset(
            f"common offset {d} drives a derivative below {margin}"
        )

    def shifted(V: Potential) -> Potential:
        wp = list(V.w_prime_coeffs)
        wp[0] += d
        return make_potential(V.m, _wprime_to_w(wp), V.domain_bound)

    return shifted(V1), shifted(V2)

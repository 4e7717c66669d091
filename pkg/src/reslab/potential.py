"""Unimodal potentials parameterized by a polynomial inverse-root map.

A potential V is stored through the polynomial W with W(0)=0 and W'>0 on
[-R, R]; the potential itself is V(y) = (W^{-1}(y))^m with m even.  All
evaluation, inversion, reflection and classification go through W, which
keeps them exact or one root-solve away from exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DegreeNotTwo,
    NonMonotoneW,
    NonzeroConstant,
    OddDegree,
    OutOfCertifiedRange,
)


@dataclass(frozen=True)
class Potential:
    """V = (W^{-1})^m with polynomial W, certified monotone on [-R, R]."""

    m: int
    w_coeffs: tuple  # coefficient of degree i at index i; w_coeffs[0] == 0
    domain_bound: float

    @property
    def w_prime_coeffs(self) -> tuple:
        return tuple((i + 1) * c for i, c in enumerate(self.w_coeffs[1:]))

    def w(self, x: float) -> float:
        return _polyval(self.w_coeffs, x)

    def w_prime(self, x: float) -> float:
        return _polyval(self.w_prime_coeffs, x)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "w_coeffs": list(self.w_coeffs),
            "domain_bound": self.domain_bound,
        }

    @staticmethod
    def from_json(d: dict) -> "Potential":
        return make_potential(d["m"], d["w_coeffs"], d["domain_bound"])


@dataclass(frozen=True)
class SpCertificate:
    is_sp: bool
    offending_degrees: tuple
    c: float


def _polyval(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def make_potential(m: int, w_coeffs: Sequence[float], R: float) -> Potential:
    """Validate and build a Potential; fails rather than returning unchecked."""
    if m < 2 or m % 2 != 0:
        raise OddDegree(f"m must be an even integer >= 2, got {m}")
    coeffs = tuple(float(c) for c in w_coeffs)
    if not coeffs or coeffs[0] != 0.0:
        raise NonzeroConstant("W(0) must be 0 (constant coefficient must be 0)")
    if R <= 0:
        raise ValueError("domain bound R must be positive")
    p = Potential(m=m, w_coeffs=coeffs, domain_bound=float(R))
    _certify_monotone(p, R)
    return p


def _certify_monotone(p: Potential, R: float) -> None:
    deg = max(len(p.w_coeffs) - 1, 1)
    n = max(10 * deg * max(int(np.ceil(R)), 1), 50)
    xs = np.linspace(-R, R, n + 1)
    vals = np.polynomial.polynomial.polyval(xs, np.asarray(p.w_prime_coeffs))
    bad = np.nonzero(vals <= 0)[0]
    if bad.size:
        x0 = xs[bad[0]]
        raise NonMonotoneW(f"W'({x0:.6g}) = {vals[bad[0]]:.6g} <= 0 on [-R, R]")
    # Midpoint check guards against sign dips between samples.
    mids = 0.5 * (xs[:-1] + xs[1:])
    mvals = np.polynomial.polynomial.polyval(mids, np.asarray(p.w_prime_coeffs))
    bad = np.nonzero(mvals <= 0)[0]
    if bad.size:
        raise NonMonotoneW(f"W'({mids[bad[0]]:.6g}) <= 0 between sample points")


def w_inverse(p: Potential, y: float) -> float:
    """Solve W(x) = y on the certified range by bracketed root refinement."""
    R = p.domain_bound
    lo, hi = p.w(-R), p.w(R)
    if not (min(lo, hi) - 1e-12 <= y <= max(lo, hi) + 1e-12):
        raise OutOfCertifiedRange(f"y={y} outside [W(-R), W(R)]=[{lo}, {hi}]")
    if y <= lo:
        return -R
    if y >= hi:
        return R
    x = brentq(lambda x: p.w(x) - y, -R, R, xtol=1e-15, rtol=8.9e-16)
    if abs(p.w(x) - y) > 1e-13 * (1.0 + abs(y)):
        raise OutOfCertifiedRange(f"root residual too large at y={y}")
    return x


def eval_v(p: Potential, y: float) -> float:
    """V(y) = (W^{-1}(y))^m."""
    return w_inverse(p, y) ** p.m


def eval_v_capped(p: Potential, y: float) -> float:
    """V(y), or +inf when y lies beyond the certified spatial range.

    Walls outside [W(-R), W(R)] can never be reached at certified energies,
    so treating their barrier height as infinite is the faithful reading.
    """
    R = p.domain_bound
    lo, hi = p.w(-R), p.w(R)
    if not (min(lo, hi) - 1e-12 <= y <= max(lo, hi) + 1e-12):
        return math.inf
    return eval_v(p, y)


def eval_v_inverse(p: Potential, theta: float) -> float:
    """Positive-branch inverse: V^{-1}(theta) = W(theta^{1/m})."""
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    s = theta ** (1.0 / p.m)
    if s > p.domain_bound * (1 + 1e-12):
        raise OutOfCertifiedRange(f"theta^(1/m)={s} exceeds R={p.domain_bound}")
    return p.w(s)


def reflect(p: Potential) -> Potential:
    """Mirror potential: W-bar(x) = -W(-x) (even-degree coefficients flip)."""
    coeffs = tuple(c if i % 2 == 1 else -c for i, c in enumerate(p.w_coeffs))
    return Potential(m=p.m, w_coeffs=coeffs, domain_bound=p.domain_bound)


def is_sp(p: Potential) -> SpCertificate:
    """Isochronous test: m=2 and no odd-degree >= 3 coefficients in W."""
    offending = tuple(
        i for i, c in enumerate(p.w_coeffs) if i >= 3 and i % 2 == 1 and c != 0.0
    )
    ok = p.m == 2 and not offending
    c = p.w_coeffs[1] if len(p.w_coeffs) > 1 else 0.0
    return SpCertificate(is_sp=ok, offending_degrees=offending, c=c)


@dataclass(frozen=True)
class RationalReport:
    p: int
    q: int
    residual: float


def curvature_ratio(p1: Potential, p2: Potential, q_max: int = 10**6):
    """sqrt(V1''(0)/V2''(0)) = W2'(0)/W1'(0), with a rational fit report."""
    if p1.m != 2 or p2.m != 2:
        raise DegreeNotTwo("curvature ratio requires m1 = m2 = 2")
    ratio = p2.w_coeffs[1] / p1.w_coeffs[1]
    frac = Fraction(ratio).limit_denominator(q_max)
    report = RationalReport(
        p=frac.numerator, q=frac.denominator, residual=abs(ratio - float(frac))
    )
    return ratio, report


def load_potential(path: str) -> Potential:
    with open(path) as fh:
        return Potential.from_json(json.load(fh))


def save_potential(p: Potential, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(p.to_json(), fh, indent=2)
        fh.write("\n")

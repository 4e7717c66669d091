"""Quarter-period and barrier first-hit functions of the oscillators.

After the substitution that trades the potential for its inverse-root map W,
every period-type quantity is an integral of W'(theta^(1/m) s)/sqrt(1 - s^m)
over a subinterval of [0, 1].  For m = 2 the Chebyshev-weight moments give a
closed form; otherwise the endpoint singularity is handled by tanh-sinh
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import BelowBarrierEnergy
from .potential import Potential, eval_v, reflect, w_inverse
from .quadrature import integrate_unit

_SQRT2 = math.sqrt(2.0)


@lru_cache(maxsize=None)
def moment(j: int) -> float:
    """mu[j] = integral of s^j / sqrt(1 - s^2) over [0, 1]."""
    if j < 0:
        raise ValueError("moment index must be nonnegative")
    if j == 0:
        return math.pi / 2.0
    if j == 1:
        return 1.0
    return (j - 1) / j * moment(j - 2)


def quarter_period(p: Potential, theta: float, force_quadrature: bool = False) -> float:
    """a(theta): time from the neutral point to the right turning point."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    if p.m == 2 and not force_quadrature:
        rt = math.sqrt(theta)
        acc = 0.0
        for j, wj in enumerate(p.w_prime_coeffs):
            if wj != 0.0:
                acc += wj * moment(j) * rt**j
        return acc / _SQRT2
    return _period_integral(p, theta, 1.0, 0.0)


def _period_integral(p: Potential, theta: float, s_max: float, eps_m: float) -> float:
    """(1/sqrt2) theta^(1/m - 1/2) * integral over [0, s_max].

    eps_m = 1 - s_max^m, passed in to avoid cancellation when s_max is close
    to 1.  The substitution s = s_max * u turns the denominator into
    (1 - u^m) + u^m * eps_m with 1 - u^m formed from the node's distance to 1.
    """
    m = p.m
    c = theta ** (1.0 / m)
    scale = c * s_max  # = W^{-1}(xi) for hit times, theta^(1/m) for full

    def f(u: float, d: float) -> float:
        # 1 - u^m = d * (1 + u + ... + u^(m-1))
        geom = 0.0
        uk = 1.0
        for _ in range(m):
            geom += uk
            uk *= u
        denom = d * geom + uk * eps_m  # uk == u^m here
        return p.w_prime(scale * u) / math.sqrt(denom)

    integral = s_max * integrate_unit(f, rel_tol=1e-13)
    return theta ** (1.0 / m - 0.5) * integral / _SQRT2


def hit_time(p: Potential, xi: float, theta: float) -> float:
    """a_xi(theta): time to reach the barrier at distance xi, for theta >= V(xi)."""
    if xi <= 0:
        raise ValueError("barrier position must be positive")
    if theta <= 0:
        raise ValueError("theta must be positive")
    v_xi = eval_v(p, xi)
    if theta < v_xi * (1.0 - 1e-12):
        raise BelowBarrierEnergy(f"theta={theta} < V(xi)={v_xi}")
    c = theta ** (1.0 / p.m)
    s_max = min(w_inverse(p, xi) / c, 1.0)
    eps_m = max(1.0 - s_max**p.m, 0.0)
    return _period_integral(p, theta, s_max, eps_m)


def sum_a_abar(p: Potential, theta: float) -> float:
    """a(theta) + a-bar(theta); constant pi*W'(0)/sqrt2 for SP potentials."""
    return quarter_period(p, theta) + quarter_period(reflect(p), theta)


def limit_at_zero(p: Potential) -> float:
    """lim theta^(1/2 - 1/m) a(theta) as theta -> 0+."""
    m = p.m
    w1 = p.w_coeffs[1]
    beta = math.gamma(1.0 / m) * math.gamma(0.5) / math.gamma(1.0 / m + 0.5)
    return w1 / _SQRT2 * beta / m


@dataclass(frozen=True)
class PeriodFunction:
    """One member of the a / a-bar / b_E / b-bar_E / barrier family.

    axis "horizontal" evaluates at theta directly; "vertical" carries the
    total energy E and evaluates the same integral at E - theta.
    """

    potential: Potential
    barrier: Optional[float] = None  # None means full quarter period
    reflected: bool = False
    energy: Optional[float] = None  # set for vertical (b-type) functions

    def __call__(self, theta: float) -> float:
        arg = theta if self.energy is None else self.energy - theta
        pot = reflect(self.potential) if self.reflected else self.potential
        if self.barrier is None:
            return quarter_period(pot, arg)
        return hit_time(pot, self.barrier, arg)

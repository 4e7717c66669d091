import math
import random

import pytest

from reslab.errors import OffShell
from reslab.polygon import point_in_polygon, rectangle
from reslab.potential import make_potential
from reslab.simulate import (
    conjugacy_residual,
    eta_map,
    hamiltonian,
    integrate,
)

SQRT2 = math.sqrt(2.0)


def harmonic(R=4.0):
    return make_potential(2, [0.0, 1.0], R)


def test_free_oscillation_period():
    V = harmonic()
    P = rectangle(-9.0, -9.0, 9.0, 9.0)
    s0 = (0.3, -0.2, 0.7, 0.4)
    T = 2 * math.pi / SQRT2  # U = x^2 oscillates at omega = sqrt 2
    osc = integrate(P, V, V, s0, 3 * T)
    assert len(osc.times) == 0
    final = osc(3 * T)
    assert max(abs(a - b) for a, b in zip(final, s0)) < 1e-9


def test_reflections_conserve_energy():
    V = harmonic()
    P = rectangle(-0.4, -0.4, 0.4, 0.4)
    s0 = (0.1, -0.05, 0.8, 0.6)
    E = hamiltonian(V, V, s0)
    osc = integrate(P, V, V, s0, 7.0)
    assert len(osc.times) >= 10
    assert osc.max_drift <= 1e-8 * max(E, 1.0)
    for t in (0.3, 1.7, 4.9):
        x, y, _, _ = osc(t)
        assert -0.4 - 1e-9 <= x <= 0.4 + 1e-9
        assert -0.4 - 1e-9 <= y <= 0.4 + 1e-9


def test_reflection_flips_momentum_component():
    V = harmonic()
    P = rectangle(-0.5, -0.5, 0.5, 0.5)
    s0 = (0.0, 0.0, 1.0, 0.1)
    osc = integrate(P, V, V, s0, 2.0)
    assert len(osc.times) >= 1
    before = osc(osc.times[0] - 1e-6)
    after = osc(osc.times[0] + 1e-6)
    assert before[2] > 0 > after[2]  # x-momentum flips at the right wall
    assert after[3] == pytest.approx(before[3], abs=1e-6)


def test_eta_map_on_shell_and_off_shell():
    V = harmonic()
    s0 = (0.3, -0.2, 0.7, 0.4)
    E = hamiltonian(V, V, s0)
    (u1, u2), (s1, s2) = eta_map(V, V, E, s0)
    assert (s1, s2) == (1, 1)
    assert u1 > 0 > u2
    with pytest.raises(OffShell):
        eta_map(V, V, E + 0.1, s0)


def test_eta_map_turning_point_is_quarter_period():
    from reslab.periods import quarter_period

    V = harmonic()
    theta = 0.5
    x_turn = math.sqrt(theta)  # U(x) = x^2
    E = theta + 0.3
    py = math.sqrt(2 * 0.3)
    (u1, _), _ = eta_map(V, V, E, (x_turn, 0.0, 0.0, py))
    assert u1 == pytest.approx(quarter_period(V, theta), abs=1e-9)


def test_conjugacy_residual_small():
    V = harmonic()
    P = rectangle(-0.5, -0.5, 0.5, 0.5)
    s0 = (0.1, -0.05, 0.8, 0.6)
    res = conjugacy_residual(P, V, V, s0, 4.0)
    assert res <= 1e-6


def test_conjugacy_random_battery():
    V1 = make_potential(2, [0.0, 1.0, 0.1], 2.0)
    V2 = make_potential(2, [0.0, 0.9, -0.05], 2.0)
    P = rectangle(-0.5, -0.6, 0.45, 0.55)
    rng = random.Random(3)
    for _ in range(4):
        while True:
            x, y = rng.uniform(-0.4, 0.35), rng.uniform(-0.5, 0.45)
            if point_in_polygon(P, (x, y)):
                break
        px = rng.uniform(0.3, 0.7) * rng.choice([-1, 1])
        py = rng.uniform(0.3, 0.7) * rng.choice([-1, 1])
        assert conjugacy_residual(P, V1, V2, (x, y, px, py), 3.0) <= 1e-6

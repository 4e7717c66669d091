import math
from fractions import Fraction

import pytest

from reslab.billiard import (
    BilliardGeometry,
    cylinder_of,
    direction_of_candidate,
    displacement_data,
    find_saddle_connections,
    is_periodic,
    trace,
    unfold,
    verify_identity,
)
from reslab.polygon import make_polygon, rectangle

SQRT2 = math.sqrt(2.0)

F = Fraction


def frac_rect(x0, y0, x1, y1):
    return make_polygon([[(F(x0), F(y0)), (F(x1), F(y0)), (F(x1), F(y1)), (F(x0), F(y1))]])


L_SHAPE = [[(-1, -1), (2, -1), (2, 0), (0, 0), (0, 2), (-1, 2)]]


def test_trace_square_diagonal_period():
    P = rectangle(0.0, 0.0, 1.0, 1.0)
    traj = trace(P, (0.25, 0.5), (1, 1), max_reflections=8)
    assert traj.total_t > 0
    per = is_periodic(P, (0.25, 0.5), (1, 1))
    assert per is not None
    t, refl = per
    assert t == pytest.approx(2.0, abs=1e-9)  # componentwise travel on the torus


def test_trace_concave_corner_has_three_continuations():
    P = make_polygon(L_SHAPE)
    traj = trace(P, (0.5, -0.5), (-1, 1), max_reflections=8)
    assert traj.terminated == "concave"
    assert len(traj.events[-1].continuations) == 3


def test_exact_square_connections():
    P = frac_rect(0, 0, 1, 1)
    scs = find_saddle_connections(P, 2.0)
    assert len(scs) == 4
    for sc in scs:
        assert sc.residual_exact == (F(0), F(0))
        assert float(sc.tau) == pytest.approx(SQRT2, abs=1e-15)


def test_exact_rectangle_connections_with_crossings():
    P = frac_rect(0, 0, 2, 1)
    scs = find_saddle_connections(P, 3.0)
    assert len(scs) == 4
    dd = displacement_data(P)
    for sc in scs:
        assert float(sc.tau) == pytest.approx(2 * SQRT2, abs=1e-14)
        assert sum(c for _, c in sc.crossing_counts) == 1
        res = verify_identity(sc, dd)
        assert res == (F(0), F(0))


def test_float_square_identity_residual():
    P = rectangle(0.0, 0.0, 1.0, 1.0)
    scs = find_saddle_connections(P, 2.0)
    assert len(scs) == 4
    dd = displacement_data(P)
    for sc in scs:
        assert abs(sc.residual) <= 1e-9
        res = verify_identity(sc, dd)
        assert abs(res) <= 1e-9


def test_direction_of_candidate():
    P = frac_rect(0, 0, 1, 1)
    scs = find_saddle_connections(P, 2.0)
    dd = displacement_data(P)
    sc = scs[0]
    ang = direction_of_candidate(
        dd, sc.crossing_counts, sc.start_vertex, sc.start_signs,
        sc.end_vertex, sc.end_signs,
    )
    assert ang == pytest.approx(math.pi / 4, abs=1e-12)


def test_unfold_square_torus():
    P = rectangle(0.0, 0.0, 1.0, 1.0)
    surf = unfold(P)
    assert surf.area == pytest.approx(4.0)
    assert all(angle == 2 for _, angle, kind in surf.singularities)
    assert surf.components == 1


def test_unfold_l_shape_singularity():
    P = make_polygon(L_SHAPE)
    surf = unfold(P)
    assert surf.area == pytest.approx(4 * 5.0)
    angles = sorted(angle for _, angle, _ in surf.singularities)
    assert angles.count(6) == 1
    assert angles.count(2) == 5
    assert surf.components == 1


def test_unfold_disjoint_rooms_two_components():
    P = make_polygon(
        [
            [(0, 0), (1, 0), (1, 1), (0, 1)],
            [(3, 0), (4, 0), (4, 1), (3, 1)],
        ]
    )
    surf = unfold(P)
    assert surf.components == 2


def test_cylinder_square_closed():
    P = rectangle(0.0, 0.0, 1.0, 1.0)
    width, kind = cylinder_of(P, (0.25, 0.5), (1, 1))
    assert kind == "closed"
    assert width == pytest.approx(SQRT2, abs=1e-8)


def test_cylinder_l_shape_bounded():
    P = make_polygon(
        [[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]]
    )
    width, kind = cylinder_of(P, (1.5, 0.5), (1, 1))
    assert kind == "bounded"
    assert width == pytest.approx(SQRT2, abs=1e-6)


def test_admissible_directions_at_concave_corner():
    P = make_polygon(L_SHAPE)
    geom = BilliardGeometry(P)
    outs = geom.admissible_out((0, 0))
    assert len(outs) == 3

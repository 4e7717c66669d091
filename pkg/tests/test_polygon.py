import math
from fractions import Fraction

import pytest

from reslab.errors import DegenerateClip
from reslab.periods import hit_time, quarter_period
from reslab.polygon import (
    BOTH,
    CONCAVE,
    CONVEX,
    INTERNAL,
    MARGINAL,
    RectilinearPolygon,
    build_p_e_theta,
    energy_partition,
    make_polygon,
    point_in_polygon,
    point_on_boundary,
    rectangle,
    side_parameter_sets,
)
from reslab.potential import make_potential


L_SHAPE = [[(-1, -1), (2, -1), (2, 0), (0, 0), (0, 2), (-1, 2)]]


def test_validation_rejects_diagonal_edges():
    with pytest.raises(ValueError):
        make_polygon([[(0, 0), (1, 1), (0, 2), (-1, 1)]])


def test_validation_rejects_self_intersection():
    with pytest.raises(ValueError):
        make_polygon(
            [[(0, 0), (2, 0), (2, 2), (1, 2), (1, -1), (0.5, -1), (0.5, 2), (0, 2)]]
        )


def test_orientation_normalized():
    # clockwise input loop is flipped to counter-clockwise
    P = make_polygon([[(0, 0), (0, 1), (1, 1), (1, 0)]])
    assert float(P.area()) == pytest.approx(1.0)


def test_hole_orientation():
    P = make_polygon(
        [
            [(0, 0), (4, 0), (4, 4), (0, 4)],
            [(1, 1), (2, 1), (2, 2), (1, 2)],  # hole, normalized clockwise
        ]
    )
    assert float(P.area()) == pytest.approx(15.0)
    assert point_in_polygon(P, (0.5, 0.5))
    assert not point_in_polygon(P, (1.5, 1.5))


def test_point_predicates():
    P = rectangle(0, 0, 2, 1)
    assert point_in_polygon(P, (1, 0.5))
    assert not point_in_polygon(P, (3, 0.5))
    assert point_on_boundary(P, (0, 0.5))
    assert not point_on_boundary(P, (1, 0.5))


def test_corner_types_l_shape():
    P = make_polygon(L_SHAPE)
    labels = P.corner_types()[0]
    idx = list(P.loops[0]).index((0, 0))
    assert labels[idx] == CONCAVE
    assert labels.count(CONCAVE) == 1
    assert labels.count(CONVEX) == 5


def test_side_parameter_sets_unit_square():
    sets = side_parameter_sets(rectangle(0, 0, 1, 1))
    assert sets.x_plus == (0, 1)
    assert sets.x_minus == ()
    assert sets.x_minus_extreme == 0


def test_side_parameter_sets_symmetric_square():
    sets = side_parameter_sets(rectangle(-1, -1, 1, 1))
    assert sets.x_plus == (1,)
    assert sets.x_minus == (1,)
    assert sets.y_plus == (1,)
    assert sets.y_minus == (1,)


def test_side_parameter_sets_l_shape():
    sets = side_parameter_sets(make_polygon(L_SHAPE))
    assert sets.x_plus == (0, 2)
    assert sets.x_minus == (1,)
    assert sets.y_plus == (0, 2)
    assert sets.y_minus == (1,)


def test_energy_partition_breakpoints():
    V = make_potential(2, [0.0, 1.0], 4.0)  # V(x) = x^2
    P = rectangle(-1, -1, 1, 1)
    part = energy_partition(P, V, V, 3.0)
    assert part.breakpoints == (1.0, 2.0)
    part2 = energy_partition(P, V, V, 1.5)
    assert part2.breakpoints == (0.5, 1.0)


def test_energy_partition_high_walls_no_breakpoints():
    V = make_potential(2, [0.0, 1.0], 2.0)
    P = rectangle(-9, -9, 9, 9)
    part = energy_partition(P, V, V, 1.0)
    assert part.breakpoints == ()


def test_clip_table_square_mixed_tags():
    V = make_potential(2, [0.0, 1.0], 4.0)
    P = rectangle(-1, -1, 1, 1)
    # E=3, theta=0.5: x-walls marginal (theta < V(1)), y-walls internal
    table = build_p_e_theta(P, V, V, 3.0, 0.5)
    a = quarter_period(V, 0.5)
    b_wall = hit_time(V, 1.0, 2.5)
    xs = sorted({float(x) for x, _ in table.polygon.loops[0]})
    ys = sorted({float(y) for _, y in table.polygon.loops[0]})
    assert xs == pytest.approx([-a, a], abs=1e-12)
    assert ys == pytest.approx([-b_wall, b_wall], abs=1e-12)
    tagset = {
        (MARGINAL if a[0] == b[0] else INTERNAL)
        for a, b in zip(
            table.raw_polygon.loops[0],
            list(table.raw_polygon.loops[0])[1:]
            + [table.raw_polygon.loops[0][0]],
        )
    }
    tags = set(table.tags[0])
    assert tags == {MARGINAL, INTERNAL}


def test_clip_table_all_marginal():
    V = make_potential(2, [0.0, 1.0], 4.0)
    P = rectangle(-1, -1, 1, 1)
    table = build_p_e_theta(P, V, V, 1.0, 0.5)
    assert set(table.tags[0]) == {MARGINAL}
    a = quarter_period(V, 0.5)
    xs = sorted({float(x) for x, _ in table.polygon.loops[0]})
    assert xs == pytest.approx([-a, a], abs=1e-12)


def test_clip_table_eta_value():
    V = make_potential(2, [0.0, 1.0], 4.0)
    P = rectangle(-1, -1, 1, 1)
    table = build_p_e_theta(P, V, V, 3.0, 1.5)
    b_wall = hit_time(V, 1.0, 1.5)
    assert b_wall == pytest.approx(0.6755108588560398, abs=1e-9)
    ys = sorted({float(y) for _, y in table.polygon.loops[0]})
    assert ys[-1] == pytest.approx(b_wall, abs=1e-12)


def test_clip_concave_corner_survives():
    V = make_potential(2, [0.0, 1.0], 4.0)
    P = make_polygon(L_SHAPE)
    table = build_p_e_theta(P, V, V, 3.0, 0.3)
    types = table.polygon.corner_types()[0]
    assert CONCAVE in types


def test_degenerate_clip_raises():
    V = make_potential(2, [0.0, 1.0], 4.0)
    P = rectangle(5, 5, 6, 6)  # far from the energy rectangle
    with pytest.raises(DegenerateClip):
        build_p_e_theta(P, V, V, 1.0, 0.5)


def test_marginal_wall_maps_to_exact_quarter_period():
    V = make_potential(2, [0.0, 1.0], 4.0)
    P = rectangle(-5, -5, 5, 5)
    for theta in (0.045, 0.37, 0.8):
        table = build_p_e_theta(P, V, V, 1.0, theta)
        xs = [abs(float(x)) for x, _ in table.polygon.loops[0]]
        ys = [abs(float(y)) for _, y in table.polygon.loops[0]]
        assert max(xs) == pytest.approx(quarter_period(V, theta), abs=1e-13)
        assert max(ys) == pytest.approx(
            quarter_period(V, 1.0 - theta), abs=1e-13
        )


def test_fraction_coordinates_preserved():
    P = make_polygon(
        [[(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
          (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))]]
    )
    assert all(isinstance(v, Fraction) for pt in P.vertices() for v in pt)
    assert P.area() == Fraction(1)


def test_json_roundtrip():
    P = make_polygon(L_SHAPE)
    Q = RectilinearPolygon.from_json(P.to_json())
    assert [[tuple(map(float, v)) for v in loop] for loop in Q.loops] == [
        [tuple(map(float, v)) for v in loop] for loop in P.loops
    ]

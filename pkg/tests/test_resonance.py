import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reslab.errors import BoxTooLarge, BreakpointTheta
from reslab.polygon import build_p_e_theta, rectangle
from reslab.potential import make_potential
from reslab.resonance import (
    EMPTY_EVIDENCE,
    INCONCLUSIVE,
    NO_RELATION_WITHIN_BOUNDS,
    OPEN_SET_CANDIDATE,
    RESONANT_FOUND,
    SINGLETON_CANDIDATE,
    classify_trichotomy,
    energy_bound,
    is_resonant_pair,
    relation_search,
    scan_energy,
    table_side_params,
)


def harmonic(slope=1.0, R=10.0):
    return make_potential(2, [0.0, slope], R)


def test_relation_search_finds_minimal_relation():
    rep = relation_search([1.0, 0.5], [0.75], M=3)
    assert rep.found_relation == {"n": (1, 1), "m": (2,)}
    assert rep.residual <= 1e-12


def test_relation_search_irrational_none():
    rep = relation_search([1.0], [math.sqrt(2) / 2], M=10)
    assert rep.found_relation is None


def test_relation_search_monotone_in_bound():
    # raising M can only turn "none" into "found", never the reverse
    xs, ys = [1.0, 0.5], [0.75]
    found_small = relation_search(xs, ys, M=2).found_relation
    found_large = relation_search(xs, ys, M=8).found_relation
    assert found_small is not None
    assert found_large == found_small


def test_relation_search_sign_constraint():
    # 1*a - 1*c = 0 would need opposite extreme signs; forbidden
    params = [(1.0, "plus_extreme"), (1.0, "minus_extreme")]
    rep = relation_search(params, [], M=3)
    assert rep.found_relation is None or (
        rep.found_relation["n"][0] * rep.found_relation["n"][1] >= 0
    )


def test_relation_search_box_too_large():
    with pytest.raises(BoxTooLarge):
        relation_search([1.0] * 4, [1.0] * 4, M=40)


def test_relation_search_exact_mode():
    rep = relation_search([1, 2], [3], M=3, tol=0)
    assert rep.found_relation is not None
    assert rep.residual == 0


@given(
    a=st.floats(min_value=0.1, max_value=3.0),
    n=st.integers(min_value=1, max_value=4),
    m=st.integers(min_value=1, max_value=4),
)
@settings(max_examples=30, deadline=None)
def test_relation_search_planted_relation(a, n, m):
    # plant n*x = m*y exactly and require some relation to be found
    rep = relation_search([a * m], [a * n], M=5, tol=1e-9)
    assert rep.found_relation is not None


def test_is_resonant_pair_sp_square():
    V = harmonic()
    P = rectangle(-5.0, -5.0, 5.0, 5.0)
    v = is_resonant_pair(P, V, V, 1.0, 0.37)
    assert v.status == RESONANT_FOUND


def test_is_resonant_pair_irrational_none():
    V1 = harmonic(1.0)
    V2 = harmonic(math.sqrt(2.0))
    P = rectangle(-5.0, -5.0, 5.0, 5.0)
    v = is_resonant_pair(P, V1, V2, 1.0, 0.37, M=20)
    assert v.status == NO_RELATION_WITHIN_BOUNDS


def test_is_resonant_pair_rational_relation_inconclusive():
    # ratio 2 with high length bound exhausted by the relation search first
    V1 = harmonic(1.0)
    V2 = harmonic(2.0)
    P = rectangle(-5.0, -5.0, 5.0, 5.0)
    v = is_resonant_pair(P, V1, V2, 1.0, 0.37, length_bound=1.0)
    # the 1:2 table admits a relation, so without a found orbit the verdict
    # cannot be a non-resonance certificate
    assert v.status in (RESONANT_FOUND, INCONCLUSIVE)


def test_breakpoint_theta_raises():
    V = harmonic(1.0, R=4.0)
    P = rectangle(-1.0, -1.0, 1.0, 1.0)
    with pytest.raises(BreakpointTheta):
        is_resonant_pair(P, V, V, 3.0, 1.0)  # V(1)=1 is a breakpoint


def test_table_side_params_merged_extremes():
    V1 = harmonic(1.0)
    V2 = harmonic(math.sqrt(2.0))
    P = rectangle(-5.0, -5.0, 5.0, 5.0)
    table = build_p_e_theta(P, V1, V2, 1.0, 0.37)
    px, py, violated = table_side_params(table)
    assert not violated
    assert len(px) == 1 and len(py) == 1
    assert px[0][0] == pytest.approx(math.pi / (2 * math.sqrt(2.0)), abs=1e-10)


def test_energy_bound_finite_room():
    V = make_potential(2, [0.0, 1.0], 3.0)
    P = rectangle(-1.0, -1.0, 1.0, 1.0)
    assert energy_bound(P, V, V) == pytest.approx(2.0, abs=1e-12)


def test_energy_bound_unreachable_walls():
    V = make_potential(2, [0.0, 1.0], 1.0)
    P = rectangle(-9.0, -9.0, 9.0, 9.0)
    assert energy_bound(P, V, V) == math.inf


def test_scan_energy_sp_pair_full_fraction():
    V = harmonic()
    P = rectangle(-5.0, -5.0, 5.0, 5.0)
    grid = [1.0 * (k + 0.5) / 15 for k in range(15)]
    rep = scan_energy(P, V, V, 1.0, grid, length_bound=20.0)
    assert rep.candidate
    assert rep.interval_fractions[0][1] == 1.0


def test_classify_trichotomy_open_set():
    V = harmonic()
    P = rectangle(-5.0, -5.0, 5.0, 5.0)
    rep = classify_trichotomy(V, V, P, [0.5, 1.0, 1.5],
                              theta_grid_size=9, length_bound=25.0)
    assert rep.status == OPEN_SET_CANDIDATE
    assert rep.warnings == ()


def test_classify_trichotomy_empty():
    V1 = harmonic(1.0)
    V2 = harmonic(math.sqrt(2.0))
    P = rectangle(-5.0, -5.0, 5.0, 5.0)
    rep = classify_trichotomy(V1, V2, P, [0.5, 1.0, 1.5],
                              theta_grid_size=9, length_bound=25.0, M=20)
    assert rep.status == EMPTY_EVIDENCE
    assert rep.candidate_levels == ()

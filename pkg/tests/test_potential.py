import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reslab.errors import (
    NonMonotoneW,
    NonzeroConstant,
    OddDegree,
    OutOfCertifiedRange,
)
from reslab.potential import (
    Potential,
    curvature_ratio,
    eval_v,
    eval_v_capped,
    eval_v_inverse,
    is_sp,
    make_potential,
    reflect,
    w_inverse,
)


def test_make_potential_basic():
    p = make_potential(2, [0.0, 1.0, 0.5], 0.5)
    assert p.m == 2
    assert p.w(0.0) == 0.0
    assert p.w_prime(0.0) == 1.0


def test_rejects_odd_degree_m():
    with pytest.raises(OddDegree):
        make_potential(3, [0.0, 1.0], 1.0)


def test_rejects_nonzero_constant():
    with pytest.raises(NonzeroConstant):
        make_potential(2, [0.1, 1.0], 1.0)


def test_rejects_nonmonotone():
    with pytest.raises(NonMonotoneW):
        make_potential(2, [0.0, 1.0, -2.0], 1.0)


def test_w_inverse_roundtrip():
    p = make_potential(2, [0.0, 2.0, 0.3, 0.1], 1.0)
    for x in (-0.9, -0.3, 0.0, 0.4, 0.99):
        y = p.w(x)
        assert abs(w_inverse(p, y) - x) < 1e-12


def test_w_inverse_out_of_range():
    p = make_potential(2, [0.0, 1.0], 1.0)
    with pytest.raises(OutOfCertifiedRange):
        w_inverse(p, 5.0)


def test_eval_v_harmonic():
    p = make_potential(2, [0.0, 1.0], 3.0)
    assert abs(eval_v(p, 0.5) - 0.25) < 1e-14
    assert abs(eval_v_inverse(p, 0.25) - 0.5) < 1e-14


def test_eval_v_capped_beyond_range():
    p = make_potential(2, [0.0, 1.0], 1.0)
    assert eval_v_capped(p, 5.0) == math.inf
    assert eval_v_capped(p, 0.5) == pytest.approx(0.25)


def test_reflect_negates_even_w_coefficients():
    p = make_potential(2, [0.0, 1.0, 0.2], 0.5)
    r = reflect(p)
    assert r.w_coeffs[1] == 1.0
    assert r.w_coeffs[2] == -0.2


@given(
    c1=st.floats(min_value=0.5, max_value=3.0),
    c2=st.floats(min_value=-0.2, max_value=0.2),
    c3=st.floats(min_value=-0.1, max_value=0.1),
)
@settings(max_examples=50, deadline=None)
def test_reflect_is_involutive(c1, c2, c3):
    p = make_potential(2, [0.0, c1, c2, c3], 0.5)
    assert reflect(reflect(p)).w_coeffs == p.w_coeffs


def test_reflected_potential_mirrors_v():
    p = make_potential(2, [0.0, 1.0, 0.3], 0.5)
    r = reflect(p)
    for x in (0.05, 0.2, 0.4):
        # V-bar(x) = V(-x) by construction of the reflected map
        assert abs(eval_v(r, x) - eval_v(p, -x)) < 1e-12


def test_is_sp_classification():
    assert is_sp(make_potential(2, [0.0, 2.0, 1.0], 0.4)).is_sp
    cert = is_sp(make_potential(2, [0.0, 1.0, 0.0, 0.5], 0.8))
    assert not cert.is_sp
    assert 3 in cert.offending_degrees
    assert not is_sp(make_potential(4, [0.0, 1.0], 1.0)).is_sp


def test_curvature_ratio_rational_fit():
    p1 = make_potential(2, [0.0, 1.0], 1.0)
    p2 = make_potential(2, [0.0, 2.0], 1.0)
    ratio, rep = curvature_ratio(p1, p2)
    assert ratio == pytest.approx(2.0)
    assert (rep.p, rep.q) == (2, 1)
    assert rep.residual < 1e-12


def test_json_roundtrip():
    p = make_potential(2, [0.0, 1.5, -0.1], 0.5)
    q = Potential.from_json(json.loads(json.dumps(p.to_json())))
    assert q == p

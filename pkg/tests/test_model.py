import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mzk.errors import DomainError, PoleError
from mzk.model import (
    EquationParams,
    JetPoint,
    QuarticPoly,
    WaveConstants,
    build_p,
    h_eval,
    i2,
    i3,
    jet_on_level_set,
    level_set_v1,
    level_set_v2,
    p_value,
)

SOLITON = EquationParams(0.0, 1.0, 1.0, 1.0)


def soliton_jet(r):
    # v = sqrt(6) sech(r / sqrt 2) with hand-derived derivatives (c = 1)
    s, t = 1 / math.cosh(r / math.sqrt(2)), math.tanh(r / math.sqrt(2))
    return JetPoint(r, math.sqrt(6) * s, -math.sqrt(3) * s * t, math.sqrt(1.5) * (s * t * t - s ** 3))


def test_build_p_examples():
    assert build_p(SOLITON, WaveConstants(1.0)).coeffs == (1.0, 0.0, -6.0, 0.0, 0.0)
    p = build_p(EquationParams(0, 0, 0.7, 0.7), WaveConstants(1.0))
    assert p.degree == 2 and p.coeffs[2] == -6.0


def test_build_p_kink_has_two_double_roots():
    c = 0.25
    p = build_p(EquationParams(1, 2, -1, -1 / 3), WaveConstants(c, 0.0, (1 + 12 * c) / 4, (1 + 12 * c) ** 2 / 32))
    for phi in (-0.25 - 0.25 * math.sqrt(3 + 24 * c), -0.25 + 0.25 * math.sqrt(3 + 24 * c)):
        assert abs(p(phi)) <= 1e-14 and abs(p.deriv(phi)) <= 1e-14
    assert abs(p.deriv(0.0, 2)) > 0


def test_quartic_poly_validation():
    with pytest.raises(ValueError):
        QuarticPoly((1.0, 2.0))
    assert QuarticPoly((0, 0, 0, 0, 0)).degree == -1
    assert QuarticPoly((0, 0, 0, 1, 0)).degree == 1


def test_constructors_reject_bad_values():
    with pytest.raises(ValueError):
        WaveConstants(0.0)
    with pytest.raises(ValueError):
        EquationParams(math.nan, 1, 1, 1)
    assert EquationParams(1, 1, 1, -1).degenerate
    assert EquationParams(1, 2, -1, -1 / 3).K == pytest.approx(4.0)
    assert EquationParams(1, 0, 1, 1).K is None


def test_i3_trivial():
    assert i3(EquationParams(1, 2, 3, 4), 1.5, JetPoint(0, 0, 0, 0)) == 0.0


def test_invariants_vanish_on_soliton():
    for r in np.linspace(-4, 4, 9):
        j = soliton_jet(r)
        assert abs(i3(SOLITON, 1.0, j)) <= 1e-12
        assert abs(i2(SOLITON, 1.0, 0.0, j)) <= 1e-12


def test_i3_on_cubic_triple_profile():
    # v = c/A - 12 (M+N) / (A s^2), s = C1 - r; I3 evaluates to C3 = -2 c^3 / A^2
    A, MN, c, C1 = 1.5, 1.0, 0.8, 0.3
    p = EquationParams(A, 0.0, 0.5, 0.5)
    for r in np.linspace(1.0, 4.0, 10):
        s = C1 - r
        j = JetPoint(r, c / A - 12 * MN / (A * s * s), -24 * MN / (A * s ** 3), -72 * MN / (A * s ** 4))
        assert i3(p, c, j) == pytest.approx(-2 * c ** 3 / A ** 2, abs=1e-8)


def test_i2_trivial_and_domain():
    assert i2(EquationParams(0, 0, 0.5, 0.5), 0.0, 0.0, JetPoint(0, 1, 0, 0)) == 0.0
    with pytest.raises(DomainError):
        i2(SOLITON, 1.0, 0.0, JetPoint(0, 0, 1, 0))


def test_invariants_on_periodic_zero_constant_profile():
    A, B, MN, lam = 1.0, 1.0, 1.0, 0.1
    p, c = EquationParams(A, B, 0.5, 0.5), -lam * MN
    q = math.sqrt(A * A - 6 * B * lam * MN)
    w = math.sqrt(lam)
    for r in np.linspace(-3, 3, 10):
        d = q * math.cos(w * r) + A
        v = -6 * lam * MN / d
        v1 = -6 * lam * MN * q * w * math.sin(w * r) / d ** 2
        v2 = -6 * lam * MN * q * w * w * (math.cos(w * r) * d + 2 * q * math.sin(w * r) ** 2) / d ** 3
        j = JetPoint(r, v, v1, v2)
        assert abs(i3(p, c, j)) <= 1e-8
        assert abs(i2(p, c, 0.0, j)) <= 1e-8


def test_h_eval_examples():
    wc = WaveConstants(1.0)
    assert h_eval(SOLITON, wc, 1.0) == pytest.approx(math.sqrt(2.4), abs=1e-15)
    with pytest.raises(PoleError):
        h_eval(SOLITON, wc, 0.0)
    with pytest.raises(DomainError):
        h_eval(SOLITON, wc, 3.0)  # P(3) = 27 > 0 with M + N > 0


def test_level_set_helpers_reject_bad_points():
    with pytest.raises(DomainError):
        level_set_v1(SOLITON, 1.0, 0.0, 0.0, 3.0)
    with pytest.raises(DomainError):
        level_set_v2(SOLITON, 1.0, 0.0, 0.0, 1.0)


params_st = st.tuples(
    st.floats(-2, 2), st.floats(-2, 2), st.floats(-1, 1), st.floats(-1, 1)
).filter(lambda t: abs(t[2] + t[3]) > 0.1)


@settings(max_examples=200, deadline=None)
@given(params_st, st.floats(0.2, 3.0), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.sampled_from([-1, 1]))
def test_level_set_jet_reproduces_constants(pt, c, C2, C3, v, sign):
    p = EquationParams(*pt)
    assume(abs(v) > 0.05)
    assume(-p_value(p, c, C2, C3, v) / (6 * p.MN) > 0)
    j = jet_on_level_set(p, c, C2, C3, 0.0, v, sign)
    scale = 1 + abs(C3) + abs(p.B) * v ** 4 + abs(p.A) * abs(v) ** 3 + 6 * c * v * v
    assert abs(i3(p, c, j) - C3) <= 1e-10 * scale
    assert abs(i2(p, c, C3, j) - C2) <= 1e-10 * scale / abs(v)


@settings(max_examples=200, deadline=None)
@given(params_st, st.floats(0.2, 3.0), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_h_squared_times_p(pt, c, C2, C3, v):
    p = EquationParams(*pt)
    wc = WaveConstants(c, 0.0, C2, C3)
    pv = p_value(p, c, C2, C3, v)
    assume(abs(pv) > 1e-6 and -6 * p.MN / pv > 0)
    h = h_eval(p, wc, v)
    assert h * h * pv == pytest.approx(-6 * p.MN, rel=1e-12)

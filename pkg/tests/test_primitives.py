import math

import numpy as np
import pytest

from mzk.atlas import load_atlas
from mzk.classify import classify, constants_from_family
from mzk.errors import DomainError
from mzk.families import profile_values
from mzk.model import EquationParams, h_eval
from mzk.primitives import primitive_for, printed_primitive
from mzk.verify import primitive_check

ATLAS = load_atlas()
WITH_PRIMITIVE = [f for f in ATLAS if primitive_for(f.member, f.build()[1]) is not None]


def in_domain_samples(fx, prim, n=20):
    """``n`` profile values from the fixture window that lie strictly inside the region."""
    wc, fd = fx.build()
    v, st = profile_values(fd, wc.C1, np.linspace(*fx.window, 4 * n + 2)[1:-1])
    v = [x for x in v[st == 0] if prim.in_domain(x) and prim.distance_to_boundary(x) > 1e-6]
    assert len(v) >= n
    return [v[i] for i in np.linspace(0, len(v) - 1, n).round().astype(int)]


def fd_mismatch(prim, h, samples):
    worst = 0.0
    for v in samples:
        dv = 1e-4 * min(1 + abs(v), prim.distance_to_boundary(v))
        try:
            d = (prim(v + dv) - prim(v - dv)) / (2 * dv)
        except (ValueError, ZeroDivisionError):
            return math.inf
        worst = max(worst, abs(d - h(v)) / (1 + h(v)))
    return worst


def test_members_without_printed_primitive():
    assert {f.member for f in ATLAS} - {f.member for f in WITH_PRIMITIVE} == {"SOL4DIST3", "SOLD4DIST4"}


@pytest.mark.parametrize("fx", WITH_PRIMITIVE, ids=[f.member for f in WITH_PRIMITIVE])
def test_primitive_differentiates_to_h(fx):
    wc, fd = fx.build()
    prim = primitive_for(fx.member, fd)
    rep = primitive_check(fx.member, fd, wc, in_domain_samples(fx, prim))
    assert rep.n_points == 20
    assert rep.max_rel <= 1e-6


@pytest.mark.parametrize("member", ["SOLG21", "SOLG3SIMPLESA2", "SOL4DIST1"])
def test_published_form_fails_where_corrected(member):
    fx = next(f for f in ATLAS if f.member == member)
    wc, fd = fx.build()
    prim = printed_primitive(member, fd)
    samples = in_domain_samples(fx, primitive_for(member, fd))
    assert fd_mismatch(prim, lambda v: h_eval(fd.params, wc, v), samples) > 1e-3


def test_published_triple_root_form_has_sign_of_k():
    # K < 0 here; the published display differentiates to -h
    p = EquationParams(2, 1, 0.5, 0.5)
    wc = constants_from_family("SOL1RTRIPLE", p, 0.5, 0.0, sign=1)
    fd = classify(p, wc, member="SOL1RTRIPLE")
    assert fd.K < 0
    prim, printed = primitive_for("SOL1RTRIPLE", fd), printed_primitive("SOL1RTRIPLE", fd)
    h = lambda v: h_eval(p, wc, v)
    v = [x for x in np.linspace(-3, 3, 61) if prim.in_domain(x) and prim.distance_to_boundary(x) > 1e-3]
    assert fd_mismatch(prim, h, v) <= 1e-6
    assert fd_mismatch(printed, lambda x: -h(x), v) <= 1e-6


def test_quadruple_primitive_derivative_is_exact():
    # H = -sqrt(K) / (v + A/2B) so dH/dv = sqrt(K) / (v + A/2B)^2
    fx = next(f for f in ATLAS if f.member == "SOLG4CUADRUPLE")
    wc, fd = fx.build()
    A, B = fd.params.A, fd.params.B
    for v in (-3.0, -1.5, 0.2, 2.0):
        exact = math.sqrt(fd.K) / (v + A / (2 * B)) ** 2
        assert exact == pytest.approx(h_eval(fd.params, wc, v), rel=1e-14)


def test_samples_outside_domain_rejected():
    fx = next(f for f in ATLAS if f.member == "SOL2RD_PLUS")
    wc, fd = fx.build()
    with pytest.raises(DomainError):
        primitive_check("SOL2RD_PLUS", fd, wc, [-0.2, 0.5])  # 0.5 is a double root of P
    wc, fd = next(f for f in ATLAS if f.member == "SOL4DIST3").build()
    with pytest.raises(ValueError):
        primitive_check("SOL4DIST3", fd, wc, [0.0])
    wc, fd = next(f for f in ATLAS if f.member == "SOLG41D2REALES_B1").build()
    with pytest.raises(DomainError):
        primitive_check("SOLG41D2REALES_B1", fd, wc, [1.0, 5.0])  # h is not real at 5

"""Closed-form traveling-wave profiles and the implicit (quadrature) solution.

Every formula is written in the phase variable ``s = C1 - r`` with
``r = x + y - c t``.  Profiles are evaluated on numpy arrays; each point gets
a status code alongside its value.  Forms that differ from the published
displays are listed in docs/family_atlas.md.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate, optimize

from .classify import FamilyDescriptor
from .errors import DomainError, NoRootInBracketError
from .model import EquationParams, WaveConstants, build_p, h_eval
from .roots import solve_structure
from .specfun import jacobi_sn

OK, POLE, OUT_OF_DOMAIN, COMPLEX_RESIDUE = 0, 1, 2, 3
STATUS_NAMES = ("ok", "pole", "out-of-domain", "complex-residue")

POLE_TOL = 1e-12
IMAG_TOL = 1e-9


@dataclass(frozen=True)
class WavePoint:
    x: float
    y: float
    t: float

    def r(self, c: float) -> float:
        return self.x + self.y - c * self.t


@dataclass(frozen=True)
class EvalResult:
    value: Optional[float]
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "ok"


class _OutOfDomain(Exception):
    pass


class _Ctx:
    """Collects pole flags while a formula is evaluated."""

    def __init__(self, shape):
        self.pole = np.zeros(shape, dtype=bool)

    def div(self, num, den):
        num = np.asarray(num, dtype=float)
        den = np.asarray(den, dtype=float)
        bad = np.abs(den) < POLE_TOL * (1.0 + np.abs(num))
        self.pole |= np.broadcast_to(bad, self.pole.shape)
        with np.errstate(all="ignore"):
            return num / np.where(bad, 1.0, den)


def _sqrt(x: float, what: str) -> float:
    if not x >= 0.0:
        raise _OutOfDomain(f"{what} = {x} < 0")
    return math.sqrt(x)


# --- member formulas --------------------------------------------------------
# each takes (fd, s, ctx) and returns an array of values


def _solg21(fd, s, ctx):
    c, C2, C3 = fd.c, fd.C2, fd.C3
    w = _sqrt(c / fd.params.MN, "c/(M+N)")
    b = fd.branch
    return (
        -C2 / (12 * c)
        - 0.25 * np.exp(-b * w * s)
        - (C2 * C2 + 24 * c * C3) / (144 * c * c) * np.exp(b * w * s)
    )


def _solg22(fd, s, ctx):
    # tan/(1+tan^2) = sin cos and tan^2/(1+tan^2) = sin^2, so the removable
    # singularities of tan never reach the arithmetic
    c, C2, C3 = fd.c, fd.C2, fd.C3
    xi = _sqrt(-c / (4 * fd.params.MN), "-c/(4(M+N))") * s
    amp = _sqrt(24 * C3 / c, "24 C3/c")
    sn, cs = np.sin(xi), np.cos(xi)
    return (-fd.branch * amp * sn * cs - C2 / c * sn * sn) / 6.0


def _solg3triple(fd, s, ctx):
    A, c, MN = fd.params.A, fd.c, fd.params.MN
    return ctx.div(-12 * MN, A * s * s) + c / A


def _caso2a1(fd, s, ctx):
    A, c, MN = fd.params.A, fd.c, fd.params.MN
    phi = fd.aux["phi"]
    k = _sqrt((c - A * phi) / MN, "(c-A phi)/(M+N)")
    return phi + 6 * (c - A * phi) / (A * (1 + np.cosh(k * s)))


def _caso2a2(fd, s, ctx):
    A, c, MN = fd.params.A, fd.c, fd.params.MN
    phi = fd.aux["phi"]
    k = _sqrt((A * phi - c) / MN, "(A phi-c)/(M+N)")
    return phi + ctx.div(6 * (c - A * phi), A * (1 + np.cos(k * s)))


def _caso2b(fd, s, ctx):
    A, c, MN = fd.params.A, fd.c, fd.params.MN
    phi = fd.aux["phi"]
    k = _sqrt((A * phi - c) / (4 * MN), "(A phi-c)/(4(M+N))")
    cs = np.cos(k * s)
    return phi + ctx.div(3 * c - 3 * A * phi, A * cs * cs)


def _phis3(fd):
    return fd.aux["phi1"], fd.aux["phi2"], fd.aux["phi3"]


def _simplesa_xi(fd, s):
    p1, p2, p3 = _phis3(fd)
    A, MN = fd.params.A, fd.params.MN
    return _sqrt(A * (p1 - p2) / (12 * MN), "A(phi1-phi2)/(12(M+N))") * s, (p3 - p1) / (p2 - p1)


def _simplesa1(fd, s, ctx):
    p1, p2, _ = _phis3(fd)
    xi, m = _simplesa_xi(fd, s)
    sn = jacobi_sn(xi, m)
    return p1 + ctx.div(p2 - p1, sn * sn)


def _simplesa2(fd, s, ctx):
    p1, _, p3 = _phis3(fd)
    xi, m = _simplesa_xi(fd, s)
    sn = jacobi_sn(xi, m)
    return p1 + (p3 - p1) * sn * sn


def _simplesb_xi(fd, s):
    p1, p2, p3 = _phis3(fd)
    A, MN = fd.params.A, fd.params.MN
    return _sqrt(A * (p2 - p1) / (12 * MN), "A(phi2-phi1)/(12(M+N))") * s, (p2 - p3) / (p2 - p1)


def _simplesb1(fd, s, ctx):
    _, p2, p3 = _phis3(fd)
    xi, m = _simplesb_xi(fd, s)
    sn = jacobi_sn(xi, m)
    return p2 + (p3 - p2) * sn * sn


def _simplesb2(fd, s, ctx):
    p1, p2, _ = _phis3(fd)
    xi, m = _simplesb_xi(fd, s)
    sn = jacobi_sn(xi, m)
    return p2 + ctx.div(p1 - p2, sn * sn)


def _cuadruple(fd, s, ctx):
    A, B = fd.params.A, fd.params.B
    rk = _sqrt(fd.K, "K")
    return -A / (2 * B) + fd.branch * ctx.div(rk * np.ones_like(s), s)


def _triple4(fd, s, ctx):
    p1, p2, K = fd.aux["phi1"], fd.aux["phi2"], fd.K
    d = p2 - p1
    return p1 + ctx.div(d * np.ones_like(s), 1 - d * d / (4 * K) * s * s)


def _rd_plus(fd, s, ctx):
    p1, p2 = fd.aux["phi1"], fd.aux["phi2"]
    rk = _sqrt(fd.K, "K")
    with np.errstate(over="ignore"):
        e = np.exp(-fd.branch * (p1 - p2) / rk * s)
    return p1 + (p2 - p1) / (1 + e)


def _rd_minus(fd, s, ctx):
    p1, p2 = fd.aux["phi1"], fd.aux["phi2"]
    rk = _sqrt(fd.K, "K")
    with np.errstate(over="ignore"):
        e = np.exp(-fd.branch * (p2 - p1) / rk * s)
    return p1 + ctx.div((p2 - p1) * np.ones_like(s), 1 - e)


def _double_compl(fd, s, ctx):
    a, b = fd.aux["a"], fd.aux["b"]
    w = b / _sqrt(fd.K, "K") * s
    return a - fd.branch * b * ctx.div(np.sin(w), np.cos(w))


def _phis_1d(fd):
    return fd.aux["phi1"], fd.aux["phi2"], fd.aux["phi3"]


def _reales_a(fd, s, ctx):
    # 1/(1 - q tan^2) written as cos^2/(cos^2 - q sin^2)
    p1, p2, p3 = _phis_1d(fd)
    K = fd.K
    w = _sqrt(K * (p3 - p1) * (p1 - p2), "K(phi3-phi1)(phi1-phi2)") / (2 * K) * s
    q = (p3 - p1) / (p1 - p2)
    cs2, sn2 = np.cos(w) ** 2, np.sin(w) ** 2
    return p2 + ctx.div((p3 - p2) * cs2, cs2 - q * sn2)


def _reales_b_th2(fd, s):
    p1, p2, p3 = _phis_1d(fd)
    K = fd.K
    w = _sqrt(K * (p3 - p1) * (p2 - p1), "K(phi3-phi1)(phi2-phi1)") / (2 * K) * s
    return np.tanh(w) ** 2


def _reales_b1(fd, s, ctx):
    p1, p2, p3 = _phis_1d(fd)
    th2 = _reales_b_th2(fd, s)
    return p2 + ctx.div((p3 - p2) * np.ones_like(s), 1 - (p3 - p1) / (p2 - p1) * th2)


def _reales_b2(fd, s, ctx):
    p1, p2, p3 = _phis_1d(fd)
    th2 = _reales_b_th2(fd, s)
    return p3 + ctx.div((p2 - p3) * np.ones_like(s), 1 - (p2 - p1) / (p3 - p1) * th2)


def _comp_setup(fd, s):
    p1, a, b = fd.aux["phi1"], fd.aux["a"], fd.aux["b"]
    R = math.sqrt((p1 - a) ** 2 + b * b)
    T = np.tanh(_sqrt(R * R / (4 * fd.K), "R^2/(4K)") * s)
    return p1, a, b, R, T


def _comp1(fd, s, ctx):
    p1, a, b, R, T = _comp_setup(fd, s)
    sg = fd.branch
    return ctx.div(a * a + b * b - (p1 + sg * R * T) ** 2, 2 * (a - p1 - sg * R * T))


def _comp2(fd, s, ctx):
    p1, a, b, R, T = _comp_setup(fd, s)
    sg = fd.branch
    num = (R + sg * p1 * T) ** 2 - (a * a + b * b) * T * T
    return sg * ctx.div(num, 2 * T * (R + sg * (p1 - a) * T))


def _dist_terms(member, p, K):
    """(base, amp, ratio, xi-coefficient radicand, m) for the four-root members.

    The profile is ``base + amp / (1 - ratio * sn(sqrt(rad) s, m)^2)``.
    """
    p1, p2, p3, p4 = p
    if member == "SOL4DIST1":
        return p2, -(p2 - p1), (p4 - p1) / (p4 - p2), (p3 - p1) * (p4 - p2) / (4 * K), (
            (p3 - p2) * (p4 - p1) / ((p3 - p1) * (p4 - p2))
        )
    if member == "SOL4DIST2":
        return p1, p2 - p1, (p4 - p2) / (p4 - p1), (p3 - p2) * (p4 - p1) / (4 * K), (
            (p3 - p1) * (p4 - p2) / ((p3 - p2) * (p4 - p1))
        )
    if member == "SOL4DIST3":
        return p3, -(p3 - p2), (p4 - p2) / (p4 - p3), (p1 - p2) * (p4 - p3) / (4 * K), (
            (p3 - p1) * (p4 - p2) / ((p2 - p1) * (p4 - p3))
        )
    return p2, p3 - p2, (p4 - p3) / (p4 - p2), (p1 - p3) * (p4 - p2) / (4 * K), (
        (p2 - p1) * (p4 - p3) / ((p3 - p1) * (p4 - p2))
    )


def _dist_real(fd, s, ctx):
    base, amp, ratio, rad, m = _dist_terms(fd.member, fd.aux["phis"], fd.K)
    sn = jacobi_sn(_sqrt(rad, "xi radicand") * s, m)
    return base + ctx.div(amp * np.ones_like(s), 1 - ratio * sn * sn)


def _complex_u(fd):
    """Scalar ``s -> (num, den)`` with ``u = num / den`` in complex arithmetic."""
    import mpmath as mp

    def sn2(z, m):
        return complex(mp.ellipfun("sn", z, m=m)) ** 2

    A, MN = fd.params.A, fd.params.MN
    mem = fd.member
    if mem.startswith("SOL4") or mem.startswith("SOLD4"):
        phis = [complex(z) for z in fd.aux["phis"]]
        base, amp, ratio, rad, m = _dist_terms(mem, phis, complex(fd.K))
        k = cmath.sqrt(rad)
        return lambda s: (base + 0j, amp, 1 - ratio * sn2(k * s, m))
    p1, p2, p3 = (complex(fd.aux[k]) for k in ("phi1", "phi2", "phi3"))
    if mem.startswith("SOLG3SIMPLESA"):
        k, m = cmath.sqrt(A * (p1 - p2) / (12 * MN)), (p3 - p1) / (p2 - p1)
        if mem == "SOLG3SIMPLESA1":
            return lambda s: (p1, p2 - p1, sn2(k * s, m))
        return lambda s: (p1 + (p3 - p1) * sn2(k * s, m), 0.0, 1.0)
    k, m = cmath.sqrt(A * (p2 - p1) / (12 * MN)), (p2 - p3) / (p2 - p1)
    if mem == "SOLG3SIMPLESB1":
        return lambda s: (p2 + (p3 - p2) * sn2(k * s, m), 0.0, 1.0)
    return lambda s: (p2, p1 - p2, sn2(k * s, m))


def _complex_profile(fd, s):
    """Complex-root rows through mpmath's complex sn; returns (values, status).

    The profile is ``base + amp / den``; the real part is kept when the
    imaginary part is negligible.
    """
    terms = _complex_u(fd)
    vals = np.full(s.shape, np.nan)
    st = np.full(s.shape, OK, dtype=np.int8)
    for idx, si in np.ndenumerate(s):
        base, amp, den = terms(float(si))
        if abs(den) < POLE_TOL * (1 + abs(amp)):
            st[idx] = POLE
            continue
        u = base + amp / den
        if not cmath.isfinite(u):
            st[idx] = POLE
        elif abs(u.imag) <= IMAG_TOL * (1 + abs(u.real)):
            vals[idx] = u.real
        else:
            st[idx] = COMPLEX_RESIDUE
    return vals, st


_FORMULAS: dict = {
    "SOLG21": _solg21,
    "SOLG22": _solg22,
    "SOLG3TRIPLE": _solg3triple,
    "SOLG3CASO2A1_POS": _caso2a1,
    "SOLG3CASO2A1_NEG": _caso2a1,
    "SOLG3CASO2A2": _caso2a2,
    "SOLG3CASO2B": _caso2b,
    "SOLG3SIMPLESA1": _simplesa1,
    "SOLG3SIMPLESA2": _simplesa2,
    "SOLG3SIMPLESB1": _simplesb1,
    "SOLG3SIMPLESB2": _simplesb2,
    "SOLG4CUADRUPLE": _cuadruple,
    "SOL1RTRIPLE": _triple4,
    "SOL2RD_PLUS": _rd_plus,
    "SOL2RD_MINUS": _rd_minus,
    "SOLG4DOUBLECOMPL": _double_compl,
    "SOLG41D2REALES_A": _reales_a,
    "SOLG41D2REALES_B1": _reales_b1,
    "SOLG41D2REALES_B2": _reales_b2,
    "SOLG4DOBLEY2COMP1": _comp1,
    "SOLG4DOBLEY2COMP2": _comp2,
    "SOL4DIST1": _dist_real,
    "SOL4DIST2": _dist_real,
    "SOL4DIST3": _dist_real,
    "SOLD4DIST4": _dist_real,
}


def profile_values(fd: FamilyDescriptor, C1: float, r) -> Tuple[np.ndarray, np.ndarray]:
    """Profile ``v(r)`` on an array: ``(values, status codes)``.

    Values are NaN wherever the status is not ``OK``.
    """
    r = np.asarray(r, dtype=float)
    s = C1 - r
    if fd.class_id == "CONSTANT":
        return np.full(r.shape, float(fd.aux["u0"])), np.zeros(r.shape, dtype=np.int8)
    if fd.member is None:
        raise ValueError(f"descriptor for row {fd.class_id} has no member selected")
    if fd.aux.get("complex"):
        return _complex_profile(fd, s)
    ctx = _Ctx(r.shape)
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(_FORMULAS[fd.member](fd, s, ctx), dtype=float)
    except _OutOfDomain:
        return np.full(r.shape, np.nan), np.full(r.shape, OUT_OF_DOMAIN, dtype=np.int8)
    vals = np.broadcast_to(vals, r.shape).copy()
    status = np.zeros(r.shape, dtype=np.int8)
    status[ctx.pole] = POLE
    status[(status == OK) & ~np.isfinite(vals)] = POLE
    vals[status != OK] = np.nan
    return vals, status


def _result(v, st) -> EvalResult:
    st = int(st)
    return EvalResult(float(v) if st == OK else None, STATUS_NAMES[st])


def evaluate_profile(fd: FamilyDescriptor, wc: WaveConstants, r: float) -> EvalResult:
    v, st = profile_values(fd, wc.C1, np.array([r], dtype=float))
    return _result(v[0], st[0])


def evaluate(fd: FamilyDescriptor, wc: WaveConstants, p: WavePoint) -> EvalResult:
    return evaluate_profile(fd, wc, p.r(wc.c))


def field_values(fd: FamilyDescriptor, wc: WaveConstants, x, y, t):
    """``u(x, y, t)`` on broadcast arrays: ``(values, status codes)``."""
    x, y, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(t, float))
    return profile_values(fd, wc.C1, x + y - wc.c * t)


def profile_fn(fd: FamilyDescriptor, wc: WaveConstants) -> Callable:
    """Vectorized ``r -> v`` with NaN at unusable points, for the residual oracles."""
    return lambda r: profile_values(fd, wc.C1, r)[0]


def field_fn(fd: FamilyDescriptor, wc: WaveConstants) -> Callable:
    return lambda x, y, t: field_values(fd, wc, x, y, t)[0]


# --- implicit solution ----------------------------------------------------


def _primitive_quad(params, wc, v0, v):
    val, _ = integrate.quad(
        lambda z: h_eval(params, wc, z), v0, v, epsabs=1e-13, epsrel=1e-12, limit=200
    )
    return val


def implicit_solve(
    params: EquationParams,
    wc: WaveConstants,
    r: float,
    v_bracket: Tuple[float, float],
    branch: int = 1,
    v0: Optional[float] = None,
) -> float:
    """Solve ``r + branch * H(v) = C1`` for ``v`` inside ``v_bracket``.

    ``H`` is the primitive of ``h`` vanishing at ``v0`` (bracket midpoint by
    default), so ``v(C1) = v0``.  The bracket must not contain a root of P.
    """
    lo, hi = sorted(float(x) for x in v_bracket)
    # clustered roots, so a double root is not split into a near-complex pair
    for z in solve_structure(build_p(params, wc)).real_roots():
        if lo <= z <= hi:
            raise DomainError(f"P has a root at {z} inside the bracket [{lo}, {hi}]")
    for v in (lo, hi):
        h_eval(params, wc, v)  # raises if h is not real on the bracket
    if v0 is None:
        v0 = 0.5 * (lo + hi)

    def f(v):
        return r + branch * _primitive_quad(params, wc, v0, v) - wc.C1

    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NoRootInBracketError(f"r + H(v) - C1 does not change sign on [{lo}, {hi}]")
    return optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)

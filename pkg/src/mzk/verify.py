"""Independent numerical oracles.

Finite-difference residuals of the reduced ODE and of the PDE, a fixed-step
RK4 integrator for the third-order ODE, finite-difference jets for sampled
profiles, and the check that a primitive differentiates back to ``h``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BlowUpError, DomainError, InsufficientDomainError
from .model import EquationParams, JetPoint, WaveConstants, h_eval

BLOW_UP = 1e12


@dataclass(frozen=True)
class ResidualReport:
    max_abs: float
    max_rel: float
    n_points: int
    n_skipped_poles: int
    fd_step: float

    def to_dict(self) -> dict:
        return asdict(self)


# 5-point weights; first and second derivatives are 4th order, the third is 2nd
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_D3 = np.array([-1.0, 2.0, 0.0, -2.0, 1.0]) / 2.0
_OFFS = np.arange(-2, 3)


def _stencil(f: Callable, r: np.ndarray, h: float):
    vals = np.stack([f(r + k * h) for k in _OFFS])
    return (
        vals[2],
        np.tensordot(_D1, vals, 1) / h,
        np.tensordot(_D2, vals, 1) / h ** 2,
        np.tensordot(_D3, vals, 1) / h ** 3,
    )


def fd_jet(f: Callable, r, h: float):
    """``(v, v1, v2, v3)`` at ``r`` by Richardson-extrapolated central stencils."""
    r = np.asarray(r, dtype=float)
    v, a1, a2, a3 = _stencil(f, r, h)
    _, b1, b2, b3 = _stencil(f, r, 0.5 * h)
    return v, (16 * b1 - a1) / 15, (16 * b2 - a2) / 15, (4 * b3 - a3) / 3


def _report(res, terms, h, n_total):
    good = np.isfinite(res) & np.all(np.isfinite(terms), axis=0)
    n_bad = int(n_total - np.count_nonzero(good))
    if n_bad * 2 > n_total:
        raise InsufficientDomainError(f"{n_bad} of {n_total} residual points unusable")
    res = np.abs(res[good])
    scale = 1.0 + np.max(np.abs(terms[:, good]), axis=0)
    return ResidualReport(
        float(np.max(res)), float(np.max(res / scale)), int(np.count_nonzero(good)), n_bad, float(h)
    )


def ode_residual(
    profile: Callable,
    params: EquationParams,
    c: float,
    interval: Tuple[float, float],
    n: int,
    step: Optional[float] = None,
) -> ResidualReport:
    """Residual of ``-c v' + A v v' + B v^2 v' + (M+N) v'''`` on ``n`` points.

    ``profile`` maps an array of ``r`` to values, NaN where undefined.  The
    default step is ``5e-3 * max(1, width / 20)``; smaller steps lose more to
    roundoff in the third-derivative stencil than they gain in truncation.
    """
    if n < 7:
        raise ValueError("ode_residual needs n >= 7")
    a, b = interval
    h = step if step is not None else 5e-3 * max(1.0, (b - a) / 20.0)
    r = np.linspace(a, b, n)
    with np.errstate(all="ignore"):
        v, v1, _, v3 = fd_jet(profile, r, h)
        terms = np.stack([-c * v1, params.A * v * v1, params.B * v * v * v1, params.MN * v3])
        res = terms.sum(axis=0)
    return _report(res, terms, h, n)


def _axis_grid(spec) -> np.ndarray:
    if isinstance(spec, dict):
        return np.linspace(spec["min"], spec["max"], int(spec["n"]))
    return np.asarray(spec, dtype=float)


def pde_residual(
    u: Callable,
    params: EquationParams,
    grid_spec,
    steps: Tuple[float, float, float] = (0.05, 0.05, 0.05),
) -> ResidualReport:
    """Residual of the PDE at every node of the tensor grid ``grid_spec``.

    ``grid_spec`` is ``(xs, ys, ts)``, each an array or ``{min, max, n}``.
    ``u_xyy`` is the x-stencil applied to a 5-point y second difference.
    """
    xs, ys, ts = (_axis_grid(g) for g in grid_spec)
    if min(len(xs), len(ys), len(ts)) < 7:
        raise ValueError("pde_residual needs at least 7 points per axis")
    X, Y, T = np.meshgrid(xs, ys, ts, indexing="ij")
    hx, hy, ht = steps

    def derivs(hx, hy, ht):
        ux = uxxx = uxyy = ut = 0.0
        for k, d1, d3 in zip(_OFFS, _D1, _D3):
            fx = u(X + k * hx, Y, T)
            ux = ux + d1 * fx
            uxxx = uxxx + d3 * fx
            ut = ut + d1 * u(X, Y, T + k * ht)
            if d1 != 0.0:
                uyy = sum(d2 * u(X + k * hx, Y + j * hy, T) for j, d2 in zip(_OFFS, _D2))
                uxyy = uxyy + d1 * uyy
        return ux / hx, uxxx / hx ** 3, uxyy / (hx * hy * hy), ut / ht

    with np.errstate(all="ignore"):
        u0 = u(X, Y, T)
        a = derivs(hx, hy, ht)
        b = derivs(hx / 2, hy / 2, ht / 2)
        ux = (16 * b[0] - a[0]) / 15
        uxxx = (4 * b[1] - a[1]) / 3
        uxyy = (16 * b[2] - a[2]) / 15
        ut = (16 * b[3] - a[3]) / 15
        terms = np.stack(
            [ut, params.A * u0 * ux, params.B * u0 * u0 * ux, params.M * uxxx, params.N * uxyy]
        ).reshape(5, -1)
        res = terms.sum(axis=0)
    return _report(res, terms, max(steps), res.size)


def _rhs(params: EquationParams, c: float, y):
    v, v1, v2 = y
    return (v1, v2, -(params.B * v * v + params.A * v - c) * v1 / params.MN)


def rk_integrate(
    params: EquationParams, c: float, init: JetPoint, r_end: float, step: float
) -> List[JetPoint]:
    """Classical fixed-step RK4 for ``(v, v', v'')`` from ``init.r`` to ``r_end``.

    Returns every step (including the initial point) with ``v'''`` filled in.
    """
    if params.MN == 0.0:
        raise DomainError("rk_integrate requires M + N != 0")
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(round(abs(r_end - init.r) / step))
    h = (r_end - init.r) / n if n else 0.0
    y = (float(init.v), float(init.v1), float(init.v2))
    r0 = float(init.r)

    def jet(i, y):
        return JetPoint(r0 + i * h, y[0], y[1], y[2], _rhs(params, c, y)[2])

    out = [jet(0, y)]
    for i in range(1, n + 1):
        k1 = _rhs(params, c, y)
        k2 = _rhs(params, c, [a + 0.5 * h * b for a, b in zip(y, k1)])
        k3 = _rhs(params, c, [a + 0.5 * h * b for a, b in zip(y, k2)])
        k4 = _rhs(params, c, [a + h * b for a, b in zip(y, k3)])
        y = tuple(a + h / 6.0 * (p + 2 * q + 2 * s + w) for a, p, q, s, w in zip(y, k1, k2, k3, k4))
        if not abs(y[0]) <= BLOW_UP:
            raise BlowUpError(f"|v| exceeded {BLOW_UP:g} at r = {r0 + i * h}")
        out.append(jet(i, y))
    return out


def jets_from_samples(r: Sequence[float], v: Sequence[float]) -> List[JetPoint]:
    """``v'`` and ``v''`` at interior samples from local quartic interpolation.

    Each interior point uses the five nearest samples (two on each side), so
    the first two and last two points are dropped.  Spacing may be uneven.
    """
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    if len(r) < 5:
        raise ValueError("need at least 5 samples to differentiate")
    order = np.argsort(r)
    r, v = r[order], v[order]
    out = []
    for i in range(2, len(r) - 2):
        dr = r[i - 2:i + 3] - r[i]
        # Lagrange weights for derivatives at 0 via the Vandermonde system
        V = np.vander(dr, 5, increasing=True).T
        w1 = np.linalg.solve(V, np.array([0, 1, 0, 0, 0], dtype=float))
        w2 = np.linalg.solve(V, np.array([0, 0, 2, 0, 0], dtype=float))
        seg = v[i - 2:i + 3]
        out.append(JetPoint(float(r[i]), float(v[i]), float(w1 @ seg), float(w2 @ seg)))
    return out


def primitive_check(
    member: str,
    fd,
    wc: WaveConstants,
    v_samples: Sequence[float],
    tol: float = 1e-6,
) -> ResidualReport:
    """Compare a central difference of the member's primitive with ``h``.

    Raises ``DomainError`` for samples outside the primitive's stated domain.
    The returned ``max_rel`` is ``|dH/dv - h| / (1 + h)`` maximized over
    samples; the caller compares it against ``tol``.
    """
    from .primitives import primitive_for

    prim = primitive_for(member, fd)
    if prim is None:
        raise ValueError(f"no primitive display for {member}")
    errs, rels, steps = [], [], []
    for v in v_samples:
        v = float(v)
        if not prim.in_domain(v):
            raise DomainError(f"v = {v} outside the domain of the {prim.name} primitive")
        h = h_eval(fd.params, wc, v)
        dv = 1e-3 * min(1.0 + abs(v), prim.distance_to_boundary(v))
        vals = [prim(v + k * dv) for k in _OFFS]
        d = float(np.dot(_D1, vals) / dv)
        errs.append(abs(d - h))
        rels.append(errs[-1] / (1.0 + h))
        steps.append(dv)
    return ResidualReport(max(errs), max(rels), len(errs), 0, max(steps))

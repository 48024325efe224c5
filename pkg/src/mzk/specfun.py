"""Elliptic integral of the first kind, Jacobi sn and small elementary helpers.

Parameter convention throughout: ``m`` multiplies ``s**2`` directly,

    F(z, m) = integral_0^z ds / sqrt((1 - s**2) (1 - m s**2)),

so ``m`` is the *parameter*, not the modulus.  Any finite real ``m`` is
accepted; ``m > 1`` and ``m < 0`` are mapped to ``0 <= m <= 1`` with the
reciprocal- and imaginary-parameter transformations.

All functions accept scalars or numpy arrays for the first argument and
return the same shape.  They are pure.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = [
    "carlson_rf",
    "elliptic_f",
    "elliptic_k",
    "jacobi_sn",
    "jacobi_sn_cn_dn",
    "sech",
    "csch",
    "arccot",
    "arctanh_real",
]

_RF_TOL = 1e-14
_AGM_TOL = 1e-16
_AGM_MAXITER = 40


def _scalar_or_array(x, like):
    if np.ndim(like) == 0:
        return float(x)
    return x


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F(x, y, z).

    Uses the duplication theorem until the arguments agree to ``1e-14``
    relatively, then the degree-7 symmetric series.  At most one argument may
    be zero and none may be negative.
    """
    xa, ya, za = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(z, dtype=float)
    )
    if np.any(xa < 0) or np.any(ya < 0) or np.any(za < 0):
        raise DomainError("carlson_rf: arguments must be non-negative")
    nzero = (xa == 0).astype(int) + (ya == 0) + (za == 0)
    if np.any(nzero >= 2):
        raise DomainError("carlson_rf: at most one argument may be zero")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya)) and np.all(np.isfinite(za))):
        raise DomainError("carlson_rf: arguments must be finite")

    xn, yn, zn = xa.copy(), ya.copy(), za.copy()
    a0 = (xn + yn + zn) / 3.0
    an = a0.copy()
    q = (3.0 * _RF_TOL) ** (-1.0 / 6.0) * np.maximum(
        np.abs(a0 - xn), np.maximum(np.abs(a0 - yn), np.abs(a0 - zn))
    )
    fac = 1.0
    # each element is done once 4**-n * Q < |A_n|; extra sweeps only converge further
    while np.any(q * fac >= np.abs(an)):
        sx, sy, sz = np.sqrt(xn), np.sqrt(yn), np.sqrt(zn)
        lam = sx * sy + sy * sz + sz * sx
        xn = (xn + lam) * 0.25
        yn = (yn + lam) * 0.25
        zn = (zn + lam) * 0.25
        an = (an + lam) * 0.25
        fac *= 0.25
    X = (a0 - xa) * fac / an
    Y = (a0 - ya) * fac / an
    Z = -X - Y
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    series = (
        1.0
        - e2 / 10.0
        + e3 / 14.0
        + e2 * e2 / 24.0
        - 3.0 * e2 * e3 / 44.0
        - 5.0 * e2 ** 3 / 208.0
        + 3.0 * e3 * e3 / 104.0
        + e2 * e2 * e3 / 16.0
    )
    out = series / np.sqrt(an)
    return _scalar_or_array(out, np.asarray(x) + np.asarray(y) + np.asarray(z))


def elliptic_f(z, m):
    """Incomplete elliptic integral of the first kind, ``F(z, m)``.

    Evaluated as ``z * R_F(1 - z**2, 1 - m z**2, 1)``, which is valid for every
    real ``m`` as long as the integrand stays real on ``[0, z]``.
    """
    za = np.asarray(z, dtype=float)
    m = float(m)
    z2 = za * za
    if np.any(z2 > 1.0):
        raise DomainError("elliptic_f: |z| must not exceed 1")
    w = 1.0 - m * z2
    if np.any(w < 0.0):
        raise DomainError("elliptic_f: 1 - m z^2 < 0, integrand is imaginary")
    if np.any((z2 == 1.0) & (w == 0.0)):
        raise DomainError("elliptic_f: logarithmic singularity at z = 1, m = 1")
    out = za * carlson_rf(1.0 - z2, w, np.ones_like(za))
    return _scalar_or_array(out, z)


def elliptic_k(m):
    """Complete integral ``K(m) = F(1, m)`` for ``m < 1``."""
    m = float(m)
    if m >= 1.0:
        raise DomainError("elliptic_k: requires m < 1")
    return float(carlson_rf(0.0, 1.0 - m, 1.0))


def _agm_sn(u, m):
    """sn, cn, dn for 0 < m < 1 by the descending Landen (AGM) scheme."""
    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1.0 - m)
    for _ in range(_AGM_MAXITER):
        an = 0.5 * (a[-1] + b)
        cn = 0.5 * (a[-1] - b)
        b = math.sqrt(a[-1] * b)
        a.append(an)
        c.append(cn)
        if abs(cn) < _AGM_TOL:
            break
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u
    for k in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[k] / a[k] * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(1.0 - m * sn * sn)
    return sn, cn, dn


def jacobi_sn_cn_dn(u, m):
    """Jacobi sn, cn, dn for real ``u`` and any real parameter ``m``."""
    ua = np.asarray(u, dtype=float)
    m = float(m)
    if not math.isfinite(m):
        raise DomainError("jacobi_sn: parameter must be finite")
    if m == 0.0:
        sn, cn, dn = np.sin(ua), np.cos(ua), np.ones_like(ua)
    elif m == 1.0:
        sn, cn = np.tanh(ua), 1.0 / np.cosh(ua)
        dn = cn
    elif 0.0 < m < 1.0:
        sn, cn, dn = _agm_sn(ua, m)
    elif m > 1.0:
        # sn(u|m) = m^{-1/2} sn(u sqrt(m) | 1/m); cn and dn swap roles
        rm = math.sqrt(m)
        s1, c1, d1 = jacobi_sn_cn_dn(ua * rm, 1.0 / m)
        sn, cn, dn = s1 / rm, d1, c1
    else:
        # m < 0: sn(u|m) = sd(u sqrt(1-m) | mu) / sqrt(1-m), mu = -m/(1-m)
        k = math.sqrt(1.0 - m)
        mu = -m / (1.0 - m)
        s1, c1, d1 = jacobi_sn_cn_dn(ua * k, mu)
        sn, cn, dn = s1 / (d1 * k), c1 / d1, 1.0 / d1
    return (_scalar_or_array(sn, u), _scalar_or_array(cn, u), _scalar_or_array(dn, u))


def jacobi_sn(u, m):
    """Jacobi elliptic sine ``sn(u, m)``; the inverse of :func:`elliptic_f`."""
    return jacobi_sn_cn_dn(u, m)[0]


def sech(x):
    return 1.0 / np.cosh(x)


def csch(x):
    return 1.0 / np.sinh(x)


def arccot(x):
    """Inverse cotangent with range (0, pi)."""
    return 0.5 * np.pi - np.arctan(x)


def arctanh_real(x):
    """``arctanh`` continued to ``|x| > 1`` by its real part.

    ``0.5 * log|(1 + x) / (1 - x)|`` has the same derivative as arctanh on
    both sides of the branch point, which is all a primitive needs.
    """
    return 0.5 * np.log(np.abs((1.0 + x) / (1.0 - x)))

"""Domain types for the traveling-wave reduction and its first integrals.

The PDE is ``u_t + A u u_x + B u^2 u_x + M u_xxx + N u_xyy = 0``.  With
``r = x + y - c t`` and ``u = v(r)`` it reduces to

    -c v' + A v v' + B v^2 v' + (M + N) v''' = 0,

whose solutions lie on level sets of two first integrals, ``I3 = C3`` and
``I2 = C2``.  On those level sets ``6 (M + N) v'^2 = -P(v)`` with

    P(z) = B z^4 + 2 A z^3 - 6 c z^2 - C2 z + C3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, PoleError


@dataclass(frozen=True)
class EquationParams:
    A: float
    B: float
    M: float
    N: float

    def __post_init__(self):
        for name in ("A", "B", "M", "N"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def MN(self) -> float:
        return self.M + self.N

    @property
    def degenerate(self) -> bool:
        """``M + N == 0``: the reduced ODE admits constant solutions only."""
        return self.M + self.N == 0.0

    @property
    def K(self) -> Optional[float]:
        """``-6 (M + N) / B`` (defined only for ``B != 0``)."""
        if self.B == 0.0:
            return None
        return -6.0 * (self.M + self.N) / self.B


@dataclass(frozen=True)
class WaveConstants:
    c: float
    C1: float = 0.0
    C2: float = 0.0
    C3: float = 0.0

    def __post_init__(self):
        if self.c == 0.0:
            raise ValueError("wave speed c must be non-zero")
        for name in ("c", "C1", "C2", "C3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class JetPoint:
    """Values ``(r, v, v', v''[, v'''])`` of a profile at one point."""

    r: float
    v: float
    v1: float
    v2: float
    v3: Optional[float] = None


@dataclass(frozen=True)
class QuarticPoly:
    """Coefficients of ``P`` in descending degree: ``[B, 2A, -6c, -C2, C3]``."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 5:
            raise ValueError("QuarticPoly needs exactly five coefficients")
        object.__setattr__(self, "coeffs", tuple(float(x) for x in self.coeffs))

    @property
    def degree(self) -> int:
        for i, a in enumerate(self.coeffs):
            if a != 0.0:
                return 4 - i
        return -1

    def __call__(self, z):
        B, a3, a2, a1, a0 = self.coeffs
        return (((B * z + a3) * z + a2) * z + a1) * z + a0

    def deriv(self, z, order=1):
        co = np.asarray(self.coeffs)
        for _ in range(order):
            co = np.polyder(co)
        return np.polyval(co, z)


def build_p(params: EquationParams, wc: WaveConstants) -> QuarticPoly:
    if wc.c == 0.0:
        raise ValueError("wave speed c must be non-zero")
    return QuarticPoly((params.B, 2.0 * params.A, -6.0 * wc.c, -wc.C2, wc.C3))


def p_value(params: EquationParams, c: float, C2: float, C3: float, z):
    return (((params.B * z + 2.0 * params.A) * z - 6.0 * c) * z - C2) * z + C3


def i3(params: EquationParams, c: float, p: JetPoint) -> float:
    """First integral ``3Bv^4 + 4Av^3 - 6cv^2 + 6(M+N)(2 v v'' - v'^2)``.

    Along a solution it equals the constant ``C3`` of ``P`` exactly (no
    rescaling); the test suite confirms this on closed-form profiles.
    """
    v, v1, v2 = p.v, p.v1, p.v2
    A, B = params.A, params.B
    return (
        3.0 * B * v ** 4
        + 4.0 * A * v ** 3
        - 6.0 * c * v ** 2
        + 6.0 * params.MN * (2.0 * v * v2 - v1 * v1)
    )


def i2(params: EquationParams, c: float, C3: float, p: JetPoint) -> float:
    """First integral on the ``I3 = C3`` level set; requires ``v != 0``."""
    v, v1 = p.v, p.v1
    if np.any(np.asarray(v) == 0.0):
        raise DomainError("i2 is undefined at v = 0")
    A, B = params.A, params.B
    return (B * v ** 4 + 2.0 * A * v ** 3 + 6.0 * params.MN * v1 * v1 - 6.0 * c * v ** 2 + C3) / v


def h_eval(params: EquationParams, wc: WaveConstants, v: float) -> float:
    """The integrand ``h(v) = sqrt(-6 (M+N) / P(v))``."""
    pv = p_value(params, wc.c, wc.C2, wc.C3, v)
    if pv == 0.0:
        raise PoleError(f"P({v}) = 0")
    rad = -6.0 * params.MN / pv
    if not rad > 0.0:
        raise DomainError(f"h radicand {rad} is not positive at v = {v}")
    return math.sqrt(rad)


def level_set_v1(params: EquationParams, c: float, C2: float, C3: float, v: float, sign: int = -1) -> float:
    """Slope ``v'`` on the ``(C2, C3)`` level set, ``sign`` selecting the branch.

    ``sign = -1`` matches the upper choice of the level-set parametrization
    (``v' = -sqrt(...)``).
    """
    rad = -p_value(params, c, C2, C3, v) / (6.0 * params.MN)
    if rad < 0.0:
        raise DomainError(f"no real slope at v = {v}: radicand {rad}")
    return math.copysign(math.sqrt(rad), sign)


def level_set_v2(params: EquationParams, c: float, C3: float, v: float, v1: float) -> float:
    """Second derivative forced by ``I3 = C3`` at ``(v, v')``; requires ``v != 0``."""
    if v == 0.0:
        raise DomainError("level_set_v2 is undefined at v = 0")
    A, B, MN = params.A, params.B, params.MN
    return -(3 * B * v ** 4 + 4 * A * v ** 3 - 6 * MN * v1 * v1 - 6 * c * v * v - C3) / (12.0 * MN * v)


def jet_on_level_set(params, c, C2, C3, r, v, sign=-1) -> JetPoint:
    """A full jet on the ``(C2, C3)`` level set, with ``v'''`` from the ODE."""
    v1 = level_set_v1(params, c, C2, C3, v, sign)
    v2 = level_set_v2(params, c, C3, v, v1)
    v3 = -(params.B * v * v + params.A * v - c) * v1 / params.MN
    return JetPoint(r, v, v1, v2, v3)

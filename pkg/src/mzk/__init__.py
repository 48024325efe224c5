"""Closed-form traveling waves of the modified Zakharov-Kuznetsov equation.

    u_t + A u u_x + B u^2 u_x + M u_xxx + N u_xyy = 0

Modules: ``specfun`` (elliptic F, Jacobi sn), ``model`` (reduction, first
integrals, h), ``roots`` (root structure of P), ``classify`` (family table),
``families`` (closed forms and the implicit solution), ``primitives``
(closed-form H), ``verify`` (residual and integration oracles), ``atlas``
(reference fixtures) and ``cli``.
"""

from .classify import FamilyDescriptor, classify, constants_from_family, identify
from .families import evaluate, evaluate_profile, implicit_solve, profile_values
from .model import EquationParams, JetPoint, WaveConstants

__version__ = "0.1.0"

__all__ = [
    "EquationParams",
    "WaveConstants",
    "JetPoint",
    "FamilyDescriptor",
    "classify",
    "constants_from_family",
    "identify",
    "evaluate",
    "evaluate_profile",
    "profile_values",
    "implicit_solve",
]

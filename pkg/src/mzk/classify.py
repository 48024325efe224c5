"""Table of traveling-wave families and the decision tree that selects one.

``classify`` maps equation coefficients and wave constants to a Table row
(the root structure plus a sign test) and, when told which interval of ``v``
the wave lives in, to the specific closed-form member of that row.
``identify`` goes the other way: it recovers (C2, C3) from samples of a
profile through the first integrals and then classifies.
"""

from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from .errors import (
    BoundaryCaseWarning,
    DomainError,
    NotASolutionError,
    UnsupportedStructureError,
)
from .model import EquationParams, JetPoint, WaveConstants, i2, i3
from .model import build_p
from .roots import RootStructure, find_structure, quartic_four_roots, solve_structure

DEAD_ZONE = 1e-10

# row id -> (k, free parameters, members)
ROWS: Dict[str, Tuple[int, Tuple[str, ...], Tuple[str, ...]]] = {
    "CONSTANT": (1, ("u0",), ()),
    "SOLG21": (4, ("c", "C1", "C2", "C3"), ("SOLG21",)),
    "SOLG22": (4, ("c", "C1", "C2", "C3"), ("SOLG22",)),
    "SOLG3TRIPLE": (2, ("c", "C1"), ("SOLG3TRIPLE",)),
    "SOLG3CASO2A": (3, ("c", "C1", "phi"), ("SOLG3CASO2A1_POS", "SOLG3CASO2A2")),
    "SOLG3CASO2B": (3, ("c", "C1", "phi"), ("SOLG3CASO2A1_NEG", "SOLG3CASO2B")),
    "SOLG3SIMPLESA": (4, ("c", "C1", "phi1", "phi2"), ("SOLG3SIMPLESA1", "SOLG3SIMPLESA2")),
    "SOLG3SIMPLESB": (4, ("c", "C1", "phi1", "phi2"), ("SOLG3SIMPLESB1", "SOLG3SIMPLESB2")),
    "SOLG4CUADRUPLE": (1, ("C1",), ("SOLG4CUADRUPLE",)),
    "SOL1RTRIPLE": (2, ("c", "C1"), ("SOL1RTRIPLE",)),
    "SOL2RD": (2, ("c", "C1"), ("SOL2RD_PLUS", "SOL2RD_MINUS")),
    "SOLG4DOUBLECOMPL": (2, ("c", "C1"), ("SOLG4DOUBLECOMPL",)),
    "SOLG41D2REALES_A": (3, ("c", "C1", "rho"), ("SOLG41D2REALES_A",)),
    "SOLG41D2REALES_B": (3, ("c", "C1", "rho"), ("SOLG41D2REALES_B1", "SOLG41D2REALES_B2")),
    "SOLG4DOBLEY2COMP": (3, ("c", "C1", "rho"), ("SOLG4DOBLEY2COMP1", "SOLG4DOBLEY2COMP2")),
    "SOL4DIST_A": (4, ("c", "C1", "rho", "lam"), ("SOL4DIST1", "SOL4DIST2")),
    "SOL4DIST_B": (4, ("c", "C1", "rho", "lam"), ("SOL4DIST3", "SOLD4DIST4")),
}

# member -> (row, equation label of the closed form)
MEMBERS: Dict[str, Tuple[str, str]] = {
    "SOLG21": ("SOLG21", "solg21"),
    "SOLG22": ("SOLG22", "solg22"),
    "SOLG3TRIPLE": ("SOLG3TRIPLE", "solg3triple"),
    "SOLG3CASO2A1_POS": ("SOLG3CASO2A", "solg3caso2a1"),
    "SOLG3CASO2A2": ("SOLG3CASO2A", "solg3caso2a2"),
    "SOLG3CASO2A1_NEG": ("SOLG3CASO2B", "solg3caso2a1"),
    "SOLG3CASO2B": ("SOLG3CASO2B", "solg3caso2b"),
    "SOLG3SIMPLESA1": ("SOLG3SIMPLESA", "solg3simplesa1"),
    "SOLG3SIMPLESA2": ("SOLG3SIMPLESA", "solg3simplesa2"),
    "SOLG3SIMPLESB1": ("SOLG3SIMPLESB", "solg3simplesb1"),
    "SOLG3SIMPLESB2": ("SOLG3SIMPLESB", "solg3simplesb2"),
    "SOLG4CUADRUPLE": ("SOLG4CUADRUPLE", "solg4cuadruple"),
    "SOL1RTRIPLE": ("SOL1RTRIPLE", "sol1RTriple"),
    "SOL2RD_PLUS": ("SOL2RD", "sol2rD+"),
    "SOL2RD_MINUS": ("SOL2RD", "sol2rD-"),
    "SOLG4DOUBLECOMPL": ("SOLG4DOUBLECOMPL", "solg4DoubleCompl"),
    "SOLG41D2REALES_A": ("SOLG41D2REALES_A", "solg41D2realesA"),
    "SOLG41D2REALES_B1": ("SOLG41D2REALES_B", "solg41D2realesB1"),
    "SOLG41D2REALES_B2": ("SOLG41D2REALES_B", "solg41D2realesB2"),
    "SOLG4DOBLEY2COMP1": ("SOLG4DOBLEY2COMP", "solg4dobley2comp1"),
    "SOLG4DOBLEY2COMP2": ("SOLG4DOBLEY2COMP", "solg4dobley2comp2"),
    "SOL4DIST1": ("SOL4DIST_A", "sol4dist1"),
    "SOL4DIST2": ("SOL4DIST_A", "sol4dist2"),
    "SOL4DIST3": ("SOL4DIST_B", "sol4dist3"),
    "SOLD4DIST4": ("SOL4DIST_B", "sold4dist4"),
}


@dataclass(frozen=True)
class FamilyDescriptor:
    class_id: str
    member: Optional[str]
    params: EquationParams
    c: float
    C2: float
    C3: float
    roots: Optional[RootStructure] = None
    K: Optional[float] = None
    aux: Dict[str, object] = field(default_factory=dict)
    branch: int = 1
    conditions: Dict[str, float] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return ROWS[self.class_id][0]

    @property
    def free_params(self) -> Tuple[str, ...]:
        return ROWS[self.class_id][1]

    @property
    def label(self) -> Optional[str]:
        return MEMBERS[self.member][1] if self.member else None

    def with_member(self, member: str, branch: Optional[int] = None) -> "FamilyDescriptor":
        if member not in ROWS[self.class_id][2]:
            raise ValueError(f"{member} is not a member of row {self.class_id}")
        return _replace(self, member=member, branch=self.branch if branch is None else branch)

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "member": self.member,
            "label": self.label,
            "k": self.k,
            "free_params": list(self.free_params),
            "params": {"A": self.params.A, "B": self.params.B, "M": self.params.M, "N": self.params.N},
            "c": self.c,
            "C2": self.C2,
            "C3": self.C3,
            "K": self.K,
            "roots": self.roots.to_dict() if self.roots else None,
            "aux": {k: _encode(v) for k, v in sorted(self.aux.items())},
            "branch": self.branch,
            "conditions": dict(sorted(self.conditions.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyDescriptor":
        roots = None
        if d.get("roots"):
            r = d["roots"]
            ents = tuple((complex(e["re"], e["im"]), int(e["multiplicity"])) for e in r["roots"])
            lead = d["params"]["B"] if r["degree"] == 4 else (
                2 * d["params"]["A"] if r["degree"] == 3 else -6 * d["c"]
            )
            roots = RootStructure(ents, r["degree"], r["pattern"], float(lead))
        return cls(
            class_id=d["class_id"],
            member=d["member"],
            params=EquationParams(**d["params"]),
            c=d["c"],
            C2=d["C2"],
            C3=d["C3"],
            roots=roots,
            K=d["K"],
            aux={k: _decode(v) for k, v in d["aux"].items()},
            branch=d["branch"],
            conditions=dict(d["conditions"]),
        )

    def same_class(self, other: "FamilyDescriptor") -> bool:
        return self.class_id == other.class_id and self.member == other.member


def _encode(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    return v


def _decode(v):
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return complex(v["re"], v["im"])
    if isinstance(v, list):
        return [_decode(x) for x in v]
    return v


def _replace(fd: FamilyDescriptor, **kw) -> FamilyDescriptor:
    from dataclasses import replace

    return replace(fd, **kw)


def _sign(x: float, scale: float, what: str) -> int:
    if abs(x) <= DEAD_ZONE * scale:
        warnings.warn(
            f"{what} = {x:.3e} lies within the boundary dead zone", BoundaryCaseWarning, stacklevel=3
        )
    return 1 if x >= 0 else -1


def _pick(intervals, v_hint, default, row):
    """Member whose open interval contains ``v_hint``; ``default`` without a hint."""
    if v_hint is None:
        return default
    for name, lo, hi in intervals:
        if lo < v_hint < hi:
            return name
    raise DomainError(f"v = {v_hint} lies on no real branch of row {row}")


def classify(
    params: EquationParams,
    wc: WaveConstants,
    rel_tol: float = 1e-8,
    v_hint: Optional[float] = None,
    member: Optional[str] = None,
    branch: int = 1,
) -> FamilyDescriptor:
    """Table row (and member) of the traveling waves with constants ``wc``.

    ``v_hint`` is any value the profile takes; it selects the member whose
    range contains it.  ``member`` overrides that choice explicitly.
    """
    if wc.c == 0.0:
        raise ValueError("wave speed c must be non-zero")
    A, B, MN, c = params.A, params.B, params.MN, wc.c
    base = dict(params=params, c=c, C2=wc.C2, C3=wc.C3, branch=branch)

    if params.degenerate:
        fd = FamilyDescriptor("CONSTANT", None, aux={"u0": wc.C1}, **base)
        return fd

    if A == 0.0 and B == 0.0:
        s = _sign(MN / c, 1.0, "(M+N)/c")
        row = "SOLG21" if s > 0 else "SOLG22"
        st = solve_structure(build_p(params, wc), rel_tol)
        fd = FamilyDescriptor(row, row, roots=st, conditions={"(M+N)/c": MN / c}, **base)
        return _finish(fd, member)

    st = find_structure(params, wc, rel_tol)
    pat = st.pattern
    K = None if B == 0.0 else -6.0 * MN / B
    inf = math.inf

    if pat == "C3-triple":
        phi = st.entries[0][0].real
        fd = FamilyDescriptor("SOLG3TRIPLE", "SOLG3TRIPLE", roots=st, aux={"phi": phi}, **base)
    elif pat == "C3-double":
        phi = st.real_roots(2)[0]
        phit = st.real_roots(1)[0]
        d = c - A * phi
        sd = _sign(d, abs(c) + abs(A * phi), "c - A*phi")
        cond = {"M+N": MN, "c-A*phi": d}
        if MN > 0:
            row, mem = "SOLG3CASO2A", ("SOLG3CASO2A1_POS" if sd > 0 else "SOLG3CASO2A2")
        else:
            row, mem = "SOLG3CASO2B", ("SOLG3CASO2B" if sd > 0 else "SOLG3CASO2A1_NEG")
        fd = FamilyDescriptor(
            row, mem, roots=st, aux={"phi": phi, "phi_single": phit}, conditions=cond, **base
        )
    elif pat == "C3-distinct":
        p1, p2, p3 = st.real_roots()
        q = MN / A
        aux = {"phi1": p1, "phi2": p2, "phi3": p3}
        if q < 0:
            row = "SOLG3SIMPLESA"
            mem = _pick(
                [("SOLG3SIMPLESA1", p3, inf), ("SOLG3SIMPLESA2", p1, p2)], v_hint, "SOLG3SIMPLESA2", row
            )
        else:
            row = "SOLG3SIMPLESB"
            mem = _pick(
                [("SOLG3SIMPLESB1", p2, p3), ("SOLG3SIMPLESB2", -inf, p1)], v_hint, "SOLG3SIMPLESB1", row
            )
        fd = FamilyDescriptor(row, mem, roots=st, aux=aux, conditions={"(M+N)/A": q}, **base)
    elif pat == "C3-with-complex-pair":
        # Same rows as three real roots, evaluated in complex arithmetic.  The
        # real root goes where the sn forms stay real: phi1 for (M+N)/A < 0,
        # phi2 otherwise; real waves live on the side of it where h is real.
        pr = st.real_roots()[0]
        z = [w for w in st.complex_roots() if w.imag > 0][0]
        q = MN / A
        if q < 0:
            row, aux = "SOLG3SIMPLESA", {"phi1": pr, "phi2": z, "phi3": z.conjugate()}
            mem = _pick([("SOLG3SIMPLESA2", pr, inf)], v_hint, "SOLG3SIMPLESA2", row)
        else:
            row, aux = "SOLG3SIMPLESB", {"phi1": z, "phi2": pr, "phi3": z.conjugate()}
            mem = _pick([("SOLG3SIMPLESB1", -inf, pr)], v_hint, "SOLG3SIMPLESB1", row)
        aux["complex"] = True
        fd = FamilyDescriptor(row, mem, roots=st, aux=aux, conditions={"(M+N)/A": q}, **base)
    elif pat == "C4-quadruple":
        phi = st.entries[0][0].real
        fd = FamilyDescriptor(
            "SOLG4CUADRUPLE", "SOLG4CUADRUPLE", roots=st, K=K, aux={"phi": phi}, **base
        )
    elif pat == "C4-triple":
        phi1 = st.real_roots(3)[0]
        phi2 = st.real_roots(1)[0]
        fd = FamilyDescriptor(
            "SOL1RTRIPLE", "SOL1RTRIPLE", roots=st, K=K, aux={"phi1": phi1, "phi2": phi2}, **base
        )
    elif pat == "C4-double-double-real":
        p1, p2 = st.real_roots(2)
        mem = _pick(
            [("SOL2RD_PLUS", p1, p2), ("SOL2RD_MINUS", -inf, p1), ("SOL2RD_MINUS", p2, inf)],
            v_hint,
            "SOL2RD_PLUS",
            "SOL2RD",
        )
        fd = FamilyDescriptor("SOL2RD", mem, roots=st, K=K, aux={"phi1": p1, "phi2": p2}, **base)
    elif pat == "C4-double-double-complex":
        z = st.complex_roots()[0]
        fd = FamilyDescriptor(
            "SOLG4DOUBLECOMPL", "SOLG4DOUBLECOMPL", roots=st, K=K,
            aux={"a": z.real, "b": abs(z.imag)}, **base,
        )
    elif pat == "C4-double+2real":
        rho = st.real_roots(2)[0]
        p2, p3 = st.real_roots(1)
        t = K * (rho - p2) * (p3 - rho)
        scale = abs(K) * (1 + abs(rho) + abs(p2) + abs(p3)) ** 2
        s = _sign(t, scale, "K(phi1-phi2)(phi3-phi1)")
        aux = {"rho": rho, "phi1": rho, "phi2": p2, "phi3": p3}
        cond = {"K(phi1-phi2)(phi3-phi1)": t}
        if s > 0:
            fd = FamilyDescriptor(
                "SOLG41D2REALES_A", "SOLG41D2REALES_A", roots=st, K=K, aux=aux, conditions=cond, **base
            )
        else:
            lo, hi = min(p2, rho), max(p2, rho)
            lo3, hi3 = min(p3, rho), max(p3, rho)
            mem = _pick(
                [("SOLG41D2REALES_B2", lo, hi), ("SOLG41D2REALES_B1", lo3, hi3)],
                v_hint,
                "SOLG41D2REALES_B1",
                "SOLG41D2REALES_B",
            )
            fd = FamilyDescriptor("SOLG41D2REALES_B", mem, roots=st, K=K, aux=aux, conditions=cond, **base)
    elif pat == "C4-double+2complex":
        rho = st.real_roots(2)[0]
        z = st.complex_roots()[0]
        fd = FamilyDescriptor(
            "SOLG4DOBLEY2COMP", "SOLG4DOBLEY2COMP1", roots=st, K=K,
            aux={"rho": rho, "phi1": rho, "a": z.real, "b": abs(z.imag)}, **base,
        )
    elif pat in ("C4-four-distinct-real", "C4-with-complex-pair"):
        sk = _sign(K, 1.0, "K")
        row = "SOL4DIST_A" if sk > 0 else "SOL4DIST_B"
        if pat == "C4-four-distinct-real":
            p = st.real_roots()
            rho, lam = 0.5 * (p[0] + p[1]), (0.5 * (p[1] - p[0])) ** 2
            aux = {"rho": rho, "lam": lam, "phis": p, "complex": False}
            if sk > 0:
                ivs = [("SOL4DIST2", p[1], p[2]), ("SOL4DIST1", -inf, p[0]), ("SOL4DIST1", p[3], inf)]
                mem = _pick(ivs, v_hint, "SOL4DIST2", row)
            else:
                ivs = [("SOL4DIST3", p[0], p[1]), ("SOLD4DIST4", p[2], p[3])]
                mem = _pick(ivs, v_hint, "SOL4DIST3", row)
        else:
            rho, lam = _pair_params(st)
            phis = quartic_four_roots(A, B, c, rho, lam)
            aux = {"rho": rho, "lam": lam, "phis": phis, "complex": True}
            mem = "SOL4DIST1" if sk > 0 else "SOL4DIST3"
        fd = FamilyDescriptor(row, mem, roots=st, K=K, aux=aux, conditions={"K": K}, **base)
    else:  # pragma: no cover - every pattern is handled above
        raise UnsupportedStructureError(f"no row for pattern {pat}", pattern=pat)

    return _finish(fd, member)


def _pair_params(st: RootStructure):
    """(rho, lam) putting a conjugate pair first, so rho is real."""
    zs = [z for z, _ in st.entries]
    cpx = [z for z in zs if z.imag > 0]
    z = cpx[0]
    return z.real, -(z.imag ** 2)


def _finish(fd: FamilyDescriptor, member: Optional[str]) -> FamilyDescriptor:
    if member is not None:
        fd = fd.with_member(member)
    return fd


# --- constants from free parameters ---------------------------------------


def constants_from_family(
    row: str,
    params: EquationParams,
    c: float,
    C1: float = 0.0,
    *,
    C2: Optional[float] = None,
    C3: Optional[float] = None,
    phi: Optional[float] = None,
    phi1: Optional[float] = None,
    phi2: Optional[float] = None,
    rho: Optional[float] = None,
    lam: Optional[float] = None,
    sign: int = 1,
) -> WaveConstants:
    """Wave constants realizing a row from its free parameters.

    ``row`` may also be a member id.  For the quadruple-root row the speed is
    forced to ``-A^2/(4B)`` and the ``c`` argument is ignored.
    """
    if row in MEMBERS:
        row = MEMBERS[row][0]
    A, B = params.A, params.B

    def need(**kw):
        for k, v in kw.items():
            if v is None:
                raise ValueError(f"row {row} needs parameter {k}")

    if row == "CONSTANT":
        return WaveConstants(c, C1, C2 or 0.0, C3 or 0.0)
    if row in ("SOLG21", "SOLG22"):
        need(C2=C2, C3=C3)
        return WaveConstants(c, C1, C2, C3)
    if row == "SOLG3TRIPLE":
        return WaveConstants(c, C1, -6 * c * c / A, -2 * c ** 3 / A ** 2)
    if row in ("SOLG3CASO2A", "SOLG3CASO2B"):
        need(phi=phi)
        return WaveConstants(c, C1, 6 * A * phi ** 2 - 12 * c * phi, 4 * A * phi ** 3 - 6 * c * phi ** 2)
    if row in ("SOLG3SIMPLESA", "SOLG3SIMPLESB"):
        need(phi1=phi1, phi2=phi2)
        p, q = phi1, phi2
        return WaveConstants(
            c,
            C1,
            2 * A * p * p + 2 * A * p * q + 2 * A * q * q - 6 * c * p - 6 * c * q,
            2 * A * p * p * q + 2 * A * p * q * q - 6 * c * p * q,
        )
    if row == "SOLG4CUADRUPLE":
        return WaveConstants(-A * A / (4 * B), C1, -A ** 3 / (2 * B * B), A ** 4 / (16 * B ** 3))
    if row == "SOL1RTRIPLE":
        S = math.sqrt((A * A + 4 * B * c) ** 3)
        return WaveConstants(
            c,
            C1,
            (A * (A * A + 6 * B * c) + sign * S) / B ** 2,
            -(A * A * (A * A + 6 * B * c) + sign * A * S + 6 * B * B * c * c) / (2 * B ** 3),
        )
    if row in ("SOL2RD", "SOLG4DOUBLECOMPL"):
        return WaveConstants(c, C1, A * (A * A + 6 * B * c) / B ** 2, (A * A + 6 * B * c) ** 2 / (4 * B ** 3))
    if row in ("SOLG41D2REALES_A", "SOLG41D2REALES_B", "SOLG4DOBLEY2COMP"):
        need(rho=rho)
        return WaveConstants(
            c,
            C1,
            2 * rho * (2 * B * rho ** 2 + 3 * A * rho - 6 * c),
            rho ** 2 * (3 * B * rho ** 2 + 4 * A * rho - 6 * c),
        )
    if row in ("SOL4DIST_A", "SOL4DIST_B"):
        need(rho=rho, lam=lam)
        r, l = rho, lam
        return WaveConstants(
            c,
            C1,
            4 * B * r ** 3 + 6 * A * r * r + 4 * B * l * r + 2 * A * l - 12 * c * r,
            3 * B * r ** 4 + 4 * A * r ** 3 - 2 * B * l * r * r - 4 * A * l * r - B * l * l
            - 6 * c * r * r + 6 * c * l,
        )
    raise ValueError(f"unknown row {row}")


# --- identification -------------------------------------------------------


@dataclass(frozen=True)
class Identification:
    C2: float
    C3: float
    descriptor: FamilyDescriptor
    deviations: Dict[str, float]


def identify(
    samples: Sequence[JetPoint],
    params: EquationParams,
    c: float,
    tol: Optional[float] = None,
    rel_tol: float = 1e-6,
) -> Identification:
    """Recover (C2, C3) from profile samples and classify the result.

    ``tol`` bounds the spread of each first integral across samples; by
    default ``1e-6 * (1 + |median|)``.
    """
    if len(samples) < 3:
        raise ValueError("identify needs at least 3 samples")
    if any(p.v == 0.0 for p in samples):
        raise DomainError("identify needs v != 0 at every sample")
    v3 = [i3(params, c, p) for p in samples]
    C3 = statistics.median(v3)
    v2 = [i2(params, c, C3, p) for p in samples]
    C2 = statistics.median(v2)
    dev3 = max(abs(x - C3) for x in v3)
    dev2 = max(abs(x - C2) for x in v2)
    devs = {"i3": dev3, "i2": dev2}
    t3 = tol if tol is not None else 1e-6 * (1 + abs(C3))
    t2 = tol if tol is not None else 1e-6 * (1 + abs(C2))
    if dev3 > t3 or dev2 > t2:
        raise NotASolutionError(
            f"first integrals vary across samples (i3 spread {dev3:.3e}, i2 spread {dev2:.3e})", devs
        )
    v_hint = statistics.median(p.v for p in samples)
    fd = classify(params, WaveConstants(c, 0.0, C2, C3), rel_tol=rel_tol, v_hint=v_hint)
    return Identification(C2, C3, fd, devs)

"""Roots of P(z) with multiplicities.

Two paths.  ``solve_structure`` is purely numeric: eigenvalue roots, then a
search over conjugation-consistent groupings of those roots, accepting the
coarsest grouping whose reconstructed polynomial stays within ``rel_tol`` of
the input coefficients.  ``structure_from_template`` recognizes the exact
degenerate constant choices and returns the closed-form roots.

Backward error is used instead of a pairwise-distance rule because a root of
multiplicity m scatters by about eps**(1/m); distance clustering cannot tell
a numerically split quadruple root from four genuine roots at rel_tol=1e-8.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import DegenerateInputError
from .model import EquationParams, QuarticPoly, WaveConstants, build_p

PATTERNS = (
    "Q2-simple",
    "Q2-double",
    "C3-triple",
    "C3-double",
    "C3-distinct",
    "C3-with-complex-pair",
    "C4-quadruple",
    "C4-triple",
    "C4-double-double-real",
    "C4-double-double-complex",
    "C4-double+2real",
    "C4-double+2complex",
    "C4-four-distinct-real",
    "C4-with-complex-pair",
)

TEMPLATE_TOL = 1e-9


@dataclass(frozen=True)
class RootStructure:
    entries: Tuple[Tuple[complex, int], ...]
    degree: int
    pattern: str
    lead: float = 1.0
    backward_error: float = 0.0

    def real_roots(self, mult: Optional[int] = None) -> List[float]:
        """Real roots in ascending order, optionally filtered by multiplicity."""
        out = [z.real for z, k in self.entries if z.imag == 0.0 and (mult is None or k == mult)]
        return sorted(out)

    def complex_roots(self) -> List[complex]:
        return [z for z, _ in self.entries if z.imag != 0.0]

    def multiplicities(self) -> List[int]:
        return sorted((k for _, k in self.entries), reverse=True)

    def scale(self) -> float:
        return 1.0 + max(abs(z) for z, _ in self.entries)

    def coeffs(self) -> np.ndarray:
        """Coefficients of ``lead * prod (z - root)^mult`` (descending)."""
        co = np.array([self.lead], dtype=complex)
        for z, k in self.entries:
            for _ in range(k):
                co = np.convolve(co, [1.0, -z])
        return co.real

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "degree": self.degree,
            "roots": [
                {"re": z.real, "im": z.imag, "multiplicity": k} for z, k in self.entries
            ],
        }


def _effective(poly: QuarticPoly) -> np.ndarray:
    co = np.asarray(poly.coeffs, dtype=float)
    nz = np.nonzero(co)[0]
    if len(nz) == 0:
        raise DegenerateInputError("P is identically zero")
    co = co[nz[0]:]
    if len(co) - 1 < 2:
        raise DegenerateInputError(f"P has degree {len(co) - 1}; need at least 2")
    return co


def _scaled_error(co: np.ndarray, recon: np.ndarray, scale: float) -> float:
    # coefficient errors of P(s w) / (|lead| s^d), s = scale
    d = len(co) - 1
    w = scale ** (np.arange(d, -1, -1) - d)
    return float(np.max(np.abs((recon - co) * w)) / abs(co[0]))


def _reconstruct(lead: float, entries) -> np.ndarray:
    out = np.array([lead], dtype=complex)
    for z, k in entries:
        for _ in range(k):
            out = np.convolve(out, [1.0, -z])
    return out.real


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _conj_partner(roots: np.ndarray) -> List[int]:
    """Index of each root's conjugate within the (conjugate-closed) list."""
    n = len(roots)
    partner = [-1] * n
    for i in range(n):
        if partner[i] >= 0:
            continue
        if roots[i].imag == 0.0:
            partner[i] = i
            continue
        best, bd = -1, math.inf
        for j in range(n):
            if j != i and partner[j] < 0:
                d = abs(roots[j] - roots[i].conjugate())
                if d < bd:
                    best, bd = j, d
        partner[i], partner[best] = best, i
    return partner


def _merge(partition, roots, partner):
    """Merged ``(value, mult)`` list, or None if not closed under conjugation."""
    key = {i: ci for ci, cl in enumerate(partition) for i in cl}
    entries = []
    for ci, cl in enumerate(partition):
        mate = {key[partner[i]] for i in cl}
        if len(mate) != 1:
            return None
        (mci,) = mate
        if len(partition[mci]) != len(cl):
            return None
        z = complex(np.mean(roots[cl]))
        if mci == ci:
            z = complex(z.real, 0.0)
        entries.append((ci, mci, z, len(cl)))
    out = []
    for ci, mci, z, k in entries:
        if mci < ci:
            # conjugate of an already-merged cluster: mirror it exactly
            z = next(e[2] for e in entries if e[0] == mci).conjugate()
        out.append((z, k))
    return out


def _newton(co_c: np.ndarray, z: complex, iters: int = 6) -> complex:
    d = np.polyder(co_c)
    for _ in range(iters):
        f = np.polyval(co_c, z)
        fp = np.polyval(d, z)
        if fp == 0:
            break
        step = f / fp
        z = z - step
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    return z


def _refine(co: np.ndarray, entries):
    out = []
    for z, k in entries:
        # a k-fold root is a simple root of the (k-1)th derivative
        dk = co
        for _ in range(k - 1):
            dk = np.polyder(dk)
        if len(dk) < 2:
            out.append((z, k))
            continue
        if z.imag == 0.0:
            zr = _newton(dk.astype(float), z.real)
            out.append((complex(float(np.real(zr)), 0.0), k))
        else:
            out.append((complex(_newton(dk.astype(complex), z)), k))
    # re-impose exact conjugate symmetry after the polish
    fixed = []
    used = [False] * len(out)
    for i, (z, k) in enumerate(out):
        if used[i]:
            continue
        used[i] = True
        if z.imag == 0.0:
            fixed.append((z, k))
            continue
        j = min(
            (j for j in range(len(out)) if not used[j] and out[j][1] == k),
            key=lambda j: abs(out[j][0] - z.conjugate()),
        )
        used[j] = True
        zm = complex(0.5 * (z.real + out[j][0].real), 0.5 * (abs(z.imag) + abs(out[j][0].imag)))
        fixed.extend([(zm, k), (zm.conjugate(), k)])
    return fixed


def pattern_for(degree: int, entries) -> str:
    mults = sorted((k for _, k in entries), reverse=True)
    simple_real = all(z.imag == 0.0 for z, k in entries if k == 1)
    all_real = all(z.imag == 0.0 for z, _ in entries)
    if degree == 2:
        return "Q2-double" if mults == [2] else "Q2-simple"
    if degree == 3:
        if mults == [3]:
            return "C3-triple"
        if mults == [2, 1]:
            return "C3-double"
        return "C3-distinct" if all_real else "C3-with-complex-pair"
    if mults == [4]:
        return "C4-quadruple"
    if mults == [3, 1]:
        return "C4-triple"
    if mults == [2, 2]:
        return "C4-double-double-real" if all_real else "C4-double-double-complex"
    if mults == [2, 1, 1]:
        return "C4-double+2real" if simple_real else "C4-double+2complex"
    return "C4-four-distinct-real" if all_real else "C4-with-complex-pair"


def _sort_entries(entries):
    return tuple(sorted(entries, key=lambda e: (-e[1], e[0].real, e[0].imag)))


def solve_structure(poly: QuarticPoly, rel_tol: float = 1e-8) -> RootStructure:
    """Roots of ``poly`` grouped by multiplicity.

    A grouping is accepted when the polynomial rebuilt from the merged roots
    differs from the input by at most ``rel_tol`` in the scaled coefficient
    norm; among accepted groupings the one with fewest distinct roots wins,
    ties broken by the smaller error.
    """
    if not (1e-12 <= rel_tol <= 1e-4):
        raise ValueError("rel_tol must lie in [1e-12, 1e-4]")
    co = _effective(poly)
    deg = len(co) - 1
    raw = np.roots(co)
    partner = _conj_partner(raw)
    scale = 1.0 + float(np.max(np.abs(raw)))

    best = None
    for part in _set_partitions(list(range(deg))):
        merged = _merge(part, raw, partner)
        if merged is None:
            continue
        err = _scaled_error(co, _reconstruct(co[0], merged), scale)
        if len(part) < deg and err > rel_tol:
            continue
        cand = (len(part), err, merged)
        if best is None or cand[:2] < best[:2]:
            best = cand

    n, err, merged = best
    refined = _refine(co, merged)
    err_ref = _scaled_error(co, _reconstruct(co[0], refined), scale)
    if err_ref <= err:
        merged, err = refined, err_ref
    return RootStructure(
        _sort_entries(merged), deg, pattern_for(deg, merged), float(co[0]), float(err)
    )


# --- exact templates -------------------------------------------------------


def _from_template(co: np.ndarray, entries) -> Optional[RootStructure]:
    entries = [(complex(z), k) for z, k in entries]
    if any(not (math.isfinite(z.real) and math.isfinite(z.imag)) for z, _ in entries):
        return None
    scale = 1.0 + max(abs(z) for z, _ in entries)
    err = _scaled_error(co, _reconstruct(co[0], entries), scale)
    if err > TEMPLATE_TOL:
        return None
    deg = len(co) - 1
    return RootStructure(_sort_entries(entries), deg, pattern_for(deg, entries), float(co[0]), err)


def _real_critical_points(co: np.ndarray) -> List[float]:
    d = np.polyder(co)
    pts = []
    for z in np.roots(d):
        if abs(z.imag) <= 1e-7 * (1.0 + abs(z)):
            x = float(np.real(_newton(d.astype(float), z.real)))
            if all(abs(x - p) > 1e-12 * (1 + abs(x)) for p in pts):
                pts.append(x)
    return pts


def cubic_double_roots(A: float, c: float, phi: float) -> list:
    return [(phi, 2), (3.0 * c / A - 2.0 * phi, 1)]


def quartic_triple_roots(A: float, B: float, c: float, sign: int) -> list:
    s = math.sqrt(A * A + 4 * B * c)
    return [(-(A + sign * s) / (2 * B), 3), (-(A - sign * 3 * s) / (2 * B), 1)]


def quartic_double_double_roots(A: float, B: float, c: float) -> list:
    d = A * A + 4 * B * c
    if d > 0:
        s = math.sqrt(3 * d)
        return [(-(A + s) / (2 * B), 2), (-(A - s) / (2 * B), 2)]
    a = -A / (2 * B)
    b = math.sqrt(-3 * d) / (2 * B)
    return [(complex(a, abs(b)), 2), (complex(a, -abs(b)), 2)]


def quartic_one_double_roots(A: float, B: float, c: float, rho: float) -> list:
    D = -2 * B * B * rho * rho - 2 * A * B * rho + A * A + 6 * B * c
    base = -(rho * B + A) / B
    if D >= 0:
        s = math.sqrt(D) / B
        return [(rho, 2), (base + s, 1), (base - s, 1)]
    b = math.sqrt(-D) / abs(B)
    return [(rho, 2), (complex(base, b), 1), (complex(base, -b), 1)]


def quartic_four_roots(A: float, B: float, c: float, rho: float, lam: float) -> list:
    """Roots in the standard labelling ``[phi1, phi2, phi3, phi4]`` (complex allowed)."""
    D = (A * A + 6 * B * c - 2 * B * B * rho * rho - 2 * A * B * rho - B * B * lam) / (B * B)
    sl = cmath.sqrt(lam)
    sd = cmath.sqrt(D)
    base = -(B * rho + A) / B
    return [rho + sl, rho - sl, base + sd, base - sd]


def structure_from_template(params: EquationParams, wc: WaveConstants) -> Optional[RootStructure]:
    """Closed-form roots when (c, C2, C3) satisfy a degenerate-case condition."""
    A, B, c = params.A, params.B, wc.c
    try:
        co = _effective(build_p(params, wc))
    except DegenerateInputError:
        return None
    deg = len(co) - 1
    if deg == 3:
        cands = [[(c / A, 3)]]
        cands += [cubic_double_roots(A, c, phi) for phi in _real_critical_points(co)]
        for entries in cands:
            st = _from_template(co, entries)
            if st is not None:
                return st
        return None
    if deg != 4:
        return None
    cands = [[(-A / (2 * B), 4)]]
    if A * A + 4 * B * c > 0:
        cands += [quartic_triple_roots(A, B, c, s) for s in (1, -1)]
    if A * A + 4 * B * c != 0:
        cands.append(quartic_double_double_roots(A, B, c))
    cands += [quartic_one_double_roots(A, B, c, rho) for rho in _real_critical_points(co)]
    for entries in cands:
        st = _from_template(co, entries)
        if st is not None:
            return st
    return None


def find_structure(params: EquationParams, wc: WaveConstants, rel_tol: float = 1e-8) -> RootStructure:
    """Template match if any, numeric clustering otherwise."""
    st = structure_from_template(params, wc)
    if st is not None:
        return st
    return solve_structure(build_p(params, wc), rel_tol)

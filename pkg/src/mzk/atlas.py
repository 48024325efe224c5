"""Reference fixtures: one representative parameter set per closed-form member.

Each fixture names a member, the equation coefficients, the wave speed, the
member's free parameters and an ``r`` window free of poles.  The residual
acceptance suite and the CLI ``verify`` command both run from this file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Tuple

from .classify import FamilyDescriptor, classify, constants_from_family
from .model import EquationParams, WaveConstants


@dataclass(frozen=True)
class Fixture:
    member: str
    params: EquationParams
    c: float
    C1: float
    free: Dict[str, float]
    window: Tuple[float, float]

    def build(self) -> Tuple[WaveConstants, FamilyDescriptor]:
        """Wave constants and descriptor realizing this fixture."""
        wc = constants_from_family(self.member, self.params, self.c, self.C1, **self.free)
        return wc, classify(self.params, wc, member=self.member)

    def pde_grid(self, n: int = 21):
        """``(xs, ys, ts)`` grid specs whose ``r = x + y - c t`` stays in the window."""
        lo, hi = self.window
        m, w = 0.5 * (lo + hi), 0.5 * (hi - lo)
        xy = {"min": m / 2 - 0.3 * w, "max": m / 2 + 0.3 * w, "n": n}
        tw = 0.3 * w / abs(self.c)
        return (xy, dict(xy), {"min": -tw, "max": tw, "n": n})


def load_atlas() -> List[Fixture]:
    raw = json.loads(resources.files("mzk.data").joinpath("atlas.json").read_text())
    out = []
    for e in raw["fixtures"]:
        p = e["params"]
        out.append(
            Fixture(
                e["member"],
                EquationParams(float(p["A"]), float(p["B"]), float(p["M"]), float(p["N"])),
                float(e["c"]),
                float(e["C1"]),
                dict(e["free"]),
                (float(e["window"][0]), float(e["window"][1])),
            )
        )
    return out

"""Command-line interface: ``mzk classify | eval | sample | identify | verify``.

Exit codes: 0 success, 2 invalid input, 3 boundary case under ``--strict``,
4 data that is not a solution (identify) or residuals above threshold (verify).
Output is byte-stable: floats are printed with 17 significant digits and no
timestamps are written.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from typing import List, Optional, Sequence

import numpy as np

from .atlas import load_atlas
from .classify import MEMBERS, ROWS, FamilyDescriptor, classify, constants_from_family, identify
from .errors import BoundaryCaseWarning, MZKError, NotASolutionError
from .families import STATUS_NAMES, field_fn, field_values, profile_fn
from .model import EquationParams, JetPoint, WaveConstants
from .verify import jets_from_samples, ode_residual, pde_residual

SCHEMA = "mzk/1"
FAMILY_KEYS = ("phi", "phi1", "phi2", "rho", "lam")

EXIT_OK, EXIT_INVALID, EXIT_BOUNDARY, EXIT_NOT_SOLUTION = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return "" if x is None else format(float(x), ".17g")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --- argument plumbing ------------------------------------------------------


def _add_equation(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("equation")
    for name in "ABMN":
        g.add_argument(f"-{name}", type=float, default=None, help=f"coefficient {name} (default 0)")


def _add_wave(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("wave")
    g.add_argument("-c", type=float, default=None, help="wave speed (non-zero)")
    g.add_argument("--C1", type=float, default=None, help="phase constant (default 0)")
    g.add_argument("--C2", type=float, default=None)
    g.add_argument("--C3", type=float, default=None)
    g.add_argument("--member", default=None, help="closed-form member (or row id with family params)")
    for k in FAMILY_KEYS:
        g.add_argument(f"--{k}", type=float, default=None, help="family free parameter")
    g.add_argument("--sign", type=int, choices=(-1, 1), default=None, help="triple-root sign choice")
    g.add_argument("--branch", type=int, choices=(-1, 1), default=None, help="+- branch of the closed form")
    g.add_argument("--v-hint", type=float, default=None, help="a value of the profile; selects the member")
    g.add_argument("--rel-tol", type=float, default=None, help="root clustering tolerance (default 1e-8)")
    g.add_argument("--strict", action="store_true", default=None, help="boundary-case warnings exit 3")


def _grid_axis(text: str) -> np.ndarray:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return np.linspace(lo, hi, n)
    except ValueError:
        pass
    raise UsageError(f"bad grid axis {text!r}; use VALUE or MIN:MAX:N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mzk", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None, help="JSON file of option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify (params, constants) into a family")
    _add_equation(p)
    _add_wave(p)
    p.add_argument("--json", action="store_true", default=None, help="JSON output")

    for name in ("eval", "sample"):
        p = sub.add_parser(name, help="evaluate u on an (x, y, t) grid")
        _add_equation(p)
        _add_wave(p)
        p.add_argument("--x", default=None, help="VALUE or MIN:MAX:N (default 0)")
        p.add_argument("--y", default=None, help="VALUE or MIN:MAX:N (default 0)")
        p.add_argument("--t", default=None, help="VALUE or MIN:MAX:N (default 0)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--no-header", action="store_true", default=None, help="omit the version line")

    p = sub.add_parser("identify", help="recover (C2, C3) and the family from samples")
    _add_equation(p)
    p.add_argument("-c", type=float, default=None)
    p.add_argument("samples", nargs="?", default=None, help="CSV with columns r,v[,v1,v2]")
    p.add_argument("--tol", type=float, default=None, help="allowed spread of the first integrals")
    p.add_argument("--rel-tol", type=float, default=None)

    p = sub.add_parser("verify", help="ODE/PDE residuals of a family (or the whole atlas)")
    _add_equation(p)
    _add_wave(p)
    p.add_argument("--atlas", action="store_true", default=None, help="verify every reference fixture")
    p.add_argument("--window", type=float, nargs=2, default=None, metavar=("R0", "R1"))
    p.add_argument("--n", type=int, default=None, help="ODE sample points (default 50)")
    p.add_argument("--pde-n", type=int, default=None, help="PDE grid points per axis (default 21)")
    p.add_argument("--ode-step", type=float, default=None)
    p.add_argument("--pde-step", type=float, default=None)
    p.add_argument("--ode-tol", type=float, default=None, help="default 1e-5")
    p.add_argument("--pde-tol", type=float, default=None, help="default 1e-4")
    return parser


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as f:
            cfg = json.load(f)
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read config {path}: {e}")
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def _merge(args: argparse.Namespace, cfg: dict) -> argparse.Namespace:
    """Command-line values win; the config fills whatever was not given."""
    for k, v in cfg.items():
        if k in ("command", "config"):
            continue
        if not hasattr(args, k):
            raise UsageError(f"unknown config key {k!r} for {args.command}")
        if getattr(args, k) is None:
            setattr(args, k, v)
    return args


def _opt(args, name, default):
    v = getattr(args, name, None)
    return default if v is None else v


# --- building the family ----------------------------------------------------


def _params(args) -> EquationParams:
    try:
        return EquationParams(*(float(_opt(args, k, 0.0)) for k in "ABMN"))
    except (TypeError, ValueError) as e:
        raise UsageError(str(e))


def _family(args):
    """(params, wave constants, descriptor) from the wave options."""
    params = _params(args)
    if args.c is None:
        raise UsageError("wave speed -c is required")
    rel_tol = float(_opt(args, "rel_tol", 1e-8))
    if not 1e-12 <= rel_tol <= 1e-4:
        raise UsageError("--rel-tol must lie in [1e-12, 1e-4]")
    C1 = float(_opt(args, "C1", 0.0))
    fam = {k: getattr(args, k) for k in FAMILY_KEYS if getattr(args, k, None) is not None}
    have_c = args.C2 is not None or args.C3 is not None
    if have_c and fam:
        raise UsageError("give either --C2/--C3 or family parameters, not both")
    member = args.member
    if member is not None and member not in MEMBERS and member not in ROWS:
        raise UsageError(f"unknown member {member!r}")
    try:
        if fam or (member is not None and not have_c):
            if member is None:
                raise UsageError("family parameters need --member")
            wc = constants_from_family(
                member, params, args.c, C1, sign=int(_opt(args, "sign", 1)), **fam
            )
        else:
            if args.C2 is None or args.C3 is None:
                raise UsageError("both --C2 and --C3 are required")
            wc = WaveConstants(args.c, C1, args.C2, args.C3)
        fd = classify(
            params,
            wc,
            rel_tol=rel_tol,
            v_hint=args.v_hint,
            member=member if member in MEMBERS else None,
            branch=int(_opt(args, "branch", 1)),
        )
    except (ValueError, TypeError) as e:
        if isinstance(e, MZKError) and not isinstance(e, ValueError):
            raise
        raise UsageError(str(e))
    return params, wc, fd


# --- commands ---------------------------------------------------------------


def _classify_text(fd: FamilyDescriptor) -> str:
    out = io.StringIO()
    out.write(f"class: {fd.class_id}\n")
    out.write(f"member: {fd.member or '-'} ({fd.label or '-'})\n")
    out.write(f"k: {fd.k} free: {', '.join(fd.free_params)}\n")
    if fd.roots is not None:
        out.write(f"pattern: {fd.roots.pattern}\n")
        for z, m in fd.roots.entries:
            zs = _fmt(z.real) if z.imag == 0 else f"{_fmt(z.real)}{'+' if z.imag > 0 else '-'}{_fmt(abs(z.imag))}i"
            out.write(f"root: {zs} x{m}\n")
    if fd.K is not None:
        out.write(f"K: {_fmt(fd.K)}\n")
    for k, v in sorted(fd.conditions.items()):
        out.write(f"condition {k}: {_fmt(v)}\n")
    return out.getvalue()


def cmd_classify(args, out) -> int:
    _, _, fd = _family(args)
    if args.json:
        out.write(_dump({"schema": SCHEMA, "family": fd.to_dict()}))
    else:
        out.write(_classify_text(fd))
    return EXIT_OK


def _grid(args):
    axes = [_grid_axis(str(_opt(args, k, "0"))) for k in ("x", "y", "t")]
    # t-major, then y, then x
    T, Y, X = np.meshgrid(axes[2], axes[1], axes[0], indexing="ij")
    return X.ravel(), Y.ravel(), T.ravel()


def cmd_eval(args, out) -> int:
    _, wc, fd = _family(args)
    if fd.member is None and fd.class_id != "CONSTANT":
        raise UsageError(f"row {fd.class_id} needs --member or --v-hint")
    x, y, t = _grid(args)
    vals, st = field_values(fd, wc, x, y, t)
    fmt = _opt(args, "format", "csv")
    buf = io.StringIO()
    if fmt == "csv":
        if not args.no_header:
            buf.write(f"# {SCHEMA} {fd.class_id} {fd.member or '-'}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "t", "u", "status"])
        for xi, yi, ti, u, s in zip(x, y, t, vals, st):
            w.writerow([_fmt(xi), _fmt(yi), _fmt(ti), _fmt(u) if s == 0 else "", STATUS_NAMES[s]])
    else:
        rows = [
            {"x": float(xi), "y": float(yi), "t": float(ti),
             "u": float(u) if s == 0 else None, "status": STATUS_NAMES[s]}
            for xi, yi, ti, u, s in zip(x, y, t, vals, st)
        ]
        buf.write(_dump({"schema": SCHEMA, "family": fd.to_dict(), "C1": wc.C1, "rows": rows}))
    if args.output:
        with open(args.output, "w", newline="") as f:
            f.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def read_samples(path: str) -> List[JetPoint]:
    """``r,v[,v1,v2]`` rows; derivatives are filled in by local stencils when absent."""
    try:
        with (sys.stdin if path == "-" else open(path)) as f:
            rows = [row for row in csv.reader(line for line in f if not line.startswith("#"))]
    except OSError as e:
        raise UsageError(f"cannot read samples: {e}")
    if rows and not _is_number(rows[0][0]):
        header, rows = [h.strip() for h in rows[0]], rows[1:]
    else:
        header = ["r", "v", "v1", "v2"][: len(rows[0]) if rows else 2]
    if header[:2] != ["r", "v"] or len(header) not in (2, 4):
        raise UsageError("sample columns must be r,v or r,v,v1,v2")
    try:
        data = np.array([[float(x) for x in row] for row in rows if row], dtype=float)
    except ValueError as e:
        raise UsageError(f"bad sample value: {e}")
    if data.ndim != 2 or len(data) < 3:
        raise UsageError("need at least 3 samples")
    if data.shape[1] == 4:
        return [JetPoint(*row) for row in data]
    return jets_from_samples(data[:, 0], data[:, 1])


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def cmd_identify(args, out) -> int:
    params = _params(args)
    if args.c is None or args.samples is None:
        raise UsageError("identify needs -c and a samples file")
    jets = read_samples(args.samples)
    try:
        idn = identify(jets, params, args.c, tol=args.tol, rel_tol=float(_opt(args, "rel_tol", 1e-6)))
    except NotASolutionError as e:
        out.write(_dump({"schema": SCHEMA, "error": str(e), "deviations": e.deviations}))
        return EXIT_NOT_SOLUTION
    out.write(
        _dump(
            {
                "schema": SCHEMA,
                "C2": idn.C2,
                "C3": idn.C3,
                "class_id": idn.descriptor.class_id,
                "member": idn.descriptor.member,
                "deviations": idn.deviations,
                "family": idn.descriptor.to_dict(),
            }
        )
    )
    return EXIT_OK


def _verify_one(member, params, wc, fd, window, args, pde_grid):
    n = int(_opt(args, "n", 50))
    ode = ode_residual(profile_fn(fd, wc), params, wc.c, window, n, step=args.ode_step)
    pde_steps = (float(_opt(args, "pde_step", 0.05)),) * 3
    pde = pde_residual(field_fn(fd, wc), params, pde_grid, pde_steps)
    ok = ode.max_rel <= float(_opt(args, "ode_tol", 1e-5)) and pde.max_rel <= float(_opt(args, "pde_tol", 1e-4))
    return {"member": member, "ode": ode.to_dict(), "pde": pde.to_dict(), "pass": ok}


def cmd_verify(args, out) -> int:
    pde_n = int(_opt(args, "pde_n", 21))
    results = []
    if args.atlas:
        for fx in load_atlas():
            wc, fd = fx.build()
            results.append(_verify_one(fx.member, fx.params, wc, fd, fx.window, args, fx.pde_grid(pde_n)))
    else:
        params, wc, fd = _family(args)
        if fd.member is None:
            raise UsageError(f"row {fd.class_id} needs --member or --v-hint")
        if args.window is None:
            raise UsageError("--window R0 R1 is required")
        lo, hi = args.window
        m, w = 0.5 * (lo + hi), 0.5 * (hi - lo)
        xy = {"min": m / 2 - 0.3 * w, "max": m / 2 + 0.3 * w, "n": pde_n}
        grid = (xy, xy, {"min": -0.3 * w / abs(wc.c), "max": 0.3 * w / abs(wc.c), "n": pde_n})
        results.append(_verify_one(fd.member, params, wc, fd, (lo, hi), args, grid))
    ok = all(r["pass"] for r in results)
    out.write(_dump({"schema": SCHEMA, "pass": ok, "results": results}))
    return EXIT_OK if ok else EXIT_NOT_SOLUTION


COMMANDS = {
    "classify": cmd_classify,
    "eval": cmd_eval,
    "sample": cmd_eval,
    "identify": cmd_identify,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_INVALID
    try:
        args = _merge(args, _load_config(args.config))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", BoundaryCaseWarning)
            code = COMMANDS[args.command](args, out)
        boundary = [w for w in caught if issubclass(w.category, BoundaryCaseWarning)]
        for w in boundary:
            print(f"warning: {w.message}", file=sys.stderr)
        if boundary and getattr(args, "strict", None):
            return EXIT_BOUNDARY
        return code
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except NotASolutionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NOT_SOLUTION
    except MZKError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Batch front end: spectra, residual suites, zero solves, symmetries, cycles.

Exit codes: 0 success, 1 numeric or verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .functional_system import normalized_compatibility_det, riccati_coefficients, riccati_residual
from .model_core import ModelParams, ParameterError, parse_complex
from .report import dumps
from .transfer_oracle import diagonalize_sector

COMMANDS = ("spectrum", "verify", "zeroes", "symmetry", "cycles")
DEFAULTS = {"gamma": 0j, "phi1": 1 + 0j, "phi2": 1 + 0j, "mu": None, "L": None,
            "sector": None, "u1": 0.7 + 0.2j, "tol": None, "out": None}
DEFAULT_TOL = {"spectrum": 1e-9, "verify": 1e-6, "zeroes": 1e-10, "symmetry": 1e-5, "cycles": 1e-8}
VERIFY_SEED = 0xC0FFEE
NUMERIC_ERRORS = (ArithmeticError, ValueError, np.linalg.LinAlgError)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: ModelParams
    sector: int | None = None
    u1: complex = 0.7 + 0.2j
    tol: float = 1e-6
    out: str | None = None
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# argument handling

def _complex_arg(s):
    try:
        return parse_complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}") from None


def _mu_arg(s):
    try:
        return [parse_complex(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad inhomogeneity list: {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=("rational", "trigonometric"))
    common.add_argument("--gamma", type=_complex_arg)
    common.add_argument("--phi1", type=_complex_arg)
    common.add_argument("--phi2", type=_complex_arg)
    common.add_argument("--mu", type=_mu_arg, help="comma list, e.g. 0.01+0.02i,-0.03i")
    common.add_argument("--L", type=int)
    common.add_argument("--sector", type=int)
    common.add_argument("--u1", type=_complex_arg, help="zero subset for sector 2 symmetries")
    common.add_argument("--tol", type=float)
    common.add_argument("--out", help="output path (stdout if omitted)")
    common.add_argument("--config", help="JSON file with any of the above keys")
    p = argparse.ArgumentParser(prog="sixvertex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    helps = {"spectrum": "eigenvalue curves per sector",
             "verify": "residual suites for every eigenvalue",
             "zeroes": "re-solve eigenvalue zeroes from perturbed seeds",
             "symmetry": "Lie point symmetries and their algebra (sectors 1, 2)",
             "cycles": "cycle graph of the X+ spectral map (rational, sector 1)"}
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return p


def _config_value(key, v):
    if key in ("gamma", "phi1", "phi2", "u1"):
        if isinstance(v, str):
            return parse_complex(v)
        if isinstance(v, (list, tuple)):
            return complex(float(v[0]), float(v[1]))
        return complex(v)
    if key == "mu":
        if isinstance(v, str):
            return _mu_arg(v)
        return [_config_value("gamma", m) for m in v]
    if key in ("L", "sector"):
        return int(v)
    if key == "tol":
        return float(v)
    return v


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    """Command-line flags override config-file values override defaults."""
    merged = dict(DEFAULTS, family=None)
    if ns.config:
        try:
            data = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        params = data.pop("params", None)
        if isinstance(params, dict):
            data = {**params, **data}
        for k, v in data.items():
            if k == "command":
                continue
            if k not in merged:
                raise UsageError(f"unknown config key {k!r}")
            try:
                merged[k] = _config_value(k, v)
            except (ValueError, TypeError, IndexError):
                raise UsageError(f"bad config value for {k!r}: {v!r}") from None
    for k in merged:
        v = getattr(ns, k, None)
        if v is not None:
            merged[k] = v
    if merged["family"] is None:
        raise UsageError("--family is required")
    mu, L = merged["mu"], merged["L"]
    if L is None and mu is None:
        raise UsageError("--L (or --mu) is required")
    if L is not None and mu is not None and len(mu) != L:
        raise UsageError(f"--mu has {len(mu)} entries but L={L}")
    try:
        params = ModelParams(family=merged["family"], gamma=merged["gamma"], phi1=merged["phi1"],
                             phi2=merged["phi2"], mu=tuple(mu or ()), L=L)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    tol = merged["tol"] if merged["tol"] is not None else DEFAULT_TOL[ns.command]
    if not tol > 0:
        raise UsageError("--tol must be positive")
    sector = merged["sector"]
    if sector is not None and not 0 <= sector <= params.L:
        raise UsageError(f"sector {sector} outside 0..{params.L}")
    return RunConfig(ns.command, params, sector, complex(merged["u1"]), float(tol), merged["out"])


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# commands

def spectrum_report(params: ModelParams, sector: int) -> dict:
    return {"params": params.to_dict(), "sector": sector,
            "curves": [c.to_dict() for c in diagonalize_sector(params, sector)]}


def cmd_spectrum(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.sector is not None:
        return 0, spectrum_report(cfg.params, cfg.sector)
    return 0, {"params": cfg.params.to_dict(),
               "spectrum": [spectrum_report(cfg.params, n) for n in range(cfg.params.L + 1)]}


def _subsets(zeroes, k, limit=3):
    return list(itertools.islice(itertools.combinations(list(zeroes), k), limit))


def verify_eigenvalue(Lam, params: ModelParams, n: int, rng, npts: int = 3) -> dict:
    """Max residuals of one eigenvalue across the suites."""
    from .riccati_forms import alt_riccati_residual
    from .zero_solver import boundary_conditions, quadratic_residual, sample_points

    us = Lam.zeroes
    out = {}
    cc = 0.0
    for _ in range(npts):
        pts = list(rng.uniform(-0.8, 0.8, n + 1) + 1j * rng.uniform(-0.8, 0.8, n + 1))
        cc = max(cc, normalized_compatibility_det(pts, Lam, params))
    out["compatibility_det"] = cc
    xs = sample_points(npts, us, params, seed=int(rng.integers(1 << 30)))
    ric, quad = 0.0, 0.0
    for sub in _subsets(us, n - 1):
        for x in xs:
            ric = max(ric, riccati_residual(Lam, riccati_coefficients(n, sub, x, params), x)[1])
            quad = max(quad, abs(quadratic_residual(Lam, sub, x, params, relative=True)))
    out["riccati"] = ric
    out["quadratic"] = quad
    if n == 2 and params.trig:
        out["riccati_alt_n2"] = max(alt_riccati_residual(Lam, x, params)[1] for x in xs)
    r0, r1 = boundary_conditions(us, Lam.lambda0, params, n)
    out["boundary"] = max(abs(r0), abs(r1))
    return out


def verify_report(params: ModelParams, sectors, tol: float) -> dict:
    rng = np.random.default_rng(VERIFY_SEED)
    report, worst = [], {}
    for n in sectors:
        rows = []
        for i, Lam in enumerate(diagonalize_sector(params, n)):
            r = verify_eigenvalue(Lam, params, n, rng)
            rows.append({"index": i, **r})
            for k, v in r.items():
                worst[k] = max(worst.get(k, 0.0), v)
        report.append({"sector": n, "eigenvalues": rows})
    return {"params": params.to_dict(), "tol": tol, "sectors": report, "max": worst,
            "passed": all(v < tol for v in worst.values())}


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    sectors = [cfg.sector] if cfg.sector is not None else range(1, cfg.params.L + 1)
    if 0 in sectors:
        raise UsageError("sector 0 has no Riccati equation; use sectors 1..L")
    rep = verify_report(cfg.params, sectors, cfg.tol)
    return (0 if rep["passed"] else 1), rep


def cmd_zeroes(cfg: RunConfig) -> tuple[int, dict]:
    from .zero_solver import match_zero_sets, solve_zeroes

    n = cfg.sector if cfg.sector is not None else 1
    if n == 0:
        raise UsageError("sector 0 has no zero system")
    params = cfg.params
    rng = np.random.default_rng(VERIFY_SEED)
    rows, ok = [], True
    for i, Lam in enumerate(diagonalize_sector(params, n)):
        us = np.asarray(Lam.zeroes)
        pert = 0.01 * np.maximum(np.abs(us), 0.1) * np.exp(2j * np.pi * rng.uniform(size=len(us)))
        try:
            rep = solve_zeroes(params, n, us + pert, tol=min(cfg.tol, 1e-10))
            d = rep.to_dict()
            d["oracle_distance"] = match_zero_sets(rep.zeroes, us, params)
            good = d["oracle_distance"] < 1e-8 and d["heldout_max"] < 1e-7
        except NUMERIC_ERRORS as exc:
            d = {"converged": False, "error": f"{type(exc).__name__}: {exc}"}
            good = False
        ok &= good
        rows.append({"index": i, **d})
    return (0 if ok else 1), {"params": params.to_dict(), "sector": n, "solves": rows}


def cmd_symmetry(cfg: RunConfig) -> tuple[int, dict]:
    from . import lie_symmetry as ls

    n = cfg.sector if cfg.sector is not None else 1
    if n not in (1, 2):
        raise UsageError("symmetry supports sectors 1 and 2; use the library API for others")
    params = cfg.params
    out = {"params": params.to_dict(), "sector": n}
    if n == 1 and not params.trig:
        fields = ls.generators_n1(params)
        xs = [0.1 * k + 0.05j for k in range(5)]
        coeffs = ls.n1_rational_coefficients(params)
        out["source"] = "closed form"
    else:
        coeffs = ls.FittedCoefficients(n, [cfg.u1] if n == 2 else [], params)
        sym = ls.solve_symmetries(coeffs)
        fields, xs = sym.fields, sym.grid(5)
        out["source"] = "integrated"
        out["interval"] = {"x0": sym.x0, "span": sym.span}
    if n == 2:
        out["u1"] = cfg.u1
    det = max(max(abs(r) for r in ls.determining_residuals(f.solution, coeffs, x, True))
              for f in fields for x in xs)
    rep = ls.classify_algebra(fields, ls.default_grid(xs), n)
    out.update(rep.to_dict())
    out["determining_max"] = det
    if n == 2 and not params.trig:
        out["closed_form_check"] = ls.generators_n2(cfg.u1, params).report.to_dict()
    ok = rep.verdict == "sl2" and rep.closure_residual < cfg.tol and det < cfg.tol
    return (0 if ok else 1), out


def cmd_cycles(cfg: RunConfig) -> tuple[int, dict, str]:
    from .spectral_maps import build_cycle_graph

    if cfg.params.trig:
        raise UsageError("cycles are defined for the rational family only")
    if cfg.sector not in (None, 1):
        raise UsageError("cycles are defined on sector 1 only")
    g = build_cycle_graph(cfg.params, tol=cfg.tol)
    rep = {"params": cfg.params.to_dict(), "sector": 1, **g.to_dict()}
    return (0 if not g.dropped else 1), rep, g.to_dot()


def run(cfg: RunConfig) -> int:
    try:
        if cfg.command == "cycles":
            code, rep, dot = cmd_cycles(cfg)
            if cfg.out is None:
                _emit(dot, None)
            else:
                _emit(dot, cfg.out)
                _emit(dumps(rep), str(Path(cfg.out).with_suffix(".json")))
            return code
        handler = {"spectrum": cmd_spectrum, "verify": cmd_verify, "zeroes": cmd_zeroes,
                   "symmetry": cmd_symmetry}[cfg.command]
        code, rep = handler(cfg)
    except UsageError:
        raise
    except NUMERIC_ERRORS as exc:
        rep = {"params": cfg.params.to_dict(), "command": cfg.command,
               "error": f"{type(exc).__name__}: {exc}"}
        code = 1
    _emit(dumps(rep), cfg.out)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return run(resolve_config(ns))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sixvertex {ns.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

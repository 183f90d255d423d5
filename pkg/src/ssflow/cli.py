"""Command-line surface: tables, sweeps, constructions and portraits.

Subcommands
    critical-points   locate and classify the singular points
    gamma3            regime-boundary sweep over a lambda grid
    construct         build the global solution and its artifacts
    flow              sample physical fields rho, u, c, p over (t, r)
    guderley-probe    converging-shock non-existence sweep

All options can come from a key=value config file ('#' comments) and be
overridden by flags.  Output files are deterministic: fixed number
formatting, LF endings, no timestamps.

Exit codes: 0 success, 2 invalid configuration, 3 construction failure,
4 internal tolerance failure.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._version import __version__
from .builder import (assemble, build_gamma1, build_gamma2,
                      build_separatrices)
from .critical_points import critical_point_set
from .errors import ConstructionError, ToleranceError
from .flow import attach_density, sample_flow
from .local_analysis import compute_A8, gamma3, node_data_P8
from .ode_engine import IntegratorOptions
from .params import SimilarityParams, isentropic_kappa
from .shock import guderley_probe, hugoniot_locus, shock_detect
from .svg import portrait_svg


class ConfigError(Exception):
    pass


def _fmt(v):
    return f"{float(v):.17g}"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [c if isinstance(c, str) else _fmt(c) for c in row]
            fh.write(",".join(cells) + "\n")


def _json_clean(obj):
    """Drop non-finite leaves (the format forbids NaN/Infinity)."""
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            v = _json_clean(v)
            if v is not _OMIT:
                out[k] = v
        return out
    if isinstance(obj, (list, tuple)):
        return [v for v in map(_json_clean, obj) if v is not _OMIT]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else _OMIT
    if isinstance(obj, (int, np.integer, bool, str)) or obj is None:
        return obj
    return str(obj)


_OMIT = object()


def write_json(path, obj):
    with open(path, "w", newline="") as fh:
        json.dump(_json_clean(obj), fh, indent=2, sort_keys=True,
                  allow_nan=False)
        fh.write("\n")


def read_config(path):
    cfg = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(
                        f"{path}:{lineno}: expected key=value")
                key, val = line.split("=", 1)
                key = key.strip().replace("-", "_")
                if key == "lambda":
                    key = "lam"
                cfg[key] = val.strip()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}")
    return cfg


_BOOL_KEYS = {"isentropic", "svg"}
_FLOAT_KEYS = {"gamma", "lam", "kappa", "rel_tol", "abs_tol",
               "s_target", "rho_ref", "wz_offset"}
_INT_KEYS = {"n"}


def _coerce(key, val):
    if not isinstance(val, str):
        return val
    if key in _BOOL_KEYS:
        low = val.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: not a boolean: {val!r}")
    try:
        if key in _INT_KEYS:
            return int(val)
        if key in _FLOAT_KEYS:
            return float(val)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {val!r}")
    return val


def merge_config(args, defaults):
    """File config under CLI flags under hard defaults."""
    cfg = dict(defaults)
    if getattr(args, "config", None):
        for k, v in read_config(args.config).items():
            cfg[k] = _coerce(k, v)
    for k, v in vars(args).items():
        if k in ("config", "command", "func") or v is None:
            continue
        cfg[k] = _coerce(k, v)
    return cfg


def resolve_params(cfg):
    for key in ("n", "gamma", "lam"):
        if cfg.get(key) is None:
            raise ConfigError(f"missing required parameter: {key}")
    n, gamma, lam = cfg["n"], cfg["gamma"], cfg["lam"]
    if cfg.get("isentropic"):
        kappa = isentropic_kappa(gamma, lam)
    elif cfg.get("kappa") is not None:
        kappa = cfg["kappa"]
    else:
        raise ConfigError("specify --kappa VALUE or --isentropic")
    try:
        return SimilarityParams(n=n, gamma=gamma, lam=lam, kappa=kappa)
    except ValueError as e:
        raise ConfigError(str(e))


def resolve_opts(cfg):
    kw = {}
    if cfg.get("rel_tol") is not None:
        kw["rel_tol"] = cfg["rel_tol"]
    if cfg.get("abs_tol") is not None:
        kw["abs_tol"] = cfg["abs_tol"]
    try:
        return IntegratorOptions(**kw)
    except ValueError as e:
        raise ConfigError(str(e))


def parse_grid(spec):
    """lo:hi:count -> numpy grid (inclusive endpoints)."""
    try:
        lo, hi, count = spec.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise ConfigError(f"bad grid spec {spec!r}; expected lo:hi:count")
    if count < 1 or hi < lo:
        raise ConfigError(f"bad grid spec {spec!r}")
    return np.linspace(lo, hi, count)


def _outdir(cfg):
    out = cfg.get("out", ".")
    os.makedirs(out, exist_ok=True)
    return out


def _n_workers():
    env = os.environ.get("SSFLOW_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError("SSFLOW_THREADS must be an integer")
    return min(8, os.cpu_count() or 1)


# ---------------------------------------------------------------- commands

def cmd_critical_points(args):
    cfg = merge_config(args, {})
    params = resolve_params(cfg)
    points, presence, coincidences = critical_point_set(params)
    rows = [(p.id, p.V, p.C, p.on_line, p.kind) for p in points]
    out = _outdir(cfg)
    write_csv(os.path.join(out, "critical_points.csv"),
              ["id", "V", "C", "line", "kind"], rows)
    print(f"{'id':7s} {'V':>22s} {'C':>22s} {'line':6s} kind")
    for p in points:
        print(f"{p.id:7s} {p.V:22.15g} {p.C:22.15g} {p.on_line:6s} "
              f"{p.kind}")
    lm = "-" if presence.lambda_max is None else f"{presence.lambda_max:g}"
    ln = "-" if presence.lambda_min is None else f"{presence.lambda_min:g}"
    print(f"presence case {presence.case_id}: lambda_max={lm} "
          f"lambda_min={ln} P6/P8 present={presence.P68_present}")
    for a, b in coincidences:
        print(f"coincidence: {a} = {b}")
    return 0


def cmd_gamma3(args):
    cfg = merge_config(args, {"n": 3, "grid": "0.001:0.1:50"})
    n = int(cfg["n"])
    lams = parse_grid(cfg["grid"])
    with ThreadPoolExecutor(max_workers=_n_workers()) as ex:
        vals = list(ex.map(lambda lm: gamma3(lm, n=n), lams))
    rows = []
    for lm, g in zip(lams, vals):
        rows.append((lm, "absent" if g is None else g))
        shown = "absent" if g is None else _fmt(g)
        flag = " (asymptote)" if g is not None and g > 100.0 else ""
        print(f"lambda={lm:.6g}  gamma3={shown}{flag}")
    out = _outdir(cfg)
    write_csv(os.path.join(out, "gamma3.csv"), ["lambda", "gamma3"], rows)
    return 0


def build_solution(params, opts, s_target=math.inf, wz_offset=1e-6):
    """Run the full construction pipeline once."""
    g1 = build_gamma1(params, opts, wz_offset=wz_offset)
    if not g1["reached_P8"]:
        raise ConstructionError(
            f"gamma1 failed: {g1['failure']}")
    sep = build_separatrices(params, opts)
    nd = node_data_P8(params)
    g2 = build_gamma2(params, s_target=s_target, opts=opts, nd=nd,
                      sep=sep)
    return assemble(params, g1, g2, opts)


def cmd_construct(args):
    cfg = merge_config(args, {"svg": True, "s_target": math.inf,
                              "rho_ref": 1.0, "wz_offset": 1e-6})
    params = resolve_params(cfg)
    if not params.is_isentropic:
        raise ConfigError("construct requires the isentropic exponent "
                          "(pass --isentropic)")
    opts = resolve_opts(cfg)
    out = _outdir(cfg)

    sol = build_solution(params, opts, s_target=cfg["s_target"],
                         wz_offset=cfg["wz_offset"])
    field = attach_density(params, sol, rho_ref=cfg["rho_ref"])
    a8 = compute_A8(params, sol.gamma1)
    if a8["flagged"]:
        raise ToleranceError(
            f"A8 routes disagree: {a8['A8']} vs {a8['A8_fd']}")
    H = hugoniot_locus(params, sol.gamma2_lower)
    det = shock_detect(params, H, sol.gamma3,
                       exclude_radius=max(1e-4, opts.stop_radius))
    shock = det["intersection"] is not None

    write_csv(os.path.join(out, "solution.csv"), ["x", "V", "C", "R"],
              zip(sol.xs, sol.Vs, sol.Cs, field.R))
    nd = sol.node
    summary = {
        "params": {"n": params.n, "gamma": params.gamma,
                   "lambda": params.lam, "kappa": params.kappa},
        "tolerances": {"rel_tol": opts.rel_tol, "abs_tol": opts.abs_tol,
                       "event_tol": opts.event_tol,
                       "stop_radius": opts.stop_radius},
        "version": __version__,
        "x8": sol.x8, "x9": sol.x9, "s_origin": sol.s_origin,
        "nu": sol.nu, "omega": sol.omega,
        "A8": a8["A8"], "A8_fd": a8["A8_fd"],
        "L1": nd.L1, "L2": nd.L2, "R2": nd.R2,
        "zeta": sol.separatrices.zeta, "eps": sol.separatrices.eps,
        "delta": sol.separatrices.delta,
        "shock_detected": shock,
    }
    write_json(os.path.join(out, "summary.json"), summary)

    if cfg.get("svg", True):
        points, _, _ = critical_point_set(params)
        portrait = portrait_svg(params, solution=sol, critical=points,
                                hugoniot=H)
        portrait.save(os.path.join(out, "portrait.svg"))

    print(f"x8={sol.x8}  x9={_fmt(sol.x9)}  nu={_fmt(sol.nu)}  "
          f"omega={_fmt(sol.omega)}")
    print(f"A8={_fmt(a8['A8'])}  shock_detected={shock}")
    return 0


def cmd_flow(args):
    cfg = merge_config(args, {"t": "0,-1", "grid": "1e-4:1:200",
                              "s_target": math.inf, "rho_ref": 1.0,
                              "wz_offset": 1e-6})
    params = resolve_params(cfg)
    if not params.is_isentropic:
        raise ConfigError("flow requires the isentropic exponent")
    opts = resolve_opts(cfg)
    out = _outdir(cfg)
    try:
        tlist = [float(t) for t in str(cfg["t"]).split(",") if t]
    except ValueError:
        raise ConfigError(f"bad t list: {cfg['t']!r}")
    spec = cfg["grid"]
    lo, hi, count = spec.split(":")
    r_grid = np.geomspace(float(lo), float(hi), int(count))

    sol = build_solution(params, opts, s_target=cfg["s_target"],
                         wz_offset=cfg["wz_offset"])
    field = attach_density(params, sol, rho_ref=cfg["rho_ref"])
    rows = []
    for t in tlist:
        s = sample_flow(field, t, r_grid)
        for i in range(len(r_grid)):
            if s["ok"][i]:
                rows.append((t, s["r"][i], s["rho"][i], s["u"][i],
                             s["c"][i], s["p"][i]))
    write_csv(os.path.join(out, "flow.csv"),
              ["t", "r", "rho", "u", "c", "p"], rows)
    print(f"wrote {len(rows)} flow samples for t in {tlist}")
    return 0


def cmd_guderley_probe(args):
    cfg = merge_config(args, {"grid": "0.1:0.9:9",
                              "gammas": "1.4,1.6666666666666667,3,10,1e6"})
    lams = parse_grid(cfg["grid"])
    gammas = [float(g) for g in str(cfg["gammas"]).split(",") if g]
    ns = [int(cfg["n"])] if cfg.get("n") is not None else [2, 3]
    cells = [(n, g, lm) for n in ns for g in gammas for lm in lams]

    def probe(cell):
        n, g, lm = cell
        r = guderley_probe(n, g, lm)
        return (n, g, lm, r)

    with ThreadPoolExecutor(max_workers=_n_workers()) as ex:
        results = list(ex.map(probe, cells))
    rows = []
    any_reached = False
    for n, g, lm, r in results:
        vc = r["first_Lplus_crossing_V"]
        v8 = r["V8"]
        rows.append((n, g, lm,
                     "none" if vc is None else vc,
                     "absent" if v8 is None else v8,
                     str(r["reached_P8"]).lower()))
        any_reached = any_reached or r["reached_P8"]
    out = _outdir(cfg)
    write_csv(os.path.join(out, "probe.csv"),
              ["n", "gamma", "lambda", "V_cross", "V8", "reached"], rows)
    print(f"{len(rows)} probes; reached_P8 anywhere: {any_reached}")
    return 0


# ---------------------------------------------------------------- parser

def _add_common(p):
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--isentropic", action="store_const", const=True,
                   default=None)
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--abs-tol", dest="abs_tol", type=float)
    p.add_argument("--out")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ssflow",
        description="Radial self-similar Euler flows: construction, "
                    "validation and phase portraits.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("critical-points",
                       help="locate and classify singular points")
    _add_common(p)
    p.set_defaults(func=cmd_critical_points)

    p = sub.add_parser("gamma3", help="regime boundary over a lambda grid")
    _add_common(p)
    p.add_argument("--grid", help="lambda grid lo:hi:count")
    p.set_defaults(func=cmd_gamma3)

    p = sub.add_parser("construct", help="build the global solution")
    _add_common(p)
    p.add_argument("--s-target", dest="s_target", type=float)
    p.add_argument("--wz-offset", dest="wz_offset", type=float)
    p.add_argument("--rho-ref", dest="rho_ref", type=float)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--svg", dest="svg", action="store_const", const=True,
                   default=None)
    g.add_argument("--no-svg", dest="svg", action="store_const",
                   const=False)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("flow", help="sample rho, u, c, p over (t, r)")
    _add_common(p)
    p.add_argument("--t", help="comma-separated times")
    p.add_argument("--grid", help="radius grid lo:hi:count (geometric)")
    p.add_argument("--s-target", dest="s_target", type=float)
    p.add_argument("--wz-offset", dest="wz_offset", type=float)
    p.add_argument("--rho-ref", dest="rho_ref", type=float)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("guderley-probe",
                       help="converging-shock non-existence sweep")
    _add_common(p)
    p.add_argument("--grid", help="lambda grid lo:hi:count")
    p.add_argument("--gammas", help="comma-separated gamma values")
    p.set_defaults(func=cmd_guderley_probe)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ConstructionError as e:
        print(f"construction failed: {e}", file=sys.stderr)
        return 3
    except ToleranceError as e:
        print(f"tolerance failure: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

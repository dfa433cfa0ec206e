"""Command-line entry point.

Subcommands map one-to-one onto the toolkit operations and write the CSV/JSON
schemas documented in the README.  Options can be passed as flags, as bare
key=value tokens (``revanneal phase-diagram model=ARA p=3 ...``), or through
a JSON config file (flags override file values).  Relative output paths are
resolved against $REVANNEAL_OUTDIR when it is set.

Each command validates its whole configuration before any computation starts.
Exit codes: 0 success, 2 invalid configuration (nothing written), 1 domain or
resource errors during computation (partial outputs are never left behind).
Errors are emitted as a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import landscape as lsc
from . import persist
from .dynamics_ara import AraIntegratorConfig, ara_evolve, ara_exact_finite_n, default_ara_dt
from .dynamics_sra import SraConfig, sra_evolve, sra_finite_n
from .model import AnnealPath, DomainError, ModelParams, SchedulePoint
from .phase_diagram import (
    PhaseDiagram,
    feasible_constant_lambdas,
    has_pixel_path,
    path_is_feasible,
    scan_phase_diagram,
    search_three_stage,
)

KINDS = {"ARA": lsc.ARA_ZERO_T, "SRA": lsc.SRA_THERMAL}


def _expand_kv(argv: list[str]) -> list[str]:
    out = []
    for tok in argv:
        if "=" in tok and not tok.startswith("-"):
            key, val = tok.split("=", 1)
            out.extend([f"--{key}", val])
        else:
            out.append(tok)
    return out


def _out_path(name: str) -> str:
    base = os.environ.get("REVANNEAL_OUTDIR")
    if base and not os.path.isabs(name):
        return os.path.join(base, name)
    return name


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=sorted(KINDS), help="ARA or SRA")
    p.add_argument("--p", type=int, help="odd pattern exponent >= 3")
    p.add_argument("--alpha", type=float, help="marked-pattern weight in (0, 1)")
    p.add_argument("--x", type=float, help="marked-state down fraction in (0, 0.5]")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--out", help="output file (or prefix for multi-file commands)")
    p.add_argument("--threads", type=int, default=1, help="max scan parallelism")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="revanneal",
                                 description="Reverse-annealing mean-field toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("landscape", help="free-energy landscape grid CSV")
    _add_common(p)
    p.add_argument("--s", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--grid-n", type=int, default=401)

    p = sub.add_parser("reduced-landscape", help="Phi'(m_d) profile CSV")
    _add_common(p)
    p.add_argument("--s", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--n-md", type=int, default=401)

    p = sub.add_parser("phase-diagram", help="(s, lambda) scan CSV + edges + summary")
    _add_common(p)
    p.add_argument("--resolution", type=int)
    p.add_argument("--threshold", type=float, default=0.05)

    p = sub.add_parser("check-path", help="path feasibility on a scanned diagram")
    _add_common(p)
    p.add_argument("--resolution", type=int)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--diagram", help="reuse a previously written diagram CSV")
    p.add_argument("--path", help='"linear-sqrt" or waypoints "s,l;s,l;..."')
    p.add_argument("--tau", type=float, default=1.0)

    p = sub.add_parser("evolve", help="mean-field trajectory CSV")
    _add_common(p)
    p.add_argument("--path", help='"linear-sqrt" or waypoints "s,l;s,l;..."')
    p.add_argument("--tau", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--stride", type=int)
    p.add_argument("--midpoint-fields", action="store_true")

    p = sub.add_parser("tau-sweep", help="delta_m versus runtime CSV")
    _add_common(p)
    p.add_argument("--path", help='"linear-sqrt" or waypoints "s,l;s,l;..."')
    p.add_argument("--tau", help="comma-separated runtimes")
    p.add_argument("--dt", type=float)

    p = sub.add_parser("oracle-compare", help="mean-field versus finite-N trajectories")
    _add_common(p)
    p.add_argument("--path", help='"linear-sqrt" or waypoints "s,l;s,l;..."')
    p.add_argument("--tau", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--n-runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--dt", type=float)
    return ap


# --------------------------------------------------------------------------
# validation helpers (raise DomainError; main maps those to exit code 2)

def _load_config(args) -> dict:
    if not args.config:
        return {}
    try:
        with open(args.config) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise DomainError(f"config file not found: {args.config}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"config file is not valid JSON: {exc}") from None


def _params(args, cfg: dict) -> ModelParams:
    merged = {"p": args.p if args.p is not None else cfg.get("p"),
              "alpha": args.alpha if args.alpha is not None else cfg.get("alpha"),
              "x": args.x if args.x is not None else cfg.get("x")}
    for key, val in merged.items():
        if val is None:
            raise DomainError(f"missing required model parameter --{key}")
    return ModelParams(p=int(merged["p"]), alpha=merged["alpha"], x=merged["x"])


def _kind(args, cfg: dict):
    model = args.model or cfg.get("model")
    if model not in KINDS:
        raise DomainError("missing or invalid --model (ARA or SRA)")
    return model, KINDS[model]


def _point(args) -> SchedulePoint:
    if args.s is None or args.lam is None:
        raise DomainError("missing --s / --lam")
    return SchedulePoint(args.s, args.lam)


def _path(args, cfg: dict, tau: float | None = None) -> AnnealPath:
    tau = tau if tau is not None else getattr(args, "tau", None)
    spec = getattr(args, "path", None)
    if spec is None and "path" in cfg:
        path_cfg = dict(cfg["path"])
        if tau is not None:
            path_cfg["tau"] = tau
        return AnnealPath.from_config({"path": path_cfg})
    if spec is None:
        raise DomainError("missing --path")
    if tau is None:
        raise DomainError("missing --tau")
    if spec == "linear-sqrt":
        return AnnealPath.linear_sqrt(tau)
    try:
        pts = [tuple(float(v) for v in wp.split(",")) for wp in spec.split(";")]
    except ValueError:
        raise DomainError(f"cannot parse path spec {spec!r}") from None
    return AnnealPath.piecewise(pts, tau)


def _require_out(args) -> str:
    if not args.out:
        raise DomainError("missing --out")
    return _out_path(args.out)


def _require_resolution(args) -> int:
    if args.resolution is None:
        raise DomainError("missing --resolution")
    if args.resolution < 11:
        raise DomainError("resolution must be >= 11")
    return args.resolution


def _split_out(out: str, suffix: str) -> str:
    root, ext = os.path.splitext(out)
    return f"{root}{suffix}{ext or '.csv'}"


# --------------------------------------------------------------------------
# commands: validate first, return a thunk that does the work

def _cmd_landscape(args, cfg):
    params = _params(args, cfg)
    _, kind = _kind(args, cfg)
    point = _point(args)
    out = _require_out(args)
    if args.grid_n < 2:
        raise DomainError("grid-n must be >= 2")

    def run() -> str:
        mu, md, phi = lsc.landscape_grid(params, point, kind, args.grid_n)
        persist.landscape_grid_to_csv(mu, md, phi, out)
        i, j = np.unravel_index(int(np.argmin(phi)), phi.shape)
        return (f"landscape: grid {args.grid_n}x{args.grid_n}, min "
                f"phi={persist.fmt(phi[i, j])} at ({persist.fmt(mu[i])}, "
                f"{persist.fmt(md[j])}); wrote {out}")
    return run


def _cmd_reduced(args, cfg):
    params = _params(args, cfg)
    _, kind = _kind(args, cfg)
    point = _point(args)
    out = _require_out(args)
    if args.n_md < 2:
        raise DomainError("n-md must be >= 2")

    def run() -> str:
        md = np.linspace(-params.m_d_max, params.m_d_max, args.n_md)
        phi, arg = lsc.reduced_landscape_profile(params, point, md, kind)
        persist.reduced_to_csv(md, phi, arg, out)
        k = int(np.argmin(phi))
        return (f"reduced-landscape: {args.n_md} points, global min at "
                f"m_d={persist.fmt(md[k])}; wrote {out}")
    return run


def _cmd_phase_diagram(args, cfg):
    params = _params(args, cfg)
    model, kind = _kind(args, cfg)
    resolution = _require_resolution(args)
    out = _require_out(args)
    edges_out = _split_out(out, ".edges")
    summary_out = os.path.splitext(out)[0] + ".summary.json"

    def run() -> str:
        diagram = scan_phase_diagram(params, kind, resolution,
                                     threshold=args.threshold, threads=args.threads)
        feasible = feasible_constant_lambdas(diagram)
        three_stage = search_three_stage(diagram)
        persist.diagram_to_csv(diagram, out)
        persist.edges_to_csv(diagram, edges_out)
        persist.write_json(summary_out, {
            "model": model,
            "p": params.p, "alpha": params.alpha, "x": params.x,
            "resolution": diagram.resolution,
            "threshold": diagram.threshold,
            "n_transition_edges": int(diagram.trans_h.sum() + diagram.trans_v.sum()),
            "feasible_constant_lambda": [float(v) for v in
                                         diagram.lam_values[feasible]],
            "three_stage_feasible": three_stage is not None,
            "three_stage_waypoints": (list(map(list, three_stage.waypoints))
                                      if three_stage else None),
            "any_pixel_path": has_pixel_path(diagram),
        })
        return (f"phase-diagram: {model} resolution={diagram.resolution} "
                f"transitions={int(diagram.trans_h.sum() + diagram.trans_v.sum())} "
                f"feasible_constant_lambda={int(feasible.sum())}/{diagram.resolution}; "
                f"wrote {out}, {edges_out}, {summary_out}")
    return run


def _cmd_check_path(args, cfg):
    params = _params(args, cfg)
    model, kind = _kind(args, cfg)
    path = _path(args, cfg)
    out = _require_out(args)
    if not args.diagram:
        _require_resolution(args)

    def run() -> str:
        if args.diagram:
            _, _, m_grid = persist.diagram_from_csv(args.diagram)
            diagram = PhaseDiagram.from_m_grid(params, kind, m_grid, args.threshold)
        else:
            diagram = scan_phase_diagram(params, kind, args.resolution,
                                         threshold=args.threshold,
                                         threads=args.threads)
        feasible, crossings = path_is_feasible(diagram, path)
        persist.write_json(out, {
            "model": model, "feasible": feasible,
            "crossings": [[list(a), list(b)] for a, b in crossings],
        })
        return (f"check-path: {model} feasible={feasible} "
                f"crossings={len(crossings)}; wrote {out}")
    return run


def _traj(model: str, params: ModelParams, path: AnnealPath, dt, stride,
          midpoint: bool = False):
    if model == "ARA":
        dt = dt if dt is not None else default_ara_dt(path.tau)
        stride = stride if stride is not None else max(1, round(path.tau / dt) // 2000)
        return ara_evolve(params, path, AraIntegratorConfig(
            dt=dt, sampling_stride=stride, midpoint_fields=midpoint))
    dt = dt if dt is not None else 1e-3
    stride = stride if stride is not None else max(1, round(path.tau / dt) // 2000)
    return sra_evolve(params, path, SraConfig(dt=dt, sampling_stride=stride))


def _cmd_evolve(args, cfg):
    params = _params(args, cfg)
    model, _ = _kind(args, cfg)
    path = _path(args, cfg)
    out = _require_out(args)

    def run() -> str:
        traj = _traj(model, params, path, args.dt, args.stride,
                     midpoint=args.midpoint_fields)
        persist.trajectory_to_csv(traj, out)
        return (f"evolve: {model} tau={persist.fmt(path.tau)} "
                f"delta_m={persist.fmt(traj.delta_m)}; wrote {out}")
    return run


def _cmd_tau_sweep(args, cfg):
    params = _params(args, cfg)
    model, _ = _kind(args, cfg)
    if not args.tau:
        raise DomainError("missing --tau list")
    try:
        taus = [float(v) for v in str(args.tau).split(",")]
    except ValueError:
        raise DomainError(f"cannot parse --tau list {args.tau!r}") from None
    paths = [_path(args, cfg, tau=tau) for tau in taus]
    out = _require_out(args)

    def run() -> str:
        rows = []
        for tau, path in zip(taus, paths):
            traj = _traj(model, params, path, args.dt,
                         stride=max(1, round(tau / (args.dt or
                                                    (default_ara_dt(tau)
                                                     if model == "ARA" else 1e-3)))))
            rows.append((tau, traj.delta_m))
        persist.write_csv(out, ["tau", "delta_m"], rows)
        return (f"tau-sweep: {model} {len(rows)} runtimes, final "
                f"delta_m={persist.fmt(rows[-1][1])}; wrote {out}")
    return run


def _cmd_oracle_compare(args, cfg):
    params = _params(args, cfg)
    model, _ = _kind(args, cfg)
    path = _path(args, cfg)
    if args.N is None:
        raise DomainError("missing --N")
    out = _require_out(args)
    mf_out = _split_out(out, ".mf")
    fn_out = _split_out(out, ".finite_n")
    summary_out = os.path.splitext(out)[0] + ".summary.json"

    def run() -> str:
        dt = args.dt if args.dt is not None else 1e-3
        if model == "ARA":
            stride = max(1, round(0.1 / dt))
            mf = ara_evolve(params, path,
                            AraIntegratorConfig(dt=dt, sampling_stride=stride))
            fn = ara_exact_finite_n(params, path, args.N, dt, sampling_stride=stride)
            extra = ()
        else:
            stride = max(1, round(0.05 / dt))
            mf = sra_evolve(params, path, SraConfig(dt=dt, sampling_stride=stride))
            fn = sra_finite_n(params, path, args.N, args.n_runs, args.seed,
                              SraConfig(dt=dt), sample_every=0.05)
            extra = ("stderr_m_u", "stderr_m_d")
        n = min(len(mf.t), len(fn.t))
        rms = float(np.sqrt(np.mean((mf.m_d[:n] - fn.m_d[:n]) ** 2)))
        persist.trajectory_to_csv(mf, mf_out)
        persist.trajectory_to_csv(fn, fn_out, extra_cols=extra)
        persist.write_json(summary_out, {
            "model": model, "N": args.N, "tau": path.tau,
            "rms_m_d": rms, "delta_m_mean_field": mf.delta_m,
            "delta_m_finite_n": fn.delta_m,
        })
        return (f"oracle-compare: {model} N={args.N} "
                f"rms_m_d={persist.fmt(rms)}; wrote {mf_out}, {fn_out}, {summary_out}")
    return run


_COMMANDS = {
    "landscape": _cmd_landscape,
    "reduced-landscape": _cmd_reduced,
    "phase-diagram": _cmd_phase_diagram,
    "check-path": _cmd_check_path,
    "evolve": _cmd_evolve,
    "tau-sweep": _cmd_tau_sweep,
    "oracle-compare": _cmd_oracle_compare,
}


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_expand_kv(argv))
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = _load_config(args)
        run = _COMMANDS[args.command](args, cfg)
    except DomainError as exc:
        return _fail("config", str(exc), 2)
    try:
        summary = run()
    except Exception as exc:  # noqa: BLE001 - every failure becomes error JSON
        return _fail(type(exc).__name__, str(exc), 1)
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())

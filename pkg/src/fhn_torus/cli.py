"""Command-line front end.

Subcommands
-----------
spectrum   closed-form origin spectrum with residual checks
critical   critical coupling table entry with a numeric cross-check
hopf       first stability loss for c > 0
simulate   integrate the network, optionally classify the attractor
classify   orbit symmetry from a saved trajectory CSV
sweep      grid over (gamma, delta) emitting one CSV row per point
selftest   built-in invariant battery

Exit codes: 0 success, 2 invalid input, 3 numerical failure or I/O
error.  All floats in reports carry 17 significant digits, so repeated
runs with the same inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import _serialize
from .bifurcation import (
    branch_criticality_probe,
    critical_a,
    hopf_crossing,
    hopf_report_at_critical,
    locate_stability_loss,
)
from .errors import DomainError
from .model import LatticeParams, infer_n
from .simulate import (
    Trajectory,
    classify_spatiotemporal,
    detect_periodic_orbit,
    integrate,
    make_rhs,
)
from .spectral import analytic_eigenvector, spectrum_report
from .symmetry import IsotropySubgroup, canonical_mode, predict_hopf_symmetries

__all__ = ["RunConfig", "Report", "parse_and_dispatch", "emit_report", "main"]

_DEFAULTS = {
    "n": 3,
    "a": 0.0,
    "b": 1.0,
    "c": 0.0,
    "gamma": -1.0,
    "delta": -1.0,
    "t_end": 200.0,
    "rtol": 1e-9,
    "atol": 1e-11,
}

_SWEEP_HEADER = (
    "N", "a", "b", "c", "gamma", "delta", "a_star", "a_hat",
    "mode_r", "mode_s", "omega", "K", "criticality",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: LatticeParams
    fmt: str = "json"
    output: str | None = None
    t_end: float = 200.0
    rtol: float = 1e-9
    atol: float = 1e-11
    ic: str = "uniform-x"
    amplitude: float = 1e-3
    seed: int = 0
    classify: bool = False
    match_tol: float = 1e-2
    input_path: str | None = None
    probe: bool = False
    quick: bool = False
    jobs: int = 1
    gammas: tuple = ()
    deltas: tuple = ()
    explicit_n: bool = False


@dataclass(frozen=True)
class Report:
    payload: object
    csv_header: tuple | None = None
    csv_rows: tuple | None = None


def _read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in _DEFAULTS:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = int(val) if key == "n" else float(val)
            except ValueError:
                raise DomainError(f"{path}:{lineno}: bad value {val!r} for {key}")
    return out


def _parse_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"range must be lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"range must be lo:hi:count, got {text!r}")
    if count < 1:
        raise DomainError("range count must be at least 1")
    if count == 1:
        return (lo,)
    return tuple(np.linspace(lo, hi, count).tolist())


def _add_param_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, default=None, help="lattice side, an odd prime")
    p.add_argument("--a", type=float, default=None, help="cubic cell parameter")
    p.add_argument("--b", type=float, default=None, help="recovery gain")
    p.add_argument("--c", type=float, default=None, help="recovery leak")
    p.add_argument("--gamma", type=float, default=None, help="column coupling weight")
    p.add_argument("--delta", type=float, default=None, help="row coupling weight")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="key=value parameter file; flags override it")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None, metavar="FILE",
                   help="write the report here instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fhn-torus",
        description="Hopf bifurcations and symmetric periodic orbits of a "
        "torus of unidirectionally coupled FitzHugh-Nagumo cells.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="closed-form origin spectrum")
    _add_param_flags(sp)

    cr = sub.add_parser("critical", help="critical a and crossing symmetry (c = 0)")
    _add_param_flags(cr)

    ho = sub.add_parser("hopf", help="first stability loss for c > 0")
    _add_param_flags(ho)
    ho.add_argument("--probe", action="store_true",
                    help="run the branch criticality probe (slow)")

    si = sub.add_parser("simulate", help="integrate the network")
    _add_param_flags(si)
    si.add_argument("--t-end", type=float, default=None)
    si.add_argument("--rtol", type=float, default=None)
    si.add_argument("--atol", type=float, default=None)
    si.add_argument("--ic", choices=("uniform-x", "random", "mode"),
                    default="uniform-x", help="initial condition family")
    si.add_argument("--amplitude", type=float, default=1e-3)
    si.add_argument("--seed", type=int, default=0)
    si.add_argument("--classify", action="store_true",
                    help="detect a periodic orbit and classify its symmetry")
    si.add_argument("--tol", type=float, default=1e-2,
                    help="relative match tolerance for classification")

    cl = sub.add_parser("classify", help="orbit symmetry from a trajectory CSV")
    _add_param_flags(cl)
    cl.add_argument("--input", required=True, metavar="FILE",
                    help="trajectory CSV written by `simulate --format csv`")
    cl.add_argument("--tol", type=float, default=1e-2)

    sw = sub.add_parser("sweep", help="grid over gamma and delta")
    _add_param_flags(sw)
    sw.add_argument("--gamma-range", default=None, metavar="LO:HI:COUNT")
    sw.add_argument("--delta-range", default=None, metavar="LO:HI:COUNT")
    sw.add_argument("--probe", action="store_true")
    sw.add_argument("--jobs", type=int, default=1)

    st = sub.add_parser("selftest", help="run the invariant battery")
    st.add_argument("--quick", action="store_true", help="skip the slow checks")
    st.add_argument("--format", choices=("json", "csv"), default="json")
    st.add_argument("--output", default=None, metavar="FILE")

    return ap


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    vals = dict(_DEFAULTS)
    if getattr(args, "config", None):
        vals.update(_read_config(args.config))
    explicit_n = getattr(args, "n", None) is not None
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            vals[key] = flag
    params = LatticeParams(
        n=vals["n"], a=vals["a"], b=vals["b"], c=vals["c"],
        gamma=vals["gamma"], delta=vals["delta"],
    )
    gammas = deltas = ()
    if args.command == "sweep":
        gammas = (_parse_range(args.gamma_range) if args.gamma_range
                  else (params.gamma,))
        deltas = (_parse_range(args.delta_range) if args.delta_range
                  else (params.delta,))
    return RunConfig(
        command=args.command,
        params=params,
        fmt=getattr(args, "format", "json"),
        output=getattr(args, "output", None),
        t_end=vals["t_end"],
        rtol=vals["rtol"],
        atol=vals["atol"],
        ic=getattr(args, "ic", "uniform-x"),
        amplitude=getattr(args, "amplitude", 1e-3),
        seed=getattr(args, "seed", 0),
        classify=getattr(args, "classify", False),
        match_tol=getattr(args, "tol", 1e-2),
        input_path=getattr(args, "input", None),
        probe=getattr(args, "probe", False),
        quick=getattr(args, "quick", False),
        jobs=max(1, getattr(args, "jobs", 1)),
        gammas=tuple(gammas),
        deltas=tuple(deltas),
        explicit_n=explicit_n,
    )


def _k_label(mode: tuple, n: int) -> str:
    pred = predict_hopf_symmetries(
        IsotropySubgroup.full(n), canonical_mode(mode[0], mode[1], n), n
    )
    return pred.fixing.label()


def _sym_payload(sym) -> dict:
    return {
        "period": sym.period,
        "spatial": sym.spatial.label(),
        "fixing": sym.fixing.label(),
        "phases": sym.phases,
        "phase_fractions": sym.phase_fractions,
        "unquantized": sym.unquantized,
        "match_residual": sym.match_residual,
    }


def _cmd_spectrum(cfg: RunConfig):
    records = spectrum_report(cfg.params)
    payload = {
        "command": "spectrum",
        "params": asdict(cfg.params),
        "records": records,
        "max_residual": max(rec.residual for rec in records),
    }
    rows = tuple(
        (rec.r, rec.s, rec.branch, rec.eigenvalue.real, rec.eigenvalue.imag,
         rec.residual)
        for rec in records
    )
    return Report(payload, ("r", "s", "branch", "re", "im", "residual"), rows), 0


def _cmd_critical(cfg: RunConfig):
    lp = cfg.params
    cp = critical_a(lp)
    a_num = locate_stability_loss(lp, cp.a_star - 1.0, cp.a_star + 1.0)
    payload = {
        "command": "critical",
        "params": asdict(lp),
        "a_star": cp.a_star,
        "theta": cp.theta,
        "pattern": list(cp.pattern),
        "K": cp.predicted_K.label(),
        "crossing": cp.crossing,
        "mode_symmetries": {k: v.label() for k, v in cp.mode_symmetries.items()},
        "numeric_cross_check": {"a": a_num, "abs_diff": abs(a_num - cp.a_star)},
    }
    primary = cp.primary
    row = (
        lp.n, lp.a, lp.b, lp.c, lp.gamma, lp.delta, cp.a_star, cp.a_star,
        primary.r, primary.s, primary.omega, cp.predicted_K.label(),
        "undetermined",
    )
    return Report(payload, _SWEEP_HEADER, (row,)), 0


def _cmd_hopf(cfg: RunConfig):
    lp = cfg.params
    rep = hopf_crossing(lp)
    if cfg.probe:
        probe = branch_criticality_probe(rep, lp)
        rep.criticality = probe.classification
    else:
        probe = None
    k_label = _k_label(rep.mode, lp.n)
    payload = {
        "command": "hopf",
        "params": asdict(lp),
        "report": rep,
        "K": k_label,
    }
    if probe is not None:
        payload["probe"] = probe
    row = (
        lp.n, lp.a, lp.b, lp.c, lp.gamma, lp.delta, rep.a_star, rep.a_hat,
        rep.mode[0], rep.mode[1], rep.omega_hopf, k_label, rep.criticality,
    )
    return Report(payload, _SWEEP_HEADER, (row,)), 0


def _initial_state(cfg: RunConfig) -> np.ndarray:
    lp = cfg.params
    dim = 2 * lp.n * lp.n
    if cfg.ic == "uniform-x":
        z0 = np.zeros(dim)
        z0[0::2] = cfg.amplitude
        return z0
    if cfg.ic == "random":
        rng = np.random.default_rng(cfg.seed)
        return cfg.amplitude * rng.standard_normal(dim)
    # "mode": excite the eigenvector of largest real part
    from .bifurcation import origin_stability

    lead = origin_stability(lp).leading[0]
    vec = np.real(analytic_eigenvector(lead.r, lead.s, lead.branch, lp))
    scale = np.max(np.abs(vec))
    if scale == 0.0:
        vec = np.imag(analytic_eigenvector(lead.r, lead.s, lead.branch, lp))
        scale = np.max(np.abs(vec))
    return cfg.amplitude * vec / scale


def _traj_header(n: int) -> tuple:
    cols = ["t"]
    for p in range(n * n):
        i, j = p % n, p // n
        cols.append(f"x_{i + 1}_{j + 1}")
        cols.append(f"y_{i + 1}_{j + 1}")
    return tuple(cols)


def _cmd_simulate(cfg: RunConfig):
    lp = cfg.params
    z0 = _initial_state(cfg)
    traj = integrate(z0, lp, cfg.t_end, rtol=cfg.rtol, atol=cfg.atol)
    orbit = None
    sym = None
    if cfg.classify:
        orbit = detect_periodic_orbit(traj)
        if orbit is not None:
            sym = classify_spatiotemporal(orbit, lp, tol=cfg.match_tol)
    payload = {
        "command": "simulate",
        "params": asdict(lp),
        "t_end": cfg.t_end,
        "ic": cfg.ic,
        "amplitude": cfg.amplitude,
        "stats": traj.stats,
        "accepted_nodes": int(traj.times.size),
        "final_state": traj.final_state,
        "orbit": None if orbit is None else {
            "period": orbit.period,
            "anchor_time": orbit.anchor_time,
            "residual": orbit.residual,
        },
        "symmetry": None if sym is None else _sym_payload(sym),
    }
    rows = tuple(
        (float(t),) + tuple(float(v) for v in state)
        for t, state in zip(traj.times, traj.states)
    )
    return Report(payload, _traj_header(lp.n), rows), 0


def _cmd_classify(cfg: RunConfig):
    data = np.loadtxt(cfg.input_path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] < 3:
        raise DomainError(f"{cfg.input_path}: expected t plus 2*N^2 state columns")
    times = data[:, 0]
    states = data[:, 1:]
    n_file = infer_n(states[0])
    lp = cfg.params
    if cfg.explicit_n and lp.n != n_file:
        raise DomainError(
            f"--n {lp.n} does not match the {n_file}x{n_file} trajectory file"
        )
    if lp.n != n_file:
        lp = replace(lp, n=n_file)
    if np.any(np.diff(times) <= 0.0):
        raise DomainError(f"{cfg.input_path}: times must increase strictly")
    rhs = make_rhs(lp)
    derivs = np.empty_like(states)
    for idx in range(states.shape[0]):
        derivs[idx] = rhs(times[idx], states[idx])
    traj = Trajectory(times=times, states=states, derivs=derivs,
                      stats={"source": cfg.input_path})
    orbit = detect_periodic_orbit(traj)
    sym = None
    if orbit is not None:
        sym = classify_spatiotemporal(orbit, lp, tol=cfg.match_tol)
    payload = {
        "command": "classify",
        "params": asdict(lp),
        "input": cfg.input_path,
        "orbit": None if orbit is None else {
            "period": orbit.period,
            "anchor_time": orbit.anchor_time,
            "residual": orbit.residual,
        },
        "symmetry": None if sym is None else _sym_payload(sym),
    }
    rows = ()
    if sym is not None:
        rows = ((lp.n, orbit.period, sym.spatial.label(), sym.fixing.label(),
                 sym.match_residual),)
    return Report(payload, ("N", "period", "spatial", "fixing", "residual"), rows), 0


def _sweep_point(point: tuple) -> tuple:
    n, a, b, c, gamma, delta, probe = point
    nan = float("nan")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            lp = LatticeParams(n=n, a=a, b=b, c=c, gamma=gamma, delta=delta)
            rep = hopf_report_at_critical(lp) if c == 0.0 else hopf_crossing(lp)
            crit = rep.criticality
            if probe:
                crit = branch_criticality_probe(rep, lp).classification
            k_label = _k_label(rep.mode, n)
        return (n, a, b, c, gamma, delta, rep.a_star, rep.a_hat,
                rep.mode[0], rep.mode[1], rep.omega_hopf, k_label, crit)
    except ValueError:
        return (n, a, b, c, gamma, delta, nan, nan, -1, -1, nan, "", "invalid")
    except RuntimeError:
        return (n, a, b, c, gamma, delta, nan, nan, -1, -1, nan, "", "failed")


def _cmd_sweep(cfg: RunConfig):
    lp = cfg.params
    points = [
        (lp.n, lp.a, lp.b, lp.c, float(g), float(d), cfg.probe)
        for g in cfg.gammas
        for d in cfg.deltas
    ]
    if cfg.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_sweep_point, points, chunksize=1))
    else:
        rows = [_sweep_point(pt) for pt in points]
    payload = {
        "command": "sweep",
        "header": list(_SWEEP_HEADER),
        "rows": [dict(zip(_SWEEP_HEADER, row)) for row in rows],
    }
    return Report(payload, _SWEEP_HEADER, tuple(rows)), 0


def _cmd_selftest(cfg: RunConfig):
    from .selftest import format_results, run_selftest

    results = run_selftest(quick=cfg.quick)
    sys.stdout.write(format_results(results) + "\n")
    payload = {
        "command": "selftest",
        "results": [
            {"name": name, "ok": ok, "detail": detail}
            for name, ok, detail in results
        ],
    }
    rows = tuple((name, ok, detail) for name, ok, detail in results)
    report = Report(payload, ("name", "ok", "detail"), rows)
    code = 0 if all(ok for _, ok, _ in results) else 3
    if cfg.output is None:
        return None, code  # plain-text summary already printed
    return report, code


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "critical": _cmd_critical,
    "hopf": _cmd_hopf,
    "simulate": _cmd_simulate,
    "classify": _cmd_classify,
    "sweep": _cmd_sweep,
    "selftest": _cmd_selftest,
}


def emit_report(result: Report, format: str = "json", path: str | None = None):
    """Serialize a Report deterministically to a path or stdout."""
    if format == "json":
        text = _serialize.dumps_json(result.payload)
    elif format == "csv":
        if result.csv_header is None:
            raise DomainError("this command has no CSV form")
        text = _serialize.csv_text(result.csv_rows, result.csv_header)
    else:
        raise DomainError(f"unknown format {format!r}")
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def parse_and_dispatch(argv=None) -> int:
    """Parse arguments, run the requested command, emit its report.

    Returns the process exit code instead of raising: 2 for anything
    rooted in bad input, 3 for numerical failures (lost brackets, step
    size underflow, drift out of an invariant subspace) and I/O errors.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help and usage errors
        code = exc.code
        return code if isinstance(code, int) else (0 if code is None else 2)
    try:
        cfg = _config_from_args(args)
        report, code = _COMMANDS[cfg.command](cfg)
        if report is not None:
            emit_report(report, cfg.fmt, cfg.output)
        return code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()

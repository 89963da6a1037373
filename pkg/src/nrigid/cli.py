"""Command-line front end: JSON configs in, CSV trajectories and
plain-text key-value reports out.

Exit codes: 0 success, 2 validation error, 3 divergence or rank loss,
4 tolerance or certification failure, 5 solver non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .body import BodyState, InertiaSpec, hat, reduced_hamiltonian
from .control import BvpProblem, shoot
from .errors import (
    CertificationError,
    ConvergenceError,
    DivergenceError,
    RankLossError,
)
from .integrate import (
    IntegratorConfig,
    Trajectory,
    integrate_euler,
    integrate_euler_poisson,
    integrate_symrep,
)
from .lift import solve_lift, verify_reduction
from .matcore import (
    inner,
    random_rotation,
    random_skew,
    random_sp,
    random_sp_group,
    require_rotation,
    rotation_defect,
    skew_defect,
)
from .moment import (
    on_action,
    on_coadjoint,
    on_momentum,
    reduced_form_check,
    sp_action,
    sp_coadjoint,
    sp_momentum,
)
from .symrep import hamiltonian, one_form

__all__ = ["main", "load_config", "load_trajectory_csv"]

_DEFAULT_TOLERANCES = {
    "e_equiv": 1e-6,
    "level_set_defect": 1e-8,
    "energy_match": 1e-6,
    "casimir_drift": 1e-8,
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_matrix(value, n, what):
    rows = np.asarray(value, dtype=float)
    if rows.shape != (n, n):
        raise ValueError(f"{what} must be an {n}x{n} matrix of rows, got shape {rows.shape}")
    return rows


def _parse_attitude(value, n, what="q0"):
    if value == "identity":
        return np.eye(n)
    m = _parse_matrix(value, n, what)
    try:
        return require_rotation(m)
    except ValueError as exc:
        raise ValueError(f"{what}: {exc}") from exc


def _parse_momentum(value, n):
    v = np.asarray(value, dtype=float)
    if n == 3 and v.shape == (3,):
        return hat(v)
    m = _parse_matrix(value, n, "pi0")
    # Skew inputs are validated, never symmetrized silently.
    if skew_defect(m) > 1e-12 * max(1.0, float(np.linalg.norm(m))):
        raise ValueError(f"pi0 is not skew-symmetric (defect {skew_defect(m):.3g})")
    return m


def load_config(path) -> dict:
    """Read and validate a run configuration."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if "n" not in raw or "lambda" not in raw:
        raise ValueError("config must provide 'n' and 'lambda'")
    n = int(raw["n"])
    spec = InertiaSpec(raw["lambda"])
    if spec.n != n:
        raise ValueError(f"lambda has {spec.n} entries, expected n = {n}")
    cfg = None
    if "integrator" in raw:
        integ = dict(raw["integrator"])
        cfg = IntegratorConfig(
            scheme=integ.get("scheme", "rk4"),
            step=float(integ["step"]),
            t_final=float(integ["t_final"]),
            project_attitude=bool(integ.get("project_attitude", False)),
            midpoint_tol=float(integ.get("midpoint_tol", 1e-13)),
            midpoint_max_iter=int(integ.get("midpoint_max_iter", 100)),
        )
    tolerances = dict(_DEFAULT_TOLERANCES)
    tolerances.update(raw.get("tolerances", {}))
    config = {
        "n": n,
        "spec": spec,
        "q0": _parse_attitude(raw.get("q0", "identity"), n),
        "pi0": _parse_momentum(raw.get("pi0", np.zeros((n, n))), n),
        "cfg": cfg,
        "seed": int(raw.get("seed", 0)),
        "outputs": dict(raw.get("outputs", {})),
        "tolerances": tolerances,
    }
    if "bvp" in raw:
        bvp = dict(raw["bvp"])
        config["bvp"] = {
            "q_target": _parse_attitude(bvp.get("q_target", "identity"), n, "q_target"),
            "tol": float(bvp.get("tol", 1e-6)),
            "max_iter": int(bvp.get("max_iter", 30)),
        }
    return config


def _out_path(args, config, key, default) -> Path:
    name = config["outputs"].get(key, default)
    base = Path(args.out) if args.out else Path(".")
    base.mkdir(parents=True, exist_ok=True)
    return base / name


def _state_columns(kind, n):
    if kind == "euler":
        return [f"pi_{i}_{j}" for i in range(n) for j in range(n)]
    if kind == "symrep":
        return [f"z_{i}_{j}" for i in range(2 * n) for j in range(n)]
    return [f"q_{i}_{j}" for i in range(n) for j in range(n)] + [
        f"pi_{i}_{j}" for i in range(n) for j in range(n)
    ]


def _flatten_state(kind, state) -> np.ndarray:
    if kind == "euler-poisson":
        return np.concatenate([state.q.ravel(), state.pi.ravel()])
    return np.asarray(state).ravel()


def _defect_channel(traj: Trajectory) -> np.ndarray:
    if traj.kind == "euler":
        return np.array([skew_defect(s) for s in traj.states])
    return traj.audits["orthogonality_defect"]


def write_trajectory_csv(path, traj: Trajectory) -> None:
    n = traj.audits["casimir_spectrum"].shape[1]
    header = (
        ["t"]
        + _state_columns(traj.kind, n)
        + ["H"]
        + [f"casimir_{k + 1}" for k in range(n)]
        + ["defect"]
    )
    defects = _defect_channel(traj)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i, t in enumerate(traj.times):
            row = (
                [t]
                + list(_flatten_state(traj.kind, traj.states[i]))
                + [traj.audits["hamiltonian"][i]]
                + list(traj.audits["casimir_spectrum"][i])
                + [defects[i]]
            )
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def load_trajectory_csv(path):
    """Reload a trajectory CSV; returns (header, rows) with float64 rows."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [
            np.array([float(tok) for tok in line.strip().split(",")])
            for line in fh
            if line.strip()
        ]
    return header, np.array(rows)


def write_report(path, entries: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in entries.items():
            if isinstance(value, float):
                fh.write(f"{key} = {_fmt(value)}\n")
            else:
                fh.write(f"{key} = {value}\n")


def _audit_summary(traj: Trajectory) -> dict:
    h = traj.audits["hamiltonian"]
    spectra = traj.audits["casimir_spectrum"]
    summary = {
        "steps": len(traj) - 1,
        "hamiltonian_initial": float(h[0]),
        "hamiltonian_drift": float(np.max(np.abs(h - h[0]))),
        "casimir_drift": float(np.max(np.abs(spectra - spectra[0]))),
        "max_defect": float(np.max(_defect_channel(traj))),
    }
    if "j_drift" in traj.audits:
        summary["j_drift"] = float(np.max(traj.audits["j_drift"]))
    return summary


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    if config["cfg"] is None:
        raise ValueError("config must provide an 'integrator' section")
    spec, cfg = config["spec"], config["cfg"]
    if args.kind == "euler":
        traj = integrate_euler(spec, config["pi0"], cfg)
    elif args.kind == "symrep":
        z0 = solve_lift(config["q0"], config["pi0"])
        traj = integrate_symrep(spec, z0, cfg)
    else:
        traj = integrate_euler_poisson(
            spec, BodyState(q=config["q0"], pi=config["pi0"]), cfg
        )
    csv_path = _out_path(args, config, "trajectory", f"{args.kind}_trajectory.csv")
    report_path = _out_path(args, config, "report", f"{args.kind}_report.txt")
    write_trajectory_csv(csv_path, traj)
    report = {"kind": traj.kind, "scheme": cfg.scheme, "step": float(cfg.step),
              "t_final": float(cfg.t_final)}
    report.update(_audit_summary(traj))
    write_report(report_path, report)
    print(f"wrote {csv_path} and {report_path}")
    return 0


def cmd_verify_reduction(args) -> int:
    config = load_config(args.config)
    if config["cfg"] is None:
        raise ValueError("config must provide an 'integrator' section")
    report = verify_reduction(config["spec"], config["q0"], config["pi0"], config["cfg"])
    tolerances = config["tolerances"]
    report_path = _out_path(args, config, "report", "reduction_report.txt")
    entries = {}
    failed = []
    for key in ("e_equiv", "level_set_defect", "energy_match", "casimir_drift"):
        entries[key] = report[key]
        entries[f"{key}_tolerance"] = float(tolerances[key])
        if report[key] > tolerances[key]:
            failed.append(key)
    write_report(report_path, entries)
    for key in ("e_equiv", "level_set_defect", "energy_match", "casimir_drift"):
        print(f"{key} = {_fmt(report[key])}")
    if failed:
        print(f"tolerance exceeded: {', '.join(failed)}", file=sys.stderr)
        return 4
    return 0


def cmd_lift(args) -> int:
    config = load_config(args.config)
    z0 = solve_lift(config["q0"], config["pi0"])
    n = config["n"]
    q0, p0 = z0[:n], z0[n:]
    momentum_residual = float(np.linalg.norm(q0.T @ p0 - p0.T @ q0 - config["pi0"]))
    print("P0 =")
    for row in p0:
        print("  " + " ".join(_fmt(v) for v in row))
    print(f"rotation_defect = {_fmt(rotation_defect(p0))}")
    print(f"momentum_residual = {_fmt(momentum_residual)}")
    return 0


def cmd_solve_bvp(args) -> int:
    config = load_config(args.config)
    if config["cfg"] is None or "bvp" not in config:
        raise ValueError("config must provide 'integrator' and 'bvp' sections")
    problem = BvpProblem(
        spec=config["spec"],
        q0=config["q0"],
        q_target=config["bvp"]["q_target"],
        t_final=config["cfg"].t_final,
        cfg=config["cfg"],
    )
    seed = args.seed if args.seed is not None else config["seed"]
    sol = shoot(problem, tol=config["bvp"]["tol"],
                max_iter=config["bvp"]["max_iter"], seed=seed)
    report_path = _out_path(args, config, "report", "bvp_report.txt")
    entries = {
        "terminal_error": sol.terminal_error,
        "cost": sol.cost,
        "iterations": sol.iterations,
    }
    for i in range(config["n"]):
        entries[f"pi0_row_{i}"] = " ".join(_fmt(v) for v in sol.pi0[i])
    write_report(report_path, entries)
    print(f"terminal_error = {_fmt(sol.terminal_error)}")
    print(f"cost = {_fmt(sol.cost)}")
    print(f"iterations = {sol.iterations}")
    return 0


def _invariant_battery(seed: int, trials: int):
    """Seeded property battery over the momentum-map identities."""
    checks = {
        "momentum_identity_sp": 0,
        "momentum_identity_on": 0,
        "equivariance_sp": 0,
        "equivariance_on": 0,
        "hamiltonian_invariance": 0,
        "one_form_invariance": 0,
        "reduced_form_consistency": 0,
        "collective_hamiltonian": 0,
    }
    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        n = 3 + trial % 3
        spec = InertiaSpec(rng.uniform(0.5, 2.0, n))
        z = rng.uniform(-1.0, 1.0, (2 * n, n))
        zdot = rng.uniform(-1.0, 1.0, (2 * n, n))
        xi = random_sp(n, rng)
        a = random_skew(n, rng)
        b = random_skew(n, rng)
        s = random_sp_group(n, rng)
        r = random_rotation(n, rng)
        if trial % 2 == 1:
            r = r @ np.diag([-1.0] + [1.0] * (n - 1))

        if abs(inner(sp_momentum(z), xi) - one_form(z, xi @ z)) <= 1e-12:
            checks["momentum_identity_sp"] += 1
        if abs(inner(on_momentum(z), a) - one_form(z, z @ a)) <= 1e-12:
            checks["momentum_identity_on"] += 1
        if np.linalg.norm(sp_momentum(sp_action(s, z)) - sp_coadjoint(s, sp_momentum(z))) <= 1e-11:
            checks["equivariance_sp"] += 1
        if np.linalg.norm(on_momentum(on_action(z, r)) - on_coadjoint(r, on_momentum(z))) <= 1e-12:
            checks["equivariance_on"] += 1
        if abs(hamiltonian(spec, sp_action(s, z)) - hamiltonian(spec, z)) <= 1e-11:
            checks["hamiltonian_invariance"] += 1
        theta_ok = (
            abs(one_form(sp_action(s, z), s @ zdot) - one_form(z, zdot)) <= 1e-12
            and abs(one_form(on_action(z, r), zdot @ r) - one_form(z, zdot)) <= 1e-12
        )
        if theta_ok:
            checks["one_form_invariance"] += 1
        lhs, rhs = reduced_form_check(z, a, b)
        if abs(lhs - rhs) <= 1e-12:
            checks["reduced_form_consistency"] += 1
        if abs(reduced_hamiltonian(spec, on_momentum(z)) - hamiltonian(spec, z)) <= 1e-12:
            checks["collective_hamiltonian"] += 1
    return checks


def cmd_check_invariants(args) -> int:
    trials = args.trials
    checks = _invariant_battery(args.seed if args.seed is not None else 0, trials)
    ok = True
    for name, passed in checks.items():
        print(f"{name}: {passed}/{trials}")
        ok = ok and passed == trials
    if not ok:
        print("invariant battery failed", file=sys.stderr)
        return 4
    print("all invariants passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nrigid",
        description="n-dimensional rigid body runs and diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate one of the three systems")
    p_sim.add_argument("kind", choices=["euler", "symrep", "euler-poisson"])
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify-reduction", help="co-integrate both pictures and gate on tolerances")
    p_ver.add_argument("--config", required=True)
    p_ver.add_argument("--out", default=None)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.set_defaults(func=cmd_verify_reduction)

    p_lift = sub.add_parser("lift", help="construct the phase point for (q0, pi0)")
    p_lift.add_argument("--config", required=True)
    p_lift.add_argument("--out", default=None)
    p_lift.add_argument("--seed", type=int, default=None)
    p_lift.set_defaults(func=cmd_lift)

    p_bvp = sub.add_parser("solve-bvp", help="shoot for the attitude boundary value problem")
    p_bvp.add_argument("--config", required=True)
    p_bvp.add_argument("--out", default=None)
    p_bvp.add_argument("--seed", type=int, default=None)
    p_bvp.set_defaults(func=cmd_solve_bvp)

    p_chk = sub.add_parser("check-invariants", help="run the seeded property battery")
    p_chk.add_argument("--seed", type=int, default=0)
    p_chk.add_argument("--trials", type=int, default=200)
    p_chk.set_defaults(func=cmd_check_invariants)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DivergenceError, RankLossError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CertificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end.

One executable with subcommands for each engine: scalar ferromagnet
diagnostics, functional minimization, the combined variational formula, the
magnetization-region report, finite-size sampling, exact enumeration, and
named verification suites.  Reports go to stdout as JSON; bulk output is CSV.
Every artifact-producing run also writes a manifest that replays it
byte-for-byte.

Exit codes: 0 success, 1 verification failure, 2 configuration error (which
includes parameters outside an operation's domain).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import (
    build_manifest,
    load_config,
    load_manifest,
    manifest_to_bytes,
    sha256_hex,
    validate_config,
)
from .cw import (
    alpha_critical,
    beta_for_magnetization,
    cw_curve,
    cw_fixed_point,
    delta_u,
    field_condition,
    region_contains,
)
from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    GridError,
)
from .model import GaussianField, MixtureXi, TemperaturePoint, xi_eval
from .parisi import dirac, parisi_functional, parisi_minimize
from .simulator import (
    MAX_SPINS_ENUM,
    MAX_SPINS_ENUM_G4,
    MAX_SPINS_MC,
    SimulationParams,
    enumerate_exact,
    estimate_observables,
    sample_disorder,
)
from .stats import MomentAccumulator
from .variational import skfi_free_energy

CSV_HEADER = "observable,n,estimate,stderr,n_disorder,sweeps,seed"


def _field(cfg: dict) -> GaussianField:
    return GaussianField(cfg["h_mean"], cfg["h_std"])


def _xi(cfg: dict) -> MixtureXi:
    return MixtureXi(tuple(cfg["coeffs"]))


def report_bytes(report: dict) -> bytes:
    return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode("utf-8")


def rows_to_csv(rows) -> bytes:
    lines = [CSV_HEADER]
    for name, n, est, se, nd, sweeps, seed in rows:
        lines.append(f"{name},{n},{est!r},{se!r},{nd},{sweeps},{seed}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# artifact builders (pure: config in, bytes/report out); the verify module
# replays manifests through these


def build_cw_report(cfg: dict) -> dict:
    beta = cfg["beta"]
    h = _field(cfg)
    xi = _xi(cfg)
    report: dict = {
        "beta": beta,
        "coeffs": list(xi.coeffs),
        "h_mean": h.mean,
        "h_std": h.std,
    }
    report["alpha"] = alpha_critical(h)
    mu = cw_fixed_point(beta, h)
    report["mu"] = mu
    report["value"] = cw_curve(mu, beta, h)
    report["field_condition"] = field_condition(h)
    if cfg["u"] is not None:
        u = cfg["u"]
        beta_u = beta_for_magnetization(u, h)
        report["u"] = u
        report["beta_u"] = beta_u
        report["delta_u"] = delta_u(u, beta, h) if beta >= beta_u else None
        report["region_contains"] = region_contains(u, TemperaturePoint(beta, xi), h)
    return report


def build_parisi_report(cfg: dict, seed: int) -> dict:
    res = parisi_minimize(
        _xi(cfg), _field(cfg), cfg["k_max"], cfg["order"], cfg["restarts"], seed
    )
    return {
        "value": res.value,
        "measure": res.measure.to_json(),
        "diagnostics": res.diagnostics,
        "seed": seed,
    }


def build_parisi_scan_csv(cfg: dict) -> bytes:
    xi = _xi(cfg)
    h = _field(cfg)
    lines = ["q,value"]
    for q in cfg["scan_qs"]:
        val = parisi_functional(xi, h, dirac(q), order=cfg["order"])
        lines.append(f"{q!r},{val!r}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def build_free_energy_report(cfg: dict, seed: int) -> dict:
    temp = TemperaturePoint(cfg["beta"], _xi(cfg))
    rep = skfi_free_energy(
        temp,
        _field(cfg),
        scan_step=cfg["scan_step"],
        tol_omega=cfg["tol_omega"],
        merge_radius=cfg["merge_radius"],
        k_max=cfg["k_max"],
        order=cfg["order"],
        seed=seed,
    )
    out = rep.to_json()
    out["seed"] = seed
    return out


def build_region_report(cfg: dict, seed: int) -> dict:
    u = cfg["u"]
    beta = cfg["beta"]
    h = _field(cfg)
    xi = _xi(cfg)
    temp = TemperaturePoint(beta, xi)
    report: dict = {
        "u": u,
        "beta": beta,
        "coeffs": list(xi.coeffs),
        "h_mean": h.mean,
        "h_std": h.std,
        "seed": seed,
    }
    report["field_condition"] = field_condition(h)
    beta_u = beta_for_magnetization(u, h)
    report["beta_u"] = beta_u
    report["delta_u"] = delta_u(u, beta, h) if beta >= beta_u else None
    report["xi_one"] = xi_eval(xi, 1.0)
    report["region_contains"] = region_contains(u, temp, h)
    rep = skfi_free_energy(
        temp, h, scan_step=cfg["scan_step"], k_max=cfg["k_max"], order=cfg["order"], seed=seed
    )
    report["free_energy"] = rep.to_json()
    report["maximizers_outside"] = bool(rep.maximizers) and all(
        abs(m) > u for m in rep.maximizers
    )
    return report


def _enum_limit(coeffs) -> int:
    has_g4 = len(coeffs) >= 2 and coeffs[1] != 0.0
    return MAX_SPINS_ENUM_G4 if has_g4 else MAX_SPINS_ENUM


def simulate_rows(cfg: dict, seed: int, threads: int) -> list[tuple]:
    for i, n in enumerate(cfg["n_list"]):
        if n > MAX_SPINS_MC:
            raise ConfigError(
                f"n={n} exceeds the sampling limit {MAX_SPINS_MC}; shrink the "
                f"ladder entry or split the study",
                f"$.n_list[{i}]",
            )
        if cfg["enumeration_crosscheck"] and n > _enum_limit(cfg["coeffs"]):
            raise ConfigError(
                f"n={n} is too large for the enumeration crosscheck (limit "
                f"{_enum_limit(cfg['coeffs'])}); drop the crosscheck or reduce n",
                f"$.n_list[{i}]",
            )
    rows = []
    for n in cfg["n_list"]:
        params = SimulationParams(
            beta=cfg["beta"],
            coeffs=tuple(cfg["coeffs"]),
            h_mean=cfg["h_mean"],
            h_std=cfg["h_std"],
            n=n,
            n_disorder=cfg["n_disorder"],
            sweeps=cfg["sweeps"],
            burn_in=cfg["burn_in"],
            n_replicas=cfg["n_replicas"],
            include_cold=cfg["include_cold"],
            root_seed=seed,
            blocks=cfg["blocks"],
            m_windows=tuple(cfg["m_windows"]),
            overlap_thresholds=tuple(cfg["overlap_thresholds"]),
            sign_eps=cfg["sign_eps"],
            gg_level=cfg["gg_level"],
            gg_psi=cfg["gg_psi"],
            gg_absolute=cfg["gg_absolute"],
            enumeration_crosscheck=cfg["enumeration_crosscheck"],
            want_r4=cfg["want_r4"],
            threads=threads,
        )
        result = estimate_observables(params)
        nd = params.n_disorder
        for name in sorted(result.acc.names()):
            se = result.stderr(name) if nd >= 2 else 0.0
            rows.append((name, n, result.mean(name), se, nd, params.sweeps, seed))
        rows.append(
            ("replica_checks", n, float(result.replica_checks), 0.0, nd, params.sweeps, seed)
        )
        rows.append(
            (
                "replica_violations",
                n,
                float(result.replica_violations),
                0.0,
                nd,
                params.sweeps,
                seed,
            )
        )
    return rows


def build_simulate_csv(cfg: dict, seed: int, threads: int) -> bytes:
    return rows_to_csv(simulate_rows(cfg, seed, threads))


def build_enumerate_csv(cfg: dict, seed: int) -> bytes:
    n = cfg["n"]
    limit = _enum_limit(cfg["coeffs"])
    if n > limit:
        raise ConfigError(
            f"n={n} exceeds the exact-enumeration limit {limit}; reduce n to at "
            f"most {limit} or use the simulate command",
            "$.n",
        )
    xi = _xi(cfg)
    h = _field(cfg)
    acc = MomentAccumulator()
    nd = cfg["n_disorder"]
    for i in range(nd):
        d = sample_disorder(xi, h, n, i, seed)
        ex = enumerate_exact(d, cfg["beta"], cfg["want_r4"])
        vals = {
            "exact_f": ex.free_energy,
            "exact_m": ex.m_mean,
            "exact_m_abs": ex.m_abs,
            "exact_m2": ex.m2,
            "exact_r2": ex.r2,
        }
        if cfg["want_r4"]:
            vals["exact_r4"] = ex.r4
        acc.add_dict(vals)
    rows = [
        (name, n, acc.mean(name), acc.stderr(name) if nd >= 2 else 0.0, nd, 0, seed)
        for name in sorted(acc.names())
    ]
    return rows_to_csv(rows)


def replay_artifact(command: str, cfg: dict, seed: int, threads: int) -> bytes:
    """Regenerate a manifest's artifact bytes from its validated config."""
    if command == "cw":
        return report_bytes(build_cw_report(cfg))
    if command == "parisi":
        if cfg["one_atom_scan"]:
            return build_parisi_scan_csv(cfg)
        return report_bytes(build_parisi_report(cfg, seed))
    if command == "free-energy":
        return report_bytes(build_free_energy_report(cfg, seed))
    if command == "region":
        return report_bytes(build_region_report(cfg, seed))
    if command == "simulate":
        return build_simulate_csv(cfg, seed, threads)
    if command == "enumerate":
        return build_enumerate_csv(cfg, seed)
    raise ConfigError(f"command {command!r} has no replayable artifact")


# ---------------------------------------------------------------------------
# orchestration


def _write_run(out_dir: str, command: str, cfg: dict, seed: int, name: str, data: bytes) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_bytes(data)
    manifest = build_manifest(command, cfg, seed, name, data)
    mpath = out / f"{command}.manifest.json"
    mpath.write_bytes(manifest_to_bytes(manifest))
    return {"artifact": str(out / name), "manifest": str(mpath)}


def _require_config(args) -> dict:
    if not args.config:
        raise ConfigError(f"the {args.command} command requires --config PATH")
    return load_config(args.config, args.command)


def _dispatch(args) -> int:
    command = args.command
    seed = args.seed
    if seed < 0:
        raise ConfigError(f"--seed must be nonnegative, got {seed}")
    threads = args.threads
    if threads < 0:
        raise ConfigError(f"--threads must be nonnegative, got {threads}")
    if threads == 0:
        import os

        threads = os.cpu_count() or 1

    if command == "verify":
        return _cmd_verify(args, seed, threads)

    cfg = _require_config(args)
    if command == "parisi" and getattr(args, "one_atom_scan", False):
        cfg["one_atom_scan"] = True

    if command == "simulate":
        data = build_simulate_csv(cfg, seed, threads)
        paths = _write_run(args.out, command, cfg, seed, "simulate.csv", data)
        print(json.dumps(paths))
        return 0
    if command == "enumerate":
        data = build_enumerate_csv(cfg, seed)
        paths = _write_run(args.out, command, cfg, seed, "enumerate.csv", data)
        print(json.dumps(paths))
        return 0
    if command == "parisi" and cfg["one_atom_scan"]:
        data = build_parisi_scan_csv(cfg)
        paths = _write_run(args.out, command, cfg, seed, "parisi_scan.csv", data)
        print(json.dumps(paths))
        return 0

    if command == "cw":
        report = build_cw_report(cfg)
    elif command == "parisi":
        report = build_parisi_report(cfg, seed)
    elif command == "free-energy":
        report = build_free_energy_report(cfg, seed)
    elif command == "region":
        report = build_region_report(cfg, seed)
    else:  # pragma: no cover - argparse restricts the choices
        raise ConfigError(f"unknown command {command!r}")
    data = report_bytes(report)
    _write_run(args.out, command, cfg, seed, f"{command}.json", data)
    sys.stdout.write(data.decode("utf-8"))
    return 0


def _cmd_verify(args, seed: int, threads: int) -> int:
    from . import verify

    if args.suite not in verify.SUITES:
        known = ", ".join(sorted(verify.SUITES))
        raise ConfigError(f"unknown suite {args.suite!r}; available suites: {known}")
    results = verify.run_suite(
        args.suite, root_seed=seed, threads=threads, out_dir=args.out, manifest=args.manifest
    )
    for res in results:
        print(res.line)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "suite": args.suite,
        "root_seed": seed,
        "results": [res.to_json() for res in results],
        "passed": all(res.passed for res in results),
    }
    (out / f"verify_{args.suite}.json").write_bytes(report_bytes(payload))
    return 0 if payload["passed"] else 1


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # suppress=True on subparsers so values given before the subcommand are
    # not clobbered by subparser defaults
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument(
        "--config",
        metavar="PATH",
        default=d if suppress else None,
        help="JSON config file for the subcommand",
    )
    parser.add_argument(
        "--seed",
        type=int,
        metavar="U64",
        default=d if suppress else 0,
        help="root seed for every random stream (default 0)",
    )
    parser.add_argument(
        "--out",
        metavar="DIR",
        default=d if suppress else ".",
        help="directory for artifacts and manifests (default .)",
    )
    parser.add_argument(
        "--threads",
        type=int,
        metavar="INT",
        default=d if suppress else 1,
        help="worker processes; 0 = one per CPU (default 1)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skcw",
        description="Mixed even-spin glass with a mean-field ferromagnetic "
        "coupling: analytic layers, finite-size sampling, verification.",
    )
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "cw": "scalar ferromagnet diagnostics (critical coupling, fixed point, region)",
        "parisi": "minimize the hierarchical functional; --one-atom-scan emits a CSV",
        "free-energy": "combined variational formula with maximizer classification",
        "region": "forced-magnetization region report",
        "simulate": "finite-size sampling ladder, CSV plus manifest",
        "enumerate": "exact small-size enumeration, CSV plus manifest",
        "verify": "run a named verification suite",
    }
    for name in ("cw", "parisi", "free-energy", "region", "simulate", "enumerate"):
        p = sub.add_parser(name, help=helps[name])
        _add_common(p, suppress=True)
        if name == "parisi":
            p.add_argument(
                "--one-atom-scan",
                action="store_true",
                help="emit the single-atom value curve as CSV instead of minimizing",
            )
    pv = sub.add_parser("verify", help=helps["verify"])
    _add_common(pv, suppress=True)
    pv.add_argument("suite", help="suite name; pass an unknown name to list suites")
    pv.add_argument(
        "--manifest",
        metavar="PATH",
        default=None,
        help="manifest to replay (manifest-replay suite only)",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(json.dumps({"error": str(exc), "field": exc.field}), file=sys.stderr)
        return 2
    except (DomainError, GridError, BracketError, ConvergenceError, EvaluationError) as exc:
        print(
            json.dumps({"error": str(exc), "type": type(exc).__name__}),
            file=sys.stderr,
        )
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

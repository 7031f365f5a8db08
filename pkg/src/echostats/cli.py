"""Command-line front end.

Every command writes CSV data plus a ``metadata.json`` that records all
resolved parameters; ``--from-metadata`` replays a run from that file.

Exit codes: 0 ok, 1 usage error, 2 numerical failure, 3 verification failure.
"""
from __future__ import annotations

import argparse
import concurrent.futures as cf
import csv
import json
import math
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, distribution as dist, dynamics, moments, oracle, spectral, thermo
from .errors import EchoStatsError, PeakCapWarning, QuadratureError, ResourceGuardError
from .ising import QuenchSpec, mode_data
from .sampling import default_horizon

SCHEMA_VERSION = 1
COMMANDS = ("series", "moments", "spectrum", "distribution", "sweep", "thermo", "magnetization", "verify")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.16e}"


def write_csv(path: Path, header, rows) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
    return path


def write_metadata(out: Path, command: str, params: dict, results: dict, files) -> Path:
    meta = {
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "command": command,
        "params": params,
        "results": _jsonable(results),
        "files": sorted(Path(f).name for f in files),
    }
    path = out / "metadata.json"
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _spec(p) -> QuenchSpec:
    try:
        return QuenchSpec(p["h1"], p["h2"], p["size"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _thresholds(p) -> dist.RegimeThresholds:
    return dist.RegimeThresholds(**p["thresholds"])


# ---------------------------------------------------------------- commands

def run_series(p, out: Path):
    md = mode_data(_spec(p))
    t = np.linspace(0.0, p["t_max"], p["points"])
    echo = dynamics.loschmidt(md, t)
    gauss = dynamics.short_time_gaussian(md, t)
    first = spectral.first_order_echo(md, t)
    f = write_csv(out / "series.csv", ["t", "echo", "gaussian", "first_order"], zip(t, echo, gauss, first))
    res = {"mean_log": moments.mean_echo_log(md), "energy_variance": dynamics.energy_variance(md)}
    return res, [f]


def run_moments(p, out: Path):
    md = mode_data(_spec(p))
    rows = []
    for n in range(1, p["orders"] + 1):
        r = moments.moment_report(md, n)
        nr = r.nonresonant_log if r.nonresonant_log is not None else math.nan
        rows.append((n, r.exact_log, nr, math.lgamma(n + 1) + n * r.mean_log))
    f = write_csv(out / "moments.csv", ["order", "exact_log", "nonresonant_log", "bound_log"], rows)
    nr = moments.nonresonant_moments(md)
    res = {
        "mean_log": moments.mean_echo_log(md),
        "variance": moments.exact_variance(md),
        "variance_nr": nr.variance,
        "bound_holds": moments.moment_bound_check(md, max(2, p["orders"])).holds if p["orders"] >= 2 else None,
    }
    return res, [f]


def run_spectrum(p, out: Path):
    md = mode_data(_spec(p))
    m = spectral.spectral_measure(md)
    f1 = m.to_csv(out / "spectrum.csv")
    om, amp = spectral.one_particle_amplitude(md)
    f2 = write_csv(out / "one_particle.csv", ["omega", "amplitude"], zip(om, amp))
    res = {"n_atoms": m.n_atoms, "zero_weight": m.zero_weight, "discarded_mass": m.discarded_mass,
           "merge_tol": m.merge_tol, "prune_tol": m.prune_tol}
    if not md.trivial:
        res["revival_time"] = spectral.revival_time(m)
    if md.n_modes >= 2:
        res["gap_10"], res["gap_11"] = spectral.gap_scales(md)
    return res, [f1, f2]


def run_distribution(p, out: Path):
    spec = _spec(p)
    md = mode_data(spec)
    T = p["horizon"] if p["horizon"] is not None else default_horizon(spec.L)
    samples = dist.sample_echo(md, T, p["samples"], p["seed"])
    emp = dist.histogram(samples, p["bins"], t_horizon=T, seed=p["seed"])
    f1 = emp.to_csv(out / "histogram.csv")
    th = _thresholds(p)
    regime = dist.classify_regime(spec, th)
    ml = moments.mean_echo_log(md)
    var = moments.exact_variance(md)
    x = np.linspace(emp.bin_edges[0], emp.bin_edges[-1], 4 * emp.n_bins + 1)
    distances = {}
    files = [f1]
    if regime is not dist.Regime.DEGENERATE:
        distances["exponential"] = dist.distribution_distance(emp, cdf=lambda e: dist.exponential_cdf(ml, e))
        if var > 0:
            distances["gaussian"] = dist.distribution_distance(
                emp, cdf=lambda e: dist.gaussian_cdf(math.exp(ml), var, e))
        curve = None
        if regime is dist.Regime.EXPONENTIAL:
            curve = dist.exponential_density(ml, x)
        elif regime is dist.Regime.GAUSSIAN:
            curve = dist.gaussian_density(math.exp(ml), var, x)
        else:
            bp = dist.batman_params(spectral.spectral_measure(md), ml)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PeakCapWarning)
                curve = dist.batman_density(bp, x)
            distances["batman"] = dist.distribution_distance(emp, bin_masses=dist.batman_bin_masses(bp, emp.bin_edges))
        files.append(dist.model_curve_csv(out / "model.csv", x, curve))
    res = {"regime": regime.value, "horizon": T, "sample_mean": float(samples.mean()),
           "sample_variance": float(samples.var()), "mean": math.exp(ml), "variance": var,
           "tv_distance": distances}
    return res, files


def _sweep_row(args):
    h1, h2, L, th = args
    spec = QuenchSpec(h1, h2, L)
    md = mode_data(spec)
    nr = moments.nonresonant_moments(md)
    var = moments.exact_variance(md)
    regime = dist.classify_regime(spec, dist.RegimeThresholds(**th))
    return (h1, h2, math.exp(moments.mean_echo_log(md)), var, nr.variance, regime.value, var >= nr.variance)


def parse_grid(text: str):
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise UsageError(f"--grid expects lo:hi:n, got {text!r}") from exc
    if n < 1:
        raise UsageError("--grid needs n >= 1")
    return np.linspace(lo, hi, n).tolist()


def run_sweep(p, out: Path):
    L = _spec({**p, "h1": 0.0, "h2": 0.0}).L
    axis = parse_grid(p["grid"])
    jobs = [(h1, h2, L, p["thresholds"]) for h1 in axis for h2 in axis]
    if p["workers"] > 1:
        with cf.ProcessPoolExecutor(max_workers=p["workers"]) as ex:
            rows = list(ex.map(_sweep_row, jobs, chunksize=max(1, len(jobs) // (4 * p["workers"]))))
    else:
        rows = [_sweep_row(j) for j in jobs]
    f = write_csv(out / "sweep.csv", ["h1", "h2", "mean", "variance", "variance_nr", "regime", "inequality_holds"], rows)
    res = {"rows": len(rows), "inequality_violations": sum(1 for r in rows if not r[-1])}
    return res, [f]


def run_thermo(p, out: Path):
    h1, h2 = p["h1"], p["h2"]
    asym = thermo.thermo_asymptotics(h1, h2)
    t = np.linspace(p["t_min"], p["t_max"], p["points"])
    s = np.array([thermo.s_of_t(h1, h2, ti) for ti in t])
    if math.isfinite(asym.A_m) and p["t_min"] > 0:
        a = thermo.asymptotic_s(h1, h2, t, s_inf=asym.s_inf)
    else:
        a = np.full_like(t, math.nan)
    f = write_csv(out / "thermo.csv", ["t", "s", "asymptotic_s"], zip(t, s, a))
    return asym.as_dict(), [f]


def run_magnetization(p, out: Path):
    spec = _spec(p)
    t = np.linspace(0.0, p["t_max"], p["points"])
    m = dynamics.magnetization(spec, t)
    f = write_csv(out / "magnetization.csv", ["t", "m"], zip(t, m))
    res = {"mean": dynamics.magnetization_mean(spec), "variance": dynamics.magnetization_variance(spec)}
    return res, [f]


_G0_TABLE = {
    1: [Fraction(-1, 2)],
    2: [Fraction(-1), Fraction(3, 8)],
    3: [Fraction(-3, 2), Fraction(9, 8), Fraction(-5, 16)],
    4: [Fraction(-2), Fraction(9, 4), Fraction(-5, 4), Fraction(35, 128)],
}


def verification_checks(h1: float, h2: float, L: int, seed: int = 0) -> dict:
    """Named oracle and identity checks; each maps to (passed, detail)."""
    spec = QuenchSpec(h1, h2, L)
    md = mode_data(spec)
    ens = oracle.enumerate_states(md)
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 100.0, 200)
    out = {}

    err = float(np.max(np.abs(dynamics.loschmidt(md, t) - oracle.brute_echo(ens, t))))
    out["oracle_echo"] = (err <= 1e-10, err)

    err = abs(math.exp(moments.mean_echo_log(md)) - oracle.power_sum(ens, 1))
    out["mean_identity"] = (err <= 1e-12, err)

    a = md.alpha
    closed = math.exp(math.fsum(np.log(1.0 - a + a * a / 8.0).tolist()))
    err = abs(closed - oracle.power_sum(ens, 2))
    out["power_sum_identity"] = (err <= 1e-12, err)

    ok = all(moments.g0_polynomial(n) == c for n, c in _G0_TABLE.items())
    xs = np.linspace(0.0, 1.0, 11)
    num = max(abs(moments.g0_coefficient(n, x) - float(sum(c * Fraction(x) ** (m + 1) for m, c in enumerate(cs))))
              for n, cs in _G0_TABLE.items() for x in xs)
    out["g0_expansions"] = (ok and num <= 1e-14, num)

    ens_small = oracle.enumerate_states(mode_data(QuenchSpec(h1, h2, min(L, 8))))
    md_small = mode_data(QuenchSpec(h1, h2, min(L, 8)))
    rel = max(abs(math.exp(moments.exact_moment_log(md_small, n)) / oracle.oracle_moment(ens_small, n) - 1.0)
              for n in (1, 2, 3))
    out["exact_moments"] = (rel <= 1e-9, rel)

    lv = math.exp(moments.exact_moment_log(md, 2)) - math.exp(2.0 * moments.mean_echo_log(md))
    v = moments.exact_variance(md)
    rel = abs(lv - v) / max(v, 1e-300)
    out["variance_identity"] = (rel <= 1e-8, rel)

    out["derangements"] = ([moments.derangement_count(k) for k in (2, 3, 4)] == [1, 2, 9], None)

    m = spectral.spectral_measure(md)
    err = float(np.max(np.abs(m.evaluate(t) - dynamics.loschmidt(md, t))))
    out["spectral_reconstruction"] = (err <= m.discarded_mass + 1e-10, err)

    err = max(abs(l - r) for l, r in (thermo.series_identity_check(x) for x in (0.1, 0.5, 0.9)))
    out["series_identity"] = (err <= 1e-12, err)
    return out


def run_verify(p, out: Path):
    spec = _spec(p)
    if spec.L > oracle.MAX_ORACLE_L:
        raise ResourceGuardError(f"oracle checks need L <= {oracle.MAX_ORACLE_L}, got L = {spec.L}")
    restore = None
    if p.get("inject_fault") == "g0-sign":
        restore = moments.g0_coefficient

        def flipped(n, alpha):
            return -restore(n, alpha)

        moments.g0_coefficient = flipped
    try:
        checks = verification_checks(spec.h1, spec.h2, spec.L, p["seed"])
    finally:
        if restore is not None:
            moments.g0_coefficient = restore
    rows = [(name, bool(ok), "" if d is None else _fmt(d)) for name, (ok, d) in checks.items()]
    f = write_csv(out / "verify.csv", ["check", "passed", "detail"], rows)
    res = {"checks": {n: bool(ok) for n, (ok, _) in checks.items()}, "all_passed": all(ok for ok, _ in checks.values())}
    return res, [f]


RUNNERS = {
    "series": run_series,
    "moments": run_moments,
    "spectrum": run_spectrum,
    "distribution": run_distribution,
    "sweep": run_sweep,
    "thermo": run_thermo,
    "magnetization": run_magnetization,
    "verify": run_verify,
}

# resolved parameters recorded for every command
DEFAULTS = {
    "h1": 0.3, "h2": 1.4, "size": 18,
    "t_max": 100.0, "t_min": 1.0, "points": 1001,
    "samples": 400_000, "horizon": None, "seed": 0, "bins": 50,
    "grid": "-2:2:21", "orders": 6, "workers": None,
    "thresholds": dist.RegimeThresholds().as_dict(),
    "inject_fault": None,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="echostats", description="Loschmidt echo statistics for the transverse-field Ising chain.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--h1", type=float, help="initial coupling")
    common.add_argument("--h2", type=float, help="evolution coupling")
    common.add_argument("--size", "-L", type=int, help="chain length (even)")
    common.add_argument("--t-max", type=float, help="end of the time grid")
    common.add_argument("--t-min", type=float, help="start of the time grid (thermo)")
    common.add_argument("--points", type=int, help="number of grid points")
    common.add_argument("--samples", type=int, help="number of time samples")
    common.add_argument("--horizon", type=float, help="sampling horizon T (default max(1e4, 1000 L))")
    common.add_argument("--seed", type=int, help="sampler seed")
    common.add_argument("--bins", type=int, help="histogram bins")
    common.add_argument("--grid", help="sweep axis lo:hi:n, used for both h1 and h2")
    common.add_argument("--orders", type=int, help="highest moment order")
    common.add_argument("--workers", type=int, help="parallel workers (default: $ECHOSTATS_WORKERS or 1)")
    common.add_argument("--delta-small", type=float, help="classifier: largest |h2 - h1| for two-peak regime")
    common.add_argument("--c-qc", type=float, help="classifier: quasi-critical bound on L |1 - h2|")
    common.add_argument("--c-exp", type=float, help="classifier: -log(mean echo) for the exponential regime")
    common.add_argument("--out", "-o", default=".", help="output directory")
    common.add_argument("--from-metadata", help="replay the parameters recorded in a metadata.json")
    common.add_argument("--inject-fault", choices=["g0-sign"], help=argparse.SUPPRESS)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=f"run the {name} computation")
    return ap


def resolve_params(args) -> tuple[str, dict]:
    params = {k: (dict(v) if isinstance(v, dict) else v) for k, v in DEFAULTS.items()}
    command = args.command
    if args.from_metadata:
        try:
            meta = json.loads(Path(args.from_metadata).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read metadata {args.from_metadata}: {exc}") from exc
        if meta.get("schema_version") != SCHEMA_VERSION:
            raise UsageError(f"unsupported metadata schema {meta.get('schema_version')!r}")
        params.update(meta["params"])
        if meta.get("command") != command:
            raise UsageError(f"metadata records command {meta.get('command')!r}, not {command!r}")
    v = vars(args)
    for key in ("h1", "h2", "size", "t_max", "t_min", "points", "samples", "horizon", "seed", "bins",
                "grid", "orders", "workers", "inject_fault"):
        if v.get(key) is not None:
            params[key] = v[key]
    for key in ("delta_small", "c_qc", "c_exp"):
        if v.get(key) is not None:
            params["thresholds"][key] = v[key]
    if params["workers"] is None:
        env = os.environ.get("ECHOSTATS_WORKERS")
        try:
            params["workers"] = int(env) if env else 1
        except ValueError as exc:
            raise UsageError(f"ECHOSTATS_WORKERS must be an integer, got {env!r}") from exc
    if params["workers"] < 1:
        raise UsageError("--workers must be >= 1")
    if params["points"] < 2 or params["samples"] < 1 or params["bins"] < 2 or params["orders"] < 1:
        raise UsageError("points >= 2, samples >= 1, bins >= 2 and orders >= 1 are required")
    if params["horizon"] is not None and not params["horizon"] > 0:
        raise UsageError("--horizon must be positive")
    return command, params


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        command, params = resolve_params(args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        results, files = RUNNERS[command](params, out)
        # the workers count does not change any output; keep metadata identical across machines
        recorded = {k: v for k, v in params.items() if k != "workers"}
        write_metadata(out, command, recorded, results, files)
    except (UsageError, ResourceGuardError) as exc:
        print(f"echostats: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"echostats: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, EchoStatsError, ArithmeticError, ValueError) as exc:
        print(f"echostats: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if command == "verify":
        for name, ok in results["checks"].items():
            print(f"{'PASS' if ok else 'FAIL'} {name}")
        return EXIT_OK if results["all_passed"] else EXIT_VERIFY
    print(json.dumps(_jsonable(results), sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command line driver: writes figure-ready CSV/JSON for each experiment.

    primelab series  --b 1e7 --zeros z.txt --with-direct --out series.csv
    primelab dist    --b 1e7 --zeros z.txt --midform --out dist.csv
    primelab scatter --b 1e8 --zeros z.txt --samples 2005 --out-dir fig3/
    primelab mc      --b 1e5 --zeros z.txt --lambda 1 --trials 200 --seed 42 --out mc.json
    primelab validate --zeros z.txt --report report.json
    primelab fetch-zeros --count 100000 [--offline]

Exit codes: 0 success, 1 failed checks, 2 bad input, 3 resource problem.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, explicit, kacdist, stats, zeros
from .explicit import ConfigError, ExperimentConfig
from .sieve import CapacityError, Sieve

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

CONFIG_FLAGS = {"b": "b", "vartheta": "theta_frac", "rho": "rho", "eta": "eta",
                "samples": "sample_count", "seed": "rng_seed"}


def fmt(v) -> str:
    """Shortest round-trip decimal for floats; integers verbatim."""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_json(path: Path, obj) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def write_manifest(path: Path, cfg: ExperimentConfig, table, outputs: list[Path], started: str) -> Path:
    manifest = {
        "config": cfg.to_dict(),
        "zeros_source": table.source if table is not None else None,
        "zeros_count_used": len(table.upto(cfg.cutoff)) if table is not None else 0,
        "tool_version": __version__,
        "started": started,
        "finished": _now(),
        "outputs": {p.name: zeros.sha256_file(p) for p in outputs},
    }
    return write_json(path, manifest)


def build_config(args) -> ExperimentConfig:
    data = {}
    if getattr(args, "config", None):
        data.update(json.loads(Path(args.config).read_text()))
    for flag, name in CONFIG_FLAGS.items():
        val = getattr(args, flag, None)
        if val is not None:
            data[name] = val
    if "b" not in data:
        raise ConfigError("--b is required (flag or config file)")
    for key in ("sample_count", "rng_seed"):
        if key in data:
            data[key] = int(data[key])
    return ExperimentConfig.from_dict(data)


def load_table(args, cfg: ExperimentConfig):
    if not args.zeros:
        raise ConfigError("--zeros is required for this command")
    return zeros.load_zeros(args.zeros, max_height=cfg.cutoff)


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return val


def _at_least_two(text: str) -> int:
    val = int(text)
    if val < 2:
        raise argparse.ArgumentTypeError(f"expected at least 2, got {text}")
    return val


def cmd_series(args) -> int:
    started = _now()
    cfg = build_config(args)
    table = load_table(args, cfg)
    sieve = None
    if args.with_direct or args.with_ratio:
        sieve = Sieve(math.ceil(cfg.b + cfg.eta * cfg.sigma) + 2)
    xs = explicit.sample_points(cfg, random=args.random)
    if args.with_direct:
        xs = np.unique(np.round(xs))
    samples = explicit.series(cfg, table, xs, sieve, args.with_direct, args.with_ratio)
    header = ["x", "s_hat"] + (["s_direct"] if args.with_direct else []) \
        + (["r_sigma"] if args.with_ratio else [])
    rows = ([s.x, s.s_hat] + ([s.s_direct] if args.with_direct else [])
            + ([s.r_sigma] if args.with_ratio else []) for s in samples)
    out = write_csv(Path(args.out), header, rows)
    manifest = Path(args.manifest) if args.manifest else out.with_name("manifest.json")
    write_manifest(manifest, cfg, table, [out], started)
    return EXIT_OK


def lambda_grid(cfg: ExperimentConfig, points: int, span: float) -> np.ndarray:
    sd = cfg.level_sd()
    return np.linspace(1 - span * sd, 1 + span * sd, points)


def cmd_dist(args) -> int:
    cfg = build_config(args)
    table = load_table(args, cfg) if (args.midform or args.empirical) else None
    lams = lambda_grid(cfg, args.points, args.span)
    cols = [lams, kacdist.level_density(lams, cfg, "closed").expected_counts]
    header = ["lambda", "expected_closed"]
    if args.midform:
        cols.append(kacdist.level_density(lams, cfg, "midform", table).expected_counts)
        header.append("expected_midform")
    if args.empirical:
        values = explicit.s_hat(explicit.sample_points(cfg, random=args.random), cfg, table)
        cols.append(np.array(stats.level_crossings(values, lams)))
        header.append("empirical")
    rows = zip(*[c.tolist() for c in cols])
    write_csv(Path(args.out), header, rows)
    return EXIT_OK


def cmd_scatter(args) -> int:
    started = _now()
    cfg = build_config(args)
    table = load_table(args, cfg)
    sieve = Sieve(math.ceil(cfg.b + cfg.sigma) + 2)
    xs = explicit.sample_points(cfg, random=args.random)
    sh = explicit.s_hat(xs, cfg, table)
    rs = explicit.r_sigma(xs, cfg, sieve)
    out_dir = Path(args.out_dir)
    scatter = write_csv(out_dir / "scatter.csv", ["x", "s_hat", "r_sigma"],
                        zip(xs.tolist(), sh.tolist(), rs.tolist()))
    rep = stats.fit_report(sh, rs, cfg, bin_count=args.bins)
    fit = write_json(out_dir / "fit.json", {
        "m": rep.m, "r": rep.r, "m_over_r": rep.ratio, "variance": rep.variance,
        "band_fraction": rep.band_fraction, "gof_stat": rep.gof_stat,
        "p_value": rep.p_value, "n_points": rep.n_points})
    write_manifest(out_dir / "manifest.json", cfg, table, [scatter, fit], started)
    return EXIT_OK


def cmd_mc(args) -> int:
    cfg = build_config(args)
    table = load_table(args, cfg)
    sd = cfg.level_sd()
    levels = list(args.levels or [])
    levels += [1.0 + k * sd for k in (args.sd_levels or [])]
    if not levels:
        levels = [1.0]
    seed = cfg.rng_seed
    out = []
    for lam in levels:
        mean, se = kacdist.simulate_crossings(cfg, table, lam, args.trials, seed)
        out.append({"level": lam, "trials": args.trials, "seed": seed, "mean": mean,
                    "stderr": se,
                    "midform": kacdist.expected_level_count_midform(lam, cfg, table),
                    "closed": kacdist.expected_level_count_closed(lam, cfg)})
    write_json(Path(args.out), out)
    return EXIT_OK


def cmd_validate(args) -> int:
    from . import validation

    report = validation.run_suite(args.zeros, quick=args.quick)
    write_json(Path(args.report), report)
    for item in report["checks"]:
        print(f"{'PASS' if item['passed'] else 'FAIL'}  {item['name']}: {item['detail']}")
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_fetch_zeros(args) -> int:
    path = zeros.fetch_zeros(args.url, args.cache_dir, args.count, offline=args.offline)
    print(path)
    return EXIT_OK


def _config_flags(p: argparse.ArgumentParser, samples: bool = True) -> None:
    p.add_argument("--config", help="JSON file with config fields; flags override it")
    p.add_argument("--b", type=float, help="right endpoint b")
    p.add_argument("--vartheta", type=float, help="a = vartheta * b (default 0.5)")
    p.add_argument("--rho", type=float, help="sigma^2 = rho b log b, rho > 3 (default 3.1)")
    p.add_argument("--eta", type=float, help="window multiplier (default 4)")
    p.add_argument("--seed", type=int, help="RNG seed")
    p.add_argument("--zeros", help="zero-ordinate table, one per line")
    if samples:
        p.add_argument("--samples", type=_positive_int, help="number of sample points (default 2000)")
        p.add_argument("--random", action="store_true",
                       help="seeded uniform draws instead of the midpoint grid")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="primelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="s_hat (and optionally S, R) on a grid in (a, b)")
    _config_flags(p)
    p.add_argument("--with-direct", action="store_true", help="add the direct sieve sum")
    p.add_argument("--with-ratio", action="store_true", help="add the prime ratio R_sigma")
    p.add_argument("--out", default="series.csv")
    p.add_argument("--manifest", help="manifest path (default: manifest.json beside --out)")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("dist", help="expected level counts over a lambda grid")
    _config_flags(p)
    p.add_argument("--points", type=_positive_int, default=121)
    p.add_argument("--span", type=float, default=3.0, help="grid half-width in units of sd")
    p.add_argument("--midform", action="store_true", help="add the exact-moment integral")
    p.add_argument("--empirical", action="store_true", help="add crossing counts of sampled s_hat")
    p.add_argument("--out", default="dist.csv")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("scatter", help="(s_hat, R_sigma) pairs and their fit report")
    _config_flags(p)
    p.add_argument("--bins", type=_positive_int, default=20)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("mc", help="random-phase Monte Carlo of level crossings")
    _config_flags(p, samples=False)
    p.add_argument("--lambda", dest="levels", type=float, action="append",
                   help="level (repeatable)")
    p.add_argument("--sd-level", dest="sd_levels", type=float, action="append",
                   help="level 1 + k*sd (repeatable)")
    p.add_argument("--trials", type=_at_least_two, default=200)
    p.add_argument("--out", default="mc.json")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("validate", help="run the invariant suite")
    p.add_argument("--zeros", required=True)
    p.add_argument("--report", default="report.json")
    p.add_argument("--quick", action="store_true", help="fewer samples and trials")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fetch-zeros", help="download and cache a public zero table")
    p.add_argument("--url", default=zeros.DEFAULT_URL)
    p.add_argument("--count", type=_positive_int, default=100_000)
    p.add_argument("--cache-dir", default=None, help="default: $PRIMELAB_CACHE or ~/.cache/primelab")
    p.add_argument("--offline", action="store_true", help="never touch the network")
    p.set_defaults(func=cmd_fetch_zeros)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, zeros.ZeroTableError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"primelab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapacityError, kacdist.ResourceError, MemoryError,
            zeros.NetworkError, zeros.CorruptCacheError) as exc:
        print(f"primelab: error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"primelab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

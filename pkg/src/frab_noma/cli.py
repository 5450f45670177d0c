"""Command-line front end: presets, config files, CSV/JSON emission.

Exit codes: 0 success, 2 I/O problems, 3 configuration problems.

CSV schema (long format, one row per sweep point and series):
    tx_dbm,rho_linear,series,mean,ci95_half,provenance,n_trials
Every run also writes a JSON sidecar with the fully resolved config, seed,
git description and wall-clock duration, which suffices to reproduce the
CSV byte for byte.
"""

import argparse
import json
import subprocess
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__, analysis
from .engine import SystemConfig, run_sweep
from .errors import InsufficientDataError, InvalidConfigError

DEFAULT_SEED = 1

EXIT_OK = 0
EXIT_IO = 2
EXIT_CONFIG = 3


def preset_config(name, m_antennas=None):
    """The figure presets; fig2 couples the S2 group size to the antenna count."""
    if name in ("fig1-rayleigh", "fig1-mmwave"):
        return SystemConfig(
            m_antennas=m_antennas or 30, nq=2, s1_size=3, s2_size=300,
            r1=40.0, ry=40.0, pathloss_exp=3.0,
            model="rayleigh" if name == "fig1-rayleigh" else "mmwave",
            a0sq=0.75, a1sq=0.25, rate_s1=1.0, rate_s2=1.5,
            tx_dbm=tuple(float(x) for x in range(0, 41, 5)),
            noise_dbm=-30.0, num_trials=10_000, seed=DEFAULT_SEED,
        )
    if name == "fig2":
        m = m_antennas or 4
        return SystemConfig(
            m_antennas=m, nq=2, s1_size=1, s2_size=m,
            r1=40.0, ry=20.0, pathloss_exp=3.0, model="rayleigh",
            a0sq=0.75, a1sq=0.25, rate_s1=1.0, rate_s2=1.0,
            tx_dbm=tuple(float(x) for x in range(10, 51, 5)),
            noise_dbm=-30.0, num_trials=100_000, seed=DEFAULT_SEED,
            include_analytical=True, include_perfect=True,
        )
    raise InvalidConfigError(f"unknown preset {name!r}")


def parse_tx_spec(spec):
    """Sweep spec: either 'lo:hi:step' (inclusive) or a comma list of dBm values."""
    if ":" in spec:
        lo, hi, step = (float(x) for x in spec.split(":"))
        if step <= 0 or hi < lo:
            raise InvalidConfigError(f"bad sweep spec {spec!r}")
        vals = []
        x = lo
        while x <= hi + 1e-9:
            vals.append(round(x, 9))
            x += step
        return tuple(vals)
    return tuple(float(x) for x in spec.split(","))


_BOOL_KEYS = {"include_analytical", "include_perfect"}
_INT_KEYS = {"m_antennas", "nq", "s1_size", "s2_size", "num_trials", "seed", "gc_nodes"}
_FLOAT_KEYS = {"r1", "ry", "pathloss_exp", "a0sq", "a1sq", "rate_s1", "rate_s2",
               "noise_dbm"}


def load_config_file(path):
    """Flat 'key = value' config with # comments; keys match SystemConfig fields."""
    fields = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key == "tx_dbm":
            fields[key] = parse_tx_spec(val)
        elif key == "model":
            fields[key] = val
        elif key in _BOOL_KEYS:
            fields[key] = val.lower() in ("1", "true", "yes", "on")
        elif key in _INT_KEYS:
            fields[key] = int(val)
        elif key in _FLOAT_KEYS:
            fields[key] = float(val)
        else:
            raise InvalidConfigError(f"{path}:{lineno}: unknown key {key!r}")
    missing = {"m_antennas", "nq", "s1_size", "s2_size", "r1", "ry", "pathloss_exp",
               "model", "a0sq", "a1sq", "rate_s1", "rate_s2", "tx_dbm", "noise_dbm",
               "num_trials"} - fields.keys()
    if missing:
        raise InvalidConfigError(f"{path}: missing keys: {', '.join(sorted(missing))}")
    fields.setdefault("seed", DEFAULT_SEED)
    return SystemConfig(**fields)


def _resolve_config(args):
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise OSError(f"config file not found: {path}")
        cfg = load_config_file(path)
        name = path.stem
    else:
        preset = getattr(args, "preset", None) or "fig2"
        cfg = preset_config(preset, getattr(args, "m_antennas", None))
        name = preset
    overrides = {}
    if getattr(args, "m_antennas", None) and not getattr(args, "config", None):
        pass  # already honored by preset_config (fig2 couples s2_size to it)
    elif getattr(args, "m_antennas", None):
        overrides["m_antennas"] = args.m_antennas
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "trials", None):
        overrides["num_trials"] = args.trials
    if getattr(args, "tx_dbm", None):
        overrides["tx_dbm"] = parse_tx_spec(args.tx_dbm)
    if getattr(args, "gc_nodes", None):
        overrides["gc_nodes"] = args.gc_nodes
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg, name


def _git_describe():
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent, capture_output=True, text=True,
            timeout=5,
        )
        return out.stdout.strip() or "unknown"
    except Exception:
        return "unknown"


def _fmt(x):
    return repr(float(x))


def write_curve_csv(curve, path):
    lines = ["tx_dbm,rho_linear,series,mean,ci95_half,provenance,n_trials"]
    for name, s in curve.series.items():
        for i in range(len(curve.tx_dbm)):
            lines.append(
                f"{_fmt(curve.tx_dbm[i])},{_fmt(curve.rho[i])},{name},"
                f"{_fmt(s.mean[i])},{_fmt(s.ci95_half[i])},{s.provenance},{s.n_trials}"
            )
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def _write_sidecar(path, cfg, extra):
    payload = {
        "config": cfg.to_dict(),
        "config_sha256": cfg.sha256(),
        "seed": cfg.seed,
        "version": __version__,
        "git_describe": _git_describe(),
    }
    payload.update(extra)
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _warn_infeasible(cfg):
    th = analysis.thresholds(cfg.pa, cfg.rates, cfg.m_antennas, 1.0)
    if not th.feasible:
        print("warning: power split cannot support the target rates; "
              "analytical outage ≡ 1", file=sys.stderr)


def cmd_run(args):
    cfg, name = _resolve_config(args)
    cfg.validate()
    _warn_infeasible(cfg)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    curve = run_sweep(cfg, workers=args.workers, backend=args.backend)
    duration = time.perf_counter() - t0
    csv_path = out_dir / f"{name}.csv"
    write_curve_csv(curve, csv_path)
    _write_sidecar(out_dir / f"{name}.json", cfg, {
        "command": "run",
        "workers": args.workers,
        "backend": curve.metadata["backend"],
        "duration_s": duration,
        "csv": csv_path.name,
    })
    print(f"wrote {csv_path}")
    return EXIT_OK


def cmd_validate(args):
    cfg, _ = _resolve_config(args)
    cfg.validate()
    _warn_infeasible(cfg)
    for key, val in cfg.to_dict().items():
        print(f"{key} = {val}")
    return EXIT_OK


def cmd_analysis(args):
    if args.s1_size != 1:
        raise InvalidConfigError("the analytical track covers only s1_size = 1")
    from .noma import PowerAllocation, RatePair
    pa = PowerAllocation(args.a0sq, round(1.0 - args.a0sq, 12))
    rates = RatePair(args.rate0, args.rate1)
    tx = parse_tx_spec(args.tx_dbm)
    rho = [10.0 ** ((t - args.noise_dbm) / 10.0) for t in tx]
    s1 = [analysis.s1_outage_analytical(r, pa, rates, args.m_antennas,
                                        args.ry, args.alpha) for r in rho]
    s2 = [analysis.s2_outage_analytical(r, pa, rates, args.m_antennas, args.alpha,
                                        args.r1, args.s2_size, args.gc_nodes)
          for r in rho]

    if args.eval is not None:
        y = args.eval
        print(f"prop1_cdf({y}) = {analysis.prop1_cdf(y, args.m_antennas)!r}")
        print(f"lemma1_cdf({y}) = "
              f"{analysis.lemma1_cdf(y, args.m_antennas, args.ry, args.alpha)!r}")
        print(f"composite_cdf_gc({y}) = "
              f"{analysis.composite_cdf_gc(y, args.m_antennas, args.alpha, args.r1, args.gc_nodes)!r}")

    slopes = {}
    if args.slope:
        for label, vals in (("outage_s1_analytical", s1), ("outage_s2_analytical", s2)):
            try:
                fit = analysis.fit_diversity_slope(list(zip(rho, vals)))
                slopes[label] = fit.slope
                print(f"slope {label} = {fit.slope:.6f} (diversity {fit.diversity:.6f})")
            except InsufficientDataError as exc:
                print(f"slope {label}: {exc}", file=sys.stderr)

    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{args.name}.csv"
    lines = ["tx_dbm,rho_linear,series,mean,ci95_half,provenance,n_trials"]
    for label, vals in (("outage_s1_analytical", s1), ("outage_s2_analytical", s2)):
        for t, r, v in zip(tx, rho, vals):
            lines.append(f"{_fmt(t)},{_fmt(r)},{label},{_fmt(v)},{_fmt(0.0)},analytical,0")
    csv_path.write_text("\n".join(lines) + "\n", newline="\n")
    sidecar = {
        "command": "analysis",
        "params": {k: getattr(args, k) for k in
                   ("m_antennas", "alpha", "r1", "ry", "s2_size", "a0sq",
                    "rate0", "rate1", "tx_dbm", "gc_nodes", "noise_dbm")},
        "slopes": slopes,
        "version": __version__,
        "git_describe": _git_describe(),
    }
    (out_dir / f"{args.name}.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(f"wrote {csv_path}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="frab-noma",
                                description="NOMA with finite-resolution analog beamforming")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--preset", choices=["fig1-rayleigh", "fig1-mmwave", "fig2"])
        sp.add_argument("--config", help="flat key=value config file")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--tx-dbm", dest="tx_dbm", help="sweep as lo:hi:step or comma list")
        sp.add_argument("--gc-nodes", dest="gc_nodes", type=int)
        sp.add_argument("--M", dest="m_antennas", type=int,
                        help="antenna count (fig2 preset also sets |S2|=M)")

    run_p = sub.add_parser("run", help="run a Monte Carlo sweep")
    common(run_p)
    run_p.add_argument("--workers", type=int, default=1)
    run_p.add_argument("--backend", choices=["numba", "numpy"])
    run_p.add_argument("-o", "--output", default="out")
    run_p.set_defaults(func=cmd_run)

    val_p = sub.add_parser("validate", help="check a config without running")
    common(val_p)
    val_p.set_defaults(func=cmd_validate)

    an_p = sub.add_parser("analysis", help="emit closed-form outage curves")
    an_p.add_argument("--M", dest="m_antennas", type=int, default=4)
    an_p.add_argument("--s1-size", dest="s1_size", type=int, default=1)
    an_p.add_argument("--s2-size", dest="s2_size", type=int, default=4)
    an_p.add_argument("--alpha", type=float, default=3.0)
    an_p.add_argument("--r1", type=float, default=40.0)
    an_p.add_argument("--ry", type=float, default=20.0)
    an_p.add_argument("--a0sq", type=float, default=0.75)
    an_p.add_argument("--rate0", type=float, default=1.0)
    an_p.add_argument("--rate1", type=float, default=1.0)
    an_p.add_argument("--tx-dbm", dest="tx_dbm", default="10:50:5")
    an_p.add_argument("--noise-dbm", dest="noise_dbm", type=float, default=-30.0)
    an_p.add_argument("--gc-nodes", dest="gc_nodes", type=int, default=20)
    an_p.add_argument("--slope", action="store_true", help="fit high-SNR diversity slopes")
    an_p.add_argument("--eval", type=float, help="print point CDF evaluations at this gain")
    an_p.add_argument("--name", default="analysis")
    an_p.add_argument("-o", "--output", default="out")
    an_p.set_defaults(func=cmd_analysis)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

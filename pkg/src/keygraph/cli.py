"""Command-line interface: ``keygraph gen | analyze | dimension | sweep | validate``.

Exit codes: 0 success, 1 validation failure, 2 invalid arguments,
3 infeasible dimensioning, 4 parse error, 5 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import BudgetExceededError, InfeasibleError, InvalidArgumentError, ParseError
from .graph import (format_edgelist, is_k_connected, min_degree, read_edgelist,
                    vertex_connectivity)
from .model import ModelParams, p_e_exact, p_s_exact, sample_onoff_graph
from .montecarlo import KAPPA_MAX_NODES, METRICS, ExperimentConfig, sweep_alpha
from .rng import check_seed
from .scaling import (K_required, alpha_from_params, consensus_tolerance, p_required,
                      validate_regime)

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3, 4, 5

CONFIG_KEYS = {"n", "K", "P", "p", "k", "trials", "seed", "alpha", "solve_for", "metrics",
               "level", "approx", "format", "description"}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    params = ModelParams(args.n, args.K, args.P, args.p)
    g = sample_onoff_graph(params, check_seed(args.seed))
    text = format_edgelist(g)
    summary = f"n={g.n} edges={g.m} min_degree={min_degree(g)}\n"
    if args.out:
        _emit(text, args.out)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(text)
        sys.stderr.write(summary)
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = read_edgelist(args.input)
    if args.k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {args.k}")
    delta = min_degree(g)
    kappa = vertex_connectivity(g) if g.n <= KAPPA_MAX_NODES else None
    k_conn = kappa >= args.k if kappa is not None else is_k_connected(g, args.k)
    f = consensus_tolerance(kappa, g.n) if kappa is not None else None
    if args.format == "json":
        doc = {"n": g.n, "m": g.m, "min_degree": delta, "kappa": kappa, "k": args.k,
               "k_connected": k_conn, "f": f}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK
    kappa_txt = str(kappa) if kappa is not None else f"skipped (n > {KAPPA_MAX_NODES})"
    f_txt = str(f) if f is not None else "unknown"
    lines = [f"n={g.n} m={g.m} min_degree={delta} k={args.k}",
             f"k-connected: {str(k_conn).lower()}, kappa={kappa_txt}, f={f_txt}"]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_dimension(args) -> int:
    if (args.p is None) == (args.K is None):
        raise InvalidArgumentError("give exactly one of --K (solve for p) or --p (solve for K)")
    if args.p is None:
        p = p_required(args.n, args.k, args.alpha, args.K, args.P, approx=args.approx)
        params = ModelParams(args.n, args.K, args.P, p)
        solved = f"p={p!r}"
    else:
        K = K_required(args.n, args.k, args.alpha, args.p, args.P)
        params = ModelParams(args.n, K, args.P, args.p)
        solved = f"K={K}"
    back = alpha_from_params(params, args.k).alpha
    report = validate_regime(params, args.k)
    lines = [
        f"solved: {solved}",
        f"n={params.n} K={params.K} P={params.P} p={params.p!r} k={args.k}",
        f"p_s={p_s_exact(params.K, params.P)!r}",
        f"p_e={p_e_exact(params)!r}",
        f"alpha requested={args.alpha!r} round-trip={back!r} "
        f"(difference {abs(back - args.alpha):.3g})",
        "regime checks:",
        report.format(),
    ]
    if not report.all_satisfied:
        lines.append("warning: " + "; ".join(c.name for c in report.failed()) + " not satisfied")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def load_sweep_config(text: str) -> dict:
    """Parse a flat JSON sweep configuration, raising :class:`ParseError` on bad input."""
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(cfg, dict):
        raise ParseError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ParseError(f"unknown config keys: {sorted(unknown)}")
    missing = {"n", "K", "P", "k", "trials", "seed", "alpha"} - set(cfg)
    if cfg.get("solve_for", "p") == "K":
        missing = (missing - {"K"}) | ({"p"} - set(cfg))
    if missing:
        raise ParseError(f"missing config keys: {sorted(missing)}")
    if not isinstance(cfg["alpha"], list) or not cfg["alpha"]:
        raise ParseError("'alpha' must be a non-empty list of numbers")
    for key in ("n", "K", "P", "k", "trials", "seed"):
        if key in cfg and (isinstance(cfg[key], bool) or not isinstance(cfg[key], int)):
            raise ParseError(f"'{key}' must be an integer")
    return cfg


def _preset_text(name: str) -> str:
    res = resources.files("keygraph") / "presets" / f"{name}.json"
    if not res.is_file():
        raise InvalidArgumentError(f"unknown preset {name!r}")
    return res.read_text(encoding="utf-8")


def cmd_sweep(args) -> int:
    if (args.config is None) == (args.preset is None):
        raise InvalidArgumentError("give a config file or --preset, not both")
    if args.preset:
        text = _preset_text(args.preset)
    else:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read config: {exc}") from None
    cfg = load_sweep_config(text)
    solve_for = cfg.get("solve_for", "p")
    # the solved field only needs a placeholder that satisfies the invariants
    K = cfg.get("K", 1) if solve_for == "K" else cfg["K"]
    p = cfg.get("p", 1.0) if solve_for == "p" else cfg["p"]
    params = ModelParams(cfg["n"], K, cfg["P"], p)
    metrics = frozenset(cfg.get("metrics", ["k_connected", "min_degree"]))
    if metrics - METRICS:
        raise InvalidArgumentError(f"unknown metrics {sorted(metrics - METRICS)}")
    seed = cfg["seed"] if args.seed is None else args.seed
    base = ExperimentConfig(params, cfg["k"], cfg["trials"], check_seed(seed), metrics)
    result = sweep_alpha(base, cfg["alpha"], solve_for=solve_for, workers=args.workers,
                         level=cfg.get("level", 0.95), approx=cfg.get("approx", False))
    fmt = args.format or cfg.get("format", "csv")
    _emit(result.to_json() if fmt == "json" else result.to_csv(), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import run_all

    results = run_all(seed=check_seed(args.seed))
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}  [{r.detail}]" for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if passed == len(results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keygraph",
        description="Secure-link random graphs: sampling, connectivity analysis, "
                    "dimensioning and zero-one-law sweeps.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True, seed_default=0):
        p.add_argument("--seed", type=int, default=seed_default, help="64-bit master seed")
        p.add_argument("--out", help="output path (default: standard output)")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("gen", help="sample an on/off key graph and write its edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", type=int, required=True, help="keys per node")
    p.add_argument("--P", type=int, required=True, help="key pool size")
    p.add_argument("--p", type=float, required=True, help="channel-on probability")
    common(p, fmt=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="connectivity report for an edge-list file")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dimension", help="solve for p (or K) at a target deviation alpha")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--P", type=int, required=True)
    p.add_argument("--K", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--approx", action="store_true", help="use K^2/P for the key-sharing probability")
    common(p, fmt=False)
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over alpha from a JSON config")
    p.add_argument("config", nargs="?")
    p.add_argument("--preset", help="bundled config name, e.g. publish_subscribe")
    p.add_argument("--workers", type=int, default=1)
    common(p, seed_default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="run the built-in property checks")
    common(p, fmt=False)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        if exc.required_p_e is not None:
            print(f"required p_e={exc.required_p_e!r} available p_s={exc.available_p_s!r}",
                  file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidArgumentError, OSError) as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

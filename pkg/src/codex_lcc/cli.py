"""Command-line entry point ``codex-lcc``.

Exit codes: 0 success, 1 configuration error, 2 internal failure.  Data goes
to ``--out`` or standard output; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

import numpy as np

from . import bounds
from .codex import audit_codex, hermitian_codex, rational_codex
from .config import (BOUND_ONLY_PRESETS, PRESETS, ConfigError, ExperimentConfig, config_from_dict, dump_presets,
                     load_config, preset_config)

EXIT_OK, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2

FORMULAS = {
    "chebyshev_tail": (bounds.chebyshev_tail, ("delta", "n", "A")),
    "twise_tail": (bounds.twise_tail, ("t", "mu", "A")),
    "eps_line": (bounds.eps_line, ("delta", "sigma")),
    "eps_curve": (bounds.eps_curve, ("delta", "sigma", "q")),
    "eps_tcurve": (bounds.eps_tcurve, ("delta", "sigma", "q", "t")),
    "tcurve_cap": (bounds.tcurve_cap, ("delta", "sigma", "q", "t")),
    "eps_alg2": (bounds.eps_alg2, ("delta", "sigma", "rho", "q", "n", "t")),
    "eps_alg1_effective": (bounds.eps_alg1_effective, ("delta", "n", "t", "radius")),
    "eps_repetition": (bounds.eps_repetition, ("b", "s")),
    "queries_repetition": (bounds.queries_repetition, ("q", "k", "s")),
}
_INT_ARGS = {"n", "t", "q", "s", "k", "radius"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _add_config_flags(p, experiment=True):
    p.add_argument("--preset", help="name of a shipped preset")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", help="output path (default: standard output)")
    if experiment:
        p.add_argument("--trials", type=int)
        p.add_argument("--workers", type=int, help="worker processes (default $CODEX_LCC_WORKERS or 1)")
        p.add_argument("--error-model", choices=["exact", "prf", "file"])
        p.add_argument("--adversarial-file", help="CSV of point,value overrides for the 'file' model")
        p.add_argument("--delta", type=float)


def _add_codex_flags(p):
    p.add_argument("--curve", choices=["rational", "hermitian"])
    p.add_argument("--q", type=int, help="curve parameter: field size (rational) or sqrt of it (hermitian)")
    for name in ("k", "t", "d", "r", "n"):
        p.add_argument(f"--{name}", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="codex-lcc", description="Codex-based local decoding of Reed-Muller codes")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, hlp in (("codex-build", "construct a codex and print its descriptor"),
                      ("codex-audit", "construct a codex and check every codex clause")):
        p = sub.add_parser(name, help=hlp)
        _add_config_flags(p, experiment=False)
        _add_codex_flags(p)
        if name == "codex-audit":
            p.add_argument("--samples", type=int, default=100, help="random d-tuples for multiplicativity")

    p = sub.add_parser("decode", help="one local recovery with a printed transcript")
    _add_config_flags(p)
    p.add_argument("--targets", help="target points as 'a,b;c,d' (default: random from the seed)")

    p = sub.add_parser("simulate", help="Monte-Carlo failure rate, one CSV row")
    _add_config_flags(p)
    p.add_argument("--no-timing", action="store_true", help="omit wall_ms for byte-stable output")

    p = sub.add_parser("bounds", help="evaluate a bound formula, a theorem preset or the comparison table")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula", choices=sorted(FORMULAS))
    g.add_argument("--theorem", help=f"one of {', '.join(bounds.preset_names())}")
    g.add_argument("--comparison", action="store_true", help="matched-epsilon repetition comparison")
    for name in ("delta", "sigma", "rho", "mu", "A", "b", "e", "d"):
        p.add_argument(f"--{name}", type=float)
    for name in ("q", "n", "t", "k", "s", "radius", "radius-override"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--out")

    p = sub.add_parser("presets", help="list presets or dump them as configs")
    p.add_argument("--dump", action="store_true", help="print full JSON configs")
    p.add_argument("--preset", help="restrict to one preset")
    p.add_argument("--out")
    return ap


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, default=_jsonable) + "\n"


def _jsonable(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def _experiment(args, require_seed: bool) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = preset_config(args.preset)
    else:
        raise ConfigError("give --preset or --config")
    over = {"seed": args.seed, "trials": getattr(args, "trials", None), "delta": getattr(args, "delta", None),
            "error_model": getattr(args, "error_model", None),
            "adversarial_file": getattr(args, "adversarial_file", None)}
    data = {**cfg.to_dict(), **{k: v for k, v in over.items() if v is not None}}
    return config_from_dict(data, require_seed=require_seed)


def _codex_from_args(args):
    if args.preset or args.config:
        from .harness import build_code
        cfg = load_config(args.config) if args.config else preset_config(args.preset)
        code = build_code(cfg)
        return getattr(code, "outer", code)
    missing = [f for f in ("curve", "q", "k", "t", "d", "r") if getattr(args, f) is None]
    if missing:
        raise ConfigError("give --preset, --config or all of " + ", ".join("--" + m for m in missing))
    make = rational_codex if args.curve == "rational" else hermitian_codex
    try:
        return make(args.q, args.k, args.t, args.d, args.r, args.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _cmd_codex_build(args):
    cdx = _codex_from_args(args)
    _emit(_json(cdx.descriptor()), args.out)
    return EXIT_OK


def _cmd_codex_audit(args):
    cdx = _codex_from_args(args)
    rep = audit_codex(cdx, trials=args.samples, seed=args.seed or 0)
    _emit(_json(rep.to_dict()), args.out)
    if not rep.passed:
        print("codex audit failed", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _parse_targets(text: str, k: int, m: int) -> np.ndarray:
    try:
        rows = [[int(x) for x in part.split(",")] for part in text.split(";")]
        arr = np.array(rows, dtype=np.int64)
    except ValueError:
        raise ConfigError(f"cannot parse targets {text!r}") from None
    if arr.shape != (k, m):
        raise ConfigError(f"expected {k} target point(s) of dimension {m}, got shape {arr.shape}")
    return arr


def _cmd_decode(args):
    from .harness import effective_epsilon, setup_for
    from .local_decoding import recover_alg1, recover_alg2

    cfg = _experiment(args, require_seed=True)
    if cfg.scheme == "baseline-repetition":
        raise ConfigError("decode runs a single recovery; use simulate for the repetition baseline")
    setup = setup_for(cfg)
    rng = np.random.default_rng([cfg.seed, 2])
    targets = (_parse_targets(args.targets, cfg.k, cfg.m) if args.targets
               else rng.integers(0, setup.target_q, size=(cfg.k, cfg.m)))
    if targets.min() < 0 or targets.max() >= setup.target_q:
        raise ConfigError(f"target coordinates must lie in [0, {setup.target_q})")
    oracle = setup.oracle
    oracle.reset_counter()
    if cfg.scheme == "alg2-hermitian":
        res = recover_alg2(setup.code, oracle, targets, [cfg.seed, 3])
    else:
        res = recover_alg1(setup.code, oracle, targets, [cfg.seed, 3])
    truth = np.asarray(oracle.f(targets))
    out = {"status": res.status, "targets": targets, "values": res.values, "truth": truth,
           "correct": bool(res.ok and np.array_equal(res.values, truth)), "queries": res.queries,
           "radius": res.radius, "eps_effective": effective_epsilon(cfg, setup)}
    _emit(_json(out), args.out)
    return EXIT_OK


def _cmd_simulate(args):
    from .harness import run_trials, stats_csv

    cfg = _experiment(args, require_seed=True)
    st = run_trials(cfg, args.workers)
    print(f"{cfg.preset or cfg.scheme}: {st.failures}/{st.trials} failures, "
          f"{st.queries_per_trial} queries per trial", file=sys.stderr)
    _emit(stats_csv([st], include_timing=not args.no_timing), args.out)
    return EXIT_OK


def _cmd_bounds(args):
    if args.comparison:
        from .harness import comparison_table
        _emit(_json({"rows": comparison_table(args.delta if args.delta is not None else 0.05)}), args.out)
        return EXIT_OK
    if args.theorem:
        names = ("q", "d", "t", "k", "n", "e", "delta", "sigma")
        kw = {n: getattr(args, n) for n in names if getattr(args, n) is not None}
        if "e" in kw:
            kw["e"] = int(kw["e"])
        if "d" in kw:
            kw["d"] = int(kw["d"])
        try:
            pr = bounds.theorem_presets(args.theorem, **kw)
        except bounds.BoundError as exc:
            raise ConfigError(str(exc)) from None
        _emit(_json(pr.to_dict()), args.out)
        return EXIT_OK
    fn, params = FORMULAS[args.formula]
    vals = []
    for name in params:
        v = getattr(args, name)
        if v is None:
            raise ConfigError(f"--{name} is required for {args.formula}")
        vals.append(int(v) if name in _INT_ARGS else v)
    kw = {}
    if args.formula == "eps_alg2" and args.radius_override is not None:
        kw["radius_override"] = args.radius_override
    try:
        value = fn(*vals, **kw)
    except bounds.BoundError as exc:
        raise ConfigError(str(exc)) from None
    _emit(_json({"formula": args.formula, "inputs": dict(zip(params, vals)), "value": value}), args.out)
    return EXIT_OK


def _cmd_presets(args):
    if args.dump:
        names = [args.preset] if args.preset else None
        _emit(_json(dump_presets(names)), args.out)
        return EXIT_OK
    if args.preset:
        preset_config(args.preset)  # validates the name
    lines = [f"{name:18s} {cfg.scheme:20s} q={cfg.q} k={cfg.k} t={cfg.t} d={cfg.d} n={cfg.n}"
             for name, cfg in PRESETS.items() if not args.preset or name == args.preset]
    if not args.preset:
        lines += [f"{name:18s} bound-only (see: bounds --theorem {name})" for name in BOUND_ONLY_PRESETS]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


COMMANDS = {
    "codex-build": _cmd_codex_build,
    "codex-audit": _cmd_codex_audit,
    "decode": _cmd_decode,
    "simulate": _cmd_simulate,
    "bounds": _cmd_bounds,
    "presets": _cmd_presets,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception:
        traceback.print_exc(file=sys.stderr)
        return EXIT_INTERNAL


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()

"""Command-line entry point.

Exit status: 0 success, 1 usage or config error, 2 non-convergence,
3 internal invariant violation (a counterexample JSON is written).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import abm, comparative, equilibrium
from .config import ConfigError, RunConfig, dump_config, load_config, parse_float_list
from .csvio import write_csv
from .network import INTENSITY_CONVENTIONS

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED, EXIT_INVARIANT = 0, 1, 2, 3

log = logging.getLogger("css_diffusion")


class InvariantViolation(RuntimeError):
    def __init__(self, message: str, counterexample: dict):
        super().__init__(message)
        self.counterexample = counterexample


def _dump_counterexample(cfg: RunConfig, exc: InvariantViolation, out: str | None) -> Path:
    target = Path(out).with_suffix(".counterexample.json") if out else Path("counterexample.json")
    payload = {"message": str(exc), "config": dump_config(cfg), **exc.counterexample}
    target.write_text(json.dumps(payload, indent=2, default=str) + "\n", encoding="utf-8")
    return target


def _with_suffix(out: str, tag: str) -> Path:
    p = Path(out)
    return p.with_name(f"{p.stem}.{tag}{p.suffix or '.csv'}")


def cmd_eq(cfg: RunConfig, args) -> int:
    config = cfg.game_config()
    report = equilibrium.solve_equilibrium(config, x0=cfg.x0, max_steps=cfg.max_steps)
    interior = [r for r in report.roots if r > 0]
    if len(interior) > 1:
        raise InvariantViolation("more than one positive fixed point", {"roots": list(report.roots)})
    traj = equilibrium.iterate_fixed_point(config, cfg.x0, cfg.max_steps)
    print(f"x_star = {report.x_star:.10g}")
    print(f"xi_star = {report.xi_star:.10g}")
    print(f"residual = {report.residual:.3g}")
    print(f"iterations = {report.iterations}")
    print(f"method = {report.method}")
    print(f"trivial_zero_fixed_point = {str(report.trivial_zero_fixed_point).lower()}")
    print(f"converged = {str(report.converged).lower()}")
    if args.out:
        traj.to_csv(args.out)
    return EXIT_OK if report.converged else EXIT_NONCONVERGED


def cmd_dynamics(cfg: RunConfig, args) -> int:
    config = cfg.game_config()
    if args.mode == "ode":
        traj = equilibrium.meanfield_dynamics(config, cfg.x0, None, cfg.horizon, cfg.dt)
    else:
        traj = equilibrium.iterate_fixed_point(config, cfg.x0, cfg.max_steps)
    if args.out:
        traj.to_csv(args.out)
    else:
        write_csv("-", ("t", "x", "xi"), traj.rows())
    if args.abm:
        res = abm.run_abm(config, cfg.abm_population, cfg.abm_steps, cfg.seed, cfg.x0, cfg.belief)
        rows = zip(res.t, res.x_hat, res.xi_hat)
        target = _with_suffix(args.out, "abm") if args.out else "-"
        write_csv(target, ("t", "x", "xi"), rows)
    return EXIT_OK if traj.converged else EXIT_NONCONVERGED


def cmd_abm(cfg: RunConfig, args) -> int:
    config = cfg.game_config()
    results = [
        (seed, abm.run_abm(config, cfg.abm_population, cfg.abm_steps, seed, cfg.x0, cfg.belief))
        for seed in range(cfg.seed, cfg.seed + cfg.seeds)
    ]
    if cfg.seeds == 1:
        res = results[0][1]
        print(f"terminal_x_hat = {res.terminal_x_hat:.10g}")
        print(f"terminal_xi_hat = {res.terminal_xi_hat:.10g}")
        print(f"steps = {res.steps} absorbed = {str(res.absorbed).lower()}")
        if args.out:
            res.to_csv(args.out)
    else:
        header = ("seed", "terminal_x_hat", "terminal_xi_hat", "steps", "absorbed")
        rows = [(s, r.terminal_x_hat, r.terminal_xi_hat, r.steps, r.absorbed) for s, r in results]
        mean_x = sum(r.terminal_x_hat for _, r in results) / len(results)
        print(f"seeds = {cfg.seeds} mean_terminal_x_hat = {mean_x:.10g}")
        if args.out:
            write_csv(args.out, header, rows)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    parameter = args.parameter or cfg.sweep_parameter
    if parameter is None:
        raise ConfigError("sweep needs a parameter (--parameter or sweep_parameter)")
    if parameter not in comparative.SWEEP_PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {parameter!r}")
    values = parse_float_list(args.values) if args.values is not None else cfg.sweep_values
    if not values:
        raise ConfigError("sweep value list is empty")
    couple = cfg.couple and not args.freeze_couplings
    conventions = args.conventions.split(",") if args.conventions else [cfg.intensity_convention]
    for conv in conventions:
        if conv not in INTENSITY_CONVENTIONS:
            raise ConfigError(f"unknown intensity convention {conv!r}")
    for conv in conventions:
        base = replace(cfg, intensity_convention=conv)
        rows = comparative.parameter_sweep(base, parameter, values, couple=couple, x0=cfg.x0, max_steps=cfg.max_steps)
        for r in rows:
            flag = "" if r.error is None else f"  error: {r.error}"
            print(f"[{conv}] {parameter}={r.value:g} x_star={r.x_star:.6g} xi_star={r.xi_star:.6g}{flag}")
        if args.out:
            target = args.out if len(conventions) == 1 else _with_suffix(args.out, conv)
            comparative.write_sweep(target, rows)
    return EXIT_OK


def cmd_compare(cfg: RunConfig, args) -> int:
    other = load_config(args.config_b, args.set_b)
    verdict = comparative.compare_conduciveness(cfg.game_config(), other.game_config(), cfg.grid_points)
    print(verdict.relation)
    print(f"max_gap = {verdict.max_gap:.10g}")
    if verdict.witness is not None:
        print(f"witness = {verdict.witness:.10g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value config file")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    common.add_argument("--seed", type=int, help="random seed (overrides config)")
    common.add_argument("--out", metavar="PATH", help="output CSV path")
    common.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")

    parser = argparse.ArgumentParser(prog="css-diffusion", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eq", parents=[common], help="solve for the equilibrium")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("dynamics", parents=[common], help="emit the t,x,xi trajectory")
    p.add_argument("--mode", choices=("iterate", "ode"), default="iterate")
    p.add_argument("--abm", action="store_true", help="also run the agent-based simulation")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("abm", parents=[common], help="agent-based simulation")
    p.set_defaults(func=cmd_abm)

    p = sub.add_parser("sweep", parents=[common], help="equilibrium versus one parameter")
    p.add_argument("--parameter", choices=sorted(comparative.SWEEP_PARAMETERS))
    p.add_argument("--values", help="comma-separated values")
    p.add_argument("--freeze-couplings", action="store_true", help="keep rho and intensity at their base values")
    p.add_argument("--conventions", help="comma-separated intensity conventions; one CSV each")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", parents=[common], help="is config B more conducive than config A?")
    p.add_argument("--config-b", metavar="PATH", help="second config (defaults when omitted)")
    p.add_argument("--set-b", action="append", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = None
    try:
        cfg = load_config(args.config, args.overrides)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.dump_config:
            text = dump_config(cfg)
            if args.out:
                Path(args.out).write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
            return EXIT_OK
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        path = _dump_counterexample(cfg, exc, args.out)
        print(f"invariant violated: {exc}; counterexample written to {path}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

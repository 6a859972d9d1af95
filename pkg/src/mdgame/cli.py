"""Command-line interface.

Subcommands: ``solve`` (game matrices plus equilibrium reports), ``simulate``
(one experiment), ``campaign`` (full grid), ``verify`` (randomised
equivalence and oracle checks), ``topo`` (generate and export a topology).
Exit codes: 0 ok, 2 config error, 3 no-route or generation error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import config_io, equilibria, simulator, topology
from .config_io import CampaignConfig, load_config
from .errors import ConfigError, GenerationError, NoRouteError
from .game_model import GameInstance, build_game

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_ROUTE = 3
EXIT_VERIFY = 4


def _fmt(value: float) -> str:
    return format(float(value), ".6g")


def _fmt_probs(probs: np.ndarray) -> str:
    return "(" + ", ".join(_fmt(p) for p in probs) + ")"


def _load_matrix_game(path: str) -> GameInstance:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"matrix file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"matrix file {path} is not valid JSON: {exc}") from None
    for key in ("defender", "attacker"):
        if key not in doc:
            raise ConfigError(f"matrix file: missing key {key!r}")
    defender = np.asarray(doc["defender"], dtype=float)
    attacker = np.asarray(doc["attacker"], dtype=float)
    if defender.ndim != 2 or defender.shape != attacker.shape:
        raise ConfigError("matrix file: defender/attacker must be equal-shape 2-D arrays")
    return GameInstance.from_matrices(
        defender,
        attacker,
        route_labels=doc.get("row_labels", ()),
        malware_labels=doc.get("col_labels", ()),
    )


def _game_from_config(config: CampaignConfig) -> GameInstance:
    seed = simulator.topology_seed_for(config.seed, 0, 0)
    topo = topology.generate_cluster(
        seed=seed,
        n_devices=config.n_devices,
        area=config.area,
        link_range=config.link_range,
        profile=config.profile,
        control_policy=config.controls_per_device,
        cost_range=config.cost_range,
        cluster_head=config.cluster_head,
        requestor=config.requestor,
    )
    catalog = topology.enumerate_routes(topo, config.max_hops, config.max_routes)
    return build_game(
        catalog.routes,
        config.profile,
        weights=(config.loss_weight, config.cost_weight),
        scaling=config.scaling,
        mode=config.mode,
    )


def _print_matrix(name: str, labels_rows, labels_cols, matrix: np.ndarray) -> None:
    print(f"{name} matrix (rows: routes, columns: malware):")
    print("  " + " ".join(labels_cols))
    for label, row in zip(labels_rows, matrix):
        print(f"  {label}: " + " ".join(_fmt(v) for v in row))


def cmd_solve(args: argparse.Namespace) -> int:
    if bool(args.matrix) == bool(args.config):
        raise ConfigError("solve needs exactly one of --matrix or --config")
    if args.matrix:
        game = _load_matrix_game(args.matrix)
    else:
        config = load_config(args.config)
        if args.seed is not None:
            config = config.with_seed(args.seed)
        game = _game_from_config(config)
    print(f"game: {game.n_routes} routes x {game.n_malware} malware, mode={game.mode}")
    _print_matrix("defender", game.route_labels, game.malware_labels, game.defender_matrix)
    _print_matrix("attacker", game.route_labels, game.malware_labels, game.attacker_matrix)

    maximin = equilibria.solve_maximin(game)
    print(
        f"maximin: value={_fmt(maximin.game_value)} "
        f"defender={_fmt_probs(maximin.defender_strategy.probs)} "
        f"attacker={_fmt_probs(maximin.attacker_strategy.probs)}"
    )
    if game.n_routes <= 4 and game.n_malware <= 4:
        for ne in equilibria.support_enumeration_ne(game):
            rho, mu = ne.defender_strategy, ne.attacker_strategy
            pure = len(rho.support(1e-9)) == 1 and len(mu.support(1e-9)) == 1
            if pure:
                j = rho.support(1e-9)[0]
                l = mu.support(1e-9)[0]
                print(
                    "nash_equilibrium: "
                    f"defender={game.route_labels[j]} attacker={game.malware_labels[l]} "
                    f"defender_payoff={_fmt(game.defender_matrix[j, l])} "
                    f"attacker_payoff={_fmt(game.attacker_matrix[j, l])} pure=true"
                )
            else:
                print(
                    "nash_equilibrium: "
                    f"defender={_fmt_probs(rho.probs)} attacker={_fmt_probs(mu.probs)} "
                    f"defender_payoff={_fmt(ne.game_value)} pure=false"
                )
    sse = equilibria.solve_sse(game)
    print(
        f"sse: defender_value={_fmt(sse.game_value)} "
        f"defender={_fmt_probs(sse.defender_strategy.probs)} "
        f"follower={game.malware_labels[sse.attacker_strategy.support(1e-9)[0]]}"
    )
    row, col, value = equilibria.best_pure_commitment(game)
    print(
        f"pure_commitment: defender={game.route_labels[row]} "
        f"follower={game.malware_labels[col]} defender_value={_fmt(value)}"
    )
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    report = simulator.run_experiment(
        config,
        case_index=args.case_index,
        topology_index=args.topology_index,
        policy_kind=args.policy,
        attacker_kind=args.attacker,
    )
    out_dir = Path(args.out or config.out_dir)
    rows = [
        {
            "case": report.case,
            "seed": report.topology_seed,
            "policy": report.policy,
            "attacker": report.attacker,
            "replies": report.replies,
            "detection_rate": report.detection_rate,
            "mean_Ud": report.mean_defender_utility,
            "mean_security_loss": report.mean_security_loss,
            "mean_inspection_cost": report.mean_inspection_cost,
            "blacklist_count": report.blacklist_count,
        }
    ]
    csv_path = config_io.emit_results(rows, out_dir, config, csv_name="experiment.csv")
    if args.trace:
        config_io.write_atomic(
            Path(args.trace), config_io.outcomes_to_jsonl(report.outcomes)
        )
    print(f"experiment written: {csv_path}")
    if report.detection_rate is not None:
        print(
            f"summary: policy={report.policy} attacker={report.attacker} "
            f"detection_rate={_fmt(report.detection_rate)} "
            f"mean_Ud={_fmt(report.mean_defender_utility)}"
        )
    return EXIT_OK


def cmd_campaign(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    result = simulator.run_campaign(config)
    out_dir = Path(args.out or config.out_dir)
    notes = [f"failed cells: {len(result.failures)}"] + result.failures
    csv_path = config_io.emit_results(
        result.rows(), out_dir, config, csv_name="campaign.csv", extra_notes=notes
    )
    print(f"campaign written: {csv_path} ({len(result.reports)} cells)")
    for failure in result.failures:
        print(f"cell failed: {failure}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    print(f"equivalence checks on {args.count} random games (seed {args.seed}):")
    equivalence = equilibria.verify_equivalences(seed=args.seed, count=args.count)
    for line in equivalence.summary_lines():
        print(f"  {line}")
    for failure in equivalence.failures[:10]:
        print(f"  counterexample:\n{failure}", file=sys.stderr)

    print("oracle cross-checks (LP vs grid scan / support enumeration):")
    oracles = equilibria.verify_oracles(seed=args.seed + 1)
    for line in oracles.summary_lines():
        print(f"  {line}")
    for failure in oracles.failures[:10]:
        print(f"  counterexample: {failure}", file=sys.stderr)

    print("guarantee spot-checks (maximin plan vs random plans):")
    guarantee = equilibria.verify_guarantee(seed=args.seed + 2)
    for line in guarantee.summary_lines():
        print(f"  {line}")

    passed = equivalence.all_passed and oracles.all_passed and guarantee.all_passed
    print("verify: PASS" if passed else "verify: FAIL")
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_topo(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    topo = topology.generate_cluster(
        seed=config.seed,
        n_devices=config.n_devices,
        area=config.area,
        link_range=config.link_range,
        profile=config.profile,
        control_policy=config.controls_per_device,
        cost_range=config.cost_range,
        cluster_head=config.cluster_head,
        requestor=config.requestor,
    )
    catalog = topology.enumerate_routes(topo, config.max_hops, config.max_routes)
    out_dir = Path(args.out or config.out_dir)
    path = out_dir / "topology.json"
    config_io.write_atomic(
        path, json.dumps(topology.topology_to_document(topo), indent=2) + "\n"
    )
    config_io.write_manifest(out_dir, config, [path])
    print(f"topology written: {path}")
    print(
        f"summary: devices={len(topo.devices)} head={topo.cluster_head} "
        f"requestor={topo.requestor} routes={len(catalog)}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdgame",
        description="Game-optimal route selection for collaborative malware detection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="print game matrices and equilibrium reports")
    solve.add_argument("--config", help="campaign config JSON (build game from topology)")
    solve.add_argument("--matrix", help="explicit bimatrix JSON file")
    solve.add_argument("--seed", type=int, help="override the config seed")
    solve.set_defaults(func=cmd_solve)

    sim = sub.add_parser("simulate", help="run one experiment")
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, help="override the config seed")
    sim.add_argument("--out", help="output directory (default from config)")
    sim.add_argument("--policy", help="defender policy (default: first in config)")
    sim.add_argument("--attacker", help="attacker profile (default: first in config)")
    sim.add_argument("--case-index", type=int, default=0)
    sim.add_argument("--topology-index", type=int, default=0)
    sim.add_argument("--trace", help="write per-session JSON-lines trace to this path")
    sim.set_defaults(func=cmd_simulate)

    camp = sub.add_parser("campaign", help="run the full campaign grid")
    camp.add_argument("--config", required=True)
    camp.add_argument("--seed", type=int, help="override the config seed")
    camp.add_argument("--out", help="output directory (default from config)")
    camp.set_defaults(func=cmd_campaign)

    ver = sub.add_parser("verify", help="randomised equivalence and oracle checks")
    ver.add_argument("--count", type=int, default=200)
    ver.add_argument("--seed", type=int, default=20160)
    ver.set_defaults(func=cmd_verify)

    topo = sub.add_parser("topo", help="generate and export a topology")
    topo.add_argument("--config", required=True)
    topo.add_argument("--seed", type=int, help="override the config seed")
    topo.add_argument("--out", help="output directory (default from config)")
    topo.set_defaults(func=cmd_topo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoRouteError, GenerationError) as exc:
        print(f"generation error: {exc}", file=sys.stderr)
        return EXIT_NO_ROUTE


if __name__ == "__main__":
    sys.exit(main())

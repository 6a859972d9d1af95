"""Seeded Monte Carlo delivery sessions, experiments and campaigns.

Every reply is malicious.  Per session, the defender samples a route from
her plan, the attacker samples a malware type from hers, and the relays on
the chosen route inspect in order: each one independently detects the
malware with one minus its failure probability.  The first detector drops
the reply and triggers a blacklist event.  Campaign cells get independent
RNG sub-streams keyed by their grid coordinates, so results do not depend
on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config_io import CampaignConfig
from .game_model import GameInstance, build_game
from .strategies import AttackerProfile, DefenderPolicy, make_attacker, make_policy
from .topology import ClusterTopology, RouteCatalog, enumerate_routes, generate_cluster


@dataclass(frozen=True)
class SessionOutcome:
    """One delivered (or dropped) reply."""

    route_index: int
    malware_index: int
    detected: bool
    detector: str | None
    inspected_count: int
    realized_defender_payoff: float
    blacklist_event: bool


@dataclass
class ExperimentReport:
    """Aggregates over the sessions of a single experiment cell."""

    case: str
    topology_seed: int
    policy: str
    attacker: str
    replies: int
    outcomes: list[SessionOutcome]
    detection_rate: float | None
    mean_defender_utility: float | None
    std_defender_utility: float | None
    mean_security_loss: float | None
    mean_inspection_cost: float | None
    route_frequencies: np.ndarray | None
    malware_frequencies: np.ndarray | None
    blacklist_count: int
    config_echo: dict | None = None


def _sample_index(cumulative: np.ndarray, rng: np.random.Generator) -> int:
    idx = int(np.searchsorted(cumulative, rng.random(), side="right"))
    return min(idx, len(cumulative) - 1)


def run_session(
    policy: DefenderPolicy,
    attacker: AttackerProfile,
    catalog: RouteCatalog,
    game: GameInstance,
    rng: np.random.Generator,
) -> SessionOutcome:
    """Play one reply delivery under the given plans.

    The recorded payoff is the full pure-profile defender utility for the
    sampled (route, malware) pair: the whole route is charged its inspection
    cost even when an early relay drops the reply.  ``inspected_count`` is
    reported separately for partial-cost analyses.
    """
    route_idx = _sample_index(np.cumsum(policy.plan.probs), rng)
    malware_idx = _sample_index(np.cumsum(attacker.plan.probs), rng)
    route = catalog.routes[route_idx]
    detected = False
    detector: str | None = None
    inspected = 0
    for position, relay_id in enumerate(route.relay_devices):
        inspected += 1
        fail_probability = float(route.capability_set[position][malware_idx])
        if rng.random() < 1.0 - fail_probability:
            detected = True
            detector = relay_id
            break
    return SessionOutcome(
        route_index=route_idx,
        malware_index=malware_idx,
        detected=detected,
        detector=detector,
        inspected_count=inspected,
        realized_defender_payoff=float(game.defender_matrix[route_idx, malware_idx]),
        blacklist_event=detected,
    )


def _summarise(
    case: str,
    topology_seed: int,
    policy: DefenderPolicy,
    attacker: AttackerProfile,
    outcomes: list[SessionOutcome],
    game: GameInstance,
    catalog: RouteCatalog,
) -> ExperimentReport:
    replies = len(outcomes)
    if replies == 0:
        return ExperimentReport(
            case=case,
            topology_seed=topology_seed,
            policy=policy.kind,
            attacker=attacker.kind,
            replies=0,
            outcomes=[],
            detection_rate=None,
            mean_defender_utility=None,
            std_defender_utility=None,
            mean_security_loss=None,
            mean_inspection_cost=None,
            route_frequencies=None,
            malware_frequencies=None,
            blacklist_count=0,
        )
    payoffs = np.array([o.realized_defender_payoff for o in outcomes])
    route_counts = np.bincount(
        [o.route_index for o in outcomes], minlength=len(catalog.routes)
    )
    malware_counts = np.bincount(
        [o.malware_index for o in outcomes], minlength=game.n_malware
    )
    if game.security_loss is not None and game.route_costs is not None:
        mean_loss = float(
            np.mean([game.security_loss[o.route_index, o.malware_index] for o in outcomes])
        )
        mean_cost = float(np.mean([game.route_costs[o.route_index] for o in outcomes]))
    else:
        mean_loss = None
        mean_cost = None
    detections = sum(1 for o in outcomes if o.detected)
    return ExperimentReport(
        case=case,
        topology_seed=topology_seed,
        policy=policy.kind,
        attacker=attacker.kind,
        replies=replies,
        outcomes=outcomes,
        detection_rate=detections / replies,
        mean_defender_utility=float(payoffs.mean()),
        std_defender_utility=float(payoffs.std(ddof=1)) if replies > 1 else 0.0,
        mean_security_loss=mean_loss,
        mean_inspection_cost=mean_cost,
        route_frequencies=route_counts / replies,
        malware_frequencies=malware_counts / replies,
        blacklist_count=sum(1 for o in outcomes if o.blacklist_event),
    )


def _run_cell(
    case: str,
    topology_seed: int,
    policy: DefenderPolicy,
    attacker: AttackerProfile,
    catalog: RouteCatalog,
    game: GameInstance,
    replies: int,
    rng: np.random.Generator,
) -> ExperimentReport:
    outcomes: list[SessionOutcome] = []
    policy_in_use = policy
    for session in range(replies):
        if (
            policy.lifetime is not None
            and session > 0
            and session % policy.lifetime == 0
        ):
            # plan lifetime expired; recompute (identical under a static topology)
            policy_in_use = make_policy(
                policy.kind, game, catalog.routes, lifetime=policy.lifetime
            )
        outcomes.append(run_session(policy_in_use, attacker, catalog, game, rng))
    return _summarise(case, topology_seed, policy, attacker, outcomes, game, catalog)


def topology_seed_for(master_seed: int, case_index: int, topology_index: int) -> int:
    """Stable per-cell topology seed derived from the master seed."""
    sequence = np.random.SeedSequence(
        master_seed, spawn_key=(case_index, topology_index)
    )
    return int(sequence.generate_state(1, np.uint64)[0])


def session_stream(
    master_seed: int,
    case_index: int,
    topology_index: int,
    policy_index: int,
    attacker_index: int,
) -> np.random.Generator:
    """Independent session RNG for one campaign cell."""
    return np.random.default_rng(
        np.random.SeedSequence(
            master_seed,
            spawn_key=(case_index, topology_index, policy_index, attacker_index),
        )
    )


def _build_cell_inputs(
    config: CampaignConfig, topology_seed: int
) -> tuple[ClusterTopology, RouteCatalog, GameInstance]:
    topology = generate_cluster(
        seed=topology_seed,
        n_devices=config.n_devices,
        area=config.area,
        link_range=config.link_range,
        profile=config.profile,
        control_policy=config.controls_per_device,
        cost_range=config.cost_range,
        cluster_head=config.cluster_head,
        requestor=config.requestor,
    )
    catalog = enumerate_routes(topology, config.max_hops, config.max_routes)
    game = build_game(
        catalog.routes,
        config.profile,
        weights=(config.loss_weight, config.cost_weight),
        scaling=config.scaling,
        mode=config.mode,
    )
    return topology, catalog, game


def run_experiment(
    config: CampaignConfig,
    case_index: int = 0,
    topology_index: int = 0,
    policy_kind: str | None = None,
    attacker_kind: str | None = None,
) -> ExperimentReport:
    """One experiment: one topology, one game, one policy/attacker pair."""
    policy_kind = policy_kind or config.policies[0]
    attacker_kind = attacker_kind or config.attackers[0]
    if case_index >= len(config.cases):
        raise ValueError(f"case index {case_index} out of range")
    seed = topology_seed_for(config.seed, case_index, topology_index)
    _, catalog, game = _build_cell_inputs(config, seed)
    policy = make_policy(policy_kind, game, catalog.routes, lifetime=config.plan_lifetime)
    attacker = make_attacker(attacker_kind, game)
    rng = session_stream(
        config.seed,
        case_index,
        topology_index,
        config.policies.index(policy_kind) if policy_kind in config.policies else 0,
        config.attackers.index(attacker_kind) if attacker_kind in config.attackers else 0,
    )
    report = _run_cell(
        config.cases[case_index], seed, policy, attacker, catalog, game,
        config.replies, rng,
    )
    report.config_echo = config.to_document()
    return report


@dataclass
class CampaignResult:
    """All cell reports of a campaign plus any recorded per-cell failures."""

    reports: list[ExperimentReport] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def rows(self) -> list[dict]:
        """CSV-ready rows in the fixed column order."""
        out = []
        for r in self.reports:
            out.append(
                {
                    "case": r.case,
                    "seed": r.topology_seed,
                    "policy": r.policy,
                    "attacker": r.attacker,
                    "replies": r.replies,
                    "detection_rate": r.detection_rate,
                    "mean_Ud": r.mean_defender_utility,
                    "mean_security_loss": r.mean_security_loss,
                    "mean_inspection_cost": r.mean_inspection_cost,
                    "blacklist_count": r.blacklist_count,
                }
            )
        return out


def run_campaign(config: CampaignConfig, keep_outcomes: bool = False) -> CampaignResult:
    """Full cross product of cases x topologies x policies x attackers.

    Cells within a (case, topology) group share the topology and game, so
    policies and attackers are compared on identical ground.  A failing cell
    group (for example no route within the hop bound) is recorded and the
    campaign continues.
    """
    result = CampaignResult()
    for case_index, case in enumerate(config.cases):
        for topology_index in range(config.topology_count):
            seed = topology_seed_for(config.seed, case_index, topology_index)
            try:
                _, catalog, game = _build_cell_inputs(config, seed)
                policies = {
                    kind: make_policy(kind, game, catalog.routes, config.plan_lifetime)
                    for kind in config.policies
                }
                attackers = {kind: make_attacker(kind, game) for kind in config.attackers}
            except Exception as exc:  # noqa: BLE001 - recorded, campaign continues
                result.failures.append(
                    f"case={case} topology={topology_index} seed={seed}: {exc}"
                )
                continue
            for policy_index, policy_kind in enumerate(config.policies):
                for attacker_index, attacker_kind in enumerate(config.attackers):
                    rng = session_stream(
                        config.seed, case_index, topology_index,
                        policy_index, attacker_index,
                    )
                    report = _run_cell(
                        case, seed, policies[policy_kind], attackers[attacker_kind],
                        catalog, game, config.replies, rng,
                    )
                    if not keep_outcomes:
                        report.outcomes = []
                    result.reports.append(report)
    return result

"""Attacker profiles and defender route-selection policies.

Three attacker behaviours (uniform, utility-weighted, equilibrium) and four
defender policies: the equilibrium-based plan, proportional routing, and two
shortest-route baselines standing in for conventional reactive and
source-routing protocols.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .equilibria import solve_maximin
from .game_model import GameInstance, MixedStrategy, Route

ATTACKER_KINDS = ("uniform", "weighted", "nash")
POLICY_KINDS = ("irouting", "proportional", "fewest_hops", "cached_shortest")


@dataclass(frozen=True)
class AttackerProfile:
    kind: str
    plan: MixedStrategy
    fallback_uniform: bool = False


@dataclass(frozen=True)
class DefenderPolicy:
    kind: str
    plan: MixedStrategy
    lifetime: int | None = None
    fallback_uniform: bool = False

    def __post_init__(self) -> None:
        if self.lifetime is not None and self.lifetime < 1:
            raise ValueError("plan lifetime must be >= 1 session")


def uniform_attacker(n_malware: int) -> MixedStrategy:
    """Each malware type with equal probability."""
    if n_malware < 1:
        raise ValueError("need at least one malware type")
    return MixedStrategy.uniform(n_malware)


def weighted_attacker(attacker_matrix: np.ndarray) -> MixedStrategy:
    """Malware probabilities proportional to their column-average payoff.

    Falls back to uniform (with a warning) when the matrix is all zeros.
    """
    matrix = np.atleast_2d(np.asarray(attacker_matrix, dtype=float))
    if np.any(matrix < 0):
        raise ValueError("weighted attacker expects non-negative payoffs")
    averages = matrix.mean(axis=0)
    total = averages.sum()
    if total == 0.0:
        warnings.warn("all-zero attacker matrix; weighted attacker falls back to uniform")
        return MixedStrategy.uniform(matrix.shape[1])
    return MixedStrategy(averages / total)


def nash_attacker(game: GameInstance) -> MixedStrategy:
    """The attacker's saddle-point malware plan.

    Computed as the dual of the defender's maximin LP on the defender
    matrix, which is shared by the zero-sum and scaled game variants.
    """
    if game.mode == "arbitrary":
        raise ValueError("nash attacker requires a zero_sum or scaled game")
    return solve_maximin(game).attacker_strategy


def irouting_defender(game: GameInstance, lifetime: int | None = None) -> DefenderPolicy:
    """Equilibrium delivery plan: maximin over the defender matrix.

    Optimal against every attacker behaviour considered here, since the
    defender's equilibrium, maximin and commitment strategies coincide for
    these games.
    """
    report = solve_maximin(game)
    return DefenderPolicy(kind="irouting", plan=report.defender_strategy, lifetime=lifetime)


def proportional_defender(
    defender_matrix: np.ndarray, lifetime: int | None = None
) -> DefenderPolicy:
    """Routes weighted by their average utility across malware types.

    Each route's raw weight is one minus its share of the summed row
    averages; the raw weights add up to (number of routes - 1), so they are
    divided by that to form a distribution.  Better rows (higher average)
    get more mass.
    """
    matrix = np.atleast_2d(np.asarray(defender_matrix, dtype=float))
    n_routes = matrix.shape[0]
    if n_routes == 1:
        return DefenderPolicy(kind="proportional", plan=MixedStrategy.pure(1, 0),
                              lifetime=lifetime)
    averages = matrix.mean(axis=1)
    total = averages.sum()
    if total == 0.0:
        warnings.warn("zero summed row averages; proportional routing falls back to uniform")
        return DefenderPolicy(
            kind="proportional",
            plan=MixedStrategy.uniform(n_routes),
            lifetime=lifetime,
            fallback_uniform=True,
        )
    raw = 1.0 - averages / total
    if np.any(raw < -1e-12):
        raise ValueError(
            "proportional routing requires row averages of a single sign"
        )
    return DefenderPolicy(
        kind="proportional",
        plan=MixedStrategy(np.clip(raw, 0.0, None) / (n_routes - 1)),
        lifetime=lifetime,
    )


def fewest_hops_defender(routes: Sequence[Route]) -> DefenderPolicy:
    """Always the minimum-hop route; ties go to the lowest route index."""
    if not routes:
        raise ValueError("need at least one route")
    hops = [r.hop_count for r in routes]
    best = int(np.argmin(hops))
    return DefenderPolicy(kind="fewest_hops", plan=MixedStrategy.pure(len(routes), best))


def cached_shortest_defender(routes: Sequence[Route]) -> DefenderPolicy:
    """Minimum-hop route with inspection cost then index as tie-breakers.

    The plan is kept for the whole experiment (lifetime None) to mimic
    source-routing route caches.
    """
    if not routes:
        raise ValueError("need at least one route")
    best = min(range(len(routes)), key=lambda i: (routes[i].hop_count, routes[i].total_cost, i))
    return DefenderPolicy(kind="cached_shortest", plan=MixedStrategy.pure(len(routes), best))


def make_attacker(kind: str, game: GameInstance) -> AttackerProfile:
    if kind == "uniform":
        return AttackerProfile(kind, uniform_attacker(game.n_malware))
    if kind == "weighted":
        fallback = bool(np.all(game.attacker_matrix == 0.0))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            plan = weighted_attacker(game.attacker_matrix)
        return AttackerProfile(kind, plan, fallback_uniform=fallback)
    if kind == "nash":
        return AttackerProfile(kind, nash_attacker(game))
    raise ValueError(f"unknown attacker kind {kind!r}; expected one of {ATTACKER_KINDS}")


def make_policy(
    kind: str,
    game: GameInstance,
    routes: Sequence[Route],
    lifetime: int | None = None,
) -> DefenderPolicy:
    if kind == "irouting":
        return irouting_defender(game, lifetime=lifetime)
    if kind == "proportional":
        return proportional_defender(game.defender_matrix, lifetime=lifetime)
    if kind == "fewest_hops":
        policy = fewest_hops_defender(routes)
        return DefenderPolicy(kind, policy.plan, lifetime=lifetime)
    if kind == "cached_shortest":
        return cached_shortest_defender(routes)
    raise ValueError(f"unknown policy kind {kind!r}; expected one of {POLICY_KINDS}")

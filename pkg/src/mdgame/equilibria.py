"""Equilibrium computation for route-vs-malware games.

The worst-case-optimal defender randomisation comes from the standard
epigraph LP: maximise a scalar floor v subject to the defender's expected
payoff against every pure attacker action staying above v, with the route
probabilities on the simplex.  The attacker side of the saddle point is the
symmetric minimising LP (the dual).  Brute-force oracles (simplex grid scan
and support enumeration) provide independent cross-checks for small games.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import SolverError
from .game_model import GameInstance, MixedStrategy, expected_utility

VALUE_TOL = 1e-9


@dataclass
class LinearProgram:
    """Dense LP carrier: optimise objective @ x under row constraints.

    ``senses[i]`` is one of "<=", "=", ">=" and applies to row i of
    ``constraints``.  ``bounds`` holds one (lo, hi) pair per variable with
    None for an open end.
    """

    objective: np.ndarray
    constraints: np.ndarray
    senses: tuple[str, ...]
    rhs: np.ndarray
    bounds: tuple[tuple[float | None, float | None], ...]
    maximize: bool = False

    def __post_init__(self) -> None:
        self.objective = np.atleast_1d(np.asarray(self.objective, dtype=float))
        self.constraints = np.atleast_2d(np.asarray(self.constraints, dtype=float))
        self.rhs = np.atleast_1d(np.asarray(self.rhs, dtype=float))
        n_rows, n_vars = self.constraints.shape
        if self.objective.shape != (n_vars,):
            raise ValueError("objective length must match the variable count")
        if self.rhs.shape != (n_rows,):
            raise ValueError("one right-hand side per constraint row")
        if len(self.senses) != n_rows:
            raise ValueError("one sense per constraint row")
        if len(self.bounds) != n_vars:
            raise ValueError("one bound pair per variable")
        if any(s not in ("<=", "=", ">=") for s in self.senses):
            raise ValueError(f"unknown constraint sense in {self.senses}")


def solve_lp(lp: LinearProgram) -> tuple[np.ndarray, float]:
    """Solve a LinearProgram, returning (variable values, objective value).

    Game LPs are always feasible and bounded, so either failure mode is
    surfaced as a SolverError rather than a value.
    """
    c = -lp.objective if lp.maximize else lp.objective
    rows_ub, rhs_ub, rows_eq, rhs_eq = [], [], [], []
    for row, sense, b in zip(lp.constraints, lp.senses, lp.rhs):
        if sense == "<=":
            rows_ub.append(row)
            rhs_ub.append(b)
        elif sense == ">=":
            rows_ub.append(-row)
            rhs_ub.append(-b)
        else:
            rows_eq.append(row)
            rhs_eq.append(b)
    res = linprog(
        c,
        A_ub=np.array(rows_ub) if rows_ub else None,
        b_ub=np.array(rhs_ub) if rhs_ub else None,
        A_eq=np.array(rows_eq) if rows_eq else None,
        b_eq=np.array(rhs_eq) if rhs_eq else None,
        bounds=list(lp.bounds),
        method="highs-ds",
    )
    if res.status != 0:
        raise SolverError(f"LP solve failed (status {res.status}): {res.message}")
    value = float(res.fun)
    return np.asarray(res.x, dtype=float), (-value if lp.maximize else value)


@dataclass(frozen=True)
class SolutionReport:
    """A solved strategy pair plus the defender's guaranteed value."""

    defender_strategy: MixedStrategy
    attacker_strategy: MixedStrategy
    game_value: float
    method: str
    degenerate: bool = False


def _simplex_bounds(n: int) -> list[tuple[float | None, float | None]]:
    return [(0.0, None)] * n


def _maximin_lp(defender_matrix: np.ndarray) -> LinearProgram:
    """Variables (route probabilities..., v): maximise the payoff floor v."""
    n_routes, n_malware = defender_matrix.shape
    rows = []
    senses = []
    rhs = []
    for l in range(n_malware):
        # v - sum_j U_d[j, l] * rho_j <= 0
        row = np.concatenate([-defender_matrix[:, l], [1.0]])
        rows.append(row)
        senses.append("<=")
        rhs.append(0.0)
    rows.append(np.concatenate([np.ones(n_routes), [0.0]]))
    senses.append("=")
    rhs.append(1.0)
    objective = np.concatenate([np.zeros(n_routes), [1.0]])
    bounds = _simplex_bounds(n_routes) + [(None, None)]
    return LinearProgram(
        objective=objective,
        constraints=np.vstack(rows),
        senses=tuple(senses),
        rhs=np.array(rhs),
        bounds=tuple(bounds),
        maximize=True,
    )


def _minimax_lp(defender_matrix: np.ndarray) -> LinearProgram:
    """Attacker side: variables (malware probabilities..., u), minimise the cap u."""
    n_routes, n_malware = defender_matrix.shape
    rows = []
    senses = []
    rhs = []
    for j in range(n_routes):
        # sum_l U_d[j, l] * mu_l - u <= 0
        row = np.concatenate([defender_matrix[j, :], [-1.0]])
        rows.append(row)
        senses.append("<=")
        rhs.append(0.0)
    rows.append(np.concatenate([np.ones(n_malware), [0.0]]))
    senses.append("=")
    rhs.append(1.0)
    objective = np.concatenate([np.zeros(n_malware), [1.0]])
    bounds = _simplex_bounds(n_malware) + [(None, None)]
    return LinearProgram(
        objective=objective,
        constraints=np.vstack(rows),
        senses=tuple(senses),
        rhs=np.array(rhs),
        bounds=tuple(bounds),
        maximize=False,
    )


def _normalised(x: np.ndarray) -> MixedStrategy:
    probs = np.clip(np.asarray(x, dtype=float), 0.0, None)
    return MixedStrategy(probs / probs.sum())


def solve_maximin(game: GameInstance) -> SolutionReport:
    """Worst-case-optimal defender randomisation and the minimising attacker.

    The attacker strategy is the dual solution of the defender's LP, so in a
    zero-sum game the returned pair is a saddle point (Nash equilibrium).
    Games whose defender rows are all identical get the uniform strategy,
    since every randomisation ties; same for the attacker when all columns
    are identical.
    """
    matrix = game.defender_matrix
    n_routes, n_malware = matrix.shape
    rows_identical = bool(np.all(matrix == matrix[0:1, :]))
    cols_identical = bool(np.all(matrix == matrix[:, 0:1]))
    degenerate = rows_identical or cols_identical

    if rows_identical:
        rho = MixedStrategy.uniform(n_routes)
        value = float(matrix[0].min())
    else:
        x, value = solve_lp(_maximin_lp(matrix))
        rho = _normalised(x[:n_routes])

    if cols_identical:
        mu = MixedStrategy.uniform(n_malware)
    else:
        y, dual_value = solve_lp(_minimax_lp(matrix))
        mu = _normalised(y[:n_malware])
        if rows_identical:
            value = float(dual_value)
    return SolutionReport(
        defender_strategy=rho,
        attacker_strategy=mu,
        game_value=float(value),
        method="maximin_lp",
        degenerate=degenerate,
    )


def best_response_set(
    game: GameInstance,
    opponent_strategy: MixedStrategy,
    who: str,
    tol: float = 1e-9,
) -> tuple[int, ...]:
    """Every pure strategy within ``tol`` of the best payoff for ``who``."""
    if who == "defender":
        if len(opponent_strategy) != game.n_malware:
            raise ValueError("opponent strategy must range over malware")
        payoffs = game.defender_matrix @ opponent_strategy.probs
    elif who == "attacker":
        if len(opponent_strategy) != game.n_routes:
            raise ValueError("opponent strategy must range over routes")
        payoffs = game.attacker_matrix.T @ opponent_strategy.probs
    else:
        raise ValueError(f"who must be 'defender' or 'attacker', got {who!r}")
    best = payoffs.max()
    return tuple(int(i) for i in np.nonzero(payoffs >= best - tol)[0])


def _indifference_solve(matrix: np.ndarray) -> np.ndarray | None:
    """Solve [[M, -1], [1, 0]] @ (probs, value) = (0, .., 0, 1) if regular.

    ``matrix`` is the opponent-payoff submatrix restricted to a support pair;
    the solution makes the opponent indifferent across their support.
    Returns the probability vector, or None when the system is singular,
    inconsistent or leaves the simplex.
    """
    k = matrix.shape[0]
    system = np.zeros((k + 1, k + 1))
    system[:k, :k] = matrix
    system[:k, k] = -1.0
    system[k, :k] = 1.0
    target = np.zeros(k + 1)
    target[k] = 1.0
    try:
        solution = np.linalg.solve(system, target)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(solution)):
        return None
    if np.max(np.abs(system @ solution - target)) > 1e-7:
        return None
    probs = solution[:k]
    if np.any(probs < -1e-9):
        return None
    return np.clip(probs, 0.0, None)


def support_enumeration_ne(
    game: GameInstance, max_size: int = 4, tol: float = 1e-9
) -> list[SolutionReport]:
    """All mixed Nash equilibria of a small bimatrix game, by support pairs.

    For every equal-sized support pair the two indifference systems are
    solved and the candidate is kept when each player's support consists of
    best responses to the other's strategy.  Degenerate games (an optimal
    alternative outside the support) are flagged and reported through their
    vertex equilibria.
    """
    n_routes, n_malware = game.defender_matrix.shape
    if n_routes > max_size or n_malware > max_size:
        raise ValueError(
            f"support enumeration limited to {max_size} actions per player, "
            f"got {n_routes}x{n_malware}"
        )
    found: list[SolutionReport] = []
    seen: set[tuple[int, ...]] = set()
    for size in range(1, min(n_routes, n_malware) + 1):
        for rows in itertools.combinations(range(n_routes), size):
            for cols in itertools.combinations(range(n_malware), size):
                # attacker indifference across cols pins the defender probs
                rho_part = _indifference_solve(game.attacker_matrix[np.ix_(rows, cols)].T)
                if rho_part is None:
                    continue
                mu_part = _indifference_solve(game.defender_matrix[np.ix_(rows, cols)])
                if mu_part is None:
                    continue
                rho = np.zeros(n_routes)
                rho[list(rows)] = rho_part
                mu = np.zeros(n_malware)
                mu[list(cols)] = mu_part
                rho_s = MixedStrategy(rho / rho.sum())
                mu_s = MixedStrategy(mu / mu.sum())
                defender_br = best_response_set(game, mu_s, "defender", tol)
                attacker_br = best_response_set(game, rho_s, "attacker", tol)
                rho_support = rho_s.support(tol)
                mu_support = mu_s.support(tol)
                if not set(rho_support) <= set(defender_br):
                    continue
                if not set(mu_support) <= set(attacker_br):
                    continue
                key = tuple(
                    int(round(p * 1e9)) for p in np.concatenate([rho_s.probs, mu_s.probs])
                )
                if key in seen:
                    continue
                seen.add(key)
                degenerate = set(rho_support) != set(defender_br) or set(
                    mu_support
                ) != set(attacker_br)
                found.append(
                    SolutionReport(
                        defender_strategy=rho_s,
                        attacker_strategy=mu_s,
                        game_value=expected_utility(game, rho_s, mu_s, "defender"),
                        method="support_enumeration",
                        degenerate=degenerate,
                    )
                )
    return found


def solve_sse(game: GameInstance) -> SolutionReport:
    """Leader-commitment optimum via one LP per attacker pure strategy.

    For each malware l, find the defender randomisation that maximises her
    expected payoff subject to l being an attacker best response; the best
    feasible candidate wins.  Follower ties break in the defender's favour
    by construction.  Mixed commitments are allowed, so on general bimatrix
    games the value can exceed what any single-route commitment achieves.
    """
    defender = game.defender_matrix
    attacker = game.attacker_matrix
    n_routes, n_malware = defender.shape
    best: tuple[float, np.ndarray, int] | None = None
    for l in range(n_malware):
        rows = []
        senses = []
        rhs = []
        for other in range(n_malware):
            if other == l:
                continue
            rows.append(attacker[:, other] - attacker[:, l])
            senses.append("<=")
            rhs.append(0.0)
        rows.append(np.ones(n_routes))
        senses.append("=")
        rhs.append(1.0)
        lp = LinearProgram(
            objective=defender[:, l],
            constraints=np.vstack(rows),
            senses=tuple(senses),
            rhs=np.array(rhs),
            bounds=tuple(_simplex_bounds(n_routes)),
            maximize=True,
        )
        try:
            x, value = solve_lp(lp)
        except SolverError:
            # this malware cannot be made a best response; skip the candidate
            continue
        if best is None or value > best[0] + VALUE_TOL:
            best = (value, x, l)
    if best is None:
        raise SolverError("no attacker strategy is inducible as a best response")
    value, x, l = best
    return SolutionReport(
        defender_strategy=_normalised(x),
        attacker_strategy=MixedStrategy.pure(n_malware, l),
        game_value=float(value),
        method="sse_multiple_lp",
    )


def best_pure_commitment(game: GameInstance) -> tuple[int, int, float]:
    """Best single-route commitment under follower best response.

    The follower best-responds to the committed route and breaks ties in the
    defender's favour.  Returns (route index, follower malware index,
    defender value); route ties resolve to the lowest index.
    """
    defender = game.defender_matrix
    attacker = game.attacker_matrix
    best_route, best_malware, best_value = 0, 0, -np.inf
    for j in range(game.n_routes):
        br = np.nonzero(attacker[j] >= attacker[j].max() - VALUE_TOL)[0]
        l = int(br[np.argmax(defender[j, br])])
        if defender[j, l] > best_value + VALUE_TOL:
            best_route, best_malware, best_value = j, l, float(defender[j, l])
    return best_route, best_malware, best_value


def _simplex_grid(n_points: int, resolution: int) -> np.ndarray:
    """All lattice points with ``n_points`` coordinates summing to resolution."""
    if n_points == 1:
        return np.array([[resolution]], dtype=float)
    if n_points == 2:
        i = np.arange(resolution + 1, dtype=float)
        return np.column_stack([i, resolution - i])
    first = np.repeat(
        np.arange(resolution + 1), resolution + 1 - np.arange(resolution + 1)
    ).astype(float)
    second = np.concatenate(
        [np.arange(resolution + 1 - i, dtype=float) for i in range(resolution + 1)]
    )
    return np.column_stack([first, second, resolution - first - second])


def grid_oracle_maximin(game: GameInstance, step: float = 1e-3) -> SolutionReport:
    """Brute-force maximin estimate by scanning the defender simplex.

    Independent of the LP path: evaluates the worst pure attacker response
    at every grid point with the given resolution and keeps the best.  Only
    tractable for up to three routes.
    """
    matrix = game.defender_matrix
    n_routes, n_malware = matrix.shape
    if n_routes > 3:
        raise ValueError(f"grid oracle limited to 3 routes, got {n_routes}")
    if not (0.0 < step <= 0.1):
        raise ValueError(f"step must lie in (0, 0.1], got {step}")
    resolution = max(1, int(round(1.0 / step)))
    grid = _simplex_grid(n_routes, resolution) / resolution
    payoffs = grid @ matrix
    worst = payoffs.min(axis=1)
    best = int(np.argmax(worst))
    rho = MixedStrategy(grid[best])
    mu = MixedStrategy.pure(n_malware, int(np.argmin(payoffs[best])))
    return SolutionReport(
        defender_strategy=rho,
        attacker_strategy=mu,
        game_value=float(worst[best]),
        method="grid_oracle",
    )


# ---------------------------------------------------------------------------
# Randomised verification of the equivalence properties
# ---------------------------------------------------------------------------


def random_game_pair(
    rng: np.random.Generator,
    max_routes: int = 8,
    max_malware: int = 8,
    scalings: tuple[float, ...] = (0.5, 1.0, 2.0, 5.0),
) -> tuple[GameInstance, GameInstance]:
    """A scaled game and its zero-sum twin over shared losses and costs."""
    n_routes = int(rng.integers(1, max_routes + 1))
    n_malware = int(rng.integers(1, max_malware + 1))
    loss = rng.uniform(0.0, 5.0, size=(n_routes, n_malware))
    costs = rng.uniform(0.0, 1.5, size=n_routes)
    scaling = float(scalings[int(rng.integers(len(scalings)))])
    scaled = GameInstance.from_components(loss, costs, mode="scaled", scaling=scaling)
    zero_sum = GameInstance.from_components(loss, costs, mode="zero_sum")
    return scaled, zero_sum


def _strategy_set_distance(
    first: list[MixedStrategy], second: list[MixedStrategy]
) -> float:
    """Symmetric worst-case matching distance between two strategy sets."""
    if not first and not second:
        return 0.0
    if not first or not second:
        return np.inf

    def one_way(a: list[MixedStrategy], b: list[MixedStrategy]) -> float:
        return max(
            min(float(np.max(np.abs(x.probs - y.probs))) for y in b) for x in a
        )

    return max(one_way(first, second), one_way(second, first))


@dataclass
class EquivalenceReport:
    """Outcome of the randomised equivalence checks."""

    instances: int = 0
    failures: list[str] = field(default_factory=list)
    worst: dict[str, float] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def record(self, check: str, deviation: float, tol: float, context: str) -> None:
        self.worst[check] = max(self.worst.get(check, 0.0), deviation)
        if not (deviation <= tol):
            self.failures.append(
                f"{check}: deviation {deviation:.3e} > {tol:.1e}\n{context}"
            )

    def summary_lines(self) -> list[str]:
        lines = [f"instances checked: {self.instances}"]
        for check in sorted(self.worst):
            lines.append(f"  {check}: worst deviation {self.worst[check]:.3e}")
        lines.append(
            "result: PASS" if self.all_passed else f"result: FAIL ({len(self.failures)})"
        )
        return lines


def verify_equivalences(
    seed: int,
    count: int = 200,
    max_routes: int = 8,
    max_malware: int = 8,
    tol: float = 1e-6,
    support_limit: int = 4,
) -> EquivalenceReport:
    """Check the solution-concept equivalences on random game pairs.

    Per instance: (a) the maximin value is the same in the scaled and the
    zero-sum game, exactly; (b) commitment (SSE) and maximin give the
    defender the same value in the scaled game; (c) every route in the
    equilibrium support is a best response to the equilibrium malware plan
    and attains the game value; (d) on small instances support enumeration
    finds identical defender equilibrium sets in both games.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    report = EquivalenceReport()
    for i in range(count):
        scaled, zero_sum = random_game_pair(rng, max_routes, max_malware)
        context = (
            f"instance {i}: loss=\n{scaled.security_loss!r}\n"
            f"costs={scaled.route_costs!r} scaling={scaled.scaling}"
        )
        report.instances += 1

        maximin_scaled = solve_maximin(scaled)
        maximin_zero = solve_maximin(zero_sum)
        dev_a = abs(maximin_scaled.game_value - maximin_zero.game_value)
        report.record("value_scaled_vs_zero_sum", dev_a, 0.0, context)

        sse = solve_sse(scaled)
        dev_b = abs(sse.game_value - maximin_scaled.game_value)
        report.record("sse_vs_maximin", dev_b, tol, context)

        rho = maximin_zero.defender_strategy
        mu = maximin_zero.attacker_strategy
        value = maximin_zero.game_value
        row_payoffs = zero_sum.defender_matrix @ mu.probs
        best_row = float(row_payoffs.max())
        support = rho.support(tol=VALUE_TOL)
        dev_c = 0.0
        for j in support:
            dev_c = max(
                dev_c,
                abs(float(row_payoffs[j]) - value),
                best_row - float(row_payoffs[j]),
            )
        report.record("support_best_response", dev_c, tol, context)

        if scaled.n_routes <= support_limit and scaled.n_malware <= support_limit:
            ne_scaled = support_enumeration_ne(scaled, max_size=support_limit)
            ne_zero = support_enumeration_ne(zero_sum, max_size=support_limit)
            if not ne_scaled or not ne_zero:
                report.failures.append(f"support enumeration found nothing\n{context}")
                continue
            dev_d = _strategy_set_distance(
                [r.defender_strategy for r in ne_scaled],
                [r.defender_strategy for r in ne_zero],
            )
            report.record("defender_ne_sets", dev_d, tol, context)
    return report


@dataclass
class OracleReport:
    """Outcome of the LP-vs-brute-force cross checks."""

    grid_games: int = 0
    support_games: int = 0
    worst_grid_deviation: float = 0.0
    worst_support_deviation: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def summary_lines(self) -> list[str]:
        return [
            f"grid-oracle games: {self.grid_games} "
            f"(worst deviation {self.worst_grid_deviation:.3e})",
            f"support-enumeration games: {self.support_games} "
            f"(worst deviation {self.worst_support_deviation:.3e})",
            "result: PASS" if self.all_passed else f"result: FAIL ({len(self.failures)})",
        ]


def guaranteed_value(game: GameInstance, rho: MixedStrategy) -> float:
    """Worst-case expected defender payoff of ``rho`` over pure attacks."""
    return float((rho.probs @ game.defender_matrix).min())


def verify_oracles(
    seed: int,
    grid_count: int = 50,
    support_count: int = 50,
    grid_step: float = 1e-3,
    grid_rel_tol: float = 5e-3,
    support_tol: float = 1e-6,
) -> OracleReport:
    """Cross-check the LP solver against both brute-force oracles.

    The grid scan must land within ``grid_rel_tol`` of the LP value relative
    to the payoff range, and support enumeration must contain a defender
    strategy whose guaranteed value matches the LP maximin.
    """
    rng = np.random.default_rng(seed)
    report = OracleReport()
    for _ in range(grid_count):
        _, game = random_game_pair(rng, max_routes=3, max_malware=8)
        lp_value = solve_maximin(game).game_value
        grid_value = grid_oracle_maximin(game, step=grid_step).game_value
        payoff_range = float(np.ptp(game.defender_matrix))
        deviation = abs(lp_value - grid_value)
        report.grid_games += 1
        report.worst_grid_deviation = max(report.worst_grid_deviation, deviation)
        if deviation > grid_rel_tol * payoff_range:
            report.failures.append(
                f"grid oracle: |{lp_value} - {grid_value}| = {deviation:.3e} "
                f"exceeds {grid_rel_tol} x range {payoff_range:.3e}"
            )
    for _ in range(support_count):
        _, game = random_game_pair(rng, max_routes=4, max_malware=4)
        lp_value = solve_maximin(game).game_value
        equilibria = support_enumeration_ne(game, max_size=4)
        report.support_games += 1
        if not equilibria:
            report.failures.append("support enumeration found no equilibrium")
            continue
        deviation = min(
            abs(guaranteed_value(game, ne.defender_strategy) - lp_value)
            for ne in equilibria
        )
        report.worst_support_deviation = max(report.worst_support_deviation, deviation)
        if deviation > support_tol:
            report.failures.append(
                f"support enumeration: best guaranteed-value deviation "
                f"{deviation:.3e} exceeds {support_tol}"
            )
    return report


def sample_attack_plans(
    rng: np.random.Generator, n_malware: int, count: int
) -> np.ndarray:
    """Random malware plans with random support size (vertices included).

    Sampling sparse supports as well as interior points makes worst-case
    statistics over the sample track the true worst case.
    """
    plans = np.zeros((count, n_malware))
    for i in range(count):
        size = int(rng.integers(1, n_malware + 1))
        support = rng.choice(n_malware, size=size, replace=False)
        plans[i, support] = rng.dirichlet(np.ones(size))
    return plans


@dataclass
class GuaranteeReport:
    """Outcome of the security-strategy dominance spot checks."""

    games: int = 0
    worst_slack: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def summary_lines(self) -> list[str]:
        return [
            f"guarantee games: {self.games} (worst slack {self.worst_slack:.3e})",
            "result: PASS" if self.all_passed else f"result: FAIL ({len(self.failures)})",
        ]


def verify_guarantee(
    seed: int,
    game_count: int = 50,
    strategy_count: int = 1000,
    slack: float = 1e-9,
) -> GuaranteeReport:
    """Dominance of the maximin plan over random plans, on sampled attacks.

    For each game, the maximin plan's minimum expected payoff over a shared
    pool of random malware plans must be at least that of every random
    defender plan, up to ``slack``.
    """
    rng = np.random.default_rng(seed)
    report = GuaranteeReport()
    for _ in range(game_count):
        _, game = random_game_pair(rng, max_routes=6, max_malware=6)
        rho_star = solve_maximin(game).defender_strategy
        attack_pool = sample_attack_plans(rng, game.n_malware, strategy_count)
        defender_pool = rng.dirichlet(np.ones(game.n_routes), size=strategy_count)
        star_stat = float((attack_pool @ (rho_star.probs @ game.defender_matrix)).min())
        pool_payoffs = defender_pool @ game.defender_matrix @ attack_pool.T
        pool_stats = pool_payoffs.min(axis=1)
        report.games += 1
        gap = float((pool_stats - star_stat).max())
        report.worst_slack = max(report.worst_slack, gap)
        if gap > slack:
            report.failures.append(
                f"a random plan beat the maximin plan by {gap:.3e} on the sample"
            )
    return report

"""Domain types and payoff-matrix construction for the malware detection game.

The Defender (cluster head) picks a delivery route, the Attacker picks a
malware type.  Each relay device on a route runs its installed anti-malware
controls; the probability that a device misses a given malware is the product
of the complements of its control efficacies, and a route misses the malware
only if every relay does.  Defender utility combines the expected security
loss with the aggregate inspection cost of the chosen route.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, NoRouteError

MODE_ZERO_SUM = "zero_sum"
MODE_SCALED = "scaled"
MODE_ARBITRARY = "arbitrary"
MODES = (MODE_ZERO_SUM, MODE_SCALED, MODE_ARBITRARY)

PROB_SUM_TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MalwareSpec:
    """One malware type: which OS it infects and how much damage it causes."""

    id: str
    target_os: str
    damage: float

    def __post_init__(self) -> None:
        if self.damage < 0:
            raise ConfigError(f"malware {self.id!r}: damage must be >= 0")


@dataclass(frozen=True)
class ControlSpec:
    """One anti-malware control and the OS it can be installed on."""

    id: str
    os: str


@dataclass(frozen=True)
class SecurityProfile:
    """Malware set, control set and the detection-efficacy map between them.

    ``efficacy[(malware_id, control_id)]`` is the probability that the control
    detects the malware, constrained to [0, 1): no control is assumed perfect.
    Controls detect independent signs of malware, so complements multiply.
    """

    os_list: tuple[str, ...]
    malware_list: tuple[MalwareSpec, ...]
    control_list: tuple[ControlSpec, ...]
    efficacy: Mapping[tuple[str, str], float]

    def __post_init__(self) -> None:
        if not self.malware_list:
            raise ConfigError("security profile needs at least one malware type")
        if not self.os_list:
            raise ConfigError("security profile needs at least one OS")
        known_os = set(self.os_list)
        for m in self.malware_list:
            if m.target_os not in known_os:
                raise ConfigError(f"malware {m.id!r}: unknown OS {m.target_os!r}")
        for c in self.control_list:
            if c.os not in known_os:
                raise ConfigError(f"control {c.id!r}: unknown OS {c.os!r}")
        for (m_id, c_id), d in self.efficacy.items():
            if not (0.0 <= d < 1.0):
                raise ConfigError(
                    f"efficacy[{m_id!r}, {c_id!r}] = {d}: must lie in [0, 1)"
                )

    def malware_for_os(self, os: str) -> tuple[MalwareSpec, ...]:
        return tuple(m for m in self.malware_list if m.target_os == os)

    def controls_for_os(self, os: str) -> tuple[ControlSpec, ...]:
        return tuple(c for c in self.control_list if c.os == os)

    def detection_efficacy(self, malware_id: str, control_id: str) -> float:
        try:
            return self.efficacy[(malware_id, control_id)]
        except KeyError:
            raise ConfigError(
                f"no efficacy entry for malware {malware_id!r} "
                f"against control {control_id!r}"
            ) from None


@dataclass(frozen=True)
class Device:
    """A cluster device: OS, installed controls, inspection cost, position."""

    id: str
    os: str
    installed_controls: tuple[str, ...]
    inspection_cost: float
    position: tuple[float, float]

    def __post_init__(self) -> None:
        if self.inspection_cost < 0:
            raise ConfigError(f"device {self.id!r}: inspection cost must be >= 0")
        if len(set(self.installed_controls)) != len(self.installed_controls):
            raise ConfigError(f"device {self.id!r}: duplicate installed control")


def device_failure_probability(
    device: Device, malware: MalwareSpec, profile: SecurityProfile
) -> float:
    """Probability that ``device`` fails to detect ``malware``.

    Product of (1 - efficacy) over the device's installed controls; a device
    with no controls never detects anything (empty product = 1).
    """
    p = 1.0
    for control_id in device.installed_controls:
        p *= 1.0 - profile.detection_efficacy(malware.id, control_id)
    return p


def device_failure_vector(
    device: Device, malware_list: Sequence[MalwareSpec], profile: SecurityProfile
) -> np.ndarray:
    return np.array(
        [device_failure_probability(device, m, profile) for m in malware_list]
    )


@dataclass(frozen=True)
class Route:
    """A candidate delivery route between cluster head and requestor.

    ``relay_devices`` holds only the intermediate inspectors: the cluster head
    originates the message and the requestor is the infection target, so
    neither contributes detection.  A direct head-to-requestor link therefore
    has failure probability 1 for every malware.
    """

    index: int
    relay_devices: tuple[str, ...]
    malware_ids: tuple[str, ...]
    failure_vector: np.ndarray
    capability_set: tuple[np.ndarray, ...]
    cost_set: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(set(self.relay_devices)) != len(self.relay_devices):
            raise ConfigError(f"route {self.index}: relay devices must be distinct")
        if len(self.capability_set) != len(self.relay_devices):
            raise ConfigError(f"route {self.index}: one capability vector per relay")
        if len(self.cost_set) != len(self.relay_devices):
            raise ConfigError(f"route {self.index}: one inspection cost per relay")
        object.__setattr__(self, "failure_vector", _readonly(self.failure_vector))
        object.__setattr__(
            self, "capability_set", tuple(_readonly(v) for v in self.capability_set)
        )
        fv = self.failure_vector
        if fv.shape != (len(self.malware_ids),):
            raise ConfigError(f"route {self.index}: failure vector length mismatch")
        if np.any(fv < 0.0) or np.any(fv > 1.0):
            raise ConfigError(f"route {self.index}: failure probabilities outside [0, 1]")

    @property
    def hop_count(self) -> int:
        return len(self.relay_devices) + 1

    @property
    def total_cost(self) -> float:
        return float(sum(self.cost_set))


def make_route(
    index: int,
    relays: Sequence[Device],
    profile: SecurityProfile,
    malware_list: Sequence[MalwareSpec],
) -> Route:
    """Build a Route from relay devices, caching per-relay failure vectors."""
    capability = tuple(device_failure_vector(d, malware_list, profile) for d in relays)
    failure = np.ones(len(malware_list))
    for vec in capability:
        failure = failure * vec
    return Route(
        index=index,
        relay_devices=tuple(d.id for d in relays),
        malware_ids=tuple(m.id for m in malware_list),
        failure_vector=failure,
        capability_set=capability,
        cost_set=tuple(d.inspection_cost for d in relays),
    )


def route_failure_probability(route: Route, malware: MalwareSpec | str) -> float:
    """Probability that the route fails to detect ``malware``.

    Product of the per-relay failure probabilities; an inspector-free route
    (direct link) yields 1.
    """
    malware_id = malware if isinstance(malware, str) else malware.id
    try:
        idx = route.malware_ids.index(malware_id)
    except ValueError:
        raise ConfigError(
            f"route {route.index} has no failure entry for malware {malware_id!r}"
        ) from None
    p = 1.0
    for vec in route.capability_set:
        p *= float(vec[idx])
    return p


def defender_payoff(
    route: Route, malware: MalwareSpec, weights: tuple[float, float] = (1.0, 1.0)
) -> float:
    """Defender utility for a pure (route, malware) profile.

    Expected security loss (weighted failure probability times damage) plus
    the weighted inspection cost of every relay on the route, both negated.
    The whole route is charged regardless of where detection happens.
    """
    w_loss, w_cost = weights
    p = route_failure_probability(route, malware)
    return -w_loss * p * malware.damage - w_cost * route.total_cost


@dataclass(frozen=True)
class MixedStrategy:
    """A probability distribution over a finite pure-strategy index set."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("mixed strategy must be a non-empty 1-D distribution")
        if np.any(probs < -1e-12):
            raise ValueError(f"mixed strategy has negative entries: {probs}")
        probs = np.clip(probs, 0.0, None)
        if abs(float(probs.sum()) - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"mixed strategy sums to {probs.sum()}, expected 1")
        object.__setattr__(self, "probs", _readonly(probs))

    def __len__(self) -> int:
        return int(self.probs.size)

    def support(self, tol: float = 0.0) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.probs > tol)[0])

    @classmethod
    def uniform(cls, n: int) -> "MixedStrategy":
        if n < 1:
            raise ValueError("need at least one pure strategy")
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def pure(cls, n: int, index: int) -> "MixedStrategy":
        probs = np.zeros(n)
        probs[index] = 1.0
        return cls(probs)


@dataclass(frozen=True)
class GameInstance:
    """Defender and Attacker payoff matrices over routes x malware.

    ``zero_sum`` games negate the defender matrix for the attacker; ``scaled``
    games pay the attacker a positive multiple of the defender's security
    loss only (the attacker does not care about inspection costs);
    ``arbitrary`` games carry explicit matrices for worked examples.
    """

    defender_matrix: np.ndarray
    attacker_matrix: np.ndarray
    mode: str
    weights: tuple[float, float] = (1.0, 1.0)
    scaling: float = 1.0
    security_loss: np.ndarray | None = None
    route_costs: np.ndarray | None = None
    route_labels: tuple[str, ...] = ()
    malware_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        d = _readonly(np.atleast_2d(self.defender_matrix))
        a = _readonly(np.atleast_2d(self.attacker_matrix))
        if d.shape != a.shape:
            raise ValueError("defender and attacker matrices must share a shape")
        if self.mode not in MODES:
            raise ValueError(f"unknown game mode {self.mode!r}")
        object.__setattr__(self, "defender_matrix", d)
        object.__setattr__(self, "attacker_matrix", a)
        if self.security_loss is not None:
            object.__setattr__(self, "security_loss", _readonly(self.security_loss))
        if self.route_costs is not None:
            object.__setattr__(self, "route_costs", _readonly(self.route_costs))
        if not self.route_labels:
            object.__setattr__(
                self, "route_labels", tuple(f"r{j}" for j in range(d.shape[0]))
            )
        if not self.malware_labels:
            object.__setattr__(
                self, "malware_labels", tuple(f"m{l}" for l in range(d.shape[1]))
            )
        if self.mode == MODE_ZERO_SUM and not np.array_equal(a, -d):
            raise ValueError("zero_sum game requires attacker matrix == -defender matrix")
        if self.mode == MODE_SCALED:
            if self.security_loss is None:
                raise ValueError("scaled game requires the security-loss matrix")
            if self.scaling <= 0:
                raise ConfigError("scaled game requires scaling > 0")
            if not np.array_equal(a, self.scaling * self.security_loss):
                raise ValueError(
                    "scaled game requires attacker matrix == scaling * security loss"
                )

    @property
    def n_routes(self) -> int:
        return int(self.defender_matrix.shape[0])

    @property
    def n_malware(self) -> int:
        return int(self.defender_matrix.shape[1])

    @classmethod
    def from_matrices(
        cls,
        defender_matrix: np.ndarray,
        attacker_matrix: np.ndarray,
        route_labels: Sequence[str] = (),
        malware_labels: Sequence[str] = (),
    ) -> "GameInstance":
        """Explicit bimatrix game (worked-example inputs)."""
        return cls(
            defender_matrix=np.asarray(defender_matrix, dtype=float),
            attacker_matrix=np.asarray(attacker_matrix, dtype=float),
            mode=MODE_ARBITRARY,
            route_labels=tuple(route_labels),
            malware_labels=tuple(malware_labels),
        )

    @classmethod
    def from_components(
        cls,
        security_loss: np.ndarray,
        route_costs: np.ndarray,
        mode: str = MODE_ZERO_SUM,
        scaling: float = 1.0,
        route_labels: Sequence[str] = (),
        malware_labels: Sequence[str] = (),
    ) -> "GameInstance":
        """Build a game from an already-weighted loss matrix and cost vector."""
        loss = np.atleast_2d(np.asarray(security_loss, dtype=float))
        costs = np.atleast_1d(np.asarray(route_costs, dtype=float))
        if costs.shape != (loss.shape[0],):
            raise ValueError("need one route cost per security-loss row")
        if np.any(loss < 0) or np.any(costs < 0):
            raise ValueError("security losses and route costs must be >= 0")
        defender = -loss - costs[:, None]
        if mode == MODE_ZERO_SUM:
            attacker = -defender
        elif mode == MODE_SCALED:
            if scaling <= 0:
                raise ConfigError(f"scaling must be > 0, got {scaling}")
            attacker = scaling * loss
        else:
            raise ValueError(f"from_components supports zero_sum/scaled, not {mode!r}")
        return cls(
            defender_matrix=defender,
            attacker_matrix=attacker,
            mode=mode,
            scaling=scaling,
            security_loss=loss,
            route_costs=costs,
            route_labels=tuple(route_labels),
            malware_labels=tuple(malware_labels),
        )


def build_game(
    routes: Sequence[Route],
    profile: SecurityProfile,
    weights: tuple[float, float] = (1.0, 1.0),
    scaling: float = 1.0,
    mode: str = MODE_ZERO_SUM,
) -> GameInstance:
    """Assemble the payoff matrices for a set of routes.

    Every route must carry failure probabilities for the same malware
    sequence, and that malware must all target a single OS (the requestor's):
    the attacker only plays malware that can infect the destination.
    """
    if not routes:
        raise NoRouteError("cannot build a game without routes")
    if mode not in (MODE_ZERO_SUM, MODE_SCALED):
        raise ConfigError(f"build_game supports zero_sum/scaled, not {mode!r}")
    malware_ids = routes[0].malware_ids
    if not malware_ids:
        raise ConfigError("routes carry no malware entries")
    for r in routes:
        if r.malware_ids != malware_ids:
            raise ConfigError("all routes must cover the same malware sequence")
    by_id = {m.id: m for m in profile.malware_list}
    try:
        malware = [by_id[m_id] for m_id in malware_ids]
    except KeyError as exc:
        raise ConfigError(f"unknown malware id {exc.args[0]!r}") from None
    target_os = {m.target_os for m in malware}
    if len(target_os) != 1:
        raise ConfigError(
            f"game malware must target a single OS, got {sorted(target_os)}"
        )
    w_loss, w_cost = weights
    if not (0.0 <= w_loss <= 1.0 and 0.0 <= w_cost <= 1.0):
        raise ConfigError(f"weights must lie in [0, 1], got {weights}")
    damage = np.array([m.damage for m in malware])
    loss = np.vstack([w_loss * r.failure_vector * damage for r in routes])
    costs = np.array([w_cost * r.total_cost for r in routes])
    return GameInstance.from_components(
        security_loss=loss,
        route_costs=costs,
        mode=mode,
        scaling=scaling,
        route_labels=tuple(f"r{r.index}" for r in routes),
        malware_labels=malware_ids,
    )


def _check_profile(game: GameInstance, rho: MixedStrategy, mu: MixedStrategy) -> None:
    if len(rho) != game.n_routes:
        raise ValueError(
            f"defender strategy has {len(rho)} entries for {game.n_routes} routes"
        )
    if len(mu) != game.n_malware:
        raise ValueError(
            f"attacker strategy has {len(mu)} entries for {game.n_malware} malware"
        )


def expected_utility(
    game: GameInstance, rho: MixedStrategy, mu: MixedStrategy, who: str = "defender"
) -> float:
    """Expected payoff of a mixed profile for one player (bilinear form)."""
    _check_profile(game, rho, mu)
    if who == "defender":
        matrix = game.defender_matrix
    elif who == "attacker":
        matrix = game.attacker_matrix
    else:
        raise ValueError(f"who must be 'defender' or 'attacker', got {who!r}")
    return float(rho.probs @ matrix @ mu.probs)


def expected_decomposition(
    game: GameInstance, rho: MixedStrategy, mu: MixedStrategy
) -> tuple[float, float]:
    """Split the defender's expected utility into loss and cost terms.

    Returns (expected security loss, expected inspection cost); the second
    term depends only on the defender's randomisation.  Only available for
    games built from components, not arbitrary bimatrix inputs.
    """
    if game.security_loss is None or game.route_costs is None:
        raise ValueError("decomposition requires a game built from loss and costs")
    _check_profile(game, rho, mu)
    loss = float(rho.probs @ game.security_loss @ mu.probs)
    cost = float(game.route_costs @ rho.probs)
    return loss, cost

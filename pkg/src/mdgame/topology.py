"""Random device clusters and bounded route enumeration.

Devices are dropped uniformly in a rectangle and linked when within
transmission range.  Route discovery is modelled as complete knowledge of
the simple paths between cluster head and requestor, bounded in hop count
and truncated to a fixed catalogue size in canonical order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, GenerationError, NoRouteError
from .game_model import Device, Route, SecurityProfile, make_route


@dataclass(frozen=True)
class ClusterTopology:
    """Devices, geometric adjacency and the two endpoint roles."""

    devices: tuple[Device, ...]
    cluster_head: str
    requestor: str
    area: tuple[float, float]
    link_range: float
    profile: SecurityProfile

    def __post_init__(self) -> None:
        ids = [d.id for d in self.devices]
        if len(set(ids)) != len(ids):
            raise ConfigError("device ids must be unique")
        if self.cluster_head == self.requestor:
            raise ConfigError("cluster head and requestor must differ")
        known = set(ids)
        if self.cluster_head not in known or self.requestor not in known:
            raise ConfigError("cluster head and requestor must be cluster devices")
        object.__setattr__(self, "devices", tuple(self.devices))
        if not self._connected(self.cluster_head, self.requestor):
            raise GenerationError("cluster head cannot reach the requestor")

    @property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        """Symmetric, irreflexive neighbour map (distance <= link range)."""
        cached = getattr(self, "_adjacency_cache", None)
        if cached is not None:
            return cached
        neighbours: dict[str, list[str]] = {d.id: [] for d in self.devices}
        for i, a in enumerate(self.devices):
            for b in self.devices[i + 1:]:
                if math.dist(a.position, b.position) <= self.link_range:
                    neighbours[a.id].append(b.id)
                    neighbours[b.id].append(a.id)
        adjacency = {k: tuple(sorted(v)) for k, v in neighbours.items()}
        object.__setattr__(self, "_adjacency_cache", adjacency)
        return adjacency

    def device(self, device_id: str) -> Device:
        for d in self.devices:
            if d.id == device_id:
                return d
        raise KeyError(device_id)

    def _connected(self, start: str, goal: str) -> bool:
        adjacency = self.adjacency
        frontier = [start]
        seen = {start}
        while frontier:
            node = frontier.pop()
            if node == goal:
                return True
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return False


@dataclass(frozen=True)
class RouteCatalog:
    """Canonically ordered routes plus the discovery bounds used."""

    routes: tuple[Route, ...]
    max_hops: int
    max_routes: int
    malware_ids: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.routes)


def generate_cluster(
    seed: int | np.random.SeedSequence,
    n_devices: int,
    area: tuple[float, float],
    link_range: float,
    profile: SecurityProfile,
    control_policy: tuple[int, int] = (1, 3),
    cost_range: tuple[float, float] = (0.1, 0.4),
    cluster_head: str | None = None,
    requestor: str | None = None,
    max_attempts: int = 1000,
) -> ClusterTopology:
    """Draw a random cluster, retrying until head and requestor connect.

    Positions are uniform over the area; each device runs a random OS from
    the profile, carries between ``control_policy[0]`` and
    ``control_policy[1]`` compatible controls and draws its inspection cost
    uniformly from ``cost_range``.  Head and requestor are random distinct
    devices unless pinned by id.
    """
    if n_devices < 2:
        raise ConfigError("a cluster needs at least two devices")
    lo, hi = control_policy
    if not (0 <= lo <= hi):
        raise ConfigError(f"bad control policy {control_policy}")
    c_lo, c_hi = cost_range
    if not (0 <= c_lo <= c_hi):
        raise ConfigError(f"bad cost range {cost_range}")
    rng = np.random.default_rng(seed)
    width = len(str(n_devices - 1))
    ids = [f"d{i:0{width}d}" for i in range(n_devices)]
    if cluster_head is not None and cluster_head not in ids:
        raise ConfigError(f"pinned cluster head {cluster_head!r} not among {ids[0]}..{ids[-1]}")
    if requestor is not None and requestor not in ids:
        raise ConfigError(f"pinned requestor {requestor!r} not among {ids[0]}..{ids[-1]}")
    if cluster_head is not None and cluster_head == requestor:
        raise ConfigError("cluster head and requestor must differ")

    for _ in range(max_attempts):
        positions = rng.uniform((0.0, 0.0), area, size=(n_devices, 2))
        devices = []
        for i, device_id in enumerate(ids):
            os = profile.os_list[int(rng.integers(len(profile.os_list)))]
            compatible = [c.id for c in profile.controls_for_os(os)]
            k = int(rng.integers(lo, hi + 1)) if compatible else 0
            k = min(k, len(compatible))
            installed = tuple(
                sorted(rng.choice(compatible, size=k, replace=False))
            ) if k else ()
            devices.append(
                Device(
                    id=device_id,
                    os=os,
                    installed_controls=installed,
                    inspection_cost=float(rng.uniform(c_lo, c_hi)),
                    position=(float(positions[i, 0]), float(positions[i, 1])),
                )
            )
        head = cluster_head or ids[int(rng.integers(n_devices))]
        rqs = requestor
        if rqs is None:
            others = [i for i in ids if i != head]
            rqs = others[int(rng.integers(len(others)))]
        if head == rqs:
            continue
        try:
            return ClusterTopology(
                devices=tuple(devices),
                cluster_head=head,
                requestor=rqs,
                area=(float(area[0]), float(area[1])),
                link_range=float(link_range),
                profile=profile,
            )
        except GenerationError:
            continue
    raise GenerationError(
        f"no connected cluster in {max_attempts} attempts "
        f"(n={n_devices}, area={area}, range={link_range}); "
        "increase the transmission range or the device count"
    )


def _paths_of_length(
    adjacency: dict[str, tuple[str, ...]],
    start: str,
    goal: str,
    hops: int,
    limit: int | None,
) -> list[tuple[str, ...]]:
    """Simple start-to-goal paths with exactly ``hops`` edges, in lexicographic
    order of their intermediate-device sequence."""
    found: list[tuple[str, ...]] = []

    def extend(node: str, relays: list[str]) -> bool:
        depth = len(relays) + 1
        if depth == hops:
            if goal in adjacency[node]:
                found.append(tuple(relays))
                if limit is not None and len(found) >= limit:
                    return True
            return False
        for nxt in adjacency[node]:
            if nxt == goal or nxt == start or nxt in relays:
                continue
            relays.append(nxt)
            if extend(nxt, relays):
                return True
            relays.pop()
        return False

    if hops == 1:
        if goal in adjacency[start]:
            found.append(())
    else:
        extend(start, [])
    return found


def enumerate_routes(
    topology: ClusterTopology, max_hops: int = 6, max_routes: int = 10
) -> RouteCatalog:
    """Bounded simple paths from cluster head to requestor, canonical order.

    Canonical order is ascending hop count, then lexicographic relay-id
    sequence; enumeration proceeds hop count by hop count so truncation to
    ``max_routes`` keeps the canonically first routes.
    """
    if max_hops < 1:
        raise ConfigError("max_hops must be >= 1")
    if max_routes < 1:
        raise ConfigError("max_routes must be >= 1")
    requestor_os = topology.device(topology.requestor).os
    malware = topology.profile.malware_for_os(requestor_os)
    if not malware:
        raise ConfigError(
            f"profile has no malware for the requestor's OS {requestor_os!r}"
        )
    adjacency = topology.adjacency
    relay_sequences: list[tuple[str, ...]] = []
    for hops in range(1, max_hops + 1):
        remaining = max_routes - len(relay_sequences)
        if remaining <= 0:
            break
        relay_sequences.extend(
            _paths_of_length(
                adjacency, topology.cluster_head, topology.requestor, hops, remaining
            )
        )
    if not relay_sequences:
        raise NoRouteError(
            f"no route from {topology.cluster_head} to {topology.requestor} "
            f"within {max_hops} hops"
        )
    routes = tuple(
        make_route(j, [topology.device(i) for i in relays], topology.profile, malware)
        for j, relays in enumerate(relay_sequences)
    )
    return RouteCatalog(
        routes=routes,
        max_hops=max_hops,
        max_routes=max_routes,
        malware_ids=tuple(m.id for m in malware),
    )


def topology_to_document(topology: ClusterTopology) -> dict:
    """JSON-ready description; adjacency is derived, so not serialised."""
    return {
        "area": list(topology.area),
        "range": topology.link_range,
        "cluster_head": topology.cluster_head,
        "requestor": topology.requestor,
        "devices": [
            {
                "id": d.id,
                "os": d.os,
                "controls": list(d.installed_controls),
                "inspection_cost": d.inspection_cost,
                "position": list(d.position),
            }
            for d in topology.devices
        ],
    }


def topology_from_document(document: dict, profile: SecurityProfile) -> ClusterTopology:
    try:
        devices = tuple(
            Device(
                id=entry["id"],
                os=entry["os"],
                installed_controls=tuple(entry["controls"]),
                inspection_cost=float(entry["inspection_cost"]),
                position=(float(entry["position"][0]), float(entry["position"][1])),
            )
            for entry in document["devices"]
        )
        return ClusterTopology(
            devices=devices,
            cluster_head=document["cluster_head"],
            requestor=document["requestor"],
            area=(float(document["area"][0]), float(document["area"][1])),
            link_range=float(document["range"]),
            profile=profile,
        )
    except KeyError as exc:
        raise ConfigError(f"topology document missing key {exc.args[0]!r}") from None

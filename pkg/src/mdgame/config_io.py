"""Configuration documents, validation, and deterministic result files.

Configs are JSON; campaign tables are CSV with a fixed column order and
6-significant-digit floats; per-session traces are JSON lines.  Every run
writes a manifest with a reorder-stable config hash and per-output
checksums, enough to reproduce the run exactly.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError
from .game_model import ControlSpec, MalwareSpec, SecurityProfile

TOOL_VERSION = "0.1.0"

CSV_COLUMNS = (
    "case",
    "seed",
    "policy",
    "attacker",
    "replies",
    "detection_rate",
    "mean_Ud",
    "mean_security_loss",
    "mean_inspection_cost",
    "blacklist_count",
)

DEFAULT_POLICIES = ("irouting", "proportional", "fewest_hops", "cached_shortest")
DEFAULT_ATTACKERS = ("nash", "uniform", "weighted")


@dataclass(frozen=True)
class CampaignConfig:
    """Every knob of a simulation campaign, validated and defaults applied."""

    seed: int
    n_devices: int
    area: tuple[float, float]
    link_range: float
    max_hops: int
    max_routes: int
    replies: int
    cases: tuple[str, ...]
    topology_count: int
    cost_range: tuple[float, float]
    controls_per_device: tuple[int, int]
    loss_weight: float
    cost_weight: float
    scaling: float
    mode: str
    policies: tuple[str, ...]
    attackers: tuple[str, ...]
    profile: SecurityProfile
    cluster_head: str | None = None
    requestor: str | None = None
    plan_lifetime: int | None = None
    out_dir: str = "results"
    description: str = ""

    def with_seed(self, seed: int) -> "CampaignConfig":
        return replace(self, seed=seed)

    def to_document(self) -> dict:
        """JSON-ready document that parses back to an equal config."""
        return {
            "description": self.description,
            "seed": self.seed,
            "devices": self.n_devices,
            "area": list(self.area),
            "range": self.link_range,
            "max_hops": self.max_hops,
            "max_routes": self.max_routes,
            "replies": self.replies,
            "cases": list(self.cases),
            "topologies": self.topology_count,
            "cost_range": list(self.cost_range),
            "controls_per_device": list(self.controls_per_device),
            "weights": {"loss": self.loss_weight, "cost": self.cost_weight},
            "scaling": self.scaling,
            "mode": self.mode,
            "policies": list(self.policies),
            "attackers": list(self.attackers),
            "cluster_head": self.cluster_head,
            "requestor": self.requestor,
            "plan_lifetime": self.plan_lifetime,
            "out_dir": self.out_dir,
            "profile": {
                "os_list": list(self.profile.os_list),
                "malware": [
                    {"id": m.id, "os": m.target_os, "damage": m.damage}
                    for m in self.profile.malware_list
                ],
                "controls": [
                    {"id": c.id, "os": c.os} for c in self.profile.control_list
                ],
                "efficacy": {
                    m.id: {
                        c.id: self.profile.efficacy[(m.id, c.id)]
                        for c in self.profile.control_list
                        if (m.id, c.id) in self.profile.efficacy
                    }
                    for m in self.profile.malware_list
                },
            },
        }


def _require(document: Mapping, key: str, kind, where: str = "config"):
    if key not in document:
        raise ConfigError(f"{where}: missing required key {key!r}")
    value = document[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind):
        raise ConfigError(
            f"{where}.{key}: expected {getattr(kind, '__name__', kind)}, "
            f"got {type(value).__name__}"
        )
    return value


def _optional(document: Mapping, key: str, default):
    return document[key] if key in document else default


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {type(value).__name__}")
    return float(value)


def _parse_profile(document: Mapping) -> SecurityProfile:
    raw = _require(document, "profile", dict)
    os_list = tuple(_require(raw, "os_list", list, "profile"))
    malware = []
    for entry in _require(raw, "malware", list, "profile"):
        malware.append(
            MalwareSpec(
                id=_require(entry, "id", str, "profile.malware"),
                target_os=_require(entry, "os", str, "profile.malware"),
                damage=float(_require(entry, "damage", (int, float), "profile.malware")),
            )
        )
    controls = []
    for entry in _require(raw, "controls", list, "profile"):
        controls.append(
            ControlSpec(
                id=_require(entry, "id", str, "profile.controls"),
                os=_require(entry, "os", str, "profile.controls"),
            )
        )
    efficacy_doc = _require(raw, "efficacy", dict, "profile")
    efficacy: dict[tuple[str, str], float] = {}
    for m in malware:
        row = efficacy_doc.get(m.id)
        if row is None:
            raise ConfigError(f"profile.efficacy: missing row for malware {m.id!r}")
        for c in controls:
            if c.id not in row:
                raise ConfigError(
                    f"profile.efficacy[{m.id!r}]: missing entry for control {c.id!r}"
                )
            d = row[c.id]
            if not isinstance(d, (int, float)) or isinstance(d, bool):
                raise ConfigError(f"profile.efficacy[{m.id!r}][{c.id!r}]: not a number")
            if not (0.0 <= d < 1.0):
                raise ConfigError(
                    f"profile.efficacy[{m.id!r}][{c.id!r}] = {d}: must lie in [0, 1)"
                )
            efficacy[(m.id, c.id)] = float(d)
    profile = SecurityProfile(
        os_list=os_list,
        malware_list=tuple(malware),
        control_list=tuple(controls),
        efficacy=efficacy,
    )
    for os in os_list:
        if not profile.malware_for_os(os):
            raise ConfigError(f"profile: no malware targets OS {os!r}")
    return profile


def parse_config(document: Mapping) -> CampaignConfig:
    """Validate a config document and fill documented defaults."""
    if not isinstance(document, Mapping):
        raise ConfigError("config: expected a JSON object")
    profile = _parse_profile(document)

    seed = _optional(document, "seed", 12345)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("seed: expected a non-negative integer")
    n_devices = _optional(document, "devices", 20)
    if not isinstance(n_devices, int) or n_devices < 2:
        raise ConfigError("devices: expected an integer >= 2")
    area_raw = _optional(document, "area", [1000.0, 1000.0])
    if not (isinstance(area_raw, list) and len(area_raw) == 2):
        raise ConfigError("area: expected [width, height]")
    area = (_number(area_raw[0], "area[0]"), _number(area_raw[1], "area[1]"))
    if min(area) <= 0:
        raise ConfigError("area: dimensions must be positive")
    link_range = _number(_optional(document, "range", 300.0), "range")
    if link_range <= 0:
        raise ConfigError("range: must be positive")
    max_hops = _optional(document, "max_hops", 6)
    if not isinstance(max_hops, int) or max_hops < 1:
        raise ConfigError("max_hops: expected an integer >= 1")
    max_routes = _optional(document, "max_routes", 10)
    if not isinstance(max_routes, int) or max_routes < 1:
        raise ConfigError("max_routes: expected an integer >= 1")
    replies = _optional(document, "replies", 1000)
    if not isinstance(replies, int) or replies < 0:
        raise ConfigError("replies: expected an integer >= 0")
    cases_raw = _optional(document, "cases", [f"case{i}" for i in range(1, 6)])
    if not (isinstance(cases_raw, list) and cases_raw):
        raise ConfigError("cases: expected a non-empty list of labels")
    cases = tuple(str(c) for c in cases_raw)
    if len(set(cases)) != len(cases):
        raise ConfigError("cases: labels must be unique")
    topology_count = _optional(document, "topologies", 10)
    if not isinstance(topology_count, int) or topology_count < 1:
        raise ConfigError("topologies: expected an integer >= 1")
    cost_raw = _optional(document, "cost_range", [0.1, 0.4])
    if not (isinstance(cost_raw, list) and len(cost_raw) == 2):
        raise ConfigError("cost_range: expected [min, max]")
    cost_range = (
        _number(cost_raw[0], "cost_range[0]"),
        _number(cost_raw[1], "cost_range[1]"),
    )
    if not (0 <= cost_range[0] <= cost_range[1]):
        raise ConfigError("cost_range: need 0 <= min <= max")
    ctrl_raw = _optional(document, "controls_per_device", [1, 3])
    if not (isinstance(ctrl_raw, list) and len(ctrl_raw) == 2):
        raise ConfigError("controls_per_device: expected [min, max]")
    controls_per_device = (int(ctrl_raw[0]), int(ctrl_raw[1]))
    if not (0 <= controls_per_device[0] <= controls_per_device[1]):
        raise ConfigError("controls_per_device: need 0 <= min <= max")
    weights_raw = _optional(document, "weights", {"loss": 1.0, "cost": 1.0})
    if not isinstance(weights_raw, Mapping):
        raise ConfigError("weights: expected an object with 'loss' and 'cost'")
    loss_weight = _number(_optional(weights_raw, "loss", 1.0), "weights.loss")
    cost_weight = _number(_optional(weights_raw, "cost", 1.0), "weights.cost")
    for name, w in (("loss", loss_weight), ("cost", cost_weight)):
        if not (0.0 <= w <= 1.0):
            raise ConfigError(f"weights.{name}: must lie in [0, 1]")
    scaling = _number(_optional(document, "scaling", 1.0), "scaling")
    if scaling <= 0:
        raise ConfigError("scaling: must be positive")
    mode = _optional(document, "mode", "zero_sum")
    if mode not in ("zero_sum", "scaled"):
        raise ConfigError(f"mode: expected 'zero_sum' or 'scaled', got {mode!r}")
    policies = tuple(_optional(document, "policies", list(DEFAULT_POLICIES)))
    if not policies:
        raise ConfigError("policies: expected a non-empty list")
    for p in policies:
        if p not in DEFAULT_POLICIES:
            raise ConfigError(f"policies: unknown policy {p!r}")
    attackers = tuple(_optional(document, "attackers", list(DEFAULT_ATTACKERS)))
    if not attackers:
        raise ConfigError("attackers: expected a non-empty list")
    for a in attackers:
        if a not in DEFAULT_ATTACKERS:
            raise ConfigError(f"attackers: unknown attacker {a!r}")
    cluster_head = _optional(document, "cluster_head", None)
    requestor = _optional(document, "requestor", None)
    for name, value in (("cluster_head", cluster_head), ("requestor", requestor)):
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"{name}: expected a device id string or null")
    if cluster_head is not None and cluster_head == requestor:
        raise ConfigError("cluster_head and requestor must differ")
    plan_lifetime = _optional(document, "plan_lifetime", None)
    if plan_lifetime is not None and (
        not isinstance(plan_lifetime, int) or plan_lifetime < 1
    ):
        raise ConfigError("plan_lifetime: expected null or an integer >= 1")
    out_dir = _optional(document, "out_dir", "results")
    description = str(_optional(document, "description", ""))

    return CampaignConfig(
        seed=seed,
        n_devices=n_devices,
        area=area,
        link_range=link_range,
        max_hops=max_hops,
        max_routes=max_routes,
        replies=replies,
        cases=cases,
        topology_count=topology_count,
        cost_range=cost_range,
        controls_per_device=controls_per_device,
        loss_weight=loss_weight,
        cost_weight=cost_weight,
        scaling=scaling,
        mode=mode,
        policies=policies,
        attackers=attackers,
        profile=profile,
        cluster_head=cluster_head,
        requestor=requestor,
        plan_lifetime=plan_lifetime,
        out_dir=str(out_dir),
        description=description,
    )


def load_config(path: str | Path) -> CampaignConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    return parse_config(document)


# ---------------------------------------------------------------------------
# Result emission
# ---------------------------------------------------------------------------


def format_float(value) -> str:
    """Fixed CSV float formatting: 6 significant digits, empty for missing."""
    if value is None:
        return ""
    return format(float(value), ".6g")


def rows_to_csv_text(rows: Iterable[Mapping]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        cells = []
        for column in CSV_COLUMNS:
            value = row.get(column)
            if column in ("case", "policy", "attacker"):
                cells.append(str(value))
            elif column in ("seed", "replies", "blacklist_count"):
                cells.append(str(int(value)))
            else:
                cells.append(format_float(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_atomic(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def config_hash(config: CampaignConfig) -> str:
    canonical = json.dumps(config.to_document(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def file_checksum(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(
    out_dir: Path, config: CampaignConfig, outputs: Sequence[Path],
    notes: Sequence[str] = (),
) -> None:
    """Record tool version, config (and its hash) and output checksums."""
    manifest = {
        "tool_version": TOOL_VERSION,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config_hash": config_hash(config),
        "config": config.to_document(),
        "outputs": {path.name: file_checksum(path) for path in outputs},
        "notes": list(notes),
    }
    write_atomic(out_dir / "manifest.json", json.dumps(manifest, indent=2) + "\n")


def emit_results(
    rows: Iterable[Mapping],
    out_dir: str | Path,
    config: CampaignConfig,
    csv_name: str = "campaign.csv",
    extra_notes: Sequence[str] = (),
) -> Path:
    """Write the CSV table and its manifest atomically; returns the CSV path.

    The CSV bytes depend only on (config, seed, tool version); the manifest
    additionally records a timestamp and output checksums.
    """
    out = Path(out_dir)
    csv_path = out / csv_name
    try:
        write_atomic(csv_path, rows_to_csv_text(rows))
        write_manifest(out, config, [csv_path], extra_notes)
    except OSError as exc:
        raise OSError(f"failed writing results under {out}: {exc}") from exc
    return csv_path


def outcomes_to_jsonl(outcomes) -> str:
    lines = []
    for i, o in enumerate(outcomes):
        lines.append(
            json.dumps(
                {
                    "session": i,
                    "route": o.route_index,
                    "malware": o.malware_index,
                    "detected": o.detected,
                    "detector": o.detector,
                    "inspected": o.inspected_count,
                    "payoff": o.realized_defender_payoff,
                    "blacklist": o.blacklist_event,
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")

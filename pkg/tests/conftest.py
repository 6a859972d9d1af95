import numpy as np
import pytest

from mdgame.game_model import (
    ControlSpec,
    Device,
    MalwareSpec,
    Route,
    SecurityProfile,
)


def make_profile(malware, controls, efficacy, os="os_a"):
    """Small single-OS profile from plain dicts.

    ``malware``: {id: damage}; ``controls``: iterable of ids;
    ``efficacy``: {(malware_id, control_id): d}.
    """
    return SecurityProfile(
        os_list=(os,),
        malware_list=tuple(MalwareSpec(m, os, h) for m, h in malware.items()),
        control_list=tuple(ControlSpec(c, os) for c in controls),
        efficacy=dict(efficacy),
    )


def make_device(device_id, controls=(), cost=0.0, position=(0.0, 0.0), os="os_a"):
    return Device(
        id=device_id,
        os=os,
        installed_controls=tuple(controls),
        inspection_cost=cost,
        position=position,
    )


def synth_route(index, relay_probs, costs=None, malware_ids=None):
    """Route built directly from per-relay failure vectors (one row per relay)."""
    relay_probs = [np.asarray(p, dtype=float) for p in relay_probs]
    n_malware = len(relay_probs[0]) if relay_probs else (
        len(malware_ids) if malware_ids else 1
    )
    if malware_ids is None:
        malware_ids = tuple(f"m{l}" for l in range(n_malware))
    if costs is None:
        costs = tuple(0.0 for _ in relay_probs)
    failure = np.ones(n_malware)
    for p in relay_probs:
        failure = failure * p
    return Route(
        index=index,
        relay_devices=tuple(f"x{index}_{i}" for i in range(len(relay_probs))),
        malware_ids=tuple(malware_ids),
        failure_vector=failure,
        capability_set=tuple(relay_probs),
        cost_set=tuple(costs),
    )


@pytest.fixture
def two_malware_profile():
    """mal_x (damage 10) and mal_y (damage 4) against three controls."""
    return make_profile(
        malware={"mal_x": 10.0, "mal_y": 4.0},
        controls=["ctl_1", "ctl_2", "ctl_3"],
        efficacy={
            ("mal_x", "ctl_1"): 0.9,
            ("mal_x", "ctl_2"): 0.8,
            ("mal_x", "ctl_3"): 0.5,
            ("mal_y", "ctl_1"): 0.5,
            ("mal_y", "ctl_2"): 0.0,
            ("mal_y", "ctl_3"): 0.6,
        },
    )

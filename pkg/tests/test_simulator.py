import numpy as np
import pytest

from mdgame.config_io import parse_config
from mdgame.game_model import GameInstance, MixedStrategy, expected_utility
from mdgame.simulator import (
    run_campaign,
    run_experiment,
    run_session,
    session_stream,
    topology_seed_for,
)
from mdgame.strategies import AttackerProfile, DefenderPolicy
from mdgame.topology import RouteCatalog

from conftest import synth_route


def pinned(plan_kind, probs):
    strategy = MixedStrategy(np.asarray(probs, dtype=float))
    if plan_kind == "policy":
        return DefenderPolicy(kind="irouting", plan=strategy)
    return AttackerProfile(kind="uniform", plan=strategy)


def catalog_and_game(routes, damages):
    loss = np.vstack([r.failure_vector * np.asarray(damages) for r in routes])
    costs = np.array([r.total_cost for r in routes])
    game = GameInstance.from_components(loss, costs)
    catalog = RouteCatalog(
        routes=tuple(routes), max_hops=6, max_routes=10,
        malware_ids=routes[0].malware_ids,
    )
    return catalog, game


class TestRunSession:
    def test_certain_detection(self):
        route = synth_route(0, [[1.0], [0.0]], costs=(0.1, 0.1))
        catalog, game = catalog_and_game([route], [5.0])
        rng = np.random.default_rng(0)
        for _ in range(50):
            outcome = run_session(
                pinned("policy", [1.0]), pinned("attacker", [1.0]), catalog, game, rng
            )
            assert outcome.detected
            assert outcome.detector == route.relay_devices[1]
            assert outcome.inspected_count == 2
            assert outcome.blacklist_event

    def test_direct_route_is_never_inspected(self):
        route = synth_route(0, [])
        catalog, game = catalog_and_game([route], [5.0])
        rng = np.random.default_rng(0)
        outcome = run_session(
            pinned("policy", [1.0]), pinned("attacker", [1.0]), catalog, game, rng
        )
        assert not outcome.detected
        assert outcome.detector is None
        assert outcome.inspected_count == 0

    def test_detection_rate_converges_to_route_complement(self):
        # two relays failing with 0.5 each: detection probability 0.75
        route = synth_route(0, [[0.5], [0.5]])
        catalog, game = catalog_and_game([route], [5.0])
        rng = np.random.default_rng(20160)
        detections = sum(
            run_session(
                pinned("policy", [1.0]), pinned("attacker", [1.0]), catalog, game, rng
            ).detected
            for _ in range(100_000)
        )
        assert detections / 100_000 == pytest.approx(0.75, abs=0.01)

    def test_realized_payoff_is_the_matrix_entry(self):
        route_a = synth_route(0, [[0.5, 0.25]], costs=(1.0,))
        route_b = synth_route(1, [[0.2, 0.9]], costs=(2.0,))
        catalog, game = catalog_and_game([route_a, route_b], [10.0, 4.0])
        rng = np.random.default_rng(3)
        for _ in range(200):
            outcome = run_session(
                pinned("policy", [0.5, 0.5]),
                pinned("attacker", [0.5, 0.5]),
                catalog, game, rng,
            )
            expected = game.defender_matrix[outcome.route_index, outcome.malware_index]
            assert outcome.realized_defender_payoff == expected
            assert outcome.inspected_count <= len(
                catalog.routes[outcome.route_index].relay_devices
            )
            if outcome.detected:
                assert outcome.detector in catalog.routes[
                    outcome.route_index
                ].relay_devices


@pytest.fixture(scope="module")
def small_config():
    return parse_config(
        {
            "seed": 424242,
            "devices": 12,
            "area": [600, 600],
            "range": 250,
            "replies": 400,
            "cases": ["caseA", "caseB"],
            "topologies": 2,
            "profile": {
                "os_list": ["os_a"],
                "malware": [
                    {"id": "m_fast", "os": "os_a", "damage": 8.0},
                    {"id": "m_slow", "os": "os_a", "damage": 3.0},
                ],
                "controls": [
                    {"id": "c_net", "os": "os_a"},
                    {"id": "c_host", "os": "os_a"},
                ],
                "efficacy": {
                    "m_fast": {"c_net": 0.7, "c_host": 0.3},
                    "m_slow": {"c_net": 0.2, "c_host": 0.8},
                },
            },
        }
    )


class TestRunExperiment:
    def test_zero_replies_yields_empty_report(self, small_config):
        config = small_config
        empty = run_experiment(
            parse_config({**config.to_document(), "replies": 0})
        )
        assert empty.replies == 0
        assert empty.detection_rate is None
        assert empty.mean_defender_utility is None
        assert empty.outcomes == []

    def test_deterministic_given_seed(self, small_config):
        first = run_experiment(small_config)
        second = run_experiment(small_config)
        assert first.detection_rate == second.detection_rate
        assert first.mean_defender_utility == second.mean_defender_utility
        assert [o.route_index for o in first.outcomes] == [
            o.route_index for o in second.outcomes
        ]

    def test_blacklist_events_equal_detections(self, small_config):
        report = run_experiment(small_config)
        detections = sum(1 for o in report.outcomes if o.detected)
        assert report.blacklist_count == detections

    def test_frequencies_sum_to_one(self, small_config):
        report = run_experiment(small_config)
        assert report.route_frequencies.sum() == pytest.approx(1.0)
        assert report.malware_frequencies.sum() == pytest.approx(1.0)

    def test_policy_and_attacker_override(self, small_config):
        report = run_experiment(
            small_config, policy_kind="fewest_hops", attacker_kind="uniform"
        )
        assert report.policy == "fewest_hops"
        assert report.attacker == "uniform"
        assert len(report.route_frequencies.nonzero()[0]) == 1

    def test_plan_lifetime_changes_nothing_on_static_topology(self, small_config):
        base = run_experiment(small_config)
        refreshed = run_experiment(
            parse_config({**small_config.to_document(), "plan_lifetime": 50})
        )
        assert [o.route_index for o in base.outcomes] == [
            o.route_index for o in refreshed.outcomes
        ]
        assert base.mean_defender_utility == refreshed.mean_defender_utility


class TestConvergence:
    def build_cell(self):
        route_a = synth_route(0, [[0.5, 0.2], [0.5, 0.6]], costs=(0.3, 0.4))
        route_b = synth_route(1, [[0.9, 0.1]], costs=(0.2,))
        return catalog_and_game([route_a, route_b], [10.0, 4.0])

    def test_mean_payoff_converges_to_expected_utility(self):
        catalog, game = self.build_cell()
        policy = pinned("policy", [0.3, 0.7])
        attacker = pinned("attacker", [0.6, 0.4])
        rng = np.random.default_rng(99)
        payoffs = [
            run_session(policy, attacker, catalog, game, rng).realized_defender_payoff
            for _ in range(100_000)
        ]
        expected = expected_utility(game, policy.plan, attacker.plan)
        payoff_range = float(np.ptp(game.defender_matrix))
        assert abs(np.mean(payoffs) - expected) <= 0.02 * payoff_range

    def test_route_frequencies_converge_to_plan(self):
        catalog, game = self.build_cell()
        policy = pinned("policy", [0.3, 0.7])
        attacker = pinned("attacker", [0.6, 0.4])
        rng = np.random.default_rng(100)
        counts = np.zeros(2)
        n = 100_000
        for _ in range(n):
            counts[run_session(policy, attacker, catalog, game, rng).route_index] += 1
        total_variation = 0.5 * np.abs(counts / n - policy.plan.probs).sum()
        assert total_variation <= 0.02


class TestCampaign:
    def test_single_cell_grid_matches_experiment(self, small_config):
        config = parse_config(
            {
                **small_config.to_document(),
                "cases": ["caseA"],
                "topologies": 1,
                "policies": ["irouting"],
                "attackers": ["nash"],
            }
        )
        campaign = run_campaign(config)
        assert len(campaign.reports) == 1
        single = run_experiment(config)
        row = campaign.rows()[0]
        assert row["detection_rate"] == single.detection_rate
        assert row["mean_Ud"] == single.mean_defender_utility
        assert row["blacklist_count"] == single.blacklist_count

    def test_grid_shape_and_cell_isolation(self, small_config):
        campaign = run_campaign(small_config)
        expected_cells = 2 * 2 * len(small_config.policies) * len(small_config.attackers)
        assert len(campaign.reports) == expected_cells
        assert not campaign.failures
        # same topology seed within a (case, topology) group
        seeds = {(r.case, r.topology_seed) for r in campaign.reports}
        assert len(seeds) == 4

    def test_master_seed_isolates_randomness(self, small_config):
        other = run_campaign(small_config.with_seed(1))
        base = run_campaign(small_config)
        base_rows = base.rows()
        other_rows = other.rows()
        assert [
            (r["case"], r["policy"], r["attacker"], r["replies"])
            for r in base_rows
        ] == [
            (r["case"], r["policy"], r["attacker"], r["replies"])
            for r in other_rows
        ]
        assert any(
            b["seed"] != o["seed"] for b, o in zip(base_rows, other_rows)
        )

    def test_scaled_mode_campaign_runs(self, small_config):
        config = parse_config(
            {
                **small_config.to_document(),
                "mode": "scaled",
                "scaling": 2.0,
                "cases": ["caseA"],
                "topologies": 1,
                "replies": 100,
            }
        )
        campaign = run_campaign(config)
        assert not campaign.failures
        assert len(campaign.reports) == len(config.policies) * len(config.attackers)
        for report in campaign.reports:
            assert 0.0 <= report.detection_rate <= 1.0
            assert report.mean_defender_utility <= 0.0

    def test_zero_replies_row_serialises(self, small_config):
        from mdgame.config_io import CSV_COLUMNS, rows_to_csv_text

        config = parse_config(
            {
                **small_config.to_document(),
                "replies": 0,
                "cases": ["caseA"],
                "topologies": 1,
                "policies": ["irouting"],
                "attackers": ["uniform"],
            }
        )
        campaign = run_campaign(config)
        text = rows_to_csv_text(campaign.rows())
        lines = text.splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        cells = lines[1].split(",")
        assert cells[4] == "0"      # replies
        assert cells[5] == ""       # detection rate undefined
        assert cells[6] == ""       # mean utility undefined

    def test_cell_streams_are_keyed_not_ordered(self, small_config):
        # the same cell coordinates give the same stream regardless of
        # whatever else was drawn before
        first = session_stream(small_config.seed, 1, 1, 2, 1)
        second = session_stream(small_config.seed, 1, 1, 2, 1)
        assert first.random() == second.random()
        assert topology_seed_for(small_config.seed, 1, 1) == topology_seed_for(
            small_config.seed, 1, 1
        )
        assert topology_seed_for(small_config.seed, 1, 1) != topology_seed_for(
            small_config.seed, 1, 2
        )

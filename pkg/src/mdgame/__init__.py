"""Game-optimal route selection for collaborative malware detection in
device-to-device clusters: payoff-matrix construction, LP equilibrium
solvers with brute-force oracles, attacker/defender strategy profiles,
random topologies, and a seeded Monte Carlo simulator."""

from .config_io import CampaignConfig, load_config, parse_config
from .equilibria import (
    LinearProgram,
    SolutionReport,
    best_pure_commitment,
    best_response_set,
    grid_oracle_maximin,
    solve_lp,
    solve_maximin,
    solve_sse,
    support_enumeration_ne,
    verify_equivalences,
    verify_guarantee,
    verify_oracles,
)
from .errors import ConfigError, GenerationError, NoRouteError, SolverError
from .game_model import (
    ControlSpec,
    Device,
    GameInstance,
    MalwareSpec,
    MixedStrategy,
    Route,
    SecurityProfile,
    build_game,
    defender_payoff,
    device_failure_probability,
    expected_decomposition,
    expected_utility,
    route_failure_probability,
)
from .simulator import (
    CampaignResult,
    ExperimentReport,
    SessionOutcome,
    run_campaign,
    run_experiment,
    run_session,
)
from .strategies import (
    AttackerProfile,
    DefenderPolicy,
    cached_shortest_defender,
    fewest_hops_defender,
    irouting_defender,
    make_attacker,
    make_policy,
    nash_attacker,
    proportional_defender,
    uniform_attacker,
    weighted_attacker,
)
from .topology import (
    ClusterTopology,
    RouteCatalog,
    enumerate_routes,
    generate_cluster,
    topology_from_document,
    topology_to_document,
)

__version__ = "0.1.0"

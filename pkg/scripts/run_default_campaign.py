#!/usr/bin/env python3
"""Run the default campaign and print the policy comparison table.

Equivalent to ``mdgame campaign --config configs/default.json`` plus a
per-(policy, attacker) summary on stdout.
"""

import argparse
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mdgame.config_io import emit_results, load_config
from mdgame.simulator import run_campaign


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--config",
        default=str(Path(__file__).resolve().parent.parent / "configs" / "default.json"),
    )
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="output directory (default from config)")
    args = parser.parse_args()

    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    result = run_campaign(config)
    csv_path = emit_results(result.rows(), args.out or config.out_dir, config)
    print(f"campaign written: {csv_path} ({len(result.reports)} cells)")

    groups = defaultdict(list)
    for report in result.reports:
        groups[(report.attacker, report.policy)].append(report)
    print(f"{'attacker':>10s} {'policy':>16s} {'mean_Ud':>9s} {'detection':>10s}")
    for (attacker, policy), reports in sorted(groups.items()):
        mean_ud = np.mean([r.mean_defender_utility for r in reports])
        mean_rate = np.mean([r.detection_rate for r in reports])
        print(f"{attacker:>10s} {policy:>16s} {mean_ud:>9.3f} {mean_rate:>10.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

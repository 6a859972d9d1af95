#!/usr/bin/env python3
"""Summarise (and optionally plot) a campaign CSV.

Reads the fixed-column campaign table, prints per (policy, attacker) means,
and writes grouped bar charts when matplotlib is installed.  Not part of the
package contract; plain CSV consumers work just as well.
"""

import argparse
import csv
import sys
from collections import defaultdict


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_path", help="path to a campaign.csv")
    parser.add_argument("--png", help="write bar charts to this file")
    args = parser.parse_args()

    rows = []
    with open(args.csv_path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            if row["detection_rate"] == "":
                continue
            rows.append(row)
    if not rows:
        print("no data rows")
        return 1

    utilities = defaultdict(list)
    rates = defaultdict(list)
    for row in rows:
        key = (row["attacker"], row["policy"])
        utilities[key].append(float(row["mean_Ud"]))
        rates[key].append(float(row["detection_rate"]))

    attackers = sorted({a for a, _ in utilities})
    policies = sorted({p for _, p in utilities})
    print(f"{'attacker':>10s} {'policy':>16s} {'mean_Ud':>9s} {'detection':>10s} {'cells':>6s}")
    for attacker in attackers:
        for policy in policies:
            cells = utilities[(attacker, policy)]
            mean_ud = sum(cells) / len(cells)
            mean_rate = sum(rates[(attacker, policy)]) / len(cells)
            print(f"{attacker:>10s} {policy:>16s} {mean_ud:>9.3f} {mean_rate:>10.3f} {len(cells):>6d}")

    if args.png:
        try:
            import matplotlib

            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            print("matplotlib not installed; skipping the chart", file=sys.stderr)
            return 0
        fig, axes = plt.subplots(1, 2, figsize=(12, 4))
        width = 0.8 / len(policies)
        for i, policy in enumerate(policies):
            xs = [j + i * width for j in range(len(attackers))]
            axes[0].bar(
                xs,
                [sum(utilities[(a, policy)]) / len(utilities[(a, policy)]) for a in attackers],
                width=width,
                label=policy,
            )
            axes[1].bar(
                xs,
                [sum(rates[(a, policy)]) / len(rates[(a, policy)]) for a in attackers],
                width=width,
                label=policy,
            )
        for axis, title in zip(axes, ("mean defender utility", "mean detection rate")):
            axis.set_xticks([j + 0.4 - width / 2 for j in range(len(attackers))])
            axis.set_xticklabels(attackers)
            axis.set_title(title)
            axis.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(args.png, dpi=150)
        print(f"chart written: {args.png}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

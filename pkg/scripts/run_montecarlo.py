"""Monte Carlo verification of every class at a list of antenna configurations.

Prints one row per (class, config) with the number of corner points and the
worst success rate, and dumps the full per-point reports as JSON.
"""

import argparse
import json

from dof_atlas import AntennaConfig
from dof_atlas.scheme import monte_carlo_verify
from dof_atlas.si_graph import CATALOG


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--configs", nargs="+", default=["2,2,2,2", "3,2,2,2", "9,7,8,5", "6,2,2,2"])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="montecarlo.json")
    args = ap.parse_args()

    reports, failed = [], 0
    for text in args.configs:
        n = AntennaConfig.parse(text)
        for k in CATALOG:
            rep = monte_carlo_verify(k, n, args.trials, args.seed)
            worst = min(p.success_rate for p in rep.points)
            failed += not rep.all_passed
            print(f"G{k:<3} {str(n):<10} points={len(rep.points):<3} worst={worst:.2f}")
            reports.append(rep.to_dict())
    with open(args.out, "w") as fh:
        json.dump(reports, fh, indent=2, sort_keys=True)
    print(f"{failed} failing (class, config) pairs")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()

"""Run the region property checks over an antenna grid and save a JSON report."""

import argparse
import json
import time

from dof_atlas.properties import CHECKS, DEFAULT_CHECKS, run_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-antenna", type=int, default=4)
    ap.add_argument("--all", action="store_true", help="include the slow checks too")
    ap.add_argument("--out", default="sweep.json")
    args = ap.parse_args()

    names = list(CHECKS) if args.all else list(DEFAULT_CHECKS)
    rows = []
    for name in names:
        t = time.perf_counter()
        (res,) = run_checks([name], args.max_antenna)
        dt = time.perf_counter() - t
        print(f"{name:<20} {'ok ' if res.ok else 'BAD'} passed={res.passed:<6} "
              f"failed={res.failed:<5} {dt:6.1f}s")
        rows.append(res.to_dict() | {"seconds": round(dt, 2)})
    with open(args.out, "w") as fh:
        json.dump({"max_antenna": args.max_antenna, "checks": rows}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()

"""Write vertex CSVs of D7 and D1 at (9,7,8,5) for external plotting.

    python3 scripts/export_vertices.py --out-dir results/
"""

import argparse
from pathlib import Path

from dof_atlas import AntennaConfig
from dof_atlas.dof_region import (enumerate_vertices, fractional_vertices, theorem1_region,
                                  vertices_to_csv)
from dof_atlas.si_graph import CATALOG


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--antennas", default="9,7,8,5")
    ap.add_argument("--classes", default="1,7")
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    n = AntennaConfig.parse(args.antennas)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for k in (int(x) for x in args.classes.split(",")):
        region = theorem1_region(CATALOG[k], n)
        verts = enumerate_vertices(region)
        path = out / f"vertices_G{k}_{str(n).replace(',', '-')}.csv"
        path.write_text(vertices_to_csv(verts))
        frac = fractional_vertices(region)
        print(f"G{k}: {len(verts)} vertices, {len(frac)} fractional -> {path}")


if __name__ == "__main__":
    main()

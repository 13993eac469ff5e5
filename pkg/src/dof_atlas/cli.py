"""Command-line front end: ``dof-atlas {classify,region,verify,sweep,slope}``.

Exit codes: 0 success, 1 failed verification or property, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction

from . import dof_region as dr
from .properties import CHECKS, DEFAULT_CHECKS, run_checks
from .scheme import (DEFAULT_TOL, FilterError, InfeasiblePointError, ToleranceConfig,
                     build_precoders, build_receive_filters, estimate_rate_slope,
                     monte_carlo_verify, null_bases, sample_channels)
from .si_graph import CATALOG, GraphError, SideInfoGraph, canonicalize

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _graph(text: str) -> SideInfoGraph:
    try:
        return SideInfoGraph.parse(text)
    except GraphError as exc:
        raise UsageError(f"bad graph {text!r}: {exc}") from None


def _antennas(text: str | None) -> dr.AntennaConfig:
    if text is None:
        raise UsageError("--antennas is required")
    try:
        return dr.AntennaConfig.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _point(text: str) -> tuple[int, int, int]:
    try:
        d = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad point {text!r}; expected 'd1,d2,d3'") from None
    if len(d) != 3 or min(d) < 0:
        raise UsageError(f"bad point {text!r}; expected three non-negative integers")
    return d


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DOF_ATLAS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"DOF_ATLAS_SEED must be an integer, got {env!r}") from None


def _tol(args) -> ToleranceConfig:
    if args.tol is None:
        return DEFAULT_TOL
    try:
        return ToleranceConfig(rank_tol_factor=args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# catalog relabeling: input receiver i plays catalog receiver perm[i - 1]

def _to_catalog_antennas(perm, n: dr.AntennaConfig) -> dr.AntennaConfig:
    rx = [0, 0, 0]
    for i in (1, 2, 3):
        rx[perm[i - 1] - 1] = n.rx(i)
    return dr.AntennaConfig(n.n0, *rx)


def _to_catalog_point(perm, d):
    out = [None] * 3
    for i in (1, 2, 3):
        out[perm[i - 1] - 1] = d[i - 1]
    return tuple(out)


def _from_catalog_point(perm, d):
    return tuple(d[perm[i - 1] - 1] for i in (1, 2, 3))


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- subcommands ---------------------------------------------------------------

def cmd_classify(args) -> int:
    g = _graph(args.graph)
    iso = canonicalize(g)
    info = {
        "graph": g.encode(),
        "class": iso.index,
        "permutation": list(iso.permutation),
        "representative": CATALOG[iso.index].encode(),
        "known": {str(i): sorted(g.known_messages(i)) for i in (1, 2, 3)},
    }
    if args.format == "json":
        _emit(args, _dumps(info))
    else:
        lines = [f"graph {g}: class G{iso.index} (representative {CATALOG[iso.index]})",
                 "relabel " + ", ".join(f"{i}->{p}" for i, p in enumerate(iso.permutation, 1))]
        lines += [f"K{i} = {{{', '.join(info['known'][str(i)])}}}" for i in (1, 2, 3)]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_region(args) -> int:
    g = _graph(args.graph)
    if args.index_coding:
        region, kind = dr.index_coding_region(g), "index_coding"
    else:
        n = _antennas(args.antennas)
        if args.outer:
            region, kind = dr.lemma1_region(g, n), "outer"
        else:
            region, kind = dr.theorem1_region(g, n), "dof"
    verts = dr.enumerate_vertices(region)
    if args.format == "csv":
        _emit(args, dr.vertices_to_csv(verts))
    elif args.format == "text":
        frac = dr.fractional_vertices(region)
        lines = [f"{kind} region for {g} (class G{canonicalize(g).index})"]
        lines += [f"  {c}" for c in dr.simplify(region).constraints]
        lines.append(f"{len(verts)} vertices, {len(frac)} fractional")
        lines += ["  (" + ", ".join(map(str, p)) + ")" for p in verts]
        _emit(args, "\n".join(lines) + "\n")
    else:
        out = dr.region_to_dict(region)
        out.update(kind=kind, graph=g.encode(), **{"class": canonicalize(g).index})
        if not args.index_coding:
            out["antennas"] = args.antennas.replace(" ", "")
        _emit(args, _dumps(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _graph(args.graph)
    n = _antennas(args.antennas)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    iso = canonicalize(g)
    perm = iso.permutation
    report = monte_carlo_verify(iso.index, _to_catalog_antennas(perm, n), args.trials,
                                _seed(args), _tol(args))
    out = report.to_dict()
    out["graph"] = g.encode()
    out["antennas"] = str(n)
    out["permutation"] = list(perm)
    for p in out["points"]:
        p["point"] = list(_from_catalog_point(perm, p["point"]))
    out["points"].sort(key=lambda p: [Fraction(x) for x in p["point"]])

    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d1", "d2", "d3", "method", "trials", "successes",
                    "min_signal_margin", "max_interference_leak"])
        for p in out["points"]:
            w.writerow(p["point"] + [p["method"], p["trials"], p["successes"],
                                     p["min_signal_margin"], p["max_interference_leak"]])
        _emit(args, buf.getvalue())
    elif args.format == "text":
        lines = [f"class G{iso.index} at {n}, {args.trials} trials, seed {out['seed']}"]
        for p in out["points"]:
            lines.append(f"  ({', '.join(p['point'])}) {p['method']:<10} "
                         f"{p['successes']}/{p['trials']}" + (f"  {p['error']}" if p["error"] else ""))
        lines.append("PASS" if report.all_passed else "FAIL")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dumps(out))
    return EXIT_OK if report.all_passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    names = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else list(DEFAULT_CHECKS)
    try:
        results = run_checks(names, args.max_antenna)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]} (available: {', '.join(CHECKS)})") from None
    ok = all(r.ok for r in results)
    if args.format == "json":
        _emit(args, _dumps({"max_antenna": args.max_antenna, "ok": ok,
                            "checks": [r.to_dict() for r in results]}))
    else:
        lines = []
        for r in results:
            status = "info" if r.informational else ("PASS" if r.ok else "FAIL")
            lines.append(f"{r.name:<20} {status:<5} passed={r.passed} failed={r.failed}")
            lines += [f"    {e}" for e in r.examples[:10]]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_slope(args) -> int:
    g = _graph(args.graph)
    n = _antennas(args.antennas)
    d = _point(args.point)
    iso = canonicalize(g)
    perm = iso.permutation
    nc = _to_catalog_antennas(perm, n)
    dc = _to_catalog_point(perm, d)
    tol = _tol(args)
    c = sample_channels(nc, _seed(args))
    try:
        p = build_precoders(iso.index, nc, dc, c, null_bases(c))
        filters = build_receive_filters(CATALOG[iso.index], c, p, tol)
    except (InfeasiblePointError, FilterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    g_eval = SideInfoGraph() if args.ignore_side_info else CATALOG[iso.index]
    slopes = estimate_rate_slope(g_eval, nc, dc, c, p, filters, args.p_low, args.p_high)
    slopes = _from_catalog_point(perm, slopes)
    out = {"graph": g.encode(), "antennas": str(n), "point": list(d),
           "ignore_side_info": args.ignore_side_info, "p_low": args.p_low, "p_high": args.p_high,
           "slopes": [round(s, 6) for s in slopes]}
    if args.format == "json":
        _emit(args, _dumps(out))
    else:
        _emit(args, "slopes " + " ".join(f"{s:.4f}" for s in slopes) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dof-atlas", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "text"), default="json"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("classify", help="isomorphism class of a side-information graph")
    p.add_argument("--graph", required=True, help='arcs like "2>1,2>3,3>2"; "" for none')
    common(p, default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("region", help="DoF region, outer bound or index-coding region")
    p.add_argument("--graph", required=True)
    p.add_argument("--antennas", help='"N0,N1,N2,N3"')
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--outer", action="store_true", help="acyclic-subgraph outer bound only")
    kind.add_argument("--index-coding", action="store_true", help="index-coding capacity region")
    common(p, formats=("json", "csv", "text"))
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("verify", help="Monte Carlo check of every corner point")
    p.add_argument("--graph", required=True)
    p.add_argument("--antennas", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=None, help="relative rank tolerance factor")
    common(p, formats=("json", "csv", "text"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="property checks over an antenna grid")
    p.add_argument("--max-antenna", type=int, default=4)
    p.add_argument("--checks", default=None, help="comma list; default: " + ",".join(DEFAULT_CHECKS))
    common(p, default="text")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("slope", help="rate-vs-log-power slope at one integer point")
    p.add_argument("--graph", required=True)
    p.add_argument("--antennas", required=True)
    p.add_argument("--point", required=True, help='"d1,d2,d3"')
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--p-low", type=float, default=1e4)
    p.add_argument("--p-high", type=float, default=1e8)
    p.add_argument("--ignore-side-info", action="store_true",
                   help="count known messages as interference (negative control)")
    common(p, default="text")
    p.set_defaults(func=cmd_slope)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dof-atlas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

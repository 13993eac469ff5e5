"""Grid sweeps of the structural properties of the DoF regions.

Each check walks antenna configurations with every count in ``1..max_antenna``
and returns a :class:`CheckResult` with pass/fail tallies and the first
counterexamples found.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .dof_region import (AntennaConfig, LinearConstraint, Region, enumerate_vertices,
                         equals, fractional_vertices, index_coding_region, integer_points,
                         is_subset, lemma1_region, scale, theorem1_region)
from .scheme import check_integer_feasibility
from .si_graph import CATALOG, all_labeled_graphs, canonicalize, strip_non_cycle_arcs

MAX_EXAMPLES = 20


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    # informational checks collect cases without counting them as failures
    informational: bool = False
    examples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.informational or self.failed == 0

    def tally(self, good: bool, example=None):
        if good:
            self.passed += 1
            return
        self.failed += 1
        if example is not None and len(self.examples) < MAX_EXAMPLES:
            self.examples.append(example)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "failed": self.failed,
                "informational": self.informational, "ok": self.ok,
                "examples": [str(e) for e in self.examples]}


def antenna_grid(max_antenna: int):
    for t in product(range(1, max_antenna + 1), repeat=4):
        yield AntennaConfig(*t)


def fractional_corner_expected(n: AntennaConfig) -> bool:
    return n.n0 % 2 == 1 and 2 * min(n.n1, n.n2, n.n3) >= n.n0


def check_integrality(max_antenna: int) -> CheckResult:
    res = CheckResult("integrality")
    for n in antenna_grid(max_antenna):
        for k, g in CATALOG.items():
            frac = fractional_vertices(theorem1_region(g, n))
            if k == 7 and fractional_corner_expected(n):
                half = Fraction(n.n0, 2)
                good = frac == [(half, half, half)]
            else:
                good = not frac
            res.tally(good, (k, str(n), [tuple(map(str, p)) for p in frac]))
    return res


def g8_redundancy_expected(n: AntennaConfig) -> bool:
    return n.n2 >= n.n0 or n.n3 >= n.n0 or n.n0 >= n.n1 + n.n2 + n.n3


def check_theorem_vs_lemma(max_antenna: int) -> CheckResult:
    res = CheckResult("theorem_vs_lemma")
    for n in antenna_grid(max_antenna):
        for k, g in CATALOG.items():
            t, l = theorem1_region(g, n), lemma1_region(g, n)
            same = equals(t, l)
            expect = g8_redundancy_expected(n) if k in (8, 9, 10) else True
            res.tally(is_subset(t, l) and same == expect, (k, str(n), same))
    return res


def check_index_coding(max_antenna: int) -> CheckResult:
    res = CheckResult("index_coding")
    for m in range(1, max_antenna + 1):
        n = AntennaConfig(m, m, m, m)
        for k, g in CATALOG.items():
            res.tally(equals(theorem1_region(g, n), scale(index_coding_region(g), m)), (k, m))
    return res


def check_arc_removal_equal(max_antenna: int) -> CheckResult:
    res = CheckResult("arc_removal_equal")
    for m in range(1, max_antenna + 1):
        n = AntennaConfig(m, m, m, m)
        for g in all_labeled_graphs():
            h = strip_non_cycle_arcs(g)
            res.tally(equals(theorem1_region(g, n), theorem1_region(h, n)), (g.encode(), m))
    return res


def check_arc_removal_unequal(max_antenna: int) -> CheckResult:
    """Cases where dropping non-cycle arcs changes the region (expected to exist)."""
    res = CheckResult("arc_removal_unequal", informational=True)
    for n in antenna_grid(max_antenna):
        for k, g in CATALOG.items():
            h = strip_non_cycle_arcs(g)
            kh = canonicalize(h).index
            res.tally(equals(theorem1_region(g, n), theorem1_region(h, n)),
                      (f"G{k}->G{kh}", str(n)))
    return res


def check_monotone_side_info(max_antenna: int) -> CheckResult:
    res = CheckResult("monotone_side_info")
    graphs = all_labeled_graphs()
    pairs = [(g, h) for g in graphs for h in graphs if g.mask & h.mask == g.mask and g != h]
    for n in antenna_grid(max_antenna):
        regions = {g.mask: theorem1_region(g, n) for g in graphs}
        for g, h in pairs:
            res.tally(is_subset(regions[g.mask], regions[h.mask]), (g.encode(), h.encode(), str(n)))
    return res


def check_monotone_antennas(max_antenna: int) -> CheckResult:
    res = CheckResult("monotone_antennas")
    for n in antenna_grid(max_antenna):
        base = n.as_tuple()
        for pos in range(4):
            if base[pos] == max_antenna:
                continue
            bigger = AntennaConfig(*(v + (j == pos) for j, v in enumerate(base)))
            for k, g in CATALOG.items():
                res.tally(is_subset(theorem1_region(g, n), theorem1_region(g, bigger)),
                          (k, str(n), str(bigger)))
    return res


def check_collapse(max_antenna: int) -> CheckResult:
    res = CheckResult("collapse")
    for n in antenna_grid(max_antenna):
        if n.n0 < n.n1 + n.n2 + n.n3:
            continue
        box = Region(tuple(LinearConstraint(tuple(int(i == j) for j in range(3)), n.rx(i + 1))
                           for i in range(3)))
        for k, g in CATALOG.items():
            res.tally(equals(theorem1_region(g, n), box), (k, str(n)))
    return res


def check_oracle(max_antenna: int) -> CheckResult:
    """Lattice points of each region against the scheme feasibility conditions."""
    res = CheckResult("oracle")
    box = list(product(range(max_antenna + 1), repeat=3))
    for n in antenna_grid(max_antenna):
        for k, g in CATALOG.items():
            pts = set(integer_points(theorem1_region(g, n)))
            accepted = {d for d in box if check_integer_feasibility(k, n, d)}
            res.tally(pts == accepted, (k, str(n), sorted(pts ^ accepted)[:5]))
    return res


def check_vertex_activity(max_antenna: int) -> CheckResult:
    """Every vertex is cut out by three independent tight constraints."""
    from .dof_region import active_constraints
    import numpy as np

    res = CheckResult("vertex_activity")
    for n in antenna_grid(max_antenna):
        for k, g in CATALOG.items():
            r = theorem1_region(g, n)
            for p in enumerate_vertices(r):
                normals = np.array([a for a, _ in active_constraints(r, p)], dtype=float)
                res.tally(np.linalg.matrix_rank(normals) == 3, (k, str(n), p))
    return res


CHECKS = {
    "integrality": check_integrality,
    "theorem_vs_lemma": check_theorem_vs_lemma,
    "index_coding": check_index_coding,
    "arc_removal_equal": check_arc_removal_equal,
    "arc_removal_unequal": check_arc_removal_unequal,
    "monotone_side_info": check_monotone_side_info,
    "monotone_antennas": check_monotone_antennas,
    "collapse": check_collapse,
    "oracle": check_oracle,
    "vertex_activity": check_vertex_activity,
}

DEFAULT_CHECKS = ("integrality", "theorem_vs_lemma", "index_coding", "arc_removal_equal",
                  "arc_removal_unequal", "monotone_antennas", "collapse", "oracle")


def run_checks(names, max_antenna: int) -> list[CheckResult]:
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    return [CHECKS[name](max_antenna) for name in names]

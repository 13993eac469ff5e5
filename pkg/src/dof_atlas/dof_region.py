"""Exact DoF polytopes in (d1, d2, d3)-space.

Every region is a list of constraints ``a . d <= b`` with ``a`` in {0,1}^3 and
an exact rational ``b``; ``d >= 0`` is implicit.  All arithmetic here uses
:class:`fractions.Fraction`, so comparisons carry no tolerance.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .si_graph import SideInfoGraph, acyclic_vertex_subsets, is_g8_class

Point = tuple[Fraction, Fraction, Fraction]


class UnboundedRegionError(ValueError):
    pass


@dataclass(frozen=True)
class AntennaConfig:
    n0: int
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        for name, v in zip(("N0", "N1", "N2", "N3"), self.as_tuple()):
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def parse(cls, text: str) -> "AntennaConfig":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 'N0,N1,N2,N3', got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as exc:
            raise ValueError(f"bad antenna string {text!r}: {exc}") from None

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n0, self.n1, self.n2, self.n3)

    def rx(self, i: int) -> int:
        """Antenna count at receiver ``i`` (1-based)."""
        return self.as_tuple()[i]

    def __str__(self):
        return ",".join(map(str, self.as_tuple()))


@dataclass(frozen=True, order=True)
class LinearConstraint:
    coeffs: tuple[int, int, int]
    bound: Fraction

    def __post_init__(self):
        if any(a not in (0, 1) for a in self.coeffs) or not any(self.coeffs):
            raise ValueError(f"coefficients must be a nonzero 0/1 triple, got {self.coeffs}")
        object.__setattr__(self, "bound", Fraction(self.bound))
        if self.bound < 0:
            raise ValueError(f"bound must be non-negative, got {self.bound}")

    def value(self, p) -> Fraction:
        return sum((a * x for a, x in zip(self.coeffs, p)), Fraction(0))

    def holds(self, p) -> bool:
        return self.value(p) <= self.bound

    def __str__(self):
        lhs = " + ".join(f"d{i + 1}" for i, a in enumerate(self.coeffs) if a)
        return f"{lhs} <= {self.bound}"


@dataclass(frozen=True)
class Region:
    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(sorted(set(self.constraints))))

    def is_bounded(self) -> bool:
        return all(any(c.coeffs[i] for c in self.constraints) for i in range(3))

    def __str__(self):
        return "{" + "; ".join(map(str, self.constraints)) + "}"


def _subset_constraint(members, bound) -> LinearConstraint:
    return LinearConstraint(tuple(int(i in members) for i in (1, 2, 3)), Fraction(bound))


def lemma1_region(g: SideInfoGraph, n: AntennaConfig) -> Region:
    """Outer bound: one sum constraint per acyclic induced subgraph."""
    cons = []
    for s in acyclic_vertex_subsets(g):
        cons.append(_subset_constraint(s, min(n.n0, sum(n.rx(k) for k in s))))
    return Region(tuple(cons))


def theorem1_region(g: SideInfoGraph, n: AntennaConfig) -> Region:
    """The DoF region for graph ``g``: the acyclic-subgraph bounds, plus the
    sum constraint ``<= max(N0, Nb + Nc)`` when ``g`` is in the G8 family."""
    region = lemma1_region(g, n)
    abc = is_g8_class(g)
    if abc is None:
        return region
    _, b, c = abc
    extra = _subset_constraint((1, 2, 3), max(n.n0, n.rx(b) + n.rx(c)))
    return Region(region.constraints + (extra,))


def index_coding_region(g: SideInfoGraph) -> Region:
    return Region(tuple(_subset_constraint(s, 1) for s in acyclic_vertex_subsets(g)))


def scale(r: Region, factor) -> Region:
    factor = Fraction(factor)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return Region(tuple(LinearConstraint(c.coeffs, c.bound * factor) for c in r.constraints))


def contains(r: Region, p) -> bool:
    p = tuple(Fraction(x) for x in p)
    return all(x >= 0 for x in p) and all(c.holds(p) for c in r.constraints)


def _det3(m) -> Fraction:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _solve3(rows, rhs) -> Point | None:
    """Cramer's rule over the rationals; ``None`` when the normals are dependent."""
    det = _det3(rows)
    if det == 0:
        return None
    sol = []
    for k in range(3):
        m = [list(r) for r in rows]
        for i in range(3):
            m[i][k] = rhs[i]
        sol.append(Fraction(_det3(m)) / det)
    return tuple(sol)


def _halfspaces(r: Region):
    planes = [(c.coeffs, c.bound) for c in r.constraints]
    # d_i >= 0 written as -d_i <= 0
    planes += [(tuple(-int(i == k) for i in range(3)), Fraction(0)) for k in range(3)]
    return planes


def enumerate_vertices(r: Region) -> list[Point]:
    """Exact extreme points, sorted lexicographically."""
    if not r.is_bounded():
        raise UnboundedRegionError(f"region {r} is unbounded")
    return list(_vertices(r))


@lru_cache(maxsize=65536)
def _vertices(r: Region) -> tuple[Point, ...]:
    planes = _halfspaces(r)
    found = set()
    for trio in combinations(planes, 3):
        p = _solve3([t[0] for t in trio], [t[1] for t in trio])
        if p is None or p in found:
            continue
        if all(sum(a * x for a, x in zip(coeffs, p)) <= b for coeffs, b in planes):
            found.add(p)
    return tuple(sorted(found))


def active_constraints(r: Region, p) -> list[tuple[tuple[int, int, int], Fraction]]:
    return [(coeffs, b) for coeffs, b in _halfspaces(r)
            if sum(a * x for a, x in zip(coeffs, p)) == b]


def fractional_vertices(r: Region) -> list[Point]:
    return [p for p in enumerate_vertices(r) if any(x.denominator != 1 for x in p)]


def integer_points(r: Region) -> list[tuple[int, int, int]]:
    """All lattice points of a bounded region (box scan)."""
    top = [max((c.bound for c in r.constraints if c.coeffs[i]), default=None) for i in range(3)]
    if None in top:
        raise UnboundedRegionError(f"region {r} is unbounded")
    hi = [int(t) for t in top]  # floor, bounds are non-negative
    # an integer a.d is <= b exactly when it is <= floor(b)
    cons = [(c.coeffs, c.bound.numerator // c.bound.denominator) for c in r.constraints]
    return [(a, b, c)
            for a in range(hi[0] + 1) for b in range(hi[1] + 1) for c in range(hi[2] + 1)
            if all(x * a + y * b + z * c <= lim for (x, y, z), lim in cons)]


def is_subset(a: Region, b: Region) -> bool:
    return all(contains(b, p) for p in enumerate_vertices(a))


def equals(a: Region, b: Region) -> bool:
    return is_subset(a, b) and is_subset(b, a)


def simplify(r: Region) -> Region:
    """Drop constraints implied by the others (for display)."""
    kept = list(r.constraints)
    for c in list(kept):
        rest = [k for k in kept if k is not c]
        trial = Region(tuple(rest))
        if rest and trial.is_bounded() and all(c.holds(p) for p in enumerate_vertices(trial)):
            kept = rest
    return Region(tuple(kept))


# -- serialization -------------------------------------------------------------

def _frac_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _frac_from_json(obj) -> Fraction:
    den = int(obj["den"])
    if den <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(int(obj["num"]), den)


def region_to_dict(r: Region, with_vertices: bool = True) -> dict:
    out = {"constraints": [{"a": list(c.coeffs), "b": _frac_json(c.bound)}
                           for c in r.constraints]}
    if with_vertices:
        out["vertices"] = [[_frac_json(x) for x in p] for p in enumerate_vertices(r)]
    return out


def region_from_dict(obj: dict) -> Region:
    return Region(tuple(LinearConstraint(tuple(int(a) for a in c["a"]), _frac_from_json(c["b"]))
                        for c in obj["constraints"]))


def region_to_json(r: Region, **kw) -> str:
    return json.dumps(region_to_dict(r), sort_keys=True, **kw)


def region_from_json(text: str) -> Region:
    return region_from_dict(json.loads(text))


def vertices_to_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d1", "d2", "d3"])
    for p in points:
        w.writerow([str(Fraction(x)) for x in p])
    return buf.getvalue()


def vertices_from_csv(text: str) -> list[Point]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [tuple(Fraction(row[k]) for k in ("d1", "d2", "d3")) for row in rows]

from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection

from dof_atlas.dof_region import (AntennaConfig, LinearConstraint, Region, UnboundedRegionError,
                                  active_constraints, contains, enumerate_vertices, equals,
                                  fractional_vertices, index_coding_region, integer_points,
                                  is_subset, lemma1_region, region_from_json, region_to_json,
                                  scale, simplify, theorem1_region, vertices_from_csv,
                                  vertices_to_csv)
from dof_atlas.si_graph import CATALOG, SideInfoGraph, all_labeled_graphs, strip_non_cycle_arcs


def region(*rows):
    return Region(tuple(LinearConstraint(a, b) for a, b in rows))


E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
S12, S13, S23, S123 = (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)


def literal_theorem1(k, n):
    """The region table exactly as the theorem lists it."""
    n0, n1, n2, n3 = n.as_tuple()
    box = [(E1, n1), (E2, n2), (E3, n3)]
    if k <= 6:
        return region((S123, n0), *box)
    if k == 7:
        return region((S12, n0), (S13, n0), (S23, n0), *box)
    if k in (8, 9, 10):
        return region((S12, n0), (S13, n0), (S123, max(n0, n2 + n3)), *box)
    if k in (11, 12, 13):
        return region((S12, n0), (S13, n0), *box)
    if k in (14, 15):
        return region((S13, n0), (E2, n0), *box)
    return region((E1, min(n0, n1)), (E2, min(n0, n2)), (E3, min(n0, n3)))


def grid(m):
    return [AntennaConfig(*t) for t in product(range(1, m + 1), repeat=4)]


antennas = st.tuples(*[st.integers(1, 7)] * 4).map(lambda t: AntennaConfig(*t))
graphs = st.integers(0, 63).map(SideInfoGraph)


def scipy_vertices(r):
    """Independent vertex enumeration in floating point."""
    a = np.array([c.coeffs for c in r.constraints] + [(-1, 0, 0), (0, -1, 0), (0, 0, -1)], float)
    b = np.array([float(c.bound) for c in r.constraints] + [0, 0, 0])
    # Chebyshev centre as interior point
    norms = np.linalg.norm(a, axis=1)
    lp = linprog([0, 0, 0, -1], A_ub=np.c_[a, norms], b_ub=b, bounds=[(None, None)] * 4)
    hs = HalfspaceIntersection(np.c_[a, -b], lp.x[:3])
    pts = np.unique(np.round(hs.intersections, 9), axis=0)
    return sorted(map(tuple, pts))


# -- builders --------------------------------------------------------------------

def test_g1_region_example():
    r = theorem1_region(CATALOG[1], AntennaConfig(9, 7, 8, 5))
    assert equals(r, region((S123, 9), (E1, 7), (E2, 8), (E3, 5)))


def test_g8_region_example():
    r = theorem1_region(CATALOG[8], AntennaConfig(3, 2, 2, 2))
    assert equals(r, region((S12, 3), (S13, 3), (S123, 4), (E1, 2), (E2, 2), (E3, 2)))
    assert LinearConstraint(S123, 4) in r.constraints


@pytest.mark.parametrize("n", [AntennaConfig(2, 3, 1, 5), AntennaConfig(4, 1, 1, 1)])
def test_g16_region_is_box(n):
    r = theorem1_region(CATALOG[16], n)
    assert simplify(r).constraints == tuple(sorted(
        LinearConstraint(e, min(n.n0, n.rx(i))) for i, e in zip((1, 2, 3), (E1, E2, E3))))


def test_lemma1_examples():
    l8 = lemma1_region(CATALOG[8], AntennaConfig(3, 2, 2, 2))
    assert equals(l8, region((S12, 3), (S13, 3), (E1, 2), (E2, 2), (E3, 2)))
    l7 = lemma1_region(CATALOG[7], AntennaConfig(9, 7, 8, 5))
    assert equals(l7, region((S12, 9), (S13, 9), (S23, 9), (E1, 7), (E2, 8), (E3, 5)))
    for k in range(1, 7):
        r = lemma1_region(CATALOG[k], AntennaConfig(4, 1, 2, 3))
        assert LinearConstraint(S123, 4) in r.constraints


@pytest.mark.parametrize("k", range(1, 17))
def test_builder_matches_literal_table(k):
    for n in grid(4):
        assert equals(theorem1_region(CATALOG[k], n), literal_theorem1(k, n)), n


# -- vertices --------------------------------------------------------------------

def test_g7_and_empty_vertices_at_9785():
    n = AntennaConfig(9, 7, 8, 5)
    v7 = enumerate_vertices(theorem1_region(CATALOG[7], n))
    assert len(v7) == 14
    assert (F(9, 2), F(9, 2), F(9, 2)) in v7
    assert len(enumerate_vertices(theorem1_region(CATALOG[1], n))) == 10
    assert v7 == sorted(v7)


def test_g8_three_plane_corner():
    for n1 in (1, 2, 3):
        n = AntennaConfig(3, n1, 2, 2)
        v = enumerate_vertices(theorem1_region(CATALOG[8], n))
        if n1 >= 2:
            assert (2, 1, 1) in v


def test_unbounded_region_rejected():
    with pytest.raises(UnboundedRegionError):
        enumerate_vertices(region((S12, 1)))


@settings(max_examples=60, deadline=None)
@given(graphs, antennas)
def test_vertices_match_scipy(g, n):
    r = theorem1_region(g, n)
    exact = [tuple(float(x) for x in p) for p in enumerate_vertices(r)]
    assert np.allclose(sorted(exact), scipy_vertices(r), atol=1e-7)


@settings(max_examples=60, deadline=None)
@given(graphs, antennas)
def test_vertices_are_tight_on_three_independent_constraints(g, n):
    r = theorem1_region(g, n)
    for p in enumerate_vertices(r):
        assert contains(r, p)
        normals = np.array([a for a, _ in active_constraints(r, p)], float)
        assert np.linalg.matrix_rank(normals) == 3


def test_fractional_vertices_examples():
    assert fractional_vertices(theorem1_region(CATALOG[7], AntennaConfig(9, 7, 8, 5))) == [
        (F(9, 2), F(9, 2), F(9, 2))]
    assert fractional_vertices(theorem1_region(CATALOG[7], AntennaConfig(4, 3, 3, 3))) == []
    for k in set(CATALOG) - {7}:
        for n in grid(3):
            assert fractional_vertices(theorem1_region(CATALOG[k], n)) == []


# -- membership, inclusion, scaling ------------------------------------------------

def test_contains_examples():
    n = AntennaConfig(3, 2, 2, 2)
    assert not contains(theorem1_region(CATALOG[8], n), (1, 2, 2))
    assert contains(theorem1_region(CATALOG[11], n), (1, 2, 2))
    assert contains(theorem1_region(CATALOG[5], n), (0, 0, 0))
    assert not contains(theorem1_region(CATALOG[16], n), (-1, 0, 0))


def test_inclusion_examples():
    n = AntennaConfig(3, 2, 2, 2)
    d8, d11 = theorem1_region(CATALOG[8], n), theorem1_region(CATALOG[11], n)
    assert is_subset(d8, d11) and not is_subset(d11, d8)
    for m in grid(3):
        r8 = theorem1_region(CATALOG[8], m)
        assert equals(r8, theorem1_region(CATALOG[9], m))
        assert equals(r8, theorem1_region(CATALOG[10], m))


@settings(max_examples=80, deadline=None)
@given(graphs, antennas)
def test_theorem_inside_lemma(g, n):
    assert is_subset(theorem1_region(g, n), lemma1_region(g, n))


def test_index_coding_examples():
    assert equals(index_coding_region(SideInfoGraph()), region((S123, 1), (E1, 1), (E2, 1), (E3, 1)))
    cyc = index_coding_region(CATALOG[7])
    assert (F(1, 2), F(1, 2), F(1, 2)) in enumerate_vertices(cyc)
    cube = index_coding_region(CATALOG[16])
    assert len(enumerate_vertices(cube)) == 8


@pytest.mark.parametrize("k", range(1, 17))
def test_scaled_index_coding_is_equal_antenna_region(k):
    for m in range(1, 5):
        assert equals(scale(index_coding_region(CATALOG[k]), m),
                      theorem1_region(CATALOG[k], AntennaConfig(m, m, m, m)))


@given(graphs, antennas, st.fractions(min_value=F(1, 10), max_value=10))
def test_scale_inverse(g, n, a):
    r = theorem1_region(g, n)
    assert scale(r, 1) == r
    assert scale(scale(r, a), 1 / a) == r
    if a > 0:
        scaled = {tuple(a * x for x in p) for p in enumerate_vertices(r)}
        assert set(enumerate_vertices(scale(r, a))) == scaled


def test_integer_points_small():
    pts = integer_points(theorem1_region(CATALOG[16], AntennaConfig(1, 1, 1, 1)))
    assert len(pts) == 8


# -- structural properties -----------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(graphs, graphs, antennas)
def test_monotone_in_side_information(g, h, n):
    union = SideInfoGraph(g.mask | h.mask)
    assert is_subset(theorem1_region(g, n), theorem1_region(union, n))


@settings(max_examples=60, deadline=None)
@given(graphs, antennas, st.integers(0, 3))
def test_monotone_in_antennas(g, n, which):
    t = list(n.as_tuple())
    t[which] += 1
    assert is_subset(theorem1_region(g, n), theorem1_region(g, AntennaConfig(*t)))


@settings(max_examples=60, deadline=None)
@given(graphs, st.tuples(*[st.integers(1, 4)] * 3), st.integers(0, 4))
def test_collapse_when_transmitter_dominates(g, rx, extra):
    n = AntennaConfig(sum(rx) + extra, *rx)
    assert equals(theorem1_region(g, n), region((E1, rx[0]), (E2, rx[1]), (E3, rx[2])))


def test_g8_redundancy_criterion():
    for n in grid(4):
        crit = n.n2 >= n.n0 or n.n3 >= n.n0 or n.n0 >= n.n1 + n.n2 + n.n3
        for k in (8, 9, 10):
            assert equals(theorem1_region(CATALOG[k], n), lemma1_region(CATALOG[k], n)) == crit


def test_fractional_corner_criterion():
    for n in grid(5):
        frac = fractional_vertices(theorem1_region(CATALOG[7], n))
        if n.n0 % 2 and 2 * min(n.n1, n.n2, n.n3) >= n.n0:
            assert frac == [(F(n.n0, 2),) * 3]
        else:
            assert frac == []


@pytest.mark.parametrize("g", all_labeled_graphs(), ids=lambda g: g.encode() or "empty")
def test_arc_removal_at_equal_antennas(g):
    for m in range(1, 5):
        n = AntennaConfig(m, m, m, m)
        assert equals(theorem1_region(strip_non_cycle_arcs(g), n), theorem1_region(g, n))


def test_arc_removal_fails_with_unequal_antennas():
    n = AntennaConfig(3, 2, 2, 2)
    g11 = CATALOG[11]
    stripped = strip_non_cycle_arcs(g11)
    assert stripped == CATALOG[8]
    assert not equals(theorem1_region(g11, n), theorem1_region(stripped, n))


# -- serialization -------------------------------------------------------------------

@given(graphs, antennas)
def test_json_round_trip(g, n):
    r = theorem1_region(g, n)
    assert equals(region_from_json(region_to_json(r)), r)


def test_json_schema():
    import json
    obj = json.loads(region_to_json(theorem1_region(CATALOG[7], AntennaConfig(9, 7, 8, 5))))
    assert {"constraints", "vertices"} <= obj.keys()
    assert obj["constraints"][0].keys() == {"a", "b"}
    assert {"num": 9, "den": 2} in obj["vertices"][9]
    assert all(v["den"] > 0 for p in obj["vertices"] for v in p)


def test_csv_round_trip():
    vs = enumerate_vertices(theorem1_region(CATALOG[7], AntennaConfig(9, 7, 8, 5)))
    text = vertices_to_csv(vs)
    assert text.splitlines()[0] == "d1,d2,d3"
    assert "9/2,9/2,9/2" in text
    assert vertices_from_csv(text) == vs


def test_constraint_validation():
    with pytest.raises(ValueError):
        LinearConstraint((0, 0, 0), 1)
    with pytest.raises(ValueError):
        LinearConstraint((1, 0, 0), -1)
    with pytest.raises(ValueError):
        AntennaConfig(0, 1, 1, 1)
    with pytest.raises(ValueError):
        AntennaConfig.parse("1,2,3")

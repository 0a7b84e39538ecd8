from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgclosure.errors import DimensionCap
from scgclosure.ratpoly import (
    Polyhedron,
    UnimodularMap,
    annihilator_map,
    as_fraction,
    det,
    dot,
    fm_project,
    from_generators,
    hnf,
    includes,
    integer_kernel,
    inverse,
    lp_optimize,
    matmul,
    project_generators,
    remove_redundant,
    same_set,
    set_max_dim,
    support,
    vrep,
)

small = st.integers(-3, 3)
frac = st.builds(F, st.integers(-6, 6), st.integers(1, 3))


def rows_strategy(n, lo=1, hi=5):
    row = st.tuples(st.tuples(*[small] * n), st.sampled_from(["<=", ">="]), frac)
    return st.lists(row, min_size=lo, max_size=hi)


def bounded(rows, n, r=3):
    return Polyhedron.from_rows(rows, n).intersect(
        [(tuple(1 if j == i else 0 for j in range(n)), "<=", r) for i in range(n)]
        + [(tuple(1 if j == i else 0 for j in range(n)), ">=", -r) for i in range(n)])


def test_as_fraction_parsing():
    assert as_fraction("9/2") == F(9, 2)
    assert as_fraction(" -3 ") == -3
    with pytest.raises((ValueError, ZeroDivisionError)):
        as_fraction("1/0")
    with pytest.raises((TypeError, ValueError)):
        as_fraction(0.5)


def test_box_vertices():
    P = Polyhedron.box([0, 0], [1, 2])
    g = vrep(P)
    assert set(g.vertices) == {(0, 0), (0, 2), (1, 0), (1, 2)}
    assert not g.rays and not g.lineality


def test_empty_and_universe():
    assert Polyhedron.empty(2).is_empty
    assert not Polyhedron.universe(2).is_empty
    assert len(vrep(Polyhedron.universe(2)).lineality) == 2


def test_dimension_cap():
    set_max_dim(2)
    try:
        with pytest.raises(DimensionCap):
            Polyhedron.box([0, 0, 0], [1, 1, 1]).is_empty
    finally:
        set_max_dim(8)


@settings(max_examples=60, deadline=None)
@given(rows_strategy(2))
def test_generators_round_trip(rows):
    P = Polyhedron.from_rows(rows, 2)
    if P.is_empty:
        return
    g = vrep(P)
    Q = from_generators(g.vertices, g.rays, g.lineality, 2)
    assert same_set(P, Q)
    assert Q.canonical() == Q.canonical().canonical()


@settings(max_examples=60, deadline=None)
@given(rows_strategy(3, 1, 4), st.tuples(small, small, small))
def test_lp_matches_vertex_support_and_duality(rows, c):
    P = bounded(rows, 3)
    res = lp_optimize(P, c, "max")
    status, val, _ = support(P, c)
    if P.is_empty:
        assert res.status == "infeasible"
        le = P.le_rows()
        y = res.farkas
        assert all(x >= 0 for x in y)
        assert all(sum(yi * a[j] for yi, (a, _) in zip(y, le)) == 0 for j in range(3))
        assert sum(yi * b for yi, (_, b) in zip(y, le)) < 0
        return
    assert res.status == status == "optimal"
    assert res.value == val
    assert P.contains(res.witness)
    le = P.le_rows()
    assert all(x >= 0 for x in res.dual)
    assert all(sum(y * a[j] for y, (a, _) in zip(res.dual, le)) == c[j] for j in range(3))
    assert sum(y * b for y, (_, b) in zip(res.dual, le)) == val
    low = lp_optimize(P, c, "min")
    assert low.value == min(dot(c, v) for v in vrep(P).vertices)


def test_lp_unbounded_ray():
    P = Polyhedron.from_rows([((1, 0), ">=", 0), ((0, 1), ">=", 0)], 2)
    res = lp_optimize(P, (1, 1))
    assert res.status == "unbounded"
    assert dot((1, 1), res.ray) > 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=3))
def test_hnf_shape(M):
    H, U = hnf(M)
    assert abs(U.det) == 1
    assert H == [[int(x) for x in r] for r in matmul(M, U.U)]
    for i, row in enumerate(H):
        for j in range(i + 1, len(row)):
            assert row[j] == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=2))
def test_integer_kernel_and_annihilator(G):
    K = integer_kernel(G, 3)
    for k in K:
        assert all(dot(k, g) == 0 for g in G)
    tau, l = annihilator_map(G, 3)
    assert abs(tau.det) == 1
    for g in G:
        img = tau.linear(g)
        assert all(x == 0 for x in img[: 3 - l])


def test_annihilator_examples():
    tau, l = annihilator_map([(1, 1)], 2)
    assert l == 1 and tau.U == ((1, -1), (0, 1))
    tau, l = annihilator_map([(0, 1)], 2)
    assert tau.U == ((1, 0), (0, 1))


def test_unimodular_algebra():
    t = UnimodularMap.make([[2, 1], [1, 1]], [3, -1])
    x = (F(1, 2), 4)
    assert t.inverse()(t(x)) == x
    assert t.compose(t.inverse()) == UnimodularMap.identity(2)
    with pytest.raises(ValueError):
        UnimodularMap.make([[2, 0], [0, 1]])
    U = [[int(v) for v in r] for r in t.U]
    assert [[int(v) for v in r] for r in inverse(U)] == [list(r) for r in t.U_inv]
    assert det(U) in (1, -1)


@settings(max_examples=40, deadline=None)
@given(rows_strategy(3, 1, 4))
def test_fourier_motzkin_matches_generator_projection(rows):
    P = bounded(rows, 3)
    for keep in ([0, 1], [0], [1, 2]):
        A = fm_project(P, keep)
        B = project_generators(P, keep)
        assert same_set(A, B)


@settings(max_examples=30, deadline=None)
@given(rows_strategy(2, 1, 6))
def test_remove_redundant_keeps_the_set(rows):
    P = bounded(rows, 2)
    Q = remove_redundant(P)
    assert same_set(P, Q)
    assert Q.m <= P.m


def test_includes_direction():
    small_box = Polyhedron.box([0, 0], [1, 1])
    big_box = Polyhedron.box([-1, -1], [2, 2])
    assert includes(big_box, small_box)
    assert not includes(small_box, big_box)
    pts = [p for p in product(range(-1, 3), repeat=2) if small_box.contains(p)]
    assert len(pts) == 4

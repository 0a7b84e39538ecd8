from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgclosure.ratpoly import Polyhedron, UnimodularMap, from_generators, includes, same_set
from scgclosure.scg import Cut, alpha_family, bounded_closure, floor_s
from scgclosure.sets import SSpec, build_s0, conv_generators
from scgclosure.suites import rand_inner, rand_set, trial_rng
from scgclosure.transforms import (
    MINUS,
    NEITHER,
    PLUS,
    apply_tau,
    check_normal_form,
    lineality_split,
    map_lineality,
    normalize_pointed,
    normalize_pointed_form,
    partition_pi,
    sign_class,
    sign_flip,
    sign_subset,
    tau_pair,
)

LEFT = Polyhedron.from_rows([((-1, 0), "<=", 5), ((-1, 1), "<=", 6), ((1, -2), "<=", -5), ((1, -1), "<=", -4)], 2)
STRIP = SSpec.integer_hull(Polyhedron.from_rows([((0, 1), ">=", 0), ((0, 1), "<=", 1)], 2))


def test_map_lineality_examples():
    assert map_lineality([(1, 1)], 2).U == ((1, -1), (0, 1))
    assert map_lineality([(0, 1)], 2) == UnimodularMap.identity(2)
    assert map_lineality([], 2) == UnimodularMap.identity(2)


def test_normalize_left_set():
    nf = normalize_pointed_form(SSpec.integer_hull(LEFT))
    assert nf.tau.U == ((1, -1), (0, 1)) and nf.tau.v == (6, 0)
    V, rays, L = conv_generators(nf.S)
    assert set(V) == {(0, 1), (1, 0), (2, 1)} and rays == ((0, 1),) and L == ()
    assert (nf.n1, nf.n2) == (1, 1)
    assert check_normal_form(nf.S, nf.n1)


def test_normalize_bounded_and_already_normal_sets():
    sq = SSpec.explicit(list(product((0, 1), repeat=2)))
    tau, S = normalize_pointed(sq)
    assert tau == UnimodularMap.identity(2) and S.points == sq.points
    quad = SSpec.integer_hull(Polyhedron.from_rows([((1, 0), ">=", 0), ((0, 1), ">=", 0)], 2))
    tau, S = normalize_pointed(quad)
    assert check_normal_form(S, 0)
    assert same_set(S.hull_polyhedron, quad.hull_polyhedron)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_normalize_random_pointed_sets(seed):
    rng = trial_rng(seed, 0)
    S = rand_set(rng, 2, "pointed")
    nf = normalize_pointed_form(S)
    assert check_normal_form(nf.S, nf.n1)
    # tau is a bijection on the integer points it touches
    for p in S.desc.base:
        assert nf.S.contains(nf.tau(p))
        assert nf.tau.inverse()(nf.tau(p)) == tuple(p)


def test_apply_tau_round_trip():
    tau = UnimodularMap.make([[1, -1], [0, 1]], [6, 0])
    c = Cut((0, 1), F(5, 2), 2, (0, 2))
    back = apply_tau(tau.inverse(), apply_tau(tau, c))
    assert (back.alpha, back.beta, back.beta_strengthened) == (c.alpha, c.beta, c.beta_strengthened)
    assert tau_pair(tau, (1, 0), 0) == ((1, 1), 6)
    assert same_set(apply_tau(tau.inverse(), apply_tau(tau, LEFT)), LEFT)
    assert apply_tau(tau, (F(1, 2), 1)) == (F(11, 2), 1)


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any), st.integers(-20, 20))
def test_floor_commutes_with_tau(alpha, b):
    tau = UnimodularMap.make([[2, 1], [1, 1]], [3, -1])
    S = SSpec.integer_hull(Polyhedron.box([0, 0], [2, 3]))
    a2, b2 = tau_pair(tau, alpha, b)
    v = floor_s(S, alpha, b)
    w = floor_s(apply_tau(tau, S), a2, b2)
    if isinstance(v, int) or isinstance(v, F):
        assert w == v + (b2 - b)
    else:
        assert w is v


def test_mixed_sets_are_rejected():
    from scgclosure.mip import mixed_set

    S = mixed_set(Polyhedron.box([0, 0], [1, 1]), 1)
    with pytest.raises(ValueError):
        apply_tau(UnimodularMap.identity(2), S)


def test_partition_examples():
    rays = [(1, 1)]
    assert sign_class((1, -1), rays) == PLUS
    assert sign_class((-1, 0), rays) == MINUS
    plus, minus, neither = partition_pi([(1, -1), (2, -1), (0, 1)], [(1, 2)])
    assert minus == [(1, -1)] and plus == [(2, -1), (0, 1)] and not neither
    plus, minus, neither = partition_pi([(2, -1)], [(1, 0), (1, 3)])
    assert neither == [(2, -1)]
    assert sign_class((0, 0), rays) == PLUS and NEITHER not in (PLUS, MINUS)


def test_sign_flip_and_subset():
    assert sign_flip({1, 2}, 2, 3) == UnimodularMap.identity(3)
    f = sign_flip({2}, 2, 3)
    assert f.U == ((-1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert f.compose(f) == UnimodularMap.identity(3)
    with pytest.raises(ValueError):
        sign_flip({3}, 2, 3)
    assert sign_subset((2, -1, 5), 2) == {1}
    assert sign_subset((2, -1, 5), 2, plus=False) == {2}


def test_neither_directions_match_s0():
    S = SSpec.integer_hull(from_generators([(0, 0), (1, 0)], [(1, 0), (1, 3)], [], 2))
    S0 = build_s0(S)
    rays = S.hull.rays
    _, _, neither = partition_pi(alpha_family(2, 3), rays)
    assert neither
    for a in neither:
        for b in range(-15, 16):
            assert floor_s(S, a, b) == floor_s(S0, a, b)


def test_s0_contains_the_set():
    for seed in range(10):
        S = rand_set(trial_rng(seed, 1), 2, "pointed")
        S0 = build_s0(S)
        assert includes(S0.hull_polyhedron, S.hull_polyhedron)
        assert all(S0.contains(p) for p in S.desc.base)


def test_lineality_split_on_strip():
    P = Polyhedron.from_rows([((0, 1), ">=", 0), ((0, 1), "<=", F(1, 2)), ((1, 0), "<=", F(3, 2)), ((-1, 0), "<=", 0)], 2)
    sp = lineality_split(P, STRIP)
    assert sp.lineality == ((1, 0),) and (sp.n1, sp.n2) == (1, 1)
    assert sp.phi((1, 0)) is None
    assert sp.phi((0, 1)) == (1,) or sp.phi((0, 1)) == (-1,)
    direct = bounded_closure(P, STRIP, 2).polyhedron
    qhat = bounded_closure(sp.Q_hat, sp.T_C, 2).polyhedron
    back = apply_tau(sp.tau.inverse(), sp.Q.intersect(qhat.lift(sp.n2).rows()))
    s0 = bounded_closure(P, sp.s0, 2).polyhedron
    assert same_set(direct, s0.intersect(back.rows()))
    assert same_set(direct, Polyhedron.from_rows([((0, 1), "=", 0), ((1, 0), ">=", 0), ((1, 0), "<=", 1)], 2))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_lineality_split_random(seed):
    rng = trial_rng(seed, 2)
    S = rand_set(rng, 2, "lineality")
    P = rand_inner(rng, S)
    sp = lineality_split(P, S)
    if sp.n2 == 0 or sp.n1 == 0:
        return
    direct = bounded_closure(P, S, 2).polyhedron
    qhat = bounded_closure(sp.Q_hat, sp.T_C, 2).polyhedron
    back = apply_tau(sp.tau.inverse(), sp.Q.intersect(qhat.lift(sp.n2).rows()))
    s0 = bounded_closure(P, sp.s0, 2).polyhedron
    assert same_set(direct, s0.intersect(back.rows()))
    for z in S.desc.base:
        if P.contains(z):
            assert direct.contains(z)

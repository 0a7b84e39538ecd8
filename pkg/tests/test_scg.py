from fractions import Fraction as F
from itertools import product
from math import floor, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgclosure.errors import NotIntegral, NotSupporting, NotValid, Unbounded
from scgclosure.ratpoly import Polyhedron, dot, from_generators, includes, same_set
from scgclosure.scg import (
    EMPTY_SIDE,
    alpha_family,
    bounded_closure,
    ceil_s,
    certify,
    check_pi_membership,
    closure_round,
    floor_bruteforce,
    floor_s,
    floor_witness,
    scg_cut,
)
from scgclosure.sets import SSpec

SQ = SSpec.explicit(list(product((0, 1), repeat=2)))
P_FIX = Polyhedron.from_rows([((2, 3), "<=", F(9, 2))], 2).intersect(Polyhedron.box([0, 0], [1, 1]).rows())


def Zn(n):
    return SSpec.integer_hull(Polyhedron.universe(n))


def test_floor_examples():
    assert floor_s(SQ, (2, 3), F(9, 2)) == 3
    assert floor_s(Zn(2), (1, 0), F(3, 2)) == 1
    assert floor_s(SSpec.explicit([(0,), (1,)]), (1,), -1) is EMPTY_SIDE


def test_ceil_examples():
    assert ceil_s(SQ, (2, 3), F(5, 2)) == 3
    assert ceil_s(Zn(1), (1,), F(3, 2)) == 2
    assert ceil_s(SSpec.explicit([(0,)]), (1,), F(1, 2)) is EMPTY_SIDE


def test_pi_membership_examples():
    box = Polyhedron.box([0, 0], [1, 1])
    cert = check_pi_membership(box, (1, 1), 2)
    rows = box.le_rows()
    assert sum(l * a[0] for l, (a, _) in zip(cert.lam, rows)) == 1
    assert sum(l * b for l, (_, b) in zip(cert.lam, rows)) == 2
    with pytest.raises(NotSupporting):
        check_pi_membership(box, (1, 1), 3)
    with pytest.raises(NotValid):
        check_pi_membership(box, (1, 1), 1)
    with pytest.raises(NotIntegral):
        check_pi_membership(box, (F(1, 2), 1), 1)
    cert = check_pi_membership(P_FIX, (2, 3), F(9, 2))
    assert cert.lam[0] == 1 and not any(cert.lam[1:])


def test_scg_cut_examples():
    c = scg_cut(P_FIX, SQ, (2, 3))
    assert (c.beta, c.classical, c.beta_strengthened, c.witness) == (F(9, 2), 4, 3, (0, 1))
    half = Polyhedron.from_rows([((1,), "=", F(1, 2))], 1)
    c = scg_cut(half, SSpec.explicit([(0,), (1,)]), (1,))
    assert c.inequality() == ((1,), "<=", 0)
    with pytest.raises(Unbounded):
        scg_cut(Polyhedron.from_rows([((1, 0), ">=", 0)], 2), Zn(2), (1, 0))


def test_scg_cut_empty_p_gives_infeasibility_cut():
    c = scg_cut(Polyhedron.empty(2), Zn(2), (1, 0))
    assert c.inequality() == ((0, 0), "<=", -1)
    cert = certify(Polyhedron.empty(2), c)
    assert cert.lam is not None


@settings(max_examples=100, deadline=None)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)).filter(any), st.integers(-40, 40), st.integers(1, 6))
def test_coprime_alpha_over_integers_is_classical(alpha, p, q):
    beta = F(p, q)
    g = gcd(*alpha)
    assert floor_s(Zn(2), alpha, beta) == g * floor(beta / g)


pts = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=6)


@settings(max_examples=150, deadline=None)
@given(pts, st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.integers(-30, 30), st.integers(1, 4))
def test_floor_matches_scan_on_finite_sets(points, alpha, p, q):
    S = SSpec.explicit(points)
    beta = F(p, q)
    vals = [dot(alpha, z) for z in S.points if dot(alpha, z) <= beta]
    want = max(vals) if vals else EMPTY_SIDE
    assert floor_s(S, alpha, beta) == want
    hull = SSpec.integer_hull(from_generators(S.points, [], [], 2))
    assert floor_s(hull, alpha, beta) == floor_bruteforce(hull, alpha, beta, ([-3, -3], [3, 3]))


@settings(max_examples=120, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=2),
       st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any), min_size=1, max_size=2),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-20, 20))
def test_floor_on_unbounded_sets(V, rays, alpha, b):
    R = from_generators(V, rays, [], 2)
    S = SSpec.integer_hull(R)
    v, z = floor_witness(S, alpha, b)
    box = ([-30, -30], [30, 30])
    scan = floor_bruteforce(S, alpha, b, box)
    if v is EMPTY_SIDE:
        assert scan is EMPTY_SIDE
        return
    assert S.contains(z) and dot(alpha, z) == v <= b
    # every point found in the box is no better, and the box optimum is reached when z is inside it
    if scan is not EMPTY_SIDE:
        assert scan <= v
    if all(-30 <= x <= 30 for x in z):
        assert scan == v


def test_floor_monotone_in_the_set():
    small = SSpec.explicit([(0, 0), (1, 1)])
    assert floor_s(small, (2, 3), F(9, 2)) <= floor_s(SQ, (2, 3), F(9, 2)) <= floor(F(9, 2))


def test_closure_round_examples():
    box = Polyhedron.box([0, 0], [1, 1])
    r = closure_round(box, SQ, [(1, 0), (0, 1), (-1, 0), (0, -1)])
    assert same_set(r.polyhedron, box)
    r = closure_round(P_FIX, SQ, [(2, 3)])
    assert same_set(r.polyhedron, P_FIX.intersect([((2, 3), "<=", 3)]))
    assert len(r.certificates) == 1
    far = Polyhedron.box([5, 5], [6, 6])
    r = closure_round(far, SQ, [(-1, 0)])
    assert r.polyhedron.is_empty


def test_bounded_closure_examples():
    P = Polyhedron.box([0, 0], [F(1, 2), F(1, 2)])
    r = bounded_closure(P, SQ, 1)
    assert same_set(r.polyhedron, Polyhedron.box([0, 0], [0, 0]))
    box = Polyhedron.box([0, 0], [1, 1])
    assert same_set(bounded_closure(box, SQ, 1).polyhedron, box)


def test_alpha_family_order_and_primitivity():
    fam = alpha_family(2, 2)
    assert fam[:4] == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert all(gcd(*a) == 1 for a in fam)
    assert len(fam) == len(set(fam))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=2, max_size=5),
       st.lists(st.tuples(st.integers(0, 4), st.integers(1, 4), st.integers(0, 4), st.integers(1, 4)),
                min_size=1, max_size=4))
def test_closure_sound_and_antitone(points, weights):
    S = SSpec.integer_hull(from_generators(points, [], [], 2))
    base = list(S.desc.base)
    P_pts = []
    for a, qa, b, qb in weights:
        u, v = base[a % len(base)], base[(b + 1) % len(base)]
        t = F(a % (qa + 1), qa + 1)
        P_pts.append(tuple(t * x + (1 - t) * y for x, y in zip(u, v)))
    P = from_generators(P_pts, [], [], 2)
    prev = P
    for K in (1, 2, 3):
        cur = bounded_closure(P, S, K).polyhedron
        assert includes(prev, cur)
        for z in S.desc.base:
            if P.contains(z):
                assert cur.contains(z)
        prev = cur


def test_threads_do_not_change_the_result():
    P = Polyhedron.box([0, 0], [F(5, 2), F(7, 3)]).intersect([((1, 1), "<=", F(7, 2))])
    S = SSpec.integer_hull(Polyhedron.box([0, 0], [3, 3]))
    a = bounded_closure(P, S, 3, with_certificates=True)
    b = bounded_closure(P, S, 3, with_certificates=True, threads=4)
    assert a.polyhedron == b.polyhedron and a.cuts == b.cuts

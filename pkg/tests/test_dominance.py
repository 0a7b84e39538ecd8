from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgclosure.dominance import (
    COVERING,
    PACKING,
    PointedContext,
    constants,
    convergent_denominators,
    dirichlet,
    dirichlet_root,
    dominates,
    intercept_bound,
    intercepts,
    max_intercept,
    ray_support,
    reduce_multiplier,
    reduce_to_bounded,
    tilting,
)
from scgclosure.errors import PreconditionRatio
from scgclosure.ratpoly import Polyhedron
from scgclosure.scg import Cut
from scgclosure.sets import SSpec
from scgclosure.suites import reduction_instance, trial_rng

TWO_RAYS = PointedContext(((1, 2),), (0,), 0, ((0, 1), (1, 1)))
UNIT = PointedContext(((1, 0), (0, 1)), (1, 0), 1, ((0, 1),))
STRIP = SSpec.integer_hull(Polyhedron.from_rows([((1, 0), ">=", 0), ((1, 0), "<=", 2), ((0, 1), ">=", 0)], 2))


def test_ray_support_and_intercepts():
    assert ray_support((0, 1), UNIT) == {0}
    assert ray_support((1, 0), UNIT) == frozenset()
    assert ray_support((1, 2), TWO_RAYS) == {0, 1}
    assert intercepts((0, 1), 3, UNIT) == {0: 3}
    assert intercepts((1, 2), 6, TWO_RAYS) == {0: 3, 1: 2}
    assert intercepts((1, 0), 6, UNIT) == {}


def test_context_rejects_bad_signs():
    with pytest.raises(ValueError):
        PointedContext(((1, -1),), (0,), 1, ((0, 1),))
    with pytest.raises(ValueError):
        PointedContext(((1, 0),), (-1,), 1, ((0, 1),))
    with pytest.raises(ValueError):
        PointedContext(((1, 0),), (0,), 1, ((1, 1),))


def test_tilting_examples():
    single = PointedContext(((1, 1),), (1,), 1, ((0, 1),))
    assert tilting((5,), single) == (1, 1)
    assert tilting((4, 1), UNIT) == (2, 4)
    both = PointedContext(((0, 1), (1, 1)), (0, 0), 1, ((0, 1),))
    assert tilting((4, 1), both) == (1, 1)


def test_constants_examples():
    c = constants(PointedContext(((1, 1),), (7,), 1, ((0, 1),)))
    assert (c.M, c.Mstar) == (1, 7)
    c = constants(UNIT)
    assert (c.B, c.D, c.M_list, c.M, c.Mstar) == (1, 2, (12,), 12, 24)
    three = PointedContext(((1, 0, 0), (0, 1, 0), (0, 0, 1)), (1, 1, 0), 2, ((0, 0, 1),))
    c = constants(three)
    assert c.M_list[0] >= 4 and c.M >= c.M_list[0]
    assert c.M_list[1] == (2 * 3 * 1 * c.M_list[0]) * c.M_list[0]


def test_dirichlet_examples():
    assert dirichlet([2, 3], F(1, 2)) == ((2, 3), 1)
    assert dirichlet([F(7, 5)], F(1, 2)) == ((1,), 1)
    assert dirichlet([F(1, 3)], F(1, 4)) == ((1,), 3)


def test_convergents_are_increasing():
    qs = list(convergent_denominators(F(355, 113)))
    assert qs[0] == 1 and qs[-1] == 113
    assert qs == sorted(qs)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.builds(F, st.integers(-10**4, 10**4), st.integers(1, 500)), min_size=1, max_size=2),
       st.integers(2, 12))
def test_dirichlet_inequalities(r, d):
    eps = F(1, d)
    p, q = dirichlet(r, eps)
    assert 1 <= q <= (1 / eps) ** len(r)
    assert all(abs(x - F(pi, q)) < eps / q for x, pi in zip(r, p))
    for i in range(len(r) - 1):
        if r[i] >= r[i + 1]:
            assert p[i] >= p[i + 1]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.builds(F, st.integers(1, 10**5), st.integers(1, 999)), min_size=1, max_size=2),
       st.integers(2, 40))
def test_dirichlet_root_bounds(r, inv):
    ratio = F(1, inv)
    p, q = dirichlet_root(r, ratio)
    k = len(r)
    assert q <= inv
    assert all(abs(q * x - pi) ** k < ratio for x, pi in zip(r, p))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 50), min_size=3, max_size=3).filter(any), st.integers(0, 6))
def test_intercepts_bounded_by_tilting_ratio(lam, seed):
    rng = trial_rng(seed, 0)
    ctx, _, _ = reduction_instance(rng, COVERING)
    lam = [F(x) for x in lam[: ctx.m]]
    if not any(lam):
        return
    alpha, beta = ctx.combine(lam)
    for v in intercepts(alpha, beta, ctx).values():
        assert v <= intercept_bound(lam, ctx)


def test_dominates_examples():
    box = Polyhedron.box([0, 0], [1, 1])
    a = Cut((1, 0), F(1), F(0), (0, 0))
    b = Cut((0, 1), F(1), F(0), (0, 0))
    assert dominates(a, a, box)
    assert dominates(a, Cut((1, 0), F(1), F(1), (1, 0)), box)
    assert not dominates(a, b, box) and not dominates(b, a, box)


@pytest.mark.parametrize("orientation", [COVERING, PACKING])
def test_single_step_example(orientation):
    ctx = PointedContext(UNIT.A, UNIT.b, 1, UNIT.rays, orientation)
    st_ = reduce_multiplier((25, 1), ctx, STRIP)
    assert st_.mu == (24, 1) and st_.ell == 1 and st_.t == 2
    assert all(ok for _, ok in st_.checks)


def test_precondition_ratio():
    single = PointedContext(((0, 1),), (1,), 1, ((0, 1),))
    with pytest.raises(PreconditionRatio):
        reduce_multiplier((3,), single, STRIP)


def test_reduce_to_bounded_zero_steps_when_bounded():
    red = reduce_to_bounded((2, 1), UNIT, STRIP)
    assert red.steps == () and red.mu_hat == (2, 1)


@pytest.mark.parametrize("orientation", [COVERING, PACKING])
def test_random_chains_cover_both_break_indices(orientation):
    ells = set()
    for t in range(20):
        ctx, S, lam = reduction_instance(trial_rng(7, t), orientation)
        red = reduce_to_bounded(lam, ctx, S)
        assert 1 <= len(red.steps) <= sum(lam)
        assert max_intercept(red.mu_hat, ctx) <= red.constants.Mstar
        for s in red.steps:
            assert dict(s.checks) == {"norm": True, "pi": True, "dom": True, "supp": True, "band": True}
            ells.add(s.ell)
        assert red.final_dominates
        assert red.trace()[0].startswith("step 1: ")
    assert ells == {1, 2}

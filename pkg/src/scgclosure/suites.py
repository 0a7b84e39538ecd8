"""Randomized property suites.

Every trial draws from its own generator seeded with ``seed * 1000003 + trial``,
so a suite's output depends only on (seed, trials) and never on thread count.
"""
from __future__ import annotations

import random
import time
from itertools import product
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Callable

from .dominance import (
    COVERING,
    PACKING,
    PointedContext,
    constants,
    dirichlet,
    max_intercept,
    ray_support,
    reduce_to_bounded,
)
from .errors import SCGError
from .mip import direct_mixed_closure, lift_witness, mixed_closure_round, mixed_set
from .ratpoly import (
    Polyhedron,
    lp_optimize,
    UnimodularMap,
    dot,
    fm_project,
    from_generators,
    includes,
    same_set,
    support,
    to_int,
)
from .scg import alpha_family, bounded_closure, floor_s
from .sets import SSpec, build_s0, conv_generators, enumerate_lattice, vertex_box
from .transforms import _cone_facets, apply_tau, partition_pi

SEED_STRIDE = 1000003


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(seed * SEED_STRIDE + trial)


@dataclass
class SuiteReport:
    name: str
    trials: int
    passed: int = 0
    lines: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def failed(self) -> int:
        return self.trials - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        return f"{self.name}: {self.passed}/{self.trials} passed, {self.failed} failed"

    def text(self) -> str:
        return "\n".join(self.lines + [self.summary()])


def _run(name: str, trials: int, seed: int, body: Callable[[random.Random], str]) -> SuiteReport:
    rep = SuiteReport(name, trials)
    t0 = time.perf_counter()
    for i in range(trials):
        rng = trial_rng(seed, i)
        try:
            detail = body(rng)
            rep.passed += 1
            rep.lines.append(f"trial {i}: ok {detail}".rstrip())
        except AssertionError as exc:
            rep.lines.append(f"trial {i}: FAIL {exc}")
        except SCGError as exc:
            rep.lines.append(f"trial {i}: FAIL {type(exc).__name__}: {exc}")
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# random objects


def rand_frac(rng: random.Random, lo: int, hi: int, qmax: int = 4) -> Fraction:
    q = rng.randint(1, qmax)
    return Fraction(rng.randint(lo * q, hi * q), q)


def rand_unimodular(rng: random.Random, n: int, bound: int = 3, ops: int | None = None) -> UnimodularMap:
    """Product of elementary integer operations, entries kept within ``bound``."""
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(ops if ops is not None else 2 * n):
        kind = rng.random()
        if n >= 2 and kind < 0.6:
            i, j = rng.sample(range(n), 2)
            c = rng.choice([-2, -1, 1, 2])
            row = [x + c * y for x, y in zip(U[i], U[j])]
            if max(abs(x) for x in row) <= bound:
                U[i] = row
        elif n >= 2 and kind < 0.8:
            i, j = rng.sample(range(n), 2)
            U[i], U[j] = U[j], U[i]
        else:
            i = rng.randrange(n)
            U[i] = [-x for x in U[i]]
    v = [rng.randint(-bound, bound) for _ in range(n)]
    return UnimodularMap.make(U, v)


def rand_int_vec(rng: random.Random, n: int, bound: int) -> tuple[int, ...]:
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(v):
            return v


def rand_set(rng: random.Random, n: int, kind: str = "any") -> SSpec:
    """A random integer-hull set: bounded, pointed with rays, or with lineality."""
    if kind == "any":
        kind = rng.choice(["bounded", "bounded", "pointed", "lineality"])
    nv = rng.randint(n, n + 2) if kind == "bounded" else rng.randint(1, 3)
    V = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(nv)]
    if kind == "bounded":
        if rng.random() < 0.5:
            lo = [rng.randint(-2, 0) for _ in range(n)]
            hi = [rng.randint(0, 2) for _ in range(n)]
            R = Polyhedron.box(lo, hi)
            a = rand_int_vec(rng, n, 3)
            p = [rng.randint(l, h) for l, h in zip(lo, hi)]
            R = R.intersect([(a, "<=", dot(a, p) + rng.randint(0, 2))])
        else:
            R = from_generators([tuple(Fraction(x) for x in v) for v in V + [rand_frac_vec(rng, n)]], [], [], n)
        return SSpec.integer_hull(R)
    if kind == "pointed" or n == 1:
        while True:
            rays = [rand_int_vec(rng, n, 2) for _ in range(rng.randint(1, min(2, n)))]
            R = from_generators(V, rays, [], n)
            if not R._vrep.lineality:
                return SSpec.integer_hull(R)
    lin = [rand_int_vec(rng, n, 2)]
    rays = [rand_int_vec(rng, n, 2)] if n >= 2 and rng.random() < 0.5 else []
    return SSpec.integer_hull(from_generators(V, rays, lin, n))


def rand_frac_vec(rng: random.Random, n: int, lo: int = -2, hi: int = 2):
    return tuple(rand_frac(rng, lo, hi) for _ in range(n))


def rand_inner(rng: random.Random, S: SSpec, unbounded: bool = True) -> Polyhedron:
    """Random rational P inside conv(S): convex combinations of points of S, maybe plus rays."""
    V, rays, L = conv_generators(S)
    base = list(S.desc.base)
    pool = sorted(set(V) | set(base))
    pts = []
    for _ in range(rng.randint(S.n, S.n + 3)):
        k = rng.randint(1, min(3, len(pool)))
        chosen = rng.sample(pool, k)
        w = [Fraction(rng.randint(1, 4)) for _ in chosen]
        tot = sum(w)
        p = [sum(wi * c[j] for wi, c in zip(w, chosen)) / tot for j in range(S.n)]
        for r in list(rays) + list(L):
            p = [x + rand_frac(rng, 0, 2) * rj for x, rj in zip(p, r)]
        pts.append(tuple(p))
    R = [r for r in rays if unbounded and rng.random() < 0.5]
    return from_generators(pts, R, [], S.n)


# ---------------------------------------------------------------------------
# soundness helpers


def soundness_checks(P: Polyhedron, S: SSpec, closure: Polyhedron, box_radius: int = 4) -> None:
    """conv(P ∩ S) ⊆ closure ⊆ P, with P ∩ S scanned in a box (the whole of it when P is bounded)."""
    assert includes(P, closure), "closure is not inside P"
    v = P._vrep
    if v.is_empty:
        return
    lo, hi = vertex_box(v.vertices)
    if v.rays or v.lineality:
        lo = [l - box_radius for l in lo]
        hi = [h + box_radius for h in hi]
    for z in enumerate_lattice(P, (lo, hi)):
        if S.contains(z):
            assert closure.contains(z), f"closure cuts off {z} in P ∩ S"


# ---------------------------------------------------------------------------
# classical CG consistency


def _classical_trial(rng: random.Random) -> str:
    n = rng.randint(1, 4)
    alpha = rand_int_vec(rng, n, 6)
    beta = rand_frac(rng, -20, 20, 7)
    S = SSpec.integer_hull(Polyhedron.universe(n))
    g = gcd(*alpha)
    want = g * floor(beta / g)
    got = floor_s(S, alpha, beta)
    assert got == want, f"floor_s({alpha}, {beta}) = {got}, expected {want}"
    return f"n={n} g={g} floor={want}"


def suite_classical(trials: int = 500, seed: int = 0, threads: int = 1) -> SuiteReport:
    return _run("classical", trials, seed, _classical_trial)


# ---------------------------------------------------------------------------
# simultaneous approximation


def _dirichlet_trial(rng: random.Random) -> str:
    k = rng.choice([1, 1, 2, 3])
    r = [rand_frac(rng, -50, 50, 10**6) for _ in range(k)]
    den = {1: 10**5, 2: 15, 3: 6}[k]
    eps = Fraction(rng.randint(1, 99), 100) if rng.random() < 0.5 else Fraction(1, rng.randint(2, den))
    if k == 3 and eps < Fraction(1, 6):
        eps = Fraction(1, 6)
    p, q = dirichlet(r, eps)
    assert 1 <= q and Fraction(q) <= (1 / eps) ** k, f"q={q} outside [1, (1/eps)^k]"
    for x, pi in zip(r, p):
        assert abs(x - Fraction(pi, q)) < eps / q, f"|r - p/q| >= eps/q for r={x}"
    return f"k={k} q={q}"


def suite_dirichlet(trials: int = 1000, seed: int = 0, threads: int = 1) -> SuiteReport:
    return _run("dirichlet", trials, seed, _dirichlet_trial)


# ---------------------------------------------------------------------------
# commutation with unimodular maps


def commutation_instance(rng: random.Random):
    n = rng.randint(1, 3)
    K = rng.randint(1, 3 if n < 3 else 2)
    S = rand_set(rng, n)
    P = rand_inner(rng, S)
    tau = rand_unimodular(rng, n)
    return n, K, S, P, tau


def _commutation_trial(rng: random.Random, threads: int = 1) -> str:
    n, K, S, P, tau = commutation_instance(rng)
    F = alpha_family(n, K)
    left = bounded_closure(P, S, K, alphas=F, threads=threads).polyhedron
    lhs = apply_tau(tau, left)
    tF = [to_int(apply_tau(tau, [(a, 0)])[0][0]) for a in F]
    rhs = bounded_closure(apply_tau(tau, P), apply_tau(tau, S), K, alphas=tF, threads=threads).polyhedron
    assert same_set(lhs, rhs), "tau(P_S) differs from tau(P)_tau(S)"
    soundness_checks(P, S, left)
    return f"n={n} K={K} |Pi|={len(F)} rows={rhs.m}"


def suite_commutation(trials: int = 100, seed: int = 0, threads: int = 1) -> SuiteReport:
    return _run("commutation", trials, seed, lambda rng: _commutation_trial(rng, threads))


# ---------------------------------------------------------------------------
# multiplier reduction (covering and packing)


def _pointed_block(rng: random.Random, n: int):
    """(n1, rays, facet rows of C = cone{e_1..e_n1, rays})."""
    if n == 2:
        n1, rays = 1, [(0, 1)]
    else:
        n1 = rng.choice([1, 2])
        if n1 == 2:
            rays = [(0, 0, 1)]
        else:
            pairs = [((1, 0), (0, 1)), ((1, 0), (1, 1)), ((0, 1), (1, 1)), ((1, 1), (1, 2)), ((2, 1), (1, 2))]
            rays = [(0,) + tuple(r) for r in rng.choice(pairs)]
    n2 = n - n1
    rows = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n1)]
    rhat = [r[n1:] for r in rays]
    rows += [(0,) * n1 + tuple(int(x) for x in h) for h in _cone_facets(rhat, n2)]
    return n1, rays, rows


def reduction_instance(rng: random.Random, orientation: str, tries: int = 200):
    """(ctx, S, lam) whose max intercept just exceeds M*."""
    for _ in range(tries):
        n = rng.choice([2, 2, 3])
        n1, rays, A = _pointed_block(rng, n)
        if len(A) < 3 and rng.random() < 0.6:
            extra = tuple(rng.randint(0, 3) for _ in range(n))
            if any(extra) and extra not in A:
                A.append(extra)
        b = [rng.randint(0, 3) for _ in A]
        if not any(b):
            continue
        ctx = PointedContext(tuple(A), tuple(b), n1, tuple(rays), orientation)
        Q = ctx.polyhedron
        C = from_generators([(0,) * n], [tuple(1 if j == i else 0 for j in range(n)) for i in range(n1)] + rays, [], n)
        verts = [v for v in Q._vrep.vertices if C.contains(v)]
        if not verts:
            continue
        const = constants(ctx)
        patterns = []
        for x in verts:
            I = [i for i in range(ctx.m) if dot(A[i], x) == b[i]]
            sup = {i: ray_support(A[i], ctx) for i in I}
            for i1 in I:
                for i2 in I:
                    if i1 == i2 or b[i1] == 0:
                        continue
                    miss = sup[i2] - sup[i1]
                    if miss:
                        patterns.append((x, 1, (i1, i2), min(miss)))
            if ctx.m >= 3:
                for i1 in I:
                    for i2 in I:
                        for i3 in I:
                            if len({i1, i2, i3}) < 3 or b[i1] + b[i2] == 0:
                                continue
                            miss = sup[i3] - sup[i1] - sup[i2]
                            if miss:
                                patterns.append((x, 2, (i1, i2, i3), min(miss)))
        if not patterns:
            continue
        x, ell, rows, k = rng.choice(patterns)
        u = max([1] + [ceil(v[i]) for v in Q._vrep.vertices if C.contains(v) for i in range(n1)])
        S = _normal_form_set(n1, rays, u)
        lam = _inflate(rng, ctx, const, ell, rows, k)
        if lam is None:
            continue
        return ctx, S, lam
    raise SCGError("could not draw a reduction instance")


def _normal_form_set(n1: int, rays, u: int) -> SSpec:
    n = len(rays[0])
    rhat = [r[n1:] for r in rays]
    rows = []
    for i in range(n1):
        e = tuple(1 if j == i else 0 for j in range(n))
        rows += [(e, ">=", 0), (e, "<=", u)]
    for h in _cone_facets(rhat, n - n1):
        rows.append(((0,) * n1 + tuple(h), ">=", 0))
    return SSpec.integer_hull(Polyhedron.from_rows(rows, n))


def _inflate(rng, ctx, const, ell, rows, k):
    Mstar = const.Mstar
    lam = [Fraction(0)] * ctx.m
    if ell == 1:
        i1, i2 = rows
        ark = dot(ctx.A[i2], ctx.rays[k])
        L = max(const.M + 1, (Mstar * ark - ctx.b[i2]) // ctx.b[i1] + 1)
        build = lambda L: {i1: L, i2: 1}  # noqa: E731
    else:
        i1, i2, i3 = rows
        M1, M2 = const.M_list[0], const.M_list[1]
        c = Fraction(rng.randint(1, 4 * M1), 4)
        c = max(c, Fraction(1))
        ark = dot(ctx.A[i3], ctx.rays[k])
        den = c * ctx.b[i1] + ctx.b[i2]
        L = max(M2 + 1, floor(const.M / c) + 1, floor(Mstar * ark / den) if den else 0)
        build = lambda L: {i1: floor(c * L), i2: L, i3: 1}  # noqa: E731
    for _ in range(64):
        lam = [Fraction(0)] * ctx.m
        for i, v in build(L).items():
            lam[i] = Fraction(v)
        top = max_intercept(lam, ctx)
        if top is not None and top > Mstar:
            return tuple(lam)
        L += 1
    return None


def _reduction_trial(rng: random.Random, orientation: str) -> str:
    ctx, S, lam = reduction_instance(rng, orientation)
    red = reduce_to_bounded(lam, ctx, S)
    Mstar = red.constants.Mstar
    assert len(red.steps) <= ceil(sum(lam)), "too many steps"
    assert red.steps, "instance needed no reduction"
    for st in red.steps:
        assert all(ok for _, ok in st.checks), st.line()
    top = max_intercept(red.mu_hat, ctx)
    assert top is None or top <= Mstar, f"final intercept {top} > M*"
    ells = "".join(str(s.ell) for s in red.steps)
    return f"m={ctx.m} n={ctx.n} steps={len(red.steps)} ell={ells}"


def suite_covering(trials: int = 100, seed: int = 0, threads: int = 1) -> SuiteReport:
    return _run("covering", trials, seed, lambda rng: _reduction_trial(rng, COVERING))


def suite_packing(trials: int = 100, seed: int = 0, threads: int = 1) -> SuiteReport:
    return _run("packing", trials, seed, lambda rng: _reduction_trial(rng, PACKING))


# ---------------------------------------------------------------------------
# sign partition


def _partition_trial(rng: random.Random, threads: int = 1) -> str:
    n = rng.randint(2, 3)
    K = rng.randint(1, 3 if n == 2 else 2)
    S = rand_set(rng, n, "pointed")
    P = rand_inner(rng, S)
    S0 = build_s0(S)
    rays = S.hull.rays
    F = alpha_family(n, K)
    plus, minus, neither = partition_pi(F, rays)
    full = bounded_closure(P, S, K, alphas=F, threads=threads).polyhedron
    part0 = bounded_closure(P, S0, K, alphas=F, threads=threads).polyhedron
    part1 = bounded_closure(P, S, K, alphas=plus + minus, threads=threads).polyhedron
    split = part0.intersect(part1.rows()).canonical()
    assert same_set(full, split), "closure differs from the S0 / sign-split form"
    soundness_checks(P, S, full)
    # per direction: mixed signs give the S0 value
    for a in neither:
        status, beta, _ = support(P, a)
        if status == "optimal":
            assert floor_s(S, a, beta) == floor_s(S0, a, beta), f"alpha {a} in 'neither' beats S0"
    return f"n={n} K={K} plus={len(plus)} minus={len(minus)} neither={len(neither)}"


def suite_partition(trials: int = 50, seed: int = 0, threads: int = 1) -> SuiteReport:
    return _run("partition", trials, seed, lambda rng: _partition_trial(rng, threads))


# ---------------------------------------------------------------------------
# mixed-integer projection identity


def mixed_instance(rng: random.Random):
    k = rng.randint(1, 2)
    l = rng.randint(0, 2)
    n = k + l
    rows = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        lo = rng.randint(-2, 0)
        rows += [(e, ">=", lo), (e, "<=", lo + rng.randint(1, 3))]
    for _ in range(rng.randint(0, 2)):
        a = rand_int_vec(rng, n, 3)
        rows.append((a, "<=", rng.randint(0, 4)))
    R = Polyhedron.from_rows(rows, n)
    if R.is_empty or not mixed_set_ok(R, k):
        return None
    S = mixed_set(R, k)
    T = S.projection()
    pool = list(T.desc.base)
    pts = []
    for _ in range(rng.randint(1, 4)):
        chosen = rng.sample(pool, rng.randint(1, min(3, len(pool))))
        w = [Fraction(rng.randint(1, 4)) for _ in chosen]
        p = [Fraction(0)] * n
        for wi, x in zip(w, chosen):
            z = lift_witness(S, x)
            if l:
                fix = Polyhedron.from_rows([(a[k:], rel, b - dot(a[:k], x)) for a, rel, b in R.rows()], l)
                obj = rand_int_vec(rng, l, 2)
                res = lp_optimize(fix, obj, "max")
                z = tuple(x) + tuple(res.witness)
            p = [pi + wi * zi for pi, zi in zip(p, z)]
        pts.append(tuple(pi / sum(w) for pi in p))
    P = from_generators(pts, [], [], n)
    return k, l, S, P


def mixed_set_ok(R: Polyhedron, k: int) -> bool:
    Rx = fm_project(R, range(k)) if k < R.n else R
    return bool(SSpec.integer_hull(Rx, check=False).desc.base)


def _projection_trial(rng: random.Random, threads: int = 1) -> str:
    inst = None
    while inst is None:
        inst = mixed_instance(rng)
    k, l, S, P = inst
    K = rng.randint(1, 3)
    projected = mixed_closure_round(P, S, K, check=False, threads=threads)
    direct = direct_mixed_closure(P, S, K).polyhedron
    assert same_set(projected, direct), "P ∩ (Q_T x R^l) differs from the direct closure"
    assert includes(P, projected), "closure is not inside P"
    # points of P ∩ S with integral x: scan x and test the fiber
    v = P._vrep
    if not v.is_empty:
        lo, hi = vertex_box(v.vertices)
        T = S.projection()
        for x in product(*[range(lo[i], hi[i] + 1) for i in range(k)]):
            if not T.contains(x):
                continue
            fib = Polyhedron.from_rows(
                [(a[k:], rel, b - dot(a[:k], x)) for a, rel, b in P.rows()], l) if l else None
            if l == 0:
                if P.contains(x):
                    assert projected.contains(x), f"closure cuts off {x}"
                continue
            if fib.is_empty:
                continue
            for y in fib._vrep.vertices:
                assert projected.contains(tuple(x) + tuple(y)), f"closure cuts off {(x, y)}"
    return f"k={k} l={l} K={K} rows={projected.m}"


def suite_projection(trials: int = 50, seed: int = 0, threads: int = 1) -> SuiteReport:
    return _run("projection", trials, seed, lambda rng: _projection_trial(rng, threads))


# ---------------------------------------------------------------------------
# antitone in K


def _monotone_trial(rng: random.Random, threads: int = 1) -> str:
    n = rng.randint(1, 2)
    S = rand_set(rng, n)
    P = rand_inner(rng, S)
    prev = P
    for K in (1, 2, 3):
        cur = bounded_closure(P, S, K, threads=threads).polyhedron
        assert includes(prev, cur), f"closure at K={K} is not inside K={K - 1}"
        soundness_checks(P, S, cur)
        prev = cur
    return f"n={n}"


def suite_monotone(trials: int = 50, seed: int = 0, threads: int = 1) -> SuiteReport:
    return _run("monotone", trials, seed, lambda rng: _monotone_trial(rng, threads))


SUITES = {
    "classical": suite_classical,
    "dirichlet": suite_dirichlet,
    "commutation": suite_commutation,
    "covering": suite_covering,
    "packing": suite_packing,
    "partition": suite_partition,
    "projection": suite_projection,
    "monotone": suite_monotone,
}

# older numbered names still accepted by ``verify``
ALIASES = {
    "lemma2.2": "commutation",
    "lemma3.5": "covering",
    "lemma3.8": "packing",
    "lemma3.11": "partition",
    "thm5.1": "projection",
}


def run_suite(name: str, trials: int | None = None, seed: int = 0, threads: int = 1) -> SuiteReport:
    fn = SUITES[ALIASES.get(name, name)]
    if trials is None:
        return fn(seed=seed, threads=threads)
    return fn(trials=trials, seed=seed, threads=threads)

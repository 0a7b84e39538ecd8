"""Bounding intercepts of nondominated cuts for covering/packing forms.

Context: ``Q = {A x >= b}`` (covering) or ``{A x <= b}`` (packing) with
integral A, b >= 0 and A y >= 0 for every unit vector e^1..e^{n1} and every
ray r^j of conv(S), where the rays live in the trailing n2 coordinates.

Row and ray indices are 0-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Sequence

from .errors import BoxTooLarge, PreconditionRatio, VerificationFailed
from .ratpoly import GE, LE, Polyhedron, as_fraction, dot, fmt, fmt_vec, lp_optimize, vec
from .scg import EMPTY_SIDE, Cut, ceil_witness, floor_witness
from .sets import SSpec

COVERING, PACKING = "covering", "packing"


@dataclass(frozen=True)
class PointedContext:
    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    n1: int
    rays: tuple[tuple[int, ...], ...]
    orientation: str = COVERING

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in r) for r in self.A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        if self.orientation not in (COVERING, PACKING):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if len(A) != len(self.b):
            raise ValueError("A and b disagree on the number of rows")
        n = self.n
        for r in self.rays:
            if len(r) != n or any(r[: self.n1]):
                raise ValueError(f"ray {r} must vanish on the first {self.n1} coordinates")
        for i, a in enumerate(A):
            if len(a) != n:
                raise ValueError("ragged A")
            if any(a[j] < 0 for j in range(self.n1)) or any(dot(a, r) < 0 for r in self.rays):
                raise ValueError(f"row {i} has a negative product with a generator of C")
        if any(x < 0 for x in self.b):
            raise ValueError("b must be nonnegative")

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0]) if self.A else (len(self.rays[0]) if self.rays else self.n1)

    @property
    def rel(self) -> str:
        return GE if self.orientation == COVERING else LE

    @property
    def polyhedron(self) -> Polyhedron:
        return Polyhedron.from_rows([(a, self.rel, bi) for a, bi in zip(self.A, self.b)], self.n)

    def combine(self, lam: Sequence) -> tuple[tuple[Fraction, ...], Fraction]:
        lam = vec(lam)
        alpha = tuple(sum((l * a[j] for l, a in zip(lam, self.A)), Fraction(0)) for j in range(self.n))
        return alpha, sum((l * bi for l, bi in zip(lam, self.b)), Fraction(0))


@dataclass(frozen=True)
class Constants:
    B: int
    D: int
    M_list: tuple[int, ...]
    M: int
    Mstar: int


def ray_support(alpha: Sequence, ctx: PointedContext) -> frozenset[int]:
    return frozenset(j for j, r in enumerate(ctx.rays) if dot(alpha, r) > 0)


def intercepts(alpha: Sequence, beta, ctx: PointedContext) -> dict[int, Fraction]:
    beta = as_fraction(beta)
    return {j: beta / dot(alpha, ctx.rays[j]) for j in sorted(ray_support(alpha, ctx))}


def sorted_order(lam: Sequence) -> list[int]:
    """Row indices by decreasing multiplier, ties by index."""
    return sorted(range(len(lam)), key=lambda i: (-Fraction(lam[i]), i))


def tilting(lam: Sequence, ctx: PointedContext) -> tuple[int, Fraction]:
    """(t, ratio): 1-based prefix length in the sorted order and lam_(1)/lam_(t).

    When the combined inequality meets no ray the convention is (1, 1).
    """
    lam = vec(lam)
    if not any(lam):
        raise ValueError("multiplier must be nonzero")
    alpha, _ = ctx.combine(lam)
    target = ray_support(alpha, ctx)
    order = sorted_order(lam)
    if not target:
        return 1, Fraction(1)
    cover: set[int] = set()
    for pos, i in enumerate(order, start=1):
        cover |= ray_support(ctx.A[i], ctx)
        if cover >= target:
            return pos, lam[order[0]] / lam[i]
    raise VerificationFailed("row supports do not cover the combined ray support")


def constants(ctx: PointedContext) -> Constants:
    m = ctx.m
    B = max(ctx.b) if ctx.b else 0
    g = [1 if j < ctx.n1 else 0 for j in range(ctx.n)]
    for r in ctx.rays:
        g = [x + y for x, y in zip(g, r)]
    D = sum(int(dot(a, g)) for a in ctx.A)
    Ms: list[int] = []
    if m >= 2:
        M1 = 2 * (m * B + 2 * D)
        Ms.append(M1)
        for i in range(2, m):
            prod = 2 * m * B
            for x in Ms:
                prod *= x
            Ms.append(prod ** (i - 1) * M1)
    M = 1
    for x in Ms:
        M *= x
    return Constants(B, D, tuple(Ms), M, m * B * M)


def intercept_bound(lam: Sequence, ctx: PointedContext) -> Fraction:
    """r(lam, A) * sum(b): an upper bound on every intercept of (lam A, lam b)."""
    return tilting(lam, ctx)[1] * sum(ctx.b)


# ---------------------------------------------------------------------------
# simultaneous Diophantine approximation


def _nearest(x: Fraction) -> int:
    return floor(x + Fraction(1, 2))


def convergent_denominators(x: Fraction):
    """Denominators of the continued-fraction convergents of x (increasing)."""
    x = Fraction(x)
    q_prev, q = 0, 1
    yield 1
    a = floor(x)
    frac = x - a
    while frac:
        x = 1 / frac
        a = floor(x)
        frac = x - a
        q_prev, q = q, a * q + q_prev
        yield q


def _smallest_q(r: Sequence[Fraction], ok, qmax: int, scan_cap: int = 10**6) -> int:
    if len(r) == 1:
        for q in convergent_denominators(r[0]):
            if q > qmax:
                break
            if ok(abs(q * r[0] - _nearest(q * r[0]))):
                return q
        raise VerificationFailed("no convergent satisfies the approximation bound")
    limit = min(qmax, scan_cap)
    for q in range(1, limit + 1):
        if all(ok(abs(q * x - _nearest(q * x))) for x in r):
            return q
    if qmax > scan_cap:
        raise BoxTooLarge(f"approximation scan exceeded {scan_cap} denominators")
    raise VerificationFailed("no denominator satisfies the approximation bound")


def _monotone(r: Sequence[Fraction], p: list[int]) -> list[int]:
    for i in range(len(p) - 2, -1, -1):
        if r[i] >= r[i + 1] and p[i] < p[i + 1]:
            p[i] = p[i + 1]
    return p


def dirichlet(r: Sequence, eps) -> tuple[tuple[int, ...], int]:
    """(p, q) with |r_i - p_i/q| < eps/q and 1 <= q <= (1/eps)^k.

    q is the smallest feasible denominator; p_i is the nearest integer to
    q r_i (ties upward), then raised where needed so p is monotone along
    runs of non-increasing r.
    """
    r = vec(r)
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    k = len(r)
    if k == 0:
        return (), 1
    qmax = ceil((1 / eps) ** k)
    q = _smallest_q(r, lambda e: e < eps, qmax)
    p = _monotone(r, [_nearest(q * x) for x in r])
    if not all(abs(x - Fraction(pi, q)) < eps / q for x, pi in zip(r, p)) or Fraction(q) > (1 / eps) ** k:
        raise VerificationFailed("approximation failed to verify")
    return tuple(p), q


def dirichlet_root(r: Sequence, ratio: Fraction) -> tuple[tuple[int, ...], int]:
    """Approximation with eps = ratio^(1/k), k = len(r), kept exact.

    Tests |q r_i - p_i|^k < ratio and q <= 1/ratio without forming the root.
    """
    r = vec(r)
    k = len(r)
    ratio = Fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie in (0, 1)")
    qmax = floor(1 / ratio)
    q = _smallest_q(r, lambda e: e ** k < ratio, qmax)
    p = _monotone(r, [_nearest(q * x) for x in r])
    if not all(abs(q * x - pi) ** k < ratio for x, pi in zip(r, p)) or q > qmax:
        raise VerificationFailed("approximation failed to verify")
    return tuple(p), q


# ---------------------------------------------------------------------------
# cuts from multipliers


def strengthened_cut(lam: Sequence, ctx: PointedContext, S: SSpec) -> Cut:
    alpha, beta = ctx.combine(lam)
    if any(x.denominator != 1 for x in alpha):
        raise ValueError("lam A must be integral")
    alpha = tuple(int(x) for x in alpha)
    if ctx.orientation == COVERING:
        v, z = ceil_witness(S, alpha, beta)
        return Cut(alpha, beta, v, z, GE)
    v, z = floor_witness(S, alpha, beta)
    return Cut(alpha, beta, v, z, LE)


def dominates(cut_new: Cut, cut_old: Cut, Q: Polyhedron, orientation: str = PACKING) -> bool:
    """Q ∩ {cut_new} ⊆ {cut_old}, by one LP."""
    a_new, rel_new, b_new = cut_new.inequality()
    a_old, rel_old, b_old = cut_old.inequality()
    R = Q.intersect([(a_new, rel_new, b_new)])
    if rel_old == LE:
        res = lp_optimize(R, a_old, "max")
        if res.status == "infeasible":
            return True
        return res.status == "optimal" and res.value <= b_old
    res = lp_optimize(R, a_old, "min")
    if res.status == "infeasible":
        return True
    return res.status == "optimal" and res.value >= b_old


def in_pi(lam: Sequence, ctx: PointedContext) -> bool:
    """(lam A, lam b) is supporting for Q in the oriented sense."""
    alpha, beta = ctx.combine(lam)
    res = lp_optimize(ctx.polyhedron, alpha, "min" if ctx.orientation == COVERING else "max")
    return res.status == "optimal" and res.value == beta


@dataclass(frozen=True)
class Step:
    lam: tuple[Fraction, ...]
    mu: tuple[Fraction, ...]
    t: int
    ratio: Fraction
    ell: int
    delta: Fraction
    k: int
    p: tuple[int, ...]
    cut_old: Cut
    cut_new: Cut
    checks: tuple[tuple[str, bool], ...] = field(default=())

    def line(self) -> str:
        verdicts = " ".join(f"{name}={'ok' if v else 'FAIL'}" for name, v in self.checks)
        return (f"norm1={fmt(sum(self.mu))} t={self.t} ratio={fmt(self.ratio)} ell={self.ell} "
                f"Delta={fmt(self.delta)} p={fmt_vec(self.p)} {verdicts}")


def reduce_multiplier(lam: Sequence, ctx: PointedContext, S: SSpec, const: Constants | None = None) -> Step:
    """One multiplier-reduction step; every conclusion is checked before returning."""
    lam = vec(lam)
    if any(x < 0 for x in lam) or not any(lam):
        raise ValueError("multiplier must be nonnegative and nonzero")
    const = const or constants(ctx)
    t, ratio = tilting(lam, ctx)
    if ratio <= const.M:
        raise PreconditionRatio(f"tilting ratio {fmt(ratio)} <= M = {const.M}")
    order = sorted_order(lam)
    slam = [lam[i] for i in order]
    alpha, beta = ctx.combine(lam)
    rsupp = ray_support(alpha, ctx)
    delta = min(dot(alpha, ctx.rays[j]) for j in rsupp)
    early: set[int] = set()
    for i in order[: t - 1]:
        early |= ray_support(ctx.A[i], ctx)
    k = min(sorted(rsupp - early), key=lambda j: dot(alpha, ctx.rays[j]))
    ell = next(i for i in range(1, t) if slam[i - 1] / slam[i] > const.M_list[i - 1])
    if ell == 1:
        p = (1,)
    else:
        r = [slam[i] / slam[ell - 1] for i in range(ell - 1)]
        Ml = const.M_list[ell - 1]
        pp, q = dirichlet_root(r, Fraction(const.M_list[0], Ml))
        p = tuple(pp) + (q,)
    mu = list(lam)
    for pos in range(ell):
        mu[order[pos]] = lam[order[pos]] - p[pos] * delta
    mu = tuple(mu)

    cut_old = strengthened_cut(lam, ctx, S)
    cut_new = strengthened_cut(mu, ctx, S)
    mu_alpha, mu_beta = ctx.combine(mu)
    nonneg = all(x >= 0 for x in mu)
    supp = nonneg and all((x > 0) == (y > 0) for x, y in zip(mu, lam))
    rsupp_ok = ray_support(mu_alpha, ctx) == rsupp
    norm = sum(mu) <= sum(lam) - 1
    pi_ok = nonneg and in_pi(mu, ctx)
    dom = dominates(cut_new, cut_old, ctx.polyhedron, ctx.orientation)
    v = cut_new.beta_strengthened
    if v is EMPTY_SIDE:
        band = False
    elif ctx.orientation == COVERING:
        band = mu_beta <= v <= mu_beta + delta
    else:
        band = mu_beta - delta <= v <= mu_beta
    checks = (("norm", norm), ("pi", pi_ok), ("dom", dom), ("supp", supp and rsupp_ok), ("band", band))
    step = Step(lam, mu, t, ratio, ell, Fraction(delta), k, p, cut_old, cut_new, checks)
    if not all(ok for _, ok in checks):
        raise VerificationFailed("reduction step failed: " + step.line())
    return step


@dataclass(frozen=True)
class Reduction:
    lam: tuple[Fraction, ...]
    mu_hat: tuple[Fraction, ...]
    steps: tuple[Step, ...]
    constants: Constants
    final_dominates: bool

    def trace(self) -> list[str]:
        return [f"step {i + 1}: {s.line()}" for i, s in enumerate(self.steps)]


def max_intercept(lam: Sequence, ctx: PointedContext) -> Fraction | None:
    alpha, beta = ctx.combine(lam)
    ic = intercepts(alpha, beta, ctx)
    return max(ic.values()) if ic else None


def reduce_to_bounded(lam: Sequence, ctx: PointedContext, S: SSpec, max_steps: int | None = None) -> Reduction:
    """Apply reduction steps until every intercept is at most M*."""
    lam0 = vec(lam)
    const = constants(ctx)
    bound = ceil(sum(lam0))
    if max_steps is None:
        max_steps = bound
    cur = lam0
    steps: list[Step] = []
    while True:
        top = max_intercept(cur, ctx)
        if top is None or top <= const.Mstar:
            break
        if len(steps) >= max_steps:
            raise VerificationFailed(f"chain exceeded {max_steps} steps")
        try:
            st = reduce_multiplier(cur, ctx, S, const)
        except PreconditionRatio as exc:
            raise VerificationFailed(f"intercept {fmt(top)} > M* but {exc}") from exc
        steps.append(st)
        cur = st.mu
    final_dom = True
    if steps:
        final_dom = dominates(steps[-1].cut_new, steps[0].cut_old, ctx.polyhedron, ctx.orientation)
        if not final_dom:
            raise VerificationFailed("final cut does not dominate the initial cut")
    return Reduction(lam0, cur, tuple(steps), const, final_dom)

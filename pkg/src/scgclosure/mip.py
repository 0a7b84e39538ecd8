"""Projected S-CG cuts for mixed-integer sets S = {(x, y) in Z^n x R^l : Ax + Cy <= b}."""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Sequence

from .errors import BoxTooLarge, EmptySet, NotIntegral, NotValid, VerificationFailed
from .ratpoly import (
    Polyhedron,
    as_fraction,
    dot,
    fm_project,
    includes,
    is_integral,
    lp_optimize,
    same_set,
    support,
    to_int,
)
from .scg import EMPTY_SIDE, ClosureResult, Cut, bounded_closure, floor_witness
from .sets import DEFAULT_MAX_ENUM, SSpec, box_count


def mixed_set(R: Polyhedron, n_int: int, max_enum: int = DEFAULT_MAX_ENUM) -> SSpec:
    """S = R ∩ (Z^n_int x R^l); R must have integral data."""
    for a, _, b in R.rows():
        if not is_integral(a) or not is_integral([b]):
            raise NotIntegral("mixed sets need integral A, C, b")
    return SSpec.mixed(R, n_int, max_enum)


def proj_x_s(S: SSpec) -> SSpec:
    """proj_x(S) as a pure-integer spec (identity on pure-integer kinds)."""
    return S.projection()


def _fix_x(R: Polyhedron, x: Sequence, n_int: int) -> Polyhedron:
    """{y : (x, y) in R}."""
    rows = [(a[n_int:], rel, b - dot(a[:n_int], x)) for a, rel, b in R.rows()]
    return Polyhedron.from_rows(rows, R.n - n_int)


def lift_witness(S: SSpec, x: Sequence) -> tuple:
    """A point (x, y) of S over the integral x, or raise EmptySet."""
    if S.n == S.n_int:
        return tuple(x)
    res = lp_optimize(_fix_x(S.R, x, S.n_int), [0] * (S.n - S.n_int))
    if res.status == "infeasible":
        raise EmptySet(f"no continuous completion of {x}")
    return tuple(x) + tuple(res.witness)


def floor_mixed_witness(S: SSpec, alpha: Sequence, beta):
    """Floor over a mixed set through proj_x(S); alpha may be given on x or on (x, y)."""
    alpha = to_int(alpha)
    if len(alpha) == S.n:
        if any(alpha[S.n_int:]):
            raise NotValid("projected cuts must not involve continuous coordinates")
        alpha = alpha[: S.n_int]
    v, z = floor_witness(proj_x_s(S), alpha, beta)
    if v is EMPTY_SIDE:
        return EMPTY_SIDE, None
    return v, lift_witness(S, z)


def x_bounds(S: SSpec) -> tuple[list[int], list[int]]:
    """Integer box around the x-coordinates of R, from coordinate LPs."""
    lo, hi = [], []
    for i in range(S.n_int):
        e = [0] * S.n
        e[i] = 1
        up = lp_optimize(S.R, e, "max")
        dn = lp_optimize(S.R, e, "min")
        if up.status == "infeasible":
            raise EmptySet("R is empty")
        if up.status != "optimal" or dn.status != "optimal":
            raise BoxTooLarge(f"x{i + 1} is unbounded on R")
        lo.append(ceil(dn.value))
        hi.append(floor(up.value))
    return lo, hi


def _direct_floor(S: SSpec, alpha, beta):
    """max alpha x over (x, y) in S with alpha x <= beta, by scanning x and testing y."""
    lo, hi = x_bounds(S)
    if any(l > h for l, h in zip(lo, hi)):
        return EMPTY_SIDE, None
    if box_count(lo, hi) > S.max_enum:
        raise BoxTooLarge("x-box exceeds the enumeration cap")
    best = None
    for x in product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
        val = dot(alpha, x)
        if val > beta or (best is not None and val <= best[0]):
            continue
        if S.n == S.n_int or not _fix_x(S.R, x, S.n_int).is_empty:
            best = (Fraction(val), x)
    if best is None:
        return EMPTY_SIDE, None
    return best[0], lift_witness(S, best[1])


def floor_mixed(S: SSpec, alpha: Sequence, beta, method: str = "project"):
    """max{alpha x : (x, y) in S, alpha x <= beta} or EMPTY_SIDE.

    ``project`` goes through proj_x(S); ``direct`` scans integer x in a box and
    checks the continuous completion by LP.
    """
    if not is_integral(alpha):
        raise NotIntegral(f"alpha {alpha} is not integral")
    alpha = to_int(alpha)[: S.n_int]
    beta = as_fraction(beta)
    if method == "project":
        return floor_mixed_witness(S, alpha, beta)[0]
    if method == "direct":
        return _direct_floor(S, alpha, beta)[0]
    raise ValueError(f"unknown method {method!r}")


def _direct_alphas(n: int, n_int: int, K: int):
    out = []
    for vals in product(range(-K, K + 1), repeat=n_int):
        if any(vals):
            out.append(tuple(vals) + (0,) * (n - n_int))
    out.sort(key=lambda a: (sum(abs(x) for x in a), a))
    return out


def direct_mixed_closure(P: Polyhedron, S: SSpec, K: int) -> ClosureResult:
    """Intersection over alpha on x with ||alpha||_inf <= K of the cuts, beta from P itself."""
    cuts = []
    for a in _direct_alphas(P.n, S.n_int, K):
        status, beta, _ = support(P, a)
        if status == "infeasible":
            return ClosureResult(Polyhedron.empty(P.n), ())
        if status != "optimal":
            continue
        v, z = _direct_floor(S, a[: S.n_int], beta)
        cuts.append(Cut(a, beta, v, z))
    if any(c.is_empty_side for c in cuts):
        return ClosureResult(Polyhedron.empty(P.n), tuple(cuts))
    return ClosureResult(P.intersect([c.inequality() for c in cuts]).canonical(), tuple(cuts))


def mixed_closure_round(P: Polyhedron, S: SSpec, K: int, check: bool = True,
                        check_hull: bool = False, threads: int = 1) -> Polyhedron:
    """P ∩ (Q_T x R^l) with Q = proj_x(P), T = proj_x(S), checked against the direct form."""
    if S.kind != "mixed":
        return bounded_closure(P, S, K, threads=threads).polyhedron
    n, k = P.n, S.n_int
    l = n - k
    if P.is_empty:
        return Polyhedron.empty(n)
    Q = fm_project(P, range(k)) if l else P
    T = proj_x_s(S)
    if check_hull and not includes(T.hull_polyhedron, Q):
        raise NotValid("proj_x(P) is not contained in conv(proj_x(S))")
    QT = bounded_closure(Q, T, K, threads=threads).polyhedron
    if QT.is_empty:
        result = Polyhedron.empty(n)
    else:
        result = P.intersect(QT.lift(l).rows()).canonical()
    if check:
        direct = direct_mixed_closure(P, S, K).polyhedron
        if not same_set(direct, result):
            raise VerificationFailed("projected and direct mixed closures differ")
    return result

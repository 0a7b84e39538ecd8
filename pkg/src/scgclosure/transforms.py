"""Unimodular normalizations and structural reductions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, lcm
from typing import Sequence

from .errors import SCGError
from .ratpoly import (
    Polyhedron,
    UnimodularMap,
    annihilator_map,
    dot,
    fm_project,
    from_generators,
    is_integral,
    to_int,
    vecmat,
)
from .scg import EMPTY_SIDE, Cut
from .sets import SSpec, build_s0, conv_generators


def map_lineality(L: Sequence[Sequence[int]], n: int) -> UnimodularMap:
    """Unimodular map sending span(L) onto the trailing coordinates."""
    return annihilator_map(L, n)[0]


# ---------------------------------------------------------------------------
# action of tau


def tau_pair(tau: UnimodularMap, alpha: Sequence, beta):
    """Image of the inequality alpha x <= beta: (alpha U^-1, beta + alpha U^-1 v)."""
    a = tuple(vecmat(alpha, tau.U_inv))
    a = to_int(a) if is_integral(a) else a
    if beta is EMPTY_SIDE or beta is None:
        return a, beta
    return a, Fraction(beta) + dot(a, tau.v)


def _map_polyhedron(tau: UnimodularMap, P: Polyhedron) -> Polyhedron:
    rows = []
    for a, rel, b in P.rows():
        a2, b2 = tau_pair(tau, a, b)
        rows.append((a2, rel, b2))
    return Polyhedron.from_rows(rows, P.n)


def _map_sspec(tau: UnimodularMap, S: SSpec) -> SSpec:
    if S.kind == "explicit":
        return SSpec.explicit([tau(p) for p in S.points], S.n)
    if S.kind == "integer_hull":
        return SSpec.integer_hull(_map_polyhedron(tau, S.R), S.max_enum, check=False)
    raise ValueError("a unimodular map of R^n does not preserve a mixed-integer structure")


def _map_cut(tau: UnimodularMap, c: Cut) -> Cut:
    if c.is_empty_side and not any(c.alpha):
        return c
    a, b = tau_pair(tau, c.alpha, c.beta)
    _, bs = tau_pair(tau, c.alpha, c.beta_strengthened)
    w = tau(c.witness) if c.witness is not None else None
    return Cut(a, b, bs, to_int(w) if w is not None else None, c.sense)


def apply_tau(tau: UnimodularMap, target):
    """Image of a point, Polyhedron, SSpec, Cut, or family of (alpha, beta) pairs."""
    if isinstance(target, Polyhedron):
        return _map_polyhedron(tau, target)
    if isinstance(target, SSpec):
        return _map_sspec(tau, target)
    if isinstance(target, Cut):
        return _map_cut(tau, target)
    if isinstance(target, UnimodularMap):
        return tau.compose(target)
    items = list(target)
    if items and isinstance(items[0], Cut):
        return [_map_cut(tau, c) for c in items]
    if items and isinstance(items[0], (tuple, list)) and len(items[0]) == 2 \
            and isinstance(items[0][0], (tuple, list)):
        return [tau_pair(tau, a, b) for a, b in items]
    y = tau(items)
    return to_int(y) if is_integral(y) else y


# ---------------------------------------------------------------------------
# pointed normal form


def _translation_block(values: Sequence, direction: Sequence, facets) -> int:
    """Smallest M >= 0 such that every facet h has h.(x + M d) >= 0 for all x."""
    M = 0
    for h in facets:
        hd = dot(h, direction)
        for x in values:
            hx = dot(h, x)
            if hx < 0:
                M = max(M, ceil(-hx / hd))
    return M


def _cone_facets(rays: Sequence[Sequence], dim: int):
    """Inner normals h (h.y >= 0) of cone(rays), assumed full-dimensional."""
    C = from_generators([(0,) * dim], rays, [], dim)
    out = []
    for a, rel, b in C.rows():
        # rows are normalized as a x <= b with b = 0, or equalities (none here)
        if rel == "<=":
            out.append(tuple(-x for x in a))
        elif rel == ">=":
            out.append(tuple(a))
        else:
            raise SCGError("cone of rays is not full-dimensional in its block")
    return out


@dataclass(frozen=True)
class NormalForm:
    tau: UnimodularMap
    S: SSpec
    n1: int
    n2: int
    rays: tuple[tuple[int, ...], ...]


def normalize_pointed_form(S: SSpec) -> NormalForm:
    V, rays, L = conv_generators(S)
    if L:
        raise ValueError("conv(S) is not pointed")
    n = S.n
    u, n2 = annihilator_map([to_int(r) for r in rays], n)
    n1 = n - n2
    Vu = [u(v) for v in V]
    Ru = [to_int(u.linear(r)) for r in rays]
    shift = [0] * n
    # first block: vertices into the nonnegative orthant
    if n1:
        M = max([0] + [-x[i] for x in Vu for i in range(n1)])
        M = int(ceil(M))
        for i in range(n1):
            shift[i] = M
    # ray block: vertices into cone(r-hat) along the interior direction sum(r-hat)
    if n2:
        rhat = [r[n1:] for r in Ru]
        d = [sum(r[i] for r in rhat) for i in range(n2)]
        M2 = _translation_block([x[n1:] for x in Vu], d, _cone_facets(rhat, n2))
        for i in range(n2):
            shift[n1 + i] = M2 * d[i]
    nu = UnimodularMap.identity(n)
    nu = UnimodularMap(nu.U, tuple(shift), nu.U_inv)
    tau = nu.compose(u)
    new_rays = tuple(sorted(to_int(tau.linear(r)) for r in rays))
    return NormalForm(tau, apply_tau(tau, S), n1, n2, new_rays)


def normalize_pointed(S: SSpec) -> tuple[UnimodularMap, SSpec]:
    """tau = nu o u placing conv(S) in normal form; returns (tau, tau(S))."""
    nf = normalize_pointed_form(S)
    return nf.tau, nf.S


def check_normal_form(S: SSpec, n1: int) -> bool:
    """Both conditions: rays inside {0} x R^n2, and conv(S) inside cone{e_1..e_n1, rays}."""
    V, rays, L = conv_generators(S)
    if L:
        return False
    if any(r[i] != 0 for r in rays for i in range(n1)):
        return False
    if any(v[i] < 0 for v in V for i in range(n1)):
        return False
    n2 = S.n - n1
    if n2 == 0:
        return True
    rhat = [r[n1:] for r in rays]
    if not rhat:
        return all(all(x == 0 for x in v[n1:]) for v in V)
    facets = _cone_facets(rhat, n2)
    return all(dot(h, v[n1:]) >= 0 for h in facets for v in V)


# ---------------------------------------------------------------------------
# sign partitions

PLUS, MINUS, NEITHER = "plus", "minus", "neither"


def sign_class(alpha: Sequence, rays: Sequence[Sequence]) -> str:
    prods = [dot(alpha, r) for r in rays]
    if all(p >= 0 for p in prods):
        return PLUS
    if all(p <= 0 for p in prods):
        return MINUS
    return NEITHER


def partition_pi(alphas, rays: Sequence[Sequence]):
    """Split a family of alpha (or (alpha, beta) pairs) by the sign of alpha r^j."""
    plus, minus, neither = [], [], []
    bucket = {PLUS: plus, MINUS: minus, NEITHER: neither}
    for item in alphas:
        a = item[0] if len(item) == 2 and isinstance(item[0], (tuple, list)) else item
        bucket[sign_class(a, rays)].append(item)
    return plus, minus, neither


def sign_flip(J, n1: int, n: int) -> UnimodularMap:
    """Diagonal map negating coordinates i (1-based) with i <= n1 and i not in J."""
    J = set(J)
    if not J <= set(range(1, n1 + 1)):
        raise ValueError("J must lie in the first n1 coordinates")
    diag = [(-1 if (i + 1) <= n1 and (i + 1) not in J else 1) for i in range(n)]
    U = tuple(tuple(diag[i] if i == j else 0 for j in range(n)) for i in range(n))
    return UnimodularMap(U, (0,) * n, U)


def sign_subset(alpha: Sequence, n1: int, plus: bool = True) -> frozenset:
    """A J (1-based) with alpha in the J-part: alpha e^j has the block's sign for j in J."""
    if plus:
        return frozenset(j + 1 for j in range(n1) if alpha[j] >= 0)
    return frozenset(j + 1 for j in range(n1) if alpha[j] <= 0)


# ---------------------------------------------------------------------------
# lineality split


@dataclass(frozen=True)
class LinealitySplit:
    """Pieces of the reduction P_S = P_{S0} ∩ P_{S,Pi} with Pi = {alpha : alpha l = 0}.

    ``tau`` sends the lineality space onto the last ``n2`` coordinates,
    ``Q = tau(P)``, ``T = tau(S) = T_C x Z^n2`` and ``Q_hat`` is the
    projection of Q onto the first ``n1`` coordinates.
    """

    s0: SSpec
    tau: UnimodularMap
    lineality: tuple[tuple, ...]
    Q: Polyhedron
    T: SSpec
    Q_hat: Polyhedron
    T_C: SSpec
    n1: int
    n2: int

    def phi(self, alpha: Sequence) -> tuple[int, ...] | None:
        """phi with (phi, 0) = alpha U^-1, or None when alpha l != 0."""
        a, _ = tau_pair(self.tau, alpha, 0)
        if any(a[self.n1:]):
            return None
        return to_int(a[: self.n1])


def lineality_split(P: Polyhedron, S: SSpec) -> LinealitySplit:
    if S.kind != "integer_hull":
        s0 = build_s0(S)
        I = UnimodularMap.identity(S.n)
        return LinealitySplit(s0, I, (), P, S, P, S, S.n, 0)
    _, _, L = conv_generators(S)
    n = S.n
    L = [to_int(l) if is_integral(l) else to_int([x * _denom(l) for x in l]) for l in L]
    tau, n2 = annihilator_map(L, n)
    n1 = n - n2
    Q = apply_tau(tau, P)
    T = apply_tau(tau, S)
    if n2 == 0:
        Q_hat, T_C = Q, T
    else:
        Q_hat = fm_project(Q, range(n1))
        # tau(R) is invariant along the last n2 coordinates: setting y = 0 projects it
        rows = [(a[:n1], rel, b) for a, rel, b in T.R.rows()]
        T_C = SSpec.integer_hull(Polyhedron.from_rows(rows, n1), S.max_enum, check=False)
    return LinealitySplit(build_s0(S), tau, tuple(L), Q, T, Q_hat, T_C, n1, n2)


def _denom(v) -> int:
    return lcm(*[Fraction(x).denominator for x in v])

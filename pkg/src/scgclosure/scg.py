"""Strengthened CG cuts: the floor/ceil oracle over S, Π_P certificates, closures.

The floor over an infinite S uses its exact description
``S = F + intcone(r) + lattice(l)``: the values ``α z`` over ``z ∈ S`` form a
finite union of translates ``α f + N`` where ``N`` is generated by the coins
``α r_j`` (nonnegative multiples) and ``α l_i`` (any sign).  The largest value
below ``β`` in such a translate is found with a residue-class shortest path
when all coins share a sign, and with a gcd otherwise.
"""
from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor, gcd
from typing import Iterable, Sequence

from .errors import BoxTooLarge, EmptySet, NotIntegral, NotSupporting, NotValid, Unbounded, VerificationFailed
from .ratpoly import (
    LE,
    Polyhedron,
    as_fraction,
    dot,
    ext_gcd_list,
    fmt,
    fmt_vec,
    includes,
    is_integral,
    lp_optimize,
    support,
    to_int,
)
from .sets import SSpec

MAX_RESIDUES = 10**6


class _EmptySide:
    """No point of S lies on the cut side of the hyperplane."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "empty_side"

    def __bool__(self):
        return False


EMPTY_SIDE = _EmptySide()


# ---------------------------------------------------------------------------
# one-dimensional semigroup helpers


def _residue_table(coins: Sequence[int]):
    """Smallest reachable sum in each residue class modulo min(coins).

    Returns (modulus, dist, parent) with parent[r] = (previous residue, coin index).
    """
    m = min(coins)
    if m > MAX_RESIDUES:
        raise BoxTooLarge(f"coin {m} exceeds residue cap {MAX_RESIDUES}")
    INF = None
    dist = [INF] * m
    parent = [None] * m
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d != dist[r]:
            continue
        for k, c in enumerate(coins):
            s = (r + c) % m
            nd = d + c
            if dist[s] is None or nd < dist[s]:
                dist[s] = nd
                parent[s] = (r, k)
                heapq.heappush(heap, (nd, s))
    return m, dist, parent


def _counts_for(residue: int, extra: int, coins, table) -> list[int]:
    """Coin multiplicities summing to dist[residue] + extra*m (extra >= 0)."""
    m, dist, parent = table
    counts = [0] * len(coins)
    r = residue
    while r != 0:
        pr, k = parent[r]
        counts[k] += 1
        r = pr
    kmin = coins.index(m)
    counts[kmin] += extra
    return counts


def _max_reach(coins: Sequence[int], T: int):
    """Largest sum of nonnegative multiples of the positive ``coins`` that is <= T."""
    if T < 0:
        return None
    table = _residue_table(coins)
    m, dist, _ = table
    best = None
    for r in range(m):
        d = dist[r]
        if d is None or d > T:
            continue
        extra = (T - d) // m
        v = d + extra * m
        if best is None or v > best[0]:
            best = (v, r, extra)
    v, r, extra = best
    return v, _counts_for(r, extra, coins, table)


def _min_reach_at_least(coins: Sequence[int], T: int):
    """Smallest sum of nonnegative multiples of the positive ``coins`` that is >= T."""
    if T <= 0:
        return 0, [0] * len(coins)
    table = _residue_table(coins)
    m, dist, _ = table
    best = None
    for r in range(m):
        d = dist[r]
        if d is None:
            continue
        extra = 0 if d >= T else -((d - T) // m)
        v = d + extra * m
        if best is None or v < best[0]:
            best = (v, r, extra)
    v, r, extra = best
    return v, _counts_for(r, extra, coins, table)


def _group_combo(ray_coins, lat_coins, target: int):
    """Integer combination with nonnegative ray multiplicities hitting ``target``.

    The coin set must generate a group (lattice coin present, or ray coins of
    both signs) and ``target`` must lie in it.
    """
    coins = list(ray_coins) + list(lat_coins)
    nz = [i for i, c in enumerate(coins) if c]
    g, w = ext_gcd_list([coins[i] for i in nz])
    k = target // g
    x = [0] * len(coins)
    for i, wi in zip(nz, w):
        x[i] = wi * k
    h = len(ray_coins)
    for j in range(h):
        if x[j] >= 0:
            continue
        cj = coins[j]
        if cj == 0:
            x[j] = 0
            continue
        lat = next((i for i in range(h, len(coins)) if coins[i]), None)
        if lat is not None:
            d = coins[lat]
            step = abs(d)
            t = -(x[j] // step)
            x[j] += t * step
            x[lat] -= t * (1 if d > 0 else -1) * cj
            continue
        q = next(i for i in range(h) if coins[i] * cj < 0)
        cq = coins[q]
        t = -(x[j] // abs(cq))
        x[j] += t * abs(cq)
        x[q] += t * abs(cj)
    return x


def _floor_desc(S: SSpec, alpha: Sequence[int], beta: Fraction):
    """Max of alpha.z over S with alpha.z <= beta; returns (value, z) or None."""
    d = S.desc
    if not d.base:
        raise EmptySet("S is empty")
    ray_c = [int(dot(alpha, r)) for r in d.rays]
    lat_c = [int(dot(alpha, l)) for l in d.lattice]
    pos = [c for c in ray_c if c > 0]
    neg = [c for c in ray_c if c < 0]
    group = any(lat_c) or (pos and neg)
    g = gcd(*(ray_c + lat_c)) if (ray_c or lat_c) else 0
    best = None  # (value, f index, multiplicities or None)
    for idx, f in enumerate(d.base):
        af = int(dot(alpha, f))
        T = beta - af
        if group:
            v = af + g * floor(T / g)
            cand = (v, idx, "group")
        elif pos:
            if T < 0:
                continue
            Ti = floor(T)
            r = _max_reach(pos, Ti)
            cand = (af + r[0], idx, ("pos", r[1]))
        elif neg:
            if af <= beta:
                cand = (af, idx, None)
            else:
                need = af - floor(beta)  # smallest s >= af - beta (integers)
                s, cnt = _min_reach_at_least([-c for c in neg], need)
                cand = (af - s, idx, ("neg", cnt))
        else:
            if af > beta:
                continue
            cand = (af, idx, None)
        if best is None or cand[0] > best[0]:
            best = cand
    if best is None:
        return None
    v, idx, how = best
    f = d.base[idx]
    z = list(f)
    h = len(d.rays)
    if how == "group":
        x = _group_combo(ray_c, lat_c, v - int(dot(alpha, f)))
        gens = list(d.rays) + list(d.lattice)
        for xi, gvec in zip(x, gens):
            if xi:
                z = [a + xi * b for a, b in zip(z, gvec)]
    elif how is not None:
        sign, cnt = how
        chosen = [j for j in range(h) if (ray_c[j] > 0 if sign == "pos" else ray_c[j] < 0)]
        for j, c in zip(chosen, cnt):
            if c:
                z = [a + c * b for a, b in zip(z, d.rays[j])]
    z = tuple(z)
    if int(dot(alpha, z)) != v or not S.contains(z) or v > beta:
        raise VerificationFailed(f"floor witness {z} failed to verify")
    return Fraction(v), z


def floor_witness(S: SSpec, alpha: Sequence, beta):
    """(floor value, witness) or (EMPTY_SIDE, None)."""
    if not is_integral(alpha):
        raise NotIntegral(f"alpha {alpha} is not integral")
    alpha = to_int(alpha)
    beta = as_fraction(beta)
    if len(alpha) != S.n:
        raise ValueError("alpha has the wrong dimension")
    if S.kind == "mixed":
        from .mip import floor_mixed_witness

        return floor_mixed_witness(S, alpha, beta)
    res = _floor_desc(S, alpha, beta)
    if res is None:
        return EMPTY_SIDE, None
    return res


def floor_s(S: SSpec, alpha: Sequence, beta):
    """max{alpha.z : z in S, alpha.z <= beta}, or EMPTY_SIDE."""
    return floor_witness(S, alpha, beta)[0]


def ceil_witness(S: SSpec, alpha: Sequence, beta):
    v, z = floor_witness(S, [-x for x in alpha], -as_fraction(beta))
    if v is EMPTY_SIDE:
        return EMPTY_SIDE, None
    return -v, z


def ceil_s(S: SSpec, alpha: Sequence, beta):
    """min{alpha.z : z in S, alpha.z >= beta}, or EMPTY_SIDE."""
    return ceil_witness(S, alpha, beta)[0]


def floor_bruteforce(S: SSpec, alpha, beta, box):
    """Reference scan over S ∩ box."""
    best = None
    for z in S.points_in_box(box):
        v = dot(alpha, z)
        if v <= beta and (best is None or v > best):
            best = v
    return EMPTY_SIDE if best is None else Fraction(best)


# ---------------------------------------------------------------------------
# cuts and certificates


@dataclass(frozen=True)
class Cut:
    """alpha x <= beta strengthened to alpha x <= beta_strengthened (or >= for sense '>=')."""

    alpha: tuple[int, ...]
    beta: Fraction
    beta_strengthened: object  # Fraction or EMPTY_SIDE
    witness: tuple[int, ...] | None
    sense: str = LE

    @property
    def is_empty_side(self) -> bool:
        return self.beta_strengthened is EMPTY_SIDE

    def inequality(self) -> tuple[tuple, str, Fraction]:
        """The cut as an (a, rel, b) row; the empty side gives 0x <= -1."""
        if self.is_empty_side:
            return (0,) * len(self.alpha), LE, Fraction(-1)
        return self.alpha, self.sense, self.beta_strengthened

    @property
    def classical(self):
        """Classical CG right-hand side."""

        return Fraction(floor(self.beta)) if self.sense == LE else Fraction(ceil(self.beta))

    def describe(self) -> str:
        a, rel, b = self.inequality()
        return f"{fmt_vec(a)} x {rel} {fmt(b)}"


@dataclass(frozen=True)
class CutCertificate:
    """lam over ``P.le_rows()`` with lam A = alpha and lam b = beta = max over P."""

    cut: Cut
    lam: tuple[Fraction, ...]


def _check_cert(P: Polyhedron, alpha, beta, lam) -> None:
    rows = P.le_rows()
    if any(x < 0 for x in lam):
        raise VerificationFailed("negative multiplier")
    if any(dot(lam, [r[0][j] for r in rows]) != alpha[j] for j in range(P.n)):
        raise VerificationFailed("lam A != alpha")
    if dot(lam, [r[1] for r in rows]) != beta:
        raise VerificationFailed("lam b != beta")


def check_pi_membership(P: Polyhedron, alpha: Sequence, beta) -> CutCertificate:
    """Certificate that (alpha, beta) is a valid, supporting inequality for P."""
    if not is_integral(alpha):
        raise NotIntegral(f"alpha {alpha} is not integral")
    alpha = to_int(alpha)
    beta = as_fraction(beta)
    res = lp_optimize(P, alpha, "max")
    if res.status == "infeasible":
        raise EmptySet("P is empty")
    if res.status == "unbounded":
        raise NotValid("alpha x is unbounded over P")
    if res.value > beta:
        raise NotValid(f"max over P is {fmt(res.value)} > {fmt(beta)}")
    if res.value < beta:
        raise NotSupporting(f"max over P is {fmt(res.value)} < {fmt(beta)}")
    _check_cert(P, alpha, beta, res.dual)
    return CutCertificate(Cut(alpha, beta, None, None), res.dual)


def _infeasibility_cut(n: int) -> Cut:
    return Cut((0,) * n, Fraction(-1), EMPTY_SIDE, None)


def scg_cut(P: Polyhedron, S: SSpec, alpha: Sequence, check_hull: bool = True) -> Cut:
    """S-CG cut from the supporting inequality of P with normal ``alpha``."""
    if not is_integral(alpha):
        raise NotIntegral(f"alpha {alpha} is not integral")
    alpha = to_int(alpha)
    if check_hull and S.kind != "mixed" and not includes(S.hull_polyhedron, P):
        raise NotValid("P is not contained in conv(S)")
    status, beta, _ = support(P, alpha)
    if status == "infeasible":
        return _infeasibility_cut(P.n)
    if status == "unbounded":
        raise Unbounded(f"max of {alpha} over P is unbounded")
    v, z = floor_witness(S, alpha, beta)
    return Cut(alpha, beta, v, z)


def certify(P: Polyhedron, cut: Cut) -> CutCertificate:
    if cut.is_empty_side and not any(cut.alpha):
        res = lp_optimize(P, [0] * P.n)
        if res.status != "infeasible":
            raise VerificationFailed("infeasibility cut on a nonempty P")
        return CutCertificate(cut, res.farkas)
    return CutCertificate(cut, check_pi_membership(P, cut.alpha, cut.beta).lam)


@dataclass(frozen=True)
class ClosureResult:
    polyhedron: Polyhedron
    cuts: tuple[Cut, ...]
    certificates: tuple[CutCertificate, ...] = ()

    @property
    def is_empty(self) -> bool:
        return self.polyhedron.is_empty


def _cut_rows(cuts: Iterable[Cut]):
    return [c.inequality() for c in cuts]


def closure_round(P: Polyhedron, S: SSpec, Omega: Iterable, with_certificates: bool = True,
                  threads: int = 1) -> ClosureResult:
    """P intersected with the S-CG cuts of every alpha (or ready-made Cut) in Omega."""
    items = list(Omega)

    def one(item):
        if isinstance(item, Cut):
            return item
        return scg_cut(P, S, item, check_hull=False)

    cuts = _pmap(one, items, threads)
    certs = tuple(certify(P, c) for c in cuts) if with_certificates else ()
    if any(c.is_empty_side for c in cuts):
        return ClosureResult(Polyhedron.empty(P.n), tuple(cuts), certs)
    Q = P.intersect(_cut_rows(cuts)).canonical()
    return ClosureResult(Q, tuple(cuts), certs)


def _pmap(fn, items, threads):
    if threads and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def alpha_family(n: int, K: int, support_coords: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Primitive integral alpha != 0 with max |alpha_i| <= K, graded-lex order.

    Non-primitive alpha are omitted: (k alpha, k beta) yields k times the cut of
    (alpha, beta).  ``support_coords`` restricts the nonzero entries.
    """
    coords = list(range(n)) if support_coords is None else list(support_coords)
    out = []
    for vals in product(range(-K, K + 1), repeat=len(coords)):
        if not any(vals) or gcd(*vals) != 1:
            continue
        a = [0] * n
        for c, v in zip(coords, vals):
            a[c] = v
        out.append(tuple(a))
    out.sort(key=lambda a: (sum(abs(x) for x in a), a))
    return out


def bounded_closure(P: Polyhedron, S: SSpec, K: int, rounds: int = 1, with_certificates: bool = False,
                    threads: int = 1, alphas: Sequence | None = None) -> ClosureResult:
    """Closure rounds over every alpha with ||alpha||_inf <= K (or the given family).

    Directions with an unbounded maximum over the current P are skipped, as
    are cuts that do not move the hyperplane.
    """
    if K < 1 and alphas is None:
        raise ValueError("K must be positive")
    if alphas is None:
        coords = range(S.n_int) if S.kind == "mixed" else None
        alphas = alpha_family(P.n, K, coords)
    alphas = [to_int(a) for a in alphas]
    cur = P
    all_cuts, all_certs = [], []
    if cur.is_empty:
        return ClosureResult(Polyhedron.empty(P.n), (_infeasibility_cut(P.n),))
    for _ in range(rounds):
        base = cur

        def one(a):
            status, beta, _ = support(base, a)
            if status != "optimal":
                return None
            v, z = floor_witness(S, a, beta)
            return Cut(a, beta, v, z)

        cuts = [c for c in _pmap(one, alphas, threads) if c is not None]
        cutting = [c for c in cuts if c.is_empty_side or c.beta_strengthened < c.beta]
        if with_certificates:
            all_certs.extend(certify(base, c) for c in cutting)
        all_cuts.extend(cutting)
        if any(c.is_empty_side for c in cutting):
            cur = Polyhedron.empty(P.n)
            break
        nxt = base.intersect(_cut_rows(cutting)).canonical() if cutting else base.canonical()
        if nxt.is_empty:
            cur = Polyhedron.empty(P.n)
            break
        stable = nxt == cur
        cur = nxt
        if stable:
            break
    return ClosureResult(cur, tuple(all_cuts), tuple(all_certs))

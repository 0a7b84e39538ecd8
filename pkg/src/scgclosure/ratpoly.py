"""Exact rational polyhedral kernel.

Everything here works on ``fractions.Fraction`` (or plain ``int``) and never
rounds.  A :class:`Polyhedron` is an H-representation; its V-representation is
computed on demand by double description and cached on the instance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionCap, VerificationFailed

Q = Fraction

LE, GE, EQ = "<=", ">=", "="
RELATIONS = (LE, GE, EQ)

DEFAULT_MAX_DIM = 8


# ---------------------------------------------------------------------------
# scalar / vector helpers


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        num, _, den = x.strip().partition("/")
        if den and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {x!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise TypeError(f"refusing to convert {type(x).__name__} to an exact rational")


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in xs)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def to_int(v: Sequence) -> tuple[int, ...]:
    if not is_integral(v):
        raise ValueError(f"vector {v} is not integral")
    return tuple(int(x) for x in v)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Positive rescaling of ``v`` to an integral vector with coprime entries."""
    fr = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = gcd(*ints) if ints else 0
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def gcd_vec(v: Sequence[int]) -> int:
    return gcd(*(int(x) for x in v)) if len(v) else 0


def fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Sequence) -> str:
    return "(" + ", ".join(fmt(x) for x in v) + ")"


# ---------------------------------------------------------------------------
# dense exact linear algebra


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    M = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not M:
        return M, pivots
    ncol = len(M[0])
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncol: int) -> list[list[Fraction]]:
    """Basis of {x : rows x = 0}."""
    R, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncol) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncol
        x[f] = Fraction(1)
        for i, c in enumerate(piv):
            x[c] = -R[i][f]
        basis.append(x)
    return basis


def solve(M: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Unique solution of a square nonsingular system."""
    n = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(n)]
    R, piv = rref(aug)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [R[i][n] for i in range(n)]


def inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(M[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def det(M: Sequence[Sequence]) -> Fraction:
    A = [[Fraction(x) for x in r] for r in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*B))
    return [[dot(r, c) for c in cols] for r in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [dot(r, x) for r in A]


def vecmat(x: Sequence, A: Sequence[Sequence]) -> list:
    if not A:
        return []
    return [dot(x, col) for col in zip(*A)]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*A)]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def project_out(v: Sequence, basis: Sequence[Sequence]) -> list[Fraction]:
    """Orthogonal projection of ``v`` onto the complement of span(basis)."""
    v = [Fraction(x) for x in v]
    if not basis:
        return v
    G = [[dot(a, b) for b in basis] for a in basis]
    coef = solve(G, [dot(a, v) for a in basis])
    return [x - sum(c * b[i] for c, b in zip(coef, basis)) for i, x in enumerate(v)]


def canonical_basis(vectors: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Integral RREF basis of the span of ``vectors`` (unique for a subspace)."""
    R, _ = rref(vectors)
    return [primitive(r) for r in R]


# ---------------------------------------------------------------------------
# polyhedra


@dataclass(frozen=True)
class VRep:
    vertices: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[int, ...], ...]
    lineality: tuple[tuple[int, ...], ...]

    @property
    def is_empty(self) -> bool:
        return not self.vertices


@dataclass(frozen=True)
class Polyhedron:
    """{x in Q^n : A x (rel) b} with exact entries.  Immutable."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    rels: tuple[str, ...]
    n: int = field(default=-1)

    def __post_init__(self):
        n = self.n
        if n < 0:
            if not self.A:
                raise ValueError("dimension required for a polyhedron without rows")
            n = len(self.A[0])
            object.__setattr__(self, "n", n)
        object.__setattr__(self, "A", tuple(vec(r) for r in self.A))
        object.__setattr__(self, "b", vec(self.b))
        object.__setattr__(self, "rels", tuple(self.rels))
        if not (len(self.A) == len(self.b) == len(self.rels)):
            raise ValueError("A, b and rels must have the same number of rows")
        for r, rel in zip(self.A, self.rels):
            if len(r) != n:
                raise ValueError(f"row {r} does not have {n} entries")
            if rel not in RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")

    # constructors
    @classmethod
    def from_rows(cls, rows: Iterable, n: int | None = None) -> "Polyhedron":
        """``rows`` holds ``(a, rel, b)`` triples or ``(a, b)`` pairs meaning ``a x <= b``."""
        A, b, rels = [], [], []
        for row in rows:
            if len(row) == 2:
                a, rhs = row
                rel = LE
            else:
                a, rel, rhs = row
            A.append(vec(a))
            b.append(as_fraction(rhs))
            rels.append(rel)
        return cls(tuple(A), tuple(b), tuple(rels), -1 if n is None else n)

    @classmethod
    def universe(cls, n: int) -> "Polyhedron":
        return cls((), (), (), n)

    @classmethod
    def empty(cls, n: int) -> "Polyhedron":
        return cls(((Fraction(0),) * n,), (Fraction(-1),), (LE,), n)

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "Polyhedron":
        n = len(lo)
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append((e, GE, lo[i]))
            rows.append((e, LE, hi[i]))
        return cls.from_rows(rows, n)

    @property
    def m(self) -> int:
        return len(self.b)

    def le_rows(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        """All rows rewritten as ``a x <= b``; each equality contributes two rows."""
        out = []
        for a, rel, rhs in zip(self.A, self.rels, self.b):
            if rel in (LE, EQ):
                out.append((a, rhs))
            if rel in (GE, EQ):
                out.append((tuple(-x for x in a), -rhs))
        return out

    def rows(self):
        return list(zip(self.A, self.rels, self.b))

    def contains(self, x: Sequence) -> bool:
        for a, rel, rhs in zip(self.A, self.rels, self.b):
            v = dot(a, x)
            if (rel == LE and v > rhs) or (rel == GE and v < rhs) or (rel == EQ and v != rhs):
                return False
        return True

    def intersect(self, rows: Iterable) -> "Polyhedron":
        extra = Polyhedron.from_rows(rows, self.n)
        return Polyhedron(self.A + extra.A, self.b + extra.b, self.rels + extra.rels, self.n)

    def lift(self, extra: int) -> "Polyhedron":
        """Cylinder self x R^extra (new coordinates appended last)."""
        z = (Fraction(0),) * extra
        return Polyhedron(tuple(a + z for a in self.A), self.b, self.rels, self.n + extra)

    @cached_property
    def _vrep(self) -> VRep:
        return _compute_vrep(self)

    @property
    def is_empty(self) -> bool:
        return self._vrep.is_empty

    @cached_property
    def _canonical(self) -> "Polyhedron":
        v = self._vrep
        return from_generators(v.vertices, v.rays, v.lineality, self.n)

    def canonical(self) -> "Polyhedron":
        """Minimal H-rep: RREF equalities, facet rows with coprime integral normals, sorted."""
        return self._canonical

    def __str__(self) -> str:
        lines = [f"dim {self.n}"]
        for a, rel, rhs in zip(self.A, self.rels, self.b):
            lines.append(" ".join(fmt(x) for x in a) + f" {rel} {fmt(rhs)}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# double description


def _idot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


class _Cone:
    """Incremental double description of {y : h.y <= 0 for all added h}.

    Rays are kept primitive-integral together with their zero sets (indices of
    registered constraints tight at the ray).  Constraints that no generator
    violates are redundant and are not registered.
    """

    def __init__(self, d: int):
        self.d = d
        self.lin = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
        self.rays: list[tuple[tuple[int, ...], frozenset]] = []
        self.ncons = 0

    def add(self, h: Sequence[int]) -> bool:
        k = self.ncons
        for idx, l in enumerate(self.lin):
            c0 = _idot(h, l)
            if c0:
                break
        else:
            idx = None
        if idx is not None:
            l0 = self.lin[idx]
            s = 1 if c0 > 0 else -1
            ac0 = abs(c0)
            lin = []
            for j, l in enumerate(self.lin):
                if j == idx:
                    continue
                c = _idot(h, l)
                lin.append(primitive([ac0 * x - s * c * y for x, y in zip(l, l0)]) if c else l)
            rays = []
            for r, z in self.rays:
                c = _idot(h, r)
                if c:
                    r = primitive([ac0 * x - s * c * y for x, y in zip(r, l0)])
                rays.append((r, z | {k}))
            rays.append((tuple(-s * y for y in l0), frozenset(range(k))))
            self.lin, self.rays = lin, rays
            self.ncons += 1
            return True

        vals = [_idot(h, r) for r, _ in self.rays]
        if all(v <= 0 for v in vals):
            return False
        pos, neg, out = [], [], []
        for i, v in enumerate(vals):
            r, z = self.rays[i]
            if v > 0:
                pos.append(i)
            elif v < 0:
                neg.append(i)
                out.append((r, z))
            else:
                out.append((r, z | {k}))
        need = self.d - len(self.lin) - 2
        for i in pos:
            p, zp = self.rays[i]
            vp = vals[i]
            for j in neg:
                q, zq = self.rays[j]
                z = zp & zq
                if len(z) < need:
                    continue
                if any(t != i and t != j and z <= zt for t, (_, zt) in enumerate(self.rays)):
                    continue
                vq = vals[j]
                y = primitive([vp * a - vq * c for a, c in zip(q, p)])
                out.append((y, z | {k}))
        self.rays = out
        self.ncons += 1
        return True


def _row_to_int(a: Sequence, rhs) -> tuple[int, ...]:
    """Homogenized integral constraint a.x - rhs*t <= 0."""
    return primitive(list(a) + [-Fraction(rhs)])


_dim_cap = [DEFAULT_MAX_DIM]


def set_max_dim(cap: int) -> None:
    """Process-wide dimension cap for vertex enumeration."""
    _dim_cap[0] = int(cap)


def _compute_vrep(P: Polyhedron) -> VRep:
    n = P.n
    if n > _dim_cap[0]:
        raise DimensionCap(f"dimension {n} exceeds cap {_dim_cap[0]}")
    cone = _Cone(n + 1)
    cone.add(tuple([0] * n + [-1]))
    for a, rhs in P.le_rows():
        h = _row_to_int(a, rhs)
        if not any(h[:n]):
            if h[n] < 0:  # 0 <= positive: vacuous
                continue
        cone.add(h)
    verts, rays = [], []
    for r, _ in cone.rays:
        t = r[n]
        if t > 0:
            verts.append(tuple(Fraction(x, t) for x in r[:n]))
        elif t == 0:
            rays.append(r[:n])
        else:  # pragma: no cover - t >= 0 is the first constraint
            raise VerificationFailed("homogenizing coordinate went negative")
    if not verts:
        return VRep((), (), ())
    lin_raw = [l[:n] for l in cone.lin]
    lin = canonical_basis(lin_raw) if lin_raw else []
    if lin:
        verts = [tuple(project_out(v, lin)) for v in verts]
        rays = [primitive(project_out(r, lin)) for r in rays]
    return VRep(
        tuple(sorted(set(verts))),
        tuple(sorted(set(r for r in rays if any(r)))),
        tuple(sorted(lin)),
    )


def vrep(P: Polyhedron, max_dim: int = DEFAULT_MAX_DIM) -> VRep:
    """Minimal V-representation (vertices, integral rays, integral lineality basis).

    Rays and vertices are projected onto the orthogonal complement of the
    lineality space, so the output is unique.  An empty ``P`` gives three
    empty tuples.
    """
    if P.n > max_dim:
        raise DimensionCap(f"dimension {P.n} exceeds cap {max_dim}")
    return P._vrep


def from_generators(vertices, rays, lineality, n: int) -> Polyhedron:
    """Canonical H-representation of conv(vertices) + cone(rays) + span(lineality)."""
    vertices = [vec(v) for v in vertices]
    if not vertices:
        return Polyhedron.empty(n)
    cone = _Cone(n + 1)
    for v in vertices:
        cone.add(primitive(list(v) + [-1]))
    for r in rays:
        if any(r):
            cone.add(primitive(list(r) + [0]))
    for l in lineality:
        if any(l):
            cone.add(primitive(list(l) + [0]))
            cone.add(primitive([-x for x in l] + [0]))
    eqs = []
    if cone.lin:
        R, _ = rref(cone.lin)
        for row in R:
            a, rhs = row[:n], row[n]
            den = lcm(*(x.denominator for x in a))
            ia = [int(x * den) for x in a]
            g = gcd(*ia)
            eqs.append((tuple(Fraction(x // g) for x in ia), Fraction(rhs * den, g)))
    normals = [e[0] for e in eqs]
    ineqs = set()
    for r, _ in cone.rays:
        a, rhs = list(r[:n]), Fraction(r[n])
        if normals:
            ap = project_out(a, normals)
            G = [[dot(x, y) for y in normals] for x in normals]
            coef = solve(G, [dot(x, a) for x in normals])
            rhs = rhs - sum(c * e[1] for c, e in zip(coef, eqs))
            a = ap
        if not any(a):
            continue
        den = lcm(*(Fraction(x).denominator for x in a))
        ia = [int(x * den) for x in a]
        g = gcd(*ia)
        ineqs.add((tuple(Fraction(x // g) for x in ia), rhs * den / g))
    rows = [(a, EQ, rhs) for a, rhs in sorted(eqs)] + [(a, LE, rhs) for a, rhs in sorted(ineqs)]
    return Polyhedron.from_rows(rows, n)


def includes(outer: Polyhedron, inner: Polyhedron) -> bool:
    """inner ⊆ outer, decided exactly from the generators of ``inner``."""
    g = inner._vrep
    if g.is_empty:
        return True
    if outer._vrep.is_empty:
        return False
    for a, rhs in outer.le_rows():
        if any(dot(a, v) > rhs for v in g.vertices):
            return False
        if any(dot(a, r) > 0 for r in g.rays):
            return False
        if any(dot(a, l) != 0 for l in g.lineality):
            return False
    return True


def same_set(P: Polyhedron, Q_: Polyhedron) -> bool:
    return includes(P, Q_) and includes(Q_, P)


def support(P: Polyhedron, c: Sequence):
    """max{c x : x in P} from the cached generators.

    Returns ``("optimal", value, vertex)``, ``("unbounded", None, direction)``
    or ``("infeasible", None, None)``.
    """
    g = P._vrep
    if g.is_empty:
        return "infeasible", None, None
    for l in g.lineality:
        s = dot(c, l)
        if s:
            return "unbounded", None, l if s > 0 else tuple(-x for x in l)
    for r in g.rays:
        if dot(c, r) > 0:
            return "unbounded", None, r
    best = max(g.vertices, key=lambda v: (dot(c, v), tuple(-x for x in v)))
    return "optimal", Fraction(dot(c, best)), best


# ---------------------------------------------------------------------------
# exact simplex


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`lp_optimize`.

    ``dual`` (optimal) and ``farkas`` (infeasible) are indexed like
    ``P.le_rows()``.  For ``sense="max"`` the optimal dual satisfies
    ``dual·A = c`` and ``dual·b = value``; for ``sense="min"`` it satisfies
    ``dual·A = -c`` and ``dual·b = -value``.
    """

    status: str
    value: Fraction | None = None
    witness: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None


def _simplex(A: list[list[Fraction]], b: list[Fraction], cost: list[Fraction]):
    """min cost.z  s.t. A z = b, z >= 0, b >= 0.  Two-phase tableau, Bland's rule."""
    m = len(A)
    N = len(cost)
    W = N + m
    T = [A[i] + [Fraction(1 if k == i else 0) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [N + i for i in range(m)]

    def pivot(i, j):
        row = T[i]
        inv = 1 / row[j]
        row = [x * inv for x in row]
        T[i] = row
        for k in range(m):
            if k != i:
                f = T[k][j]
                if f:
                    Tk = T[k]
                    T[k] = [x - f * y for x, y in zip(Tk, row)]
        basis[i] = j

    def reduced(c):
        r = list(c) + [Fraction(0)]
        for i in range(m):
            cb = c[basis[i]]
            if cb:
                Ti = T[i]
                r = [x - cb * y for x, y in zip(r, Ti)]
        return r

    def run(c, allowed):
        r = reduced(c)
        while True:
            j = next((j for j in allowed if r[j] < 0), None)
            if j is None:
                return "optimal", r, None
            best = None
            for i in range(m):
                a = T[i][j]
                if a > 0:
                    key = (T[i][W] / a, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded", r, j
            i = best[1]
            pivot(i, j)
            f = r[j]
            r = [x - f * y for x, y in zip(r, T[i])]

    c1 = [Fraction(0)] * N + [Fraction(1)] * m
    status, r, _ = run(c1, range(W))
    phase1 = sum(T[i][W] for i in range(m) if basis[i] >= N)
    if phase1 > 0:
        y = [1 - r[N + k] for k in range(m)]
        return "infeasible", None, y, None
    for i in range(m):
        if basis[i] >= N:
            j = next((j for j in range(N) if T[i][j] != 0), None)
            if j is not None:
                pivot(i, j)
    c2 = list(cost) + [Fraction(0)] * m
    status, r, j = run(c2, range(N))
    if status == "unbounded":
        z = [Fraction(0)] * N
        z[j] = Fraction(1)
        for i in range(m):
            if basis[i] < N:
                z[basis[i]] = -T[i][j]
        return "unbounded", None, None, z
    z = [Fraction(0)] * N
    for i in range(m):
        if basis[i] < N:
            z[basis[i]] = T[i][W]
    y = [-r[N + k] for k in range(m)]
    return "optimal", z, y, None


def lp_optimize(P: Polyhedron, c: Sequence, sense: str = "max") -> LPResult:
    """Exact LP over ``P`` with primal witness and dual/Farkas certificates.

    Every certificate is re-checked before being returned.
    """
    if sense not in ("max", "min"):
        raise ValueError(sense)
    n = P.n
    c = vec(c)
    obj = list(c) if sense == "max" else [-x for x in c]
    rows = P.le_rows()
    m = len(rows)
    if m == 0:
        if any(obj):
            return LPResult("unbounded", ray=tuple(obj))
        return LPResult("optimal", Fraction(0), (Fraction(0),) * n, ())
    A_std, b_std, sig = [], [], []
    for i, (a, rhs) in enumerate(rows):
        s = 1 if rhs >= 0 else -1
        sig.append(s)
        A_std.append([s * x for x in a] + [-s * x for x in a]
                     + [Fraction(s if k == i else 0) for k in range(m)])
        b_std.append(s * rhs)
    cost = [-x for x in obj] + list(obj) + [Fraction(0)] * m
    status, z, y, ray = _simplex(A_std, b_std, cost)

    if status == "infeasible":
        lam = tuple(-yi * s for yi, s in zip(y, sig))
        if any(x < 0 for x in lam) or any(vecmat(lam, [r[0] for r in rows])) \
                or dot(lam, [r[1] for r in rows]) >= 0:
            raise VerificationFailed("Farkas certificate failed to verify")
        return LPResult("infeasible", farkas=lam)
    if status == "unbounded":
        d = tuple(ray[j] - ray[n + j] for j in range(n))
        if dot(obj, d) <= 0 or any(dot(a, d) > 0 for a, _ in rows):
            raise VerificationFailed("unbounded ray failed to verify")
        return LPResult("unbounded", ray=d)
    x = tuple(z[j] - z[n + j] for j in range(n))
    lam = tuple(-yi * s for yi, s in zip(y, sig))
    value = dot(obj, x)
    if any(v < 0 for v in lam) or tuple(vecmat(lam, [r[0] for r in rows])) != tuple(obj) \
            or dot(lam, [r[1] for r in rows]) != value or not P.contains(x):
        raise VerificationFailed("LP optimality certificate failed to verify")
    return LPResult("optimal", Fraction(value if sense == "max" else -value), x, lam)


# ---------------------------------------------------------------------------
# lattices


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def ext_gcd_list(values: Sequence[int]) -> tuple[int, list[int]]:
    """(g, w) with sum(w_i * values_i) = g = gcd(values)."""
    g, w = 0, []
    for i, v in enumerate(values):
        if i == 0:
            g, w = (abs(v), [1 if v >= 0 else -1])
            continue
        g2, x, y = ext_gcd(g, v)
        w = [x * c for c in w] + [y]
        g = g2
    return g, w


@dataclass(frozen=True)
class UnimodularMap:
    """x -> U x + v with U integral, det U = ±1, v integral."""

    U: tuple[tuple[int, ...], ...]
    v: tuple[int, ...]
    U_inv: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, U, v=None) -> "UnimodularMap":
        U = tuple(tuple(int(x) for x in r) for r in U)
        n = len(U)
        d = det(U)
        if d not in (1, -1):
            raise ValueError(f"matrix has determinant {d}, not ±1")
        inv = inverse(U)
        U_inv = tuple(to_int(r) for r in inv)
        v = tuple(int(x) for x in v) if v is not None else (0,) * n
        return cls(U, v, U_inv)

    @classmethod
    def identity(cls, n: int) -> "UnimodularMap":
        I = tuple(tuple(r) for r in identity(n))
        return cls(I, (0,) * n, I)

    @property
    def n(self) -> int:
        return len(self.v)

    def __call__(self, x: Sequence):
        return tuple(dot(r, x) + vi for r, vi in zip(self.U, self.v))

    def inverse(self) -> "UnimodularMap":
        w = tuple(-int(dot(r, self.v)) for r in self.U_inv)
        return UnimodularMap(self.U_inv, w, self.U)

    def compose(self, inner: "UnimodularMap") -> "UnimodularMap":
        """self ∘ inner."""
        U = tuple(tuple(int(x) for x in r) for r in matmul(self.U, inner.U))
        Ui = tuple(tuple(int(x) for x in r) for r in matmul(inner.U_inv, self.U_inv))
        v = tuple(int(dot(r, inner.v)) + vi for r, vi in zip(self.U, self.v))
        return UnimodularMap(U, v, Ui)

    def linear(self, x: Sequence):
        return tuple(dot(r, x) for r in self.U)

    @property
    def det(self) -> int:
        return int(det(self.U))


def hnf(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], UnimodularMap]:
    """Column-style Hermite normal form: H = M U, H lower triangular.

    Pivots are positive and entries left of a pivot are reduced into
    [0, pivot).  ``U`` is returned as a translation-free UnimodularMap.
    """
    M = [[int(x) for x in r] for r in M]
    m = len(M)
    n = len(M[0]) if m else 0
    H = [r[:] for r in M]
    U = identity(n)

    def colop(c, j, a, b, cc, d):
        # new col c = a*col_c + b*col_j ; new col j = cc*col_c + d*col_j
        for X in (H, U):
            for row in X:
                x, y = row[c], row[j]
                row[c], row[j] = a * x + b * y, cc * x + d * y

    c = 0
    for i in range(m):
        if c == n:
            break
        for j in range(c + 1, n):
            if H[i][j]:
                a, b = H[i][c], H[i][j]
                g, x, y = ext_gcd(a, b)
                colop(c, j, x, y, -b // g, a // g)
        if H[i][c] == 0:
            continue
        if H[i][c] < 0:
            for X in (H, U):
                for row in X:
                    row[c] = -row[c]
        p = H[i][c]
        for k in range(c):
            q = H[i][k] // p
            if q:
                for X in (H, U):
                    for row in X:
                        row[k] -= q * row[c]
        c += 1
    return H, UnimodularMap.make(U)


def integer_kernel(G: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Lattice basis (in row HNF) of {y in Z^n : y.g = 0 for every g in G}."""
    G = [list(g) for g in G if any(g)]
    if not G:
        return [tuple(r) for r in identity(n)]
    H, U = hnf(G)  # H = G U ; zero columns of H give kernel vectors (columns of U)
    r = sum(1 for j in range(n) if any(H[i][j] for i in range(len(H))))
    K = [tuple(U.U[i][j] for i in range(n)) for j in range(r, n)]
    if not K:
        return []
    Hk, _ = hnf(transpose(K))  # columns of Hk span the same lattice
    rows = [tuple(Hk[i][j] for i in range(n)) for j in range(len(K))]
    return [r for r in rows if any(r)]


# ---------------------------------------------------------------------------
# projection


def remove_redundant(P: Polyhedron) -> Polyhedron:
    """Drop rows implied by the remaining ones (one LP per inequality)."""
    eq_rows = [(a, rhs) for a, rel, rhs in P.rows() if rel == EQ]
    keep_eq = []
    if eq_rows:
        R, piv = rref([list(a) + [rhs] for a, rhs in eq_rows])
        for row in R:
            keep_eq.append((tuple(row[:-1]), EQ, row[-1]))
    ineq = []
    seen = set()
    for a, rel, rhs in P.rows():
        if rel == EQ:
            continue
        if rel == GE:
            a, rhs = tuple(-x for x in a), -rhs
        if not any(a):
            if rhs < 0:
                return Polyhedron.empty(P.n)
            continue
        s = max(abs(x) for x in a)
        key = (tuple(x / s for x in a), rhs / s)
        if key in seen:
            continue
        seen.add(key)
        ineq.append((a, rhs))
    i = 0
    while i < len(ineq):
        a, rhs = ineq[i]
        rest = Polyhedron.from_rows(keep_eq + [(x, LE, y) for j, (x, y) in enumerate(ineq) if j != i], P.n)
        res = lp_optimize(rest, a, "max")
        if res.status == "optimal" and res.value <= rhs:
            ineq.pop(i)
        else:
            i += 1
    return Polyhedron.from_rows(keep_eq + [(a, LE, rhs) for a, rhs in ineq], P.n)


def fm_project(P: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Projection onto the coordinates ``keep`` (0-based, output in that order).

    Fourier-Motzkin elimination; equalities are used for substitution when
    available.  Redundant rows are removed by LP after every elimination.
    """
    keep = list(keep)
    if any(k < 0 or k >= P.n for k in keep):
        raise ValueError("keep indices out of range")
    if lp_optimize(P, [0] * P.n).status == "infeasible":
        return Polyhedron.empty(len(keep))
    rows = []
    for a, rel, rhs in P.rows():
        if rel == GE:
            rows.append((list(-x for x in a), LE, -rhs))
        else:
            rows.append((list(a), rel, rhs))
    for var in [j for j in range(P.n) if j not in keep]:
        eq = next((r for r in rows if r[1] == EQ and r[0][var] != 0), None)
        if eq is not None:
            ea, _, eb = eq
            new = []
            for r in rows:
                if r is eq:
                    continue
                f = r[0][var] / ea[var]
                if f:
                    r = ([x - f * y for x, y in zip(r[0], ea)], r[1], r[2] - f * eb)
                new.append(r)
            rows = new
        else:
            pos = [r for r in rows if r[1] == LE and r[0][var] > 0]
            neg = [r for r in rows if r[1] == LE and r[0][var] < 0]
            rows = [r for r in rows if r[1] == EQ or r[0][var] == 0]
            for pa, _, pb in pos:
                for na, _, nb in neg:
                    cp, cn = -na[var], pa[var]
                    rows.append(([cp * x + cn * y for x, y in zip(pa, na)], LE, cp * pb + cn * nb))
        reduced = remove_redundant(Polyhedron.from_rows(rows, P.n))
        rows = [(list(a), rel, rhs) for a, rel, rhs in reduced.rows()]
    out = [([a[k] for k in keep], rel, rhs) for a, rel, rhs in rows]
    return remove_redundant(Polyhedron.from_rows(out, len(keep)))


def project_generators(P: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Projection computed from the V-representation (independent of FM)."""
    g = P._vrep
    if g.is_empty:
        return Polyhedron.empty(len(keep))
    pick = lambda v: [v[k] for k in keep]  # noqa: E731
    return from_generators([pick(v) for v in g.vertices], [pick(r) for r in g.rays],
                           [pick(l) for l in g.lineality], len(keep))


def complete_unimodular(K: Sequence[Sequence[int]], n: int) -> UnimodularMap:
    """Unimodular U whose leading rows are ``K`` (a saturated lattice basis).

    Unit rows are tried first, preferring trailing coordinates; otherwise the
    completion comes from the Hermite form of ``K``.
    """

    K = [tuple(int(x) for x in r) for r in K]
    extra = n - len(K)
    if extra == 0:
        return UnimodularMap.make(K)
    for idx in combinations(reversed(range(n)), extra):
        rows = K + [tuple(1 if j == i else 0 for j in range(n)) for i in sorted(idx)]
        if det(rows) in (1, -1):
            return UnimodularMap.make(rows)
    H, W = hnf(K)  # K W = [H 0]; saturation forces H unimodular
    Hs = [r[:len(K)] for r in H]
    if det(Hs) not in (1, -1):
        raise ValueError("lattice basis is not saturated")
    # rows of W^{-1} below the first len(K) complete K (up to the unimodular H)
    Winv = [list(r) for r in W.U_inv]
    top = [[int(x) for x in r] for r in matmul(Hs, Winv[:len(K)])]
    return UnimodularMap.make(top + Winv[len(K):])


def annihilator_map(G: Sequence[Sequence[int]], n: int) -> tuple[UnimodularMap, int]:
    """U with U(span G) = {0} x R^l; returns (map, l)."""
    G = [primitive(g) for g in G if any(g)]
    if not G:
        return UnimodularMap.identity(n), 0
    l = rank(G)
    K = integer_kernel(G, n)
    return complete_unimodular(K, n), l

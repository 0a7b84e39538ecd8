"""Lattice sets S: integer points of a rational polyhedron, finite lists, mixed sets.

A pure-integer ``S = R ∩ Z^n`` is described exactly as

    S = F + intcone(rays) + lattice(lin)

with ``F`` finite.  For pointed ``R`` the set ``F`` is the lattice points of
conv(vertices) + sum_j [0,1] r_j, which is complete: subtracting the integer
parts of the ray multipliers from any point of S lands in that zonotope.
Lineality is first rotated onto trailing coordinates by a unimodular map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import ceil, floor, gcd, lcm
from typing import Sequence

from .errors import BoxTooLarge, EmptySet, NotIntegral, Unbounded
from .ratpoly import (
    Polyhedron,
    VRep,
    annihilator_map,
    dot,
    fm_project,
    from_generators,
    is_integral,
    primitive,
    project_out,
    to_int,
    vec,
)

DEFAULT_MAX_ENUM = 10**6


# ---------------------------------------------------------------------------
# lattice enumeration


def _integer_rows(R: Polyhedron):
    """Rows a x <= c with coprime integral a and integral c, valid on R ∩ Z^n."""
    out = []
    for a, b in R.le_rows():
        den = lcm(*(x.denominator for x in a))
        ia = [int(x * den) for x in a]
        g = gcd(*ia)
        if g == 0:
            out.append(((0,) * R.n, 0 if b >= 0 else -1))
            continue
        out.append((tuple(x // g for x in ia), floor(b * den / g)))
    return out


def box_count(lo: Sequence[int], hi: Sequence[int]) -> int:
    c = 1
    for a, b in zip(lo, hi):
        if b < a:
            return 0
        c *= b - a + 1
    return c


def enumerate_lattice(R: Polyhedron, box, max_enum: int = DEFAULT_MAX_ENUM) -> list[tuple[int, ...]]:
    """R ∩ Z^n ∩ box, sorted lexicographically.  ``box`` is ``(lo, hi)``."""
    lo, hi = [int(x) for x in box[0]], [int(x) for x in box[1]]
    n = R.n
    if len(lo) != n or len(hi) != n:
        raise ValueError("box dimension mismatch")
    if n == 0:
        return [()] if R.contains(()) else []
    if box_count(lo, hi) > max_enum:
        raise BoxTooLarge(f"box holds {box_count(lo, hi)} points, cap is {max_enum}")
    rows = _integer_rows(R)
    last = [(a, c) for a, c in rows if a[-1] != 0]
    rest = [(a, c) for a, c in rows if a[-1] == 0]
    out = []
    for head in product(*(range(lo[i], hi[i] + 1) for i in range(n - 1))):
        if any(sum(x * y for x, y in zip(a, head)) > c for a, c in rest):
            continue
        l, h = lo[-1], hi[-1]
        for a, c in last:
            s = c - sum(x * y for x, y in zip(a, head))
            if a[-1] > 0:
                h = min(h, s // a[-1])
            else:
                l = max(l, -(s // -a[-1]))
            if l > h:
                break
        for t in range(l, h + 1):
            out.append(head + (t,))
    return out


def vertex_box(points: Sequence[Sequence]) -> tuple[list[int], list[int]]:
    """Smallest integral box containing the given rational points."""
    n = len(points[0])
    lo = [ceil(min(Fraction(p[i]) for p in points)) for i in range(n)]
    hi = [floor(max(Fraction(p[i]) for p in points)) for i in range(n)]
    return lo, hi


def polytope_points(R: Polyhedron, max_enum: int = DEFAULT_MAX_ENUM) -> list[tuple[int, ...]]:
    """All lattice points of a bounded polyhedron."""
    g = R._vrep
    if g.is_empty:
        return []
    if g.rays or g.lineality:
        raise Unbounded("polyhedron is unbounded; give an explicit box")
    return enumerate_lattice(R, vertex_box(g.vertices), max_enum)


# ---------------------------------------------------------------------------
# S descriptions


@dataclass(frozen=True)
class LatticeDesc:
    """S = base + intcone(rays) + lattice(lattice); all entries integral."""

    base: tuple[tuple[int, ...], ...]
    rays: tuple[tuple[int, ...], ...]
    lattice: tuple[tuple[int, ...], ...]


def _zonotope_vertices(V, rays):
    pts = [tuple(v) for v in V]
    for r in rays:
        pts = pts + [tuple(x + y for x, y in zip(p, r)) for p in pts]
    return pts


def describe_pointed(R: Polyhedron, max_enum: int) -> LatticeDesc:
    g = R._vrep
    if g.is_empty:
        return LatticeDesc((), (), ())
    assert not g.lineality
    Z = from_generators(_zonotope_vertices(g.vertices, g.rays), [], [], R.n)
    base = [p for p in polytope_points(Z, max_enum) if R.contains(p)]
    return LatticeDesc(tuple(base), tuple(g.rays), ())


def describe_integer_hull(R: Polyhedron, max_enum: int = DEFAULT_MAX_ENUM) -> LatticeDesc:
    g = R._vrep
    if g.is_empty:
        return LatticeDesc((), (), ())
    if not g.lineality:
        return describe_pointed(R, max_enum)
    n = R.n
    tau, l = annihilator_map(g.lineality, n)
    k = n - l
    Uinv = tau.U_inv
    # image rows a U^{-1}; trailing l entries vanish on the lineality space
    rows = []
    for a, rel, b in R.rows():
        aU = [dot(a, [Uinv[i][j] for i in range(n)]) for j in range(n)]
        if any(aU[k:]):
            raise AssertionError("lineality not annihilated")
        rows.append((aU[:k], rel, b))
    if k == 0:
        inner = LatticeDesc(((),), (), ())
    else:
        inner = describe_pointed(Polyhedron.from_rows(rows, k), max_enum)
    lift = lambda p: tuple(int(dot(r, tuple(p) + (0,) * l)) for r in Uinv)  # noqa: E731
    base = tuple(sorted(lift(p) for p in inner.base))
    rays = tuple(sorted(primitive(lift(r)) for r in inner.rays))
    lattice = tuple(tuple(Uinv[i][k + j] for i in range(n)) for j in range(l))
    return LatticeDesc(base, rays, lattice)


KINDS = ("integer_hull", "explicit", "mixed")


@dataclass(frozen=True)
class SSpec:
    """A lattice set S.

    * ``integer_hull``: S = R ∩ Z^n.
    * ``explicit``: finite list of integral points (stored sorted, deduplicated).
    * ``mixed``: S = R ∩ (Z^n_int x R^(n - n_int)).
    """

    kind: str
    n: int
    R: Polyhedron | None = None
    points: tuple[tuple[int, ...], ...] = ()
    n_int: int = 0
    max_enum: int = field(default=DEFAULT_MAX_ENUM, compare=False)

    # constructors --------------------------------------------------------
    @classmethod
    def integer_hull(cls, R: Polyhedron, max_enum: int = DEFAULT_MAX_ENUM, check: bool = True) -> "SSpec":
        s = cls("integer_hull", R.n, R, (), R.n, max_enum)
        if check and not s.desc.base:
            raise EmptySet("R contains no integer point")
        return s

    @classmethod
    def explicit(cls, points, n: int | None = None) -> "SSpec":
        pts = []
        for p in points:
            if not is_integral(p):
                raise NotIntegral(f"point {p} is not integral")
            pts.append(to_int(p))
        if not pts:
            raise EmptySet("explicit S has no points")
        if n is None:
            n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("points of different dimension")
        return cls("explicit", n, None, tuple(sorted(set(pts))), n)

    @classmethod
    def mixed(cls, R: Polyhedron, n_int: int, max_enum: int = DEFAULT_MAX_ENUM, check: bool = True) -> "SSpec":
        if not 0 <= n_int <= R.n:
            raise ValueError("n_int out of range")
        s = cls("mixed", R.n, R, (), n_int, max_enum)
        if check and not s.projection().desc.base:
            raise EmptySet("mixed set has no point")
        return s

    # queries -------------------------------------------------------------
    def contains(self, z: Sequence) -> bool:
        if len(z) != self.n:
            return False
        if self.kind == "explicit":
            return is_integral(z) and to_int(z) in self._point_set
        if self.kind == "integer_hull":
            return is_integral(z) and self.R.contains(z)
        return is_integral(z[: self.n_int]) and self.R.contains(z)

    @cached_property
    def _point_set(self):
        return frozenset(self.points)

    @property
    def is_finite(self) -> bool:
        if self.kind == "explicit":
            return True
        if self.kind == "mixed":
            return False
        d = self.desc
        return not d.rays and not d.lattice

    @cached_property
    def desc(self) -> LatticeDesc:
        if self.kind == "explicit":
            return LatticeDesc(self.points, (), ())
        if self.kind == "integer_hull":
            return describe_integer_hull(self.R, self.max_enum)
        raise ValueError("mixed sets have no lattice description; use projection()")

    def projection(self) -> "SSpec":
        """proj_x(S) for the mixed kind, as an integer-hull spec."""
        if self.kind != "mixed":
            return self
        return self._projection

    @cached_property
    def _projection(self) -> "SSpec":

        Rx = fm_project(self.R, range(self.n_int)) if self.n_int < self.n else self.R
        return SSpec.integer_hull(Rx, self.max_enum, check=False)

    @cached_property
    def hull(self) -> VRep:
        """Canonical generators of conv(S) (vertices may be rational when lineality is present)."""
        d = self.desc
        if not d.base:
            return VRep((), (), ())
        return from_generators(d.base, d.rays, d.lattice, self.n)._vrep

    @cached_property
    def hull_polyhedron(self) -> Polyhedron:
        d = self.desc
        return from_generators(d.base, d.rays, d.lattice, self.n)

    def points_in_box(self, box) -> list[tuple[int, ...]]:
        """S ∩ box for pure-integer kinds (reference oracle)."""
        lo, hi = box
        if self.kind == "explicit":
            return [p for p in self.points if all(l <= x <= h for x, l, h in zip(p, lo, hi))]
        if self.kind == "integer_hull":
            return enumerate_lattice(self.R, box, self.max_enum)
        raise ValueError("mixed set is not a lattice set")

    def __str__(self) -> str:
        if self.kind == "explicit":
            return "explicit " + " ".join(str(p) for p in self.points)
        if self.kind == "integer_hull":
            return f"integer_hull of\n{self.R}"
        return f"mixed {self.n_int} of\n{self.R}"


def conv_generators(S: SSpec):
    """Integral (V, Rrays, L) with conv(S) = conv(V) + cone(Rrays) + span(L).

    ``V`` are points of S: with lineality each canonical vertex is replaced by
    a point of S projecting onto it.
    """
    if S.kind == "mixed":
        raise ValueError("pure-integer kind required")
    h = S.hull
    d = S.desc
    if not h.lineality:
        V = tuple(to_int(v) for v in h.vertices)
    else:
        lin = list(h.lineality)
        proj = {}
        for p in d.base:
            proj.setdefault(tuple(project_out(p, lin)), p)
        V = tuple(sorted(proj[v] for v in h.vertices))
    return V, tuple(h.rays), tuple(h.lineality)


def truncate_s(S: SSpec, Mstar: int) -> SSpec:
    """S ∩ (conv(V) + {sum mu_j r_j : 0 <= mu_j <= Mstar}) as an explicit set."""
    if S.kind == "explicit":
        return S
    if S.kind != "integer_hull":
        raise ValueError("pure-integer kind required")
    V, rays, L = conv_generators(S)
    if L:
        raise ValueError("truncation needs a pointed conv(S)")
    if Mstar < 0:
        raise ValueError("Mstar must be nonnegative")
    Z = from_generators(_zonotope_vertices(V, [tuple(Mstar * x for x in r) for r in rays]), [], [], S.n)
    pts = [p for p in polytope_points(Z, S.max_enum) if S.contains(p)]
    return SSpec.explicit(pts, S.n)


def build_s0(S: SSpec) -> SSpec:
    """Integer points of conv(V) + span(rays) + span(L): the cylinder relaxation."""
    if S.kind == "explicit" or (S.kind == "integer_hull" and not S.desc.rays):
        return S
    V, rays, L = conv_generators(S)
    R0 = from_generators(V, [], list(rays) + list(L), S.n)
    return SSpec.integer_hull(R0, S.max_enum)


def as_polyhedron_of_points(points, n: int) -> Polyhedron:
    return from_generators([vec(p) for p in points], [], [], n)

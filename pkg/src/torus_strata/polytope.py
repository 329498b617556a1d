"""Exact polytopes cut out by equalities and unit-width bands.

A polytope is stored as equalities ``a.x == b`` and bands
``lo <= a.x <= lo + 1`` with integer data. Internally all work happens on
integer rows ``(a, lo, hi)``; vertices are computed as ``adj(B) c / det(B)``
and compared against constraints after clearing the denominator, so the hot
loops never touch :class:`~fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .exact import adjugate, det, rank_rational

Point = tuple[Fraction, ...]
Row = tuple[tuple[int, ...], int, int]


class UnboundedPolytopeError(ValueError):
    pass


class EmptyPolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class HPolytope:
    """Closed polytope ``{a.x == b} & {lo <= a.x <= lo + 1}``."""

    ambient_dim: int
    equalities: tuple[tuple[tuple[int, ...], int], ...] = ()
    bands: tuple[tuple[tuple[int, ...], int], ...] = ()

    def __post_init__(self):
        eqs = tuple((tuple(a), int(b)) for a, b in self.equalities)
        bands = tuple((tuple(a), int(lo)) for a, lo in self.bands)
        for a, _ in eqs + bands:
            if len(a) != self.ambient_dim:
                raise ValueError(f"normal {a} has wrong length")
            if not any(a):
                raise ValueError("zero normal vector")
        object.__setattr__(self, "equalities", eqs)
        object.__setattr__(self, "bands", bands)

    def rows(self) -> list[Row]:
        return [(a, b, b) for a, b in self.equalities] + [
            (a, lo, lo + 1) for a, lo in self.bands
        ]

    def normals(self) -> list[tuple[int, ...]]:
        return [a for a, _ in self.equalities] + [a for a, _ in self.bands]

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        """Membership test; ``strict`` makes every band open."""
        for a, b in self.equalities:
            if _dot(a, x) != b:
                return False
        for a, lo in self.bands:
            v = _dot(a, x)
            if strict and not lo < v < lo + 1:
                return False
            if not lo <= v <= lo + 1:
                return False
        return True


@dataclass(frozen=True)
class VertexSet:
    points: tuple[Point, ...]
    affine_dim: int

    def __len__(self):
        return len(self.points)

    @property
    def empty(self) -> bool:
        return not self.points


def _dot(a, x):
    return sum(p * q for p, q in zip(a, x))


# -- vertex engine ---------------------------------------------------------


def _vertex_keys(n: int, rows: Sequence[Row]) -> set[tuple[tuple[int, ...], int]]:
    """Vertices of ``{lo <= a.y <= hi}`` as reduced ``(numerators, denominator)``.

    Rows with a zero normal are pure feasibility checks. The caller must make
    sure the nonzero normals span (otherwise the set may be unbounded and
    the answer is only the vertex set of the lineality-free part, if any).
    """
    faces: dict[tuple[int, ...], set[int]] = {}
    for a, lo, hi in rows:
        if not any(a):
            if not lo <= 0 <= hi:
                return set()
            continue
        faces.setdefault(a, set()).update((lo, hi))
    normals = list(faces)
    found: set[tuple[tuple[int, ...], int]] = set()
    for combo in itertools.combinations(normals, n):
        d, adj = adjugate(combo)
        if d == 0:
            continue
        for rhs in itertools.product(*(sorted(faces[a]) for a in combo)):
            num = [_dot(r, rhs) for r in adj]
            den = d
            if den < 0:
                num = [-x for x in num]
                den = -den
            if all(lo * den <= _dot(a, num) <= hi * den for a, lo, hi in rows):
                g = math.gcd(den, *num)
                found.add((tuple(x // g for x in num), den // g))
    return found


def _to_point(key: tuple[tuple[int, ...], int]) -> Point:
    num, den = key
    return tuple(Fraction(x, den) for x in num)


def affine_dimension(points: Sequence[Sequence[Fraction]]) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = []
    for p in points[1:]:
        d = [Fraction(x) - y for x, y in zip(p, base)]
        scale = math.lcm(*(x.denominator for x in d))
        diffs.append([int(x * scale) for x in d])
    return rank_rational(diffs) if diffs else 0


def vertices(P: HPolytope) -> VertexSet:
    n = P.ambient_dim
    if rank_rational(P.normals()) < n:
        raise UnboundedPolytopeError("constraint normals do not span the ambient space")
    pts = sorted(_to_point(k) for k in _vertex_keys(n, P.rows()))
    return VertexSet(tuple(pts), affine_dimension(pts))


def centroid(points: Sequence[Point]) -> Point:
    if not points:
        raise EmptyPolytopeError("centroid of an empty point set")
    k = len(points)
    return tuple(sum(col, Fraction(0)) / k for col in zip(*points))


def relative_interior_point(P: HPolytope, verts: Optional[VertexSet] = None) -> Point:
    """Centroid of the vertices; lies in the relative interior of ``P``."""
    verts = verts if verts is not None else vertices(P)
    if verts.empty:
        raise EmptyPolytopeError("polytope is empty")
    return centroid(verts.points)


def is_contained_in_hyperplane(
    P: HPolytope, normal: Sequence[int], c: int, verts: Optional[VertexSet] = None
) -> bool:
    verts = verts if verts is not None else vertices(P)
    return all(_dot(normal, w) == c for w in verts.points)


def scaled_lattice_check(
    P: HPolytope, D: int, verts: Optional[VertexSet] = None
) -> bool:
    """True iff ``D * w`` is integral for every vertex ``w``."""
    verts = verts if verts is not None else vertices(P)
    return all(D % x.denominator == 0 for w in verts.points for x in w)


# -- facets and relative-interior certification ----------------------------


class HullFrame:
    """Affine hull coordinates and facet inequalities of a finite point set.

    Facets are found by brute force over ``p``-subsets in hull coordinates,
    which is plenty for the handful of points we certify against.
    """

    def __init__(self, points: Sequence[Sequence]):
        pts = [tuple(Fraction(x) for x in p) for p in points]
        if not pts:
            raise EmptyPolytopeError("empty point set")
        self.base = pts[0]
        self.directions: list[tuple[Fraction, ...]] = []
        for p in pts[1:]:
            d = tuple(x - y for x, y in zip(p, self.base))
            if affine_dimension([(0,) * len(d)] + self.directions + [d]) > len(self.directions):
                self.directions.append(d)
        self.dim = len(self.directions)
        n = len(self.base)
        # pick coordinate rows on which the direction matrix is invertible
        cols = [[d[i] for d in self.directions] for i in range(n)]
        self._rows: list[int] = []
        for i in range(n):
            trial = [cols[j] for j in self._rows] + [cols[i]]
            if _frac_rank(trial) > len(self._rows):
                self._rows.append(i)
            if len(self._rows) == self.dim:
                break
        self._square = [cols[i] for i in self._rows]
        self.coords = [self.to_hull(p) for p in pts]
        self.facets = self._facets()

    def to_hull(self, x: Sequence) -> Optional[tuple[Fraction, ...]]:
        """Hull coordinates of ``x``, or ``None`` if ``x`` is off the hull."""
        x = tuple(Fraction(v) for v in x)
        if self.dim == 0:
            return () if x == self.base else None
        rhs = [x[i] - self.base[i] for i in self._rows]
        t = _frac_solve(self._square, rhs)
        recon = tuple(
            b + sum(ti * d[i] for ti, d in zip(t, self.directions))
            for i, b in enumerate(self.base)
        )
        return t if recon == x else None

    def _facets(self) -> list[tuple[tuple[int, ...], Fraction]]:
        p = self.dim
        if p == 0:
            return []
        out = set()
        for subset in itertools.combinations(range(len(self.coords)), p):
            q = [self.coords[i] for i in subset]
            diffs = []
            for other in q[1:]:
                d = [a - b for a, b in zip(other, q[0])]
                scale = math.lcm(*(v.denominator for v in d))
                diffs.append([int(v * scale) for v in d])
            alpha = _cross(diffs, p)
            if not any(alpha):
                continue
            c = _dot(alpha, q[0])
            vals = [_dot(alpha, t) for t in self.coords]
            if all(v <= c for v in vals):
                out.add((alpha, c))
            elif all(v >= c for v in vals):
                out.add((tuple(-a for a in alpha), -c))
        return sorted(out)

    def in_relative_interior(self, x: Sequence) -> bool:
        t = self.to_hull(x)
        if t is None:
            return False
        return all(_dot(alpha, t) < c for alpha, c in self.facets)


def _cross(diffs: list[list[int]], p: int) -> tuple[int, ...]:
    # generalized cross product of p-1 vectors in Z^p (cofactor expansion)
    if p == 1:
        return (1,)
    out = []
    for j in range(p):
        minor = [[r[c] for c in range(p) if c != j] for r in diffs]
        out.append((-1) ** j * det(minor))
    return tuple(out)


def _frac_rank(rows: list[list[Fraction]]) -> int:
    scaled = []
    for r in rows:
        s = math.lcm(*(Fraction(v).denominator for v in r)) if r else 1
        scaled.append([int(Fraction(v) * s) for v in r])
    return rank_rational(scaled) if scaled and scaled[0] else 0


def _frac_solve(A: list[list[Fraction]], b: list[Fraction]) -> tuple[Fraction, ...]:
    n = len(A)
    m = [list(r) + [v] for r, v in zip(A, b)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [v - f * w for v, w in zip(m[r], m[c])]
    return tuple(m[r][n] for r in range(n))


def affinely_independent_subset(points: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal affinely independent subset, greedily from 0."""
    if not points:
        return []
    chosen = [0]
    for i in range(1, len(points)):
        trial = [points[j] for j in chosen] + [points[i]]
        if affine_dimension(trial) == len(chosen):
            chosen.append(i)
    return chosen


def interior_lattice_point(delta: VertexSet, k: int) -> Optional[tuple[int, ...]]:
    """A lattice point in the relative interior of ``k * delta``.

    For ``k >= p + 1`` the point is built from ``p + 1`` affinely independent
    vertices (their sum, plus ``k - p - 1`` copies of the first one). For
    smaller ``k`` the lattice points of ``k * delta`` are searched
    exhaustively and ``None`` means there are none. Every returned point is
    certified against facets recomputed from the scaled vertex set.
    """
    if delta.empty:
        raise EmptyPolytopeError("empty vertex set")
    if k < 1:
        raise ValueError("k must be positive")
    if any(x.denominator != 1 for w in delta.points for x in w):
        raise ValueError("interior_lattice_point needs a lattice polytope")
    p = delta.affine_dim
    scaled = [tuple(k * x for x in w) for w in delta.points]
    frame = HullFrame(scaled)
    if k >= p + 1:
        idx = affinely_independent_subset(delta.points)
        ws = [delta.points[i] for i in idx]
        cand = tuple(
            int(sum(col) + (k - p - 1) * ws[0][j]) for j, col in enumerate(zip(*ws))
        )
        if not frame.in_relative_interior(cand):
            raise AssertionError(f"constructed point {cand} failed certification")
        return cand
    lo = [int(min(col)) for col in zip(*scaled)]
    hi = [int(max(col)) for col in zip(*scaled)]
    for cand in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if frame.in_relative_interior(cand):
            return cand
    return None


# -- lattice points of bounded denominator ---------------------------------


def _int_range(alpha: int, lo: int, hi: int, strict: bool) -> tuple[Optional[int], Optional[int]]:
    """Integer ``y`` bounds from ``lo <= alpha*y <= hi`` (open if strict)."""
    if alpha < 0:
        alpha, lo, hi = -alpha, -hi, -lo
    if strict:
        return lo // alpha + 1, -((-hi) // alpha) - 1
    return -((-lo) // alpha), hi // alpha


def _strict_rows(rows: Sequence[Row], strict: bool) -> list[tuple[tuple[int, ...], int, int, bool]]:
    return [(a, lo, hi, strict and lo != hi) for a, lo, hi in rows]


def _search(
    rows: list[tuple[tuple[int, ...], int, int, bool]], n: int, prefix: tuple[int, ...]
) -> Iterator[tuple[int, ...]]:
    k = len(prefix)
    reduced = []
    for a, lo, hi, s in rows:
        shift = _dot(a[:k], prefix)
        reduced.append((a[k:], lo - shift, hi - shift, s))
    if n - k == 1:
        lower, upper = None, None
        for (alpha,), lo, hi, s in reduced:
            if alpha == 0:
                if (s and not lo < 0 < hi) or not lo <= 0 <= hi:
                    return
                continue
            l, u = _int_range(alpha, lo, hi, s)
            lower = l if lower is None else max(lower, l)
            upper = u if upper is None else min(upper, u)
        if lower is None:
            raise UnboundedPolytopeError("unbounded slice")
        for y in range(lower, upper + 1):
            yield prefix + (y,)
        return
    keys = _vertex_keys(n - k, [(a, lo, hi) for a, lo, hi, _ in reduced])
    if not keys:
        return
    first = [Fraction(num[0], den) for num, den in keys]
    for c in range(math.ceil(min(first)), math.floor(max(first)) + 1):
        yield from _search(rows, n, prefix + (c,))


def iter_lattice_points(P: HPolytope, m: int, strict: bool = True) -> Iterator[Point]:
    """Points of ``(1/m) Z^n`` in ``P`` in lexicographic order.

    With ``strict`` every band is open, as for a lift. The search runs on
    ``m * P`` slice by slice, so its cost follows the number of occupied
    slices rather than the size of the bounding box.
    """
    if m < 1:
        raise ValueError("m must be positive")
    n = P.ambient_dim
    if rank_rational(P.normals()) < n:
        raise UnboundedPolytopeError("constraint normals do not span the ambient space")
    rows = [(a, m * lo, m * hi) for a, lo, hi in P.rows()]
    for y in _search(_strict_rows(rows, strict), n, ()):
        yield tuple(Fraction(v, m) for v in y)


def lattice_points_of_denominator(P: HPolytope, m: int, strict: bool = True) -> list[Point]:
    return list(iter_lattice_points(P, m, strict))


def first_lattice_point(P: HPolytope, m: int, strict: bool = True) -> Optional[Point]:
    return next(iter_lattice_points(P, m, strict), None)


# -- planar area -----------------------------------------------------------


def convex_hull_2d(points: Sequence[Sequence]) -> list[tuple[Fraction, Fraction]]:
    """Counter-clockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set((Fraction(p[0]), Fraction(p[1])) for p in points))
    if len(pts) <= 2:
        return pts

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def volume(delta: VertexSet) -> Fraction:
    """Area of a full-dimensional planar vertex set."""
    if delta.points and len(delta.points[0]) != 2:
        raise ValueError("volume is only implemented in the plane")
    if delta.affine_dim < 2:
        raise ValueError(f"polygon has affine dimension {delta.affine_dim}")
    hull = convex_hull_2d(delta.points)
    twice = sum(
        a[0] * b[1] - a[1] * b[0] for a, b in zip(hull, hull[1:] + hull[:1])
    )
    return abs(twice) / 2

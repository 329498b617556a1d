"""Strata of the torus ``R^n / Z^n`` cut out by a toric hyperplane arrangement.

Each vector ``v`` in the arrangement gives the family of hyperplanes
``v.x in Z``. A lift ``(I, u)`` is the open polytope with ``v_i.x == u_i``
for ``i in I`` and ``u_j < v_j.x < u_j + 1`` otherwise; strata are the
``Z^n``-orbits of nonempty lifts. Orbits are keyed by translating a lift so
that the centroid of its closure lands in ``[0, 1)^n``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numba
import numpy as np

from . import polytope as poly
from ._pool import pmap
from .exact import det, independent_rows, lcm_all, rank_rational
from .polytope import HPolytope, Point, VertexSet


class InvalidArrangementError(ValueError):
    pass


class NonSpanningError(ValueError):
    def __init__(self, rank: int, n: int):
        super().__init__(
            f"vectors have rank {rank} < {n} (rank deficiency {n - rank}); A must span R^{n}"
        )
        self.rank = rank
        self.n = n


@dataclass(frozen=True)
class VectorSet:
    n: int
    vectors: tuple[tuple[int, ...], ...]
    spanning: bool = field(init=False, compare=False)

    def __post_init__(self):
        vecs = tuple(tuple(int(c) for c in v) for v in self.vectors)
        if self.n < 1:
            raise InvalidArrangementError("ambient dimension must be positive")
        if not vecs:
            raise InvalidArrangementError("need at least one vector")
        for i, v in enumerate(vecs):
            if len(v) != self.n:
                raise InvalidArrangementError(f"vector {i} has length {len(v)}, expected {self.n}")
            if not any(v):
                raise InvalidArrangementError(f"vector {i} is zero")
        if len(set(vecs)) != len(vecs):
            raise InvalidArrangementError("duplicate vectors")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "spanning", rank_rational(vecs) == self.n)

    @property
    def k(self) -> int:
        return len(self.vectors)

    @property
    def rank(self) -> int:
        return rank_rational(self.vectors)

    def require_spanning(self) -> None:
        if not self.spanning:
            raise NonSpanningError(self.rank, self.n)

    def value_range(self, i: int) -> tuple[int, int]:
        """Min and max of ``v_i . x`` over the closed unit cube."""
        v = self.vectors[i]
        return sum(c for c in v if c < 0), sum(c for c in v if c > 0)


@dataclass(frozen=True, order=True)
class Lift:
    I: tuple[int, ...]
    u: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(sorted(self.I)))
        object.__setattr__(self, "u", tuple(self.u))


@dataclass(frozen=True)
class Stratum:
    canonical_lift: Lift
    dim: int
    representative: Point
    closure_vertices: VertexSet
    closure: HPolytope

    def sort_key(self):
        return (-self.dim, self.canonical_lift.I, self.canonical_lift.u)


@dataclass(frozen=True)
class Stratification:
    A: VectorSet
    strata: tuple[Stratum, ...]
    counts_by_dim: dict[int, int]
    D_A: int

    @property
    def total(self) -> int:
        return len(self.strata)

    def by_key(self) -> dict[Lift, Stratum]:
        return {s.canonical_lift: s for s in self.strata}


@dataclass(frozen=True)
class Coverage:
    m: int
    covered: bool
    witnesses: dict[Lift, Point]
    missing: tuple[Stratum, ...]


# -- determinants ------------------------------------------------------------


def determinant_lcm(A: VectorSet) -> int:
    A.require_spanning()
    dets = [abs(det(c)) for c in itertools.combinations(A.vectors, A.n)]
    return lcm_all([d for d in dets if d])


def theorem_bound(A: VectorSet) -> int:
    return (A.n + 1) * determinant_lcm(A)


# -- lifts -------------------------------------------------------------------


def lift_polytope(A: VectorSet, L: Lift) -> HPolytope:
    inside = set(L.I)
    return HPolytope(
        A.n,
        equalities=[(A.vectors[i], L.u[i]) for i in L.I],
        bands=[(v, L.u[j]) for j, v in enumerate(A.vectors) if j not in inside],
    )


@lru_cache(maxsize=1 << 14)
def lift_closure(A: VectorSet, L: Lift) -> VertexSet:
    return poly.vertices(lift_polytope(A, L))


def _on_band_face(verts: VertexSet, normal, lo: int) -> bool:
    vals = {poly._dot(normal, w) for w in verts.points}
    return vals == {lo} or vals == {lo + 1}


def is_valid_lift(A: VectorSet, L: Lift) -> bool:
    """The open lift is nonempty: its closure is nonempty and lies in no band face."""
    verts = lift_closure(A, L)
    if verts.empty:
        return False
    inside = set(L.I)
    return not any(
        _on_band_face(verts, v, L.u[j])
        for j, v in enumerate(A.vectors)
        if j not in inside
    )


def _basis_first_order(A: VectorSet) -> list[int]:
    basis = independent_rows(A.vectors)
    return basis + [i for i in range(A.k) if i not in basis]


def _options(lo: int, hi: int) -> list[tuple[bool, int]]:
    # (is_equality, value); bands are [u, u + 1]
    return [(True, c) for c in range(lo, hi + 1)] + [(False, u) for u in range(lo, hi)]


def enumerate_lifts(A: VectorSet) -> list[Lift]:
    """All valid lifts whose data sit in the unit-cube value ranges.

    For each ``i`` with ``v_i . [0,1]^n = [lo_i, hi_i]``, equalities take
    ``u_i`` in ``[lo_i, hi_i]`` and bands ``u_i`` in ``[lo_i, hi_i - 1]``.
    The canonical lift of every stratum satisfies these bounds, so every
    stratum is represented. Candidates are generated depth first with a
    basis of ``A`` assigned first, which keeps every partial polytope
    bounded; a branch is pruned as soon as its closure can no longer meet
    the next hyperplane family.
    """
    A.require_spanning()
    order = _basis_first_order(A)
    basis, rest = order[: A.n], order[A.n :]
    ranges = [A.value_range(i) for i in range(A.k)]

    def row(i, opt):
        is_eq, c = opt
        return (A.vectors[i], c, c if is_eq else c + 1)

    def expand(assigned: dict[int, tuple[bool, int]], depth: int) -> list[Lift]:
        rows = [row(i, o) for i, o in assigned.items()]
        keys = poly._vertex_keys(A.n, rows)
        if not keys:
            return []
        if depth == len(rest):
            L = Lift(
                tuple(i for i, (e, _) in assigned.items() if e),
                tuple(assigned[i][1] for i in range(A.k)),
            )
            return [L] if is_valid_lift(A, L) else []
        j = rest[depth]
        v = A.vectors[j]
        vals = [Fraction(poly._dot(v, num), den) for num, den in keys]
        lo, hi = min(vals), max(vals)
        r_lo, r_hi = ranges[j]
        opts = [(True, c) for c in range(max(math.ceil(lo), r_lo), min(math.floor(hi), r_hi) + 1)]
        opts += [(False, u) for u in range(max(math.floor(lo), r_lo), min(math.ceil(hi) - 1, r_hi - 1) + 1)]
        out = []
        for o in opts:
            out += expand({**assigned, j: o}, depth + 1)
        return out

    starts = [
        dict(zip(basis, combo))
        for combo in itertools.product(*(_options(*ranges[i]) for i in basis))
    ]
    lifts = [L for chunk in pmap(lambda s: expand(s, 0), starts) for L in chunk]
    return sorted(lifts)


def canonical_orbit_key(A: VectorSet, L: Lift) -> Lift:
    """Translate ``L`` so the centroid of its closure lies in ``[0, 1)^n``."""
    c = poly.centroid(lift_closure(A, L).points)
    z = [math.floor(x) for x in c]
    if not any(z):
        return L
    return Lift(L.I, tuple(ui - poly._dot(v, z) for ui, v in zip(L.u, A.vectors)))


def lift_of_point(A: VectorSet, x: Sequence) -> Lift:
    """The lift containing ``x``: indices with integral value, floors elsewhere."""
    vals = [poly._dot(v, x) for v in A.vectors]
    I = tuple(i for i, t in enumerate(vals) if Fraction(t).denominator == 1)
    return Lift(I, tuple(math.floor(t) for t in vals))


def _make_stratum(A: VectorSet, key: Lift) -> Stratum:
    verts = lift_closure(A, key)
    rank_I = rank_rational([A.vectors[i] for i in key.I]) if key.I else 0
    return Stratum(
        canonical_lift=key,
        dim=A.n - rank_I,
        representative=poly.centroid(verts.points),
        closure_vertices=verts,
        closure=lift_polytope(A, key),
    )


def stratify(A: VectorSet) -> Stratification:
    A.require_spanning()
    keys = set(pmap(lambda L: canonical_orbit_key(A, L), enumerate_lifts(A)))
    strata = sorted((_make_stratum(A, k) for k in keys), key=Stratum.sort_key)
    counts = Counter(s.dim for s in strata)
    return Stratification(
        A=A,
        strata=tuple(strata),
        counts_by_dim=dict(sorted(counts.items(), reverse=True)),
        D_A=determinant_lcm(A),
    )


# -- rational grids ----------------------------------------------------------


def coverage(
    A: VectorSet, m: int, stratification: Optional[Stratification] = None
) -> Coverage:
    """Check which strata contain a point of denominator ``m``.

    The witness of a stratum is the lexicographically smallest such point
    in its canonical lift.
    """
    if m < 1:
        raise ValueError("m must be positive")
    S = stratification if stratification is not None else stratify(A)
    found = pmap(lambda s: poly.first_lattice_point(s.closure, m, strict=True), S.strata)
    witnesses = {s.canonical_lift: w for s, w in zip(S.strata, found) if w is not None}
    missing = tuple(s for s, w in zip(S.strata, found) if w is None)
    return Coverage(m=m, covered=not missing, witnesses=witnesses, missing=missing)


def working_denominators(
    A: VectorSet, limit: Optional[int] = None, stratification: Optional[Stratification] = None
) -> list[int]:
    """Every ``m <= limit`` for which each stratum meets ``L_m``."""
    S = stratification if stratification is not None else stratify(A)
    if limit is None:
        limit = 2 * (A.n + 1) * S.D_A
    return [m for m in range(1, limit + 1) if coverage(A, m, S).covered]


def minimal_working_set(
    A: VectorSet, limit: Optional[int] = None, stratification: Optional[Stratification] = None
) -> frozenset[int]:
    """The least working ``m`` up to ``limit`` (empty if none works).

    Default limit is twice the theorem bound.
    """
    working = working_denominators(A, limit, stratification)
    return frozenset(working[:1])


def divisibility_minimal(values: Sequence[int]) -> list[int]:
    """Elements of ``values`` with no proper divisor in ``values``."""
    vals = sorted(set(values))
    return [m for m in vals if not any(d != m and m % d == 0 for d in vals)]


_CENSUS_CHUNK = 1 << 21
_CENSUS_MASK_LIMIT = 1 << 27


@numba.njit(cache=False)
def _mark_grid_codes(V, m, lows, radix, seen):  # pragma: no cover - compiled
    # floor and remainder of v.y / m are carried along the last coordinate,
    # so the inner loop never divides
    k, n = V.shape
    q = np.zeros(k, np.int64)
    r = np.zeros(k, np.int64)
    prefix = np.zeros(n, np.int64)
    for p in range(m ** (n - 1)):
        rest = p
        for i in range(n - 2, -1, -1):
            prefix[i] = rest % m
            rest //= m
        for j in range(k):
            s = 0
            for i in range(n - 1):
                s += V[j, i] * prefix[i]
            q[j] = s // m
            r[j] = s - q[j] * m
        for _ in range(m):
            code = 0
            for j in range(k):
                code += ((q[j] - lows[j]) * 2 + (1 if r[j] == 0 else 0)) * radix[j]
            seen[code] = True
            for j in range(k):
                r[j] += V[j, n - 1]
                while r[j] >= m:
                    r[j] -= m
                    q[j] += 1
                while r[j] < 0:
                    r[j] += m
                    q[j] -= 1


def _grid_codes_chunked(V, m, lows, radix) -> set[int]:
    n = V.shape[1]
    if n == 1:
        tail = np.zeros((1, 0), dtype=np.int64)
    else:
        tail = np.indices((m,) * (n - 1), dtype=np.int64).reshape(n - 1, -1).T
    tail_vals = tail @ V[:, 1:].T
    block = max(1, _CENSUS_CHUNK // len(tail_vals))
    seen: set[int] = set()
    for start in range(0, m, block):
        heads = np.arange(start, min(m, start + block), dtype=np.int64)
        vals = heads[:, None, None] * V[:, 0] + tail_vals[None, :, :]
        q, r = np.divmod(vals, m)
        codes = (((q - lows) * 2 + (r == 0)) @ radix).ravel()
        seen.update(np.unique(codes).tolist())
    return seen


def grid_orbit_census(A: VectorSet, m: int) -> int:
    """Count strata met by ``L_m`` by classifying every grid point directly.

    Each grid point ``y / m`` with ``y in [0, m)^n`` gets its lift from the
    values ``v . y / m`` (integral ones give ``I``, floors give ``u``); the
    distinct lifts are then reduced to orbit keys. Lifts are packed into
    mixed-radix integer codes so the per-point work stays in compiled code.
    """
    A.require_spanning()
    if m < 1:
        raise ValueError("m must be positive")
    k = A.k
    V = np.array(A.vectors, dtype=np.int64)
    ranges = [A.value_range(i) for i in range(k)]
    lows = np.array([lo for lo, _ in ranges], dtype=np.int64)
    widths = [2 * (hi - lo + 1) for lo, hi in ranges]
    radix = np.array([math.prod(widths[:j]) for j in range(k)], dtype=np.int64)
    space = math.prod(widths)
    if space <= _CENSUS_MASK_LIMIT:
        mask = np.zeros(space, dtype=np.bool_)
        _mark_grid_codes(V, m, lows, radix, mask)
        seen = set(np.flatnonzero(mask).tolist())
    else:
        seen = _grid_codes_chunked(V, m, lows, radix)

    keys = set()
    for code in seen:
        I, u = [], []
        for j in range(k):
            digit = (code // int(radix[j])) % widths[j]
            if digit % 2:
                I.append(j)
            u.append(digit // 2 + int(lows[j]))
        keys.add(canonical_orbit_key(A, Lift(tuple(I), tuple(u))))
    return len(keys)


def smallest_area_strata(
    A: VectorSet, stratification: Optional[Stratification] = None
) -> list[tuple[Stratum, Fraction, int]]:
    """Two-dimensional strata with exact area and polygon vertex count, smallest first."""
    if A.n != 2:
        raise ValueError("areas are only computed for n = 2")
    S = stratification if stratification is not None else stratify(A)
    rows = [
        (s, poly.volume(s.closure_vertices), len(poly.convex_hull_2d(s.closure_vertices.points)))
        for s in S.strata
        if s.dim == 2
    ]
    return sorted(rows, key=lambda r: (r[1], r[0].sort_key()))

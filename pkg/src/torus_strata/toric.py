"""Toric Frobenius summands and Thomsen collections for smooth fans.

Line bundles are compared in ``Z^{rays} / {(<w, u_rho>)_rho : w in Z^n}``,
with coset representatives fixed by the Hermite normal form of the
relation lattice.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .arrangement import VectorSet, determinant_lcm, stratify
from .exact import det, hnf_row_basis, rank_rational


class InvalidFanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    n: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(c) for c in r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(int(i) for i in c) for c in self.max_cones)
        )


@dataclass(frozen=True)
class FanDiagnostics:
    problems: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.problems


@dataclass(frozen=True, order=True)
class DivisorClass:
    coefficients: tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return not any(self.coefficients)


def _minors_gcd(rows: Sequence[Sequence[int]]) -> int:
    r, n = len(rows), len(rows[0])
    g = 0
    for cols in itertools.combinations(range(n), r):
        g = math.gcd(g, det([[row[c] for c in cols] for row in rows]))
    return g


def validate_fan(F: Fan) -> FanDiagnostics:
    problems = []
    if not F.rays:
        problems.append("fan has no rays")
    for i, r in enumerate(F.rays):
        if len(r) != F.n:
            problems.append(f"ray {i} has length {len(r)}, expected {F.n}")
        elif not any(r):
            problems.append(f"ray {i} is zero")
        elif math.gcd(*r) != 1:
            problems.append(f"ray {i} {list(r)} is not primitive")
    if problems:
        return FanDiagnostics(tuple(problems))
    if len(set(F.rays)) != len(F.rays):
        problems.append("rays are not distinct")
    rank = rank_rational(F.rays)
    if rank < F.n:
        problems.append(f"rays span rank {rank} < {F.n} (torus factor)")
    for c, cone in enumerate(F.max_cones):
        if not cone or any(not 0 <= i < len(F.rays) for i in cone):
            problems.append(f"cone {c} has an out-of-range ray index")
            continue
        gens = [F.rays[i] for i in cone]
        if rank_rational(gens) < len(gens):
            problems.append(f"cone {c} has linearly dependent rays")
        elif _minors_gcd(gens) != 1:
            # rays of a smooth cone extend to a Z-basis
            problems.append(f"cone {c} is not smooth (rays do not extend to a lattice basis)")
    return FanDiagnostics(tuple(problems))


@lru_cache(maxsize=256)
def _require_valid(F: Fan) -> None:
    diag = validate_fan(F)
    if not diag.valid:
        raise InvalidFanError("; ".join(diag.problems))


@lru_cache(maxsize=256)
def relation_basis(F: Fan) -> tuple[tuple[int, ...], ...]:
    """HNF basis of the principal divisors ``(<e_i, u_rho>)_rho``."""
    return hnf_row_basis([[r[i] for r in F.rays] for i in range(F.n)])


def class_of(coeffs: Sequence[int], F: Fan) -> DivisorClass:
    """Canonical representative of a torus-invariant divisor modulo principal ones."""
    if len(coeffs) != len(F.rays):
        raise ValueError(f"expected {len(F.rays)} coefficients, got {len(coeffs)}")
    c = [int(x) for x in coeffs]
    for row in relation_basis(F):
        p = next(j for j, x in enumerate(row) if x)
        f = c[p] // row[p]
        if f:
            c = [a - f * b for a, b in zip(c, row)]
    return DivisorClass(tuple(c))


def frobenius_summands(F: Fan, m: int) -> dict[DivisorClass, int]:
    """Summands of the degree ``m`` Frobenius pushforward with multiplicities.

    One summand per residue ``x in M / mM``, with coefficients
    ``floor(-<x, u_rho> / m)``. Multiplicities add up to ``m ** n``.
    """
    _require_valid(F)
    if m < 1:
        raise ValueError("m must be positive")
    counts: Counter = Counter()
    for x in itertools.product(range(m), repeat=F.n):
        coeffs = [(-sum(a * b for a, b in zip(x, u))) // m for u in F.rays]
        counts[class_of(coeffs, F)] += 1
    return dict(sorted(counts.items()))


def summand_of_point(F: Fan, x: Sequence) -> DivisorClass:
    coeffs = [math.floor(-sum(Fraction(a) * b for a, b in zip(x, u))) for u in F.rays]
    return class_of(coeffs, F)


def thomsen_collection(F: Fan) -> frozenset[DivisorClass]:
    """Every possible summand: one class per stratum of the ray arrangement."""
    _require_valid(F)
    S = stratify(VectorSet(F.n, F.rays))
    return frozenset(summand_of_point(F, s.representative) for s in S.strata)


def corollary_m(F: Fan, ell: int) -> int:
    _require_valid(F)
    if ell < F.n + 1:
        raise ValueError(f"ell must be at least dim + 1 = {F.n + 1}, got {ell}")
    return ell * determinant_lcm(VectorSet(F.n, F.rays))


def verify_corollary(F: Fan, ell: int) -> bool:
    """Whether ``m = ell * D_A`` already produces the whole Thomsen collection."""
    m = corollary_m(F, ell)
    return set(frobenius_summands(F, m)) == set(thomsen_collection(F))


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(n, tuple(rays), tuple(cones))


def hirzebruch(a: int) -> Fan:
    rays = ((1, 0), (0, 1), (-1, a), (0, -1))
    return Fan(2, rays, ((0, 1), (1, 2), (2, 3), (3, 0)))

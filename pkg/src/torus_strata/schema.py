"""JSON input parsing and report serialization.

Rationals are written as ``"p/q"`` strings in lowest terms (integers too,
as ``"p/1"``) so reports never pass through floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .arrangement import Coverage, InvalidArrangementError, Lift, Stratification, VectorSet
from .toric import DivisorClass, Fan


class InputError(ValueError):
    pass


def _int_vector(obj: Any, n: int, what: str) -> tuple[int, ...]:
    if not isinstance(obj, list) or len(obj) != n:
        raise InputError(f"{what} must be a list of {n} integers")
    if not all(isinstance(c, int) and not isinstance(c, bool) for c in obj):
        raise InputError(f"{what} has non-integer entries")
    return tuple(obj)


def _dimension(data: Any) -> int:
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("'n' must be a positive integer")
    return n


@dataclass(frozen=True)
class ArrangementInput:
    n: int
    vectors: tuple[tuple[int, ...], ...]

    @classmethod
    def from_json(cls, data: Any) -> "ArrangementInput":
        n = _dimension(data)
        vecs = data.get("vectors")
        if not isinstance(vecs, list) or not vecs:
            raise InputError("'vectors' must be a nonempty list")
        parsed = tuple(_int_vector(v, n, f"vector {i}") for i, v in enumerate(vecs))
        try:
            VectorSet(n, parsed)
        except InvalidArrangementError as exc:
            raise InputError(str(exc)) from exc
        return cls(n, parsed)

    def vector_set(self) -> VectorSet:
        return VectorSet(self.n, self.vectors)

    def to_json(self) -> dict:
        return {"n": self.n, "vectors": [list(v) for v in self.vectors]}


@dataclass(frozen=True)
class FanInput:
    n: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    @classmethod
    def from_json(cls, data: Any) -> "FanInput":
        n = _dimension(data)
        rays = data.get("rays")
        if not isinstance(rays, list) or not rays:
            raise InputError("'rays' must be a nonempty list")
        parsed = tuple(_int_vector(r, n, f"ray {i}") for i, r in enumerate(rays))
        cones = data.get("max_cones", [])
        if not isinstance(cones, list):
            raise InputError("'max_cones' must be a list")
        parsed_cones = []
        for c, cone in enumerate(cones):
            if not isinstance(cone, list) or not all(
                isinstance(i, int) and not isinstance(i, bool) for i in cone
            ):
                raise InputError(f"cone {c} must be a list of ray indices")
            if any(not 0 <= i < len(parsed) for i in cone):
                raise InputError(f"cone {c} refers to a ray index out of range")
            parsed_cones.append(tuple(cone))
        return cls(n, parsed, tuple(parsed_cones))

    def fan(self) -> Fan:
        return Fan(self.n, self.rays, self.max_cones)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def point(p: Optional[Sequence]) -> Optional[list[str]]:
    return None if p is None else [rational(c) for c in p]


def lift_json(L: Lift) -> dict:
    return {"I": list(L.I), "u": list(L.u)}


def divisor_json(c: DivisorClass) -> list[int]:
    return list(c.coefficients)


def strata_report(
    inp: ArrangementInput,
    S: Stratification,
    cov: Optional[Coverage] = None,
    minimal: Optional[dict] = None,
) -> dict:
    witnesses = cov.witnesses if cov else {}
    report = {
        "input": inp.to_json(),
        "n": S.A.n,
        "k": S.A.k,
        "D_A": S.D_A,
        "theorem_bound": (S.A.n + 1) * S.D_A,
        "counts_by_dim": {str(d): c for d, c in S.counts_by_dim.items()},
        "total": S.total,
        "strata": [
            {
                "key": lift_json(s.canonical_lift),
                "dim": s.dim,
                "representative": point(s.representative),
                "closure_vertices": [point(w) for w in s.closure_vertices.points],
                "witness": point(witnesses.get(s.canonical_lift)),
            }
            for s in S.strata
        ],
        "m": cov.m if cov else None,
        "covered": cov.covered if cov else None,
        "missing": [lift_json(s.canonical_lift) for s in cov.missing] if cov else [],
    }
    if minimal is not None:
        report["minimal"] = minimal
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"

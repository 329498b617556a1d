from __future__ import annotations

import random
from pathlib import Path

import pytest

from torus_strata.arrangement import VectorSet
from torus_strata.toric import Fan, hirzebruch, projective_space

DATA = Path(__file__).resolve().parent.parent / "data"

THREE_LINES = VectorSet(2, ((1, 0), (0, 1), (1, 1)))
FOUR_LINES = VectorSet(2, ((1, 0), (0, 1), (1, 1), (-1, 2)))
AXES = VectorSet(2, ((1, 0), (0, 1)))

P1 = Fan(1, ((1,), (-1,)), ((0,), (1,)))
P2 = projective_space(2)
P3 = projective_space(3)
H1 = hirzebruch(1)
FANS = {"P1": P1, "P2": P2, "P3": P3, "H1": H1}


def simplex_family(n: int) -> VectorSet:
    """``{e_1, ..., e_n, e_1 + ... + e_n}``."""
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return VectorSet(n, tuple(basis) + ((1,) * n,))


def random_spanning_sets(count: int, seed: int = 20261016, n: int = 2, kmax: int = 5, bound: int = 3):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = rng.randint(n, kmax)
        vecs: set[tuple[int, ...]] = set()
        while len(vecs) < k:
            v = tuple(rng.randint(-bound, bound) for _ in range(n))
            if any(v):
                vecs.add(v)
        A = VectorSet(n, tuple(sorted(vecs)))
        if A.spanning:
            out.append(A)
    return out


@pytest.fixture(scope="session")
def random_suite():
    return random_spanning_sets(100)


@pytest.fixture
def data_dir():
    return DATA


_ACCEPTANCE: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)

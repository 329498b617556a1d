import random
from fractions import Fraction as F

import pytest

import torus_strata.arrangement as arr
from torus_strata.arrangement import (
    InvalidArrangementError,
    Lift,
    NonSpanningError,
    VectorSet,
    canonical_orbit_key,
    coverage,
    determinant_lcm,
    enumerate_lifts,
    grid_orbit_census,
    is_valid_lift,
    lift_closure,
    lift_of_point,
    minimal_working_set,
    smallest_area_strata,
    stratify,
    theorem_bound,
    working_denominators,
)
from torus_strata.exact import integral_solution, rank_rational
from torus_strata.polytope import scaled_lattice_check

from conftest import AXES, THREE_LINES, FOUR_LINES, random_spanning_sets, simplex_family

FIXTURES = [THREE_LINES, FOUR_LINES, AXES, simplex_family(3), VectorSet(1, ((2,), (3,)))]


def test_vector_set_validation():
    with pytest.raises(InvalidArrangementError):
        VectorSet(2, ((1, 0), (1, 0)))
    with pytest.raises(InvalidArrangementError):
        VectorSet(2, ((0, 0), (1, 0)))
    with pytest.raises(InvalidArrangementError):
        VectorSet(2, ((1, 0, 0),))
    assert not VectorSet(2, ((1, 1), (2, 2))).spanning
    assert VectorSet(2, ((1, 1), (-1, -1), (1, 0))).spanning


@pytest.mark.parametrize(
    "A, expected", [(THREE_LINES, 1), (FOUR_LINES, 6), (VectorSet(2, ((2, 0), (0, 1))), 2)]
)
def test_determinant_lcm(A, expected):
    assert determinant_lcm(A) == expected


@pytest.mark.parametrize(
    "A, expected", [(THREE_LINES, 3), (FOUR_LINES, 18), (VectorSet(2, ((2, 0), (0, 1))), 6)]
)
def test_theorem_bound(A, expected):
    assert theorem_bound(A) == expected


def test_non_spanning_is_an_error():
    A = VectorSet(2, ((1, 1), (2, 2)))
    for fn in (determinant_lcm, theorem_bound, enumerate_lifts, stratify):
        with pytest.raises(NonSpanningError) as info:
            fn(A)
        assert info.value.rank == 1


def test_enumerate_lifts_counts():
    # v = 2 on [0, 1]: points 0, 1/2, 1 and the bands (0, 1/2), (1/2, 1)
    assert len(enumerate_lifts(VectorSet(1, ((2,),)))) == 5
    # the unit square: 1 open square, 2 + 2 edges, 4 corners
    assert len(enumerate_lifts(AXES)) == 9


def test_enumerate_lifts_contains_open_simplex():
    assert Lift((), (0, 0, 0)) in enumerate_lifts(THREE_LINES)


@pytest.mark.parametrize("A", FIXTURES)
def test_enumerated_lifts_are_valid(A):
    for L in enumerate_lifts(A):
        assert is_valid_lift(A, L)


def _all_valid_lifts_in_bracket(A):
    """Plain product over the value brackets, no pruning."""
    import itertools

    ranges = [A.value_range(i) for i in range(A.k)]
    out = []
    for I_mask in itertools.product((False, True), repeat=A.k):
        axes = [
            range(lo, hi + 1) if eq else range(lo, hi) for eq, (lo, hi) in zip(I_mask, ranges)
        ]
        I = tuple(i for i, e in enumerate(I_mask) if e)
        for u in itertools.product(*axes):
            L = Lift(I, u)
            if is_valid_lift(A, L):
                out.append(L)
    return sorted(out)


@pytest.mark.parametrize("A", [THREE_LINES, FOUR_LINES, AXES, VectorSet(2, ((1, 2), (2, -1), (1, 1)))])
def test_pruned_enumeration_matches_unpruned_product(A):
    assert enumerate_lifts(A) == _all_valid_lifts_in_bracket(A)


def test_canonical_orbit_key_examples():
    assert canonical_orbit_key(THREE_LINES, Lift((2,), (1, 0, 1))) == Lift((2,), (0, 0, 0))
    L = Lift((), (0, 0, 0))
    assert canonical_orbit_key(THREE_LINES, L) == L
    a = canonical_orbit_key(THREE_LINES, Lift((), (0, 0, 0)))
    b = canonical_orbit_key(THREE_LINES, Lift((), (0, 0, 1)))
    assert a != b


@pytest.mark.parametrize("A", FIXTURES)
def test_orbit_keys_agree_with_integral_translation(A):
    lifts = enumerate_lifts(A)
    for L1 in lifts[:25]:
        for L2 in lifts[:25]:
            if L1.I != L2.I:
                continue
            diff = [a - b for a, b in zip(L2.u, L1.u)]
            translate = integral_solution(A.vectors, diff) is not None
            same = canonical_orbit_key(A, L1) == canonical_orbit_key(A, L2)
            assert translate == same


@pytest.mark.parametrize(
    "A, counts",
    [
        (THREE_LINES, {2: 2, 1: 3, 0: 1}),
        (FOUR_LINES, {2: 6, 1: 10, 0: 4}),
        (AXES, {2: 1, 1: 2, 0: 1}),
        (VectorSet(1, ((2,),)), {1: 2, 0: 2}),
    ],
)
def test_stratify_counts(A, counts):
    S = stratify(A)
    assert S.counts_by_dim == counts
    assert sum(S.counts_by_dim.values()) == S.total


@pytest.mark.parametrize("A", FIXTURES)
def test_stratum_invariants(A):
    S = stratify(A)
    keys = [s.canonical_lift for s in S.strata]
    assert len(set(keys)) == len(keys)
    assert [s.sort_key() for s in S.strata] == sorted(s.sort_key() for s in S.strata)
    for s in S.strata:
        assert all(0 <= x < 1 for x in s.representative)
        assert canonical_orbit_key(A, s.canonical_lift) == s.canonical_lift
        assert s.closure_vertices.affine_dim == s.dim
        rank_I = rank_rational([A.vectors[i] for i in s.canonical_lift.I]) if s.canonical_lift.I else 0
        assert s.dim == A.n - rank_I
        assert scaled_lattice_check(s.closure, S.D_A, s.closure_vertices)
        # only the zero translation fixes a lift
        assert integral_solution(A.vectors, [0] * A.k) == (0,) * A.n
        assert lift_of_point(A, s.representative) == s.canonical_lift


@pytest.mark.parametrize("A", [THREE_LINES, FOUR_LINES, simplex_family(3)])
def test_random_points_land_in_exactly_one_stratum(A):
    rng = random.Random(3)
    keys = {s.canonical_lift for s in stratify(A).strata}
    for _ in range(50):
        q = rng.randint(1, 60)
        x = tuple(F(rng.randint(-2 * q, 2 * q), q) for _ in range(A.n))
        assert canonical_orbit_key(A, lift_of_point(A, x)) in keys


def test_coverage_example_51():
    S = stratify(THREE_LINES)
    c2 = coverage(THREE_LINES, 2, S)
    assert not c2.covered
    assert sorted(s.dim for s in c2.missing) == [2, 2]
    c3 = coverage(THREE_LINES, 3, S)
    assert c3.covered
    assert c3.witnesses[Lift((), (0, 0, 0))] == (F(1, 3), F(1, 3))


def test_coverage_example_52():
    assert coverage(FOUR_LINES, 12).covered
    assert coverage(FOUR_LINES, 18).covered


def test_coverage_witnesses_lie_in_their_strata():
    S = stratify(FOUR_LINES)
    cov = coverage(FOUR_LINES, 12, S)
    for s in S.strata:
        w = cov.witnesses[s.canonical_lift]
        assert s.closure.contains(w, strict=True)
        assert all((12 * x).denominator == 1 for x in w)


@pytest.mark.parametrize("A", FIXTURES)
def test_coverage_monotone(A):
    S = stratify(A)
    for m in range(1, 13):
        if coverage(A, m, S).covered:
            for t in (2, 3):
                assert coverage(A, t * m, S).covered


def test_minimal_working_set_examples():
    assert minimal_working_set(THREE_LINES, 10) == {3}
    assert minimal_working_set(VectorSet(1, ((2,), (3,))), 24) == {12}
    assert minimal_working_set(FOUR_LINES, 18) == {12}


def test_working_denominators_n1():
    # D_A = 6 and n + 1 = 2: exactly the multiples 6l with l >= 2
    assert working_denominators(VectorSet(1, ((2,), (3,))), 24) == [12, 18, 24]


def test_minimal_working_set_default_limit():
    assert minimal_working_set(THREE_LINES) == {3}
    assert arr.divisibility_minimal(working_denominators(THREE_LINES)) == [3, 4, 5]


@pytest.mark.parametrize(
    "A, m, expected", [(THREE_LINES, 3, 6), (FOUR_LINES, 18, 20), (AXES, 3, 4), (THREE_LINES, 2, 4)]
)
def test_grid_orbit_census(A, m, expected):
    assert grid_orbit_census(A, m) == expected


def test_grid_census_fallback_path_agrees(monkeypatch):
    expected = [grid_orbit_census(A, m) for A, m in ((FOUR_LINES, 18), (simplex_family(3), 4))]
    monkeypatch.setattr(arr, "_CENSUS_MASK_LIMIT", 0)
    got = [grid_orbit_census(A, m) for A, m in ((FOUR_LINES, 18), (simplex_family(3), 4))]
    assert got == expected == [20, 18]


def test_census_matches_stratify_on_random_sets():
    for A in random_spanning_sets(15, seed=11):
        S = stratify(A)
        if S.D_A <= 60:
            assert grid_orbit_census(A, (A.n + 1) * S.D_A) == S.total


def test_smallest_area_strata():
    rows = smallest_area_strata(THREE_LINES)
    assert [(a, c) for _, a, c in rows] == [(F(1, 2), 3), (F(1, 2), 3)]
    rows = smallest_area_strata(AXES)
    assert [(a, c) for _, a, c in rows] == [(F(1), 4)]
    rows = smallest_area_strata(FOUR_LINES)
    assert rows[0][2] == 3
    assert sum(a for _, a, _ in rows) == 1


def test_smallest_area_requires_plane():
    with pytest.raises(ValueError):
        smallest_area_strata(simplex_family(3))


def test_areas_tile_the_torus():
    for A in random_spanning_sets(10, seed=5):
        assert sum(a for _, a, _ in smallest_area_strata(A)) == 1


def test_antipodal_vectors_give_same_strata():
    plain = stratify(THREE_LINES).counts_by_dim
    flipped = stratify(VectorSet(2, ((1, 0), (0, 1), (-1, -1)))).counts_by_dim
    assert plain == flipped


def test_threaded_results_match(monkeypatch):
    serial = stratify(FOUR_LINES)
    monkeypatch.setenv("TORUS_STRATA_THREADS", "4")
    lift_closure.cache_clear()
    threaded = stratify(FOUR_LINES)
    assert [s.canonical_lift for s in threaded.strata] == [s.canonical_lift for s in serial.strata]
    assert coverage(FOUR_LINES, 12, threaded).witnesses == coverage(FOUR_LINES, 12, serial).witnesses

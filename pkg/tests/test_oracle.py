import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sgomega.oracle import gaps_direct, minimals_of_Z, omega_bruteforce, pareto_filter, sieve
from sgomega.semigroup import DimensionMismatch, FactorizationVector, new_semigroup

from conftest import TABLE1_P5, random_semigroups


def test_pareto_drops_dominated_point():
    assert pareto_filter([(0, 1), (1, 1), (2, 0)]) == [(0, 1), (2, 0)]


def test_pareto_of_nothing():
    assert pareto_filter([]) == []


def test_pareto_drops_point_above_a_later_one():
    # (0,1,9) >= (0,0,3) coordinate-wise
    assert pareto_filter([(0, 2, 0), (0, 0, 3), (0, 1, 9)]) == [(0, 2, 0), (0, 0, 3)]


def test_pareto_removes_duplicates_and_returns_vectors():
    out = pareto_filter([(1, 2), (1, 2), (2, 1)])
    assert out == [(1, 2), (2, 1)]
    assert all(isinstance(v, FactorizationVector) for v in out)


def test_pareto_rejects_mixed_dimensions():
    with pytest.raises(DimensionMismatch):
        pareto_filter([(1, 2), (1, 2, 3)])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 5)] * 3), max_size=25))
def test_pareto_output_is_the_antichain_of_minimal_points(points):
    out = pareto_filter(points)
    for a, b in itertools.permutations(out, 2):
        assert not (a <= b)
    for p in points:
        assert any(m <= FactorizationVector(p) for m in out)
    assert set(out) <= set(points)


def test_sieve_small():
    assert list(sieve([3, 5], 9)) == [1, 0, 0, 1, 0, 1, 1, 0, 1, 1]
    assert sieve([2], -1) == bytearray()


@pytest.mark.parametrize("gens,gaps", [
    ((2, 3), [1]),
    ((3, 4), [1, 2, 5]),
])
def test_gaps_direct_small(gens, gaps):
    assert gaps_direct(new_semigroup(gens)) == gaps


def test_gaps_of_6_13_14(s61314):
    gaps = gaps_direct(s61314)
    assert len(gaps) == 18 and max(gaps) == 35


def test_minimals_for_2_3():
    S = new_semigroup([2, 3])
    assert set(minimals_of_Z(S, 0)) == {(1, 0), (0, 2)}
    assert omega_bruteforce(S, 1) == 3


def test_minimals_for_6_13_14_first_generator(s61314):
    mins = minimals_of_Z(s61314, 0)
    assert mins[0] == (1, 0, 0)
    assert {(0, 0, 3), (0, 2, 0)} <= set(mins)
    assert omega_bruteforce(s61314, 0) == 3


def test_minimals_are_an_antichain_of_factorizations(s61314):
    gens = s61314.generators
    reach = sieve(gens, 500)
    for j in range(3):
        mins = minimals_of_Z(s61314, j)
        assert len(set(mins)) == len(mins)
        for a, b in itertools.permutations(mins, 2):
            assert not (a <= b)
        for m in mins:
            assert reach[sum(c * n for c, n in zip(m, gens)) - gens[j]]


def test_s5_3_counts_and_omega():
    S = new_semigroup(TABLE1_P5["S5(3)"])
    assert len(minimals_of_Z(S, 0)) == 11
    assert omega_bruteforce(S, 3) == 60


def test_index_out_of_range():
    with pytest.raises(IndexError):
        minimals_of_Z(new_semigroup([2, 3]), 2)


@pytest.mark.parametrize("S", random_semigroups(25, seed=404, p_choices=(2, 3), max_gen=30), ids=str)
def test_wider_box_finds_the_same_minimals(S):
    for j in range(S.embedding_dimension):
        assert minimals_of_Z(S, j) == minimals_of_Z(S, j, paranoid=True)

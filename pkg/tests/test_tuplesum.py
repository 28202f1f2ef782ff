import itertools

import pytest

from artifact.acoeff import ACoefficients
from artifact.chars import character_data
from artifact.growth import degree_vectors, lambda_value
from artifact.localsolve import SpectrumStore
from artifact.tuplesum import BudgetExceeded, brute_force, orbit_cost, orbit_sum


@pytest.fixture(scope="module")
def store3():
    return SpectrumStore(3, 1, 2)


@pytest.mark.parametrize("M", [[[0, 1], [1, 1]], [[1, 1], [1, 0]], [[0, 1], [1, 0]]])
def test_orbit_sum_matches_brute_force(M, store3):
    A = ACoefficients(character_data(3, 1, 1, 2), M, local=store3)
    for degs in degree_vectors(2, 3):
        for exclude in (False, True):
            fast, cost = orbit_sum(A, degs, exclude_top=exclude)
            slow, count = brute_force(A, degs, exclude_top=exclude)
            assert fast == slow
            assert count == 3 ** sum(degs)
            if cost:
                assert cost == orbit_cost(3, 3, degs)


def test_orbit_sum_over_extension_field():
    store = SpectrumStore(3, 1, 2)
    A = ACoefficients(character_data(3, 1, 2, 2), [[0, 1], [1, 1]], local=store)
    for degs in [(1, 1), (2, 0), (0, 2), (2, 1)]:
        assert orbit_sum(A, degs)[0] == brute_force(A, degs)[0]


def test_orbit_sum_n4():
    store = SpectrumStore(5, 1, 4)
    A = ACoefficients(character_data(5, 1, 1, 4), [[0, 1], [1, 2]], local=store)
    for degs in [(1, 1), (2, 0), (1, 2), (2, 1)]:
        assert orbit_sum(A, degs)[0] == brute_force(A, degs)[0]


def test_zero_matrix_counts_tuples(store3):
    A = ACoefficients(character_data(3, 1, 1, 2), [[0, 0], [0, 0]], local=store3)
    for degs in degree_vectors(2, 3):
        assert lambda_value(A, degs) == 3 ** sum(degs)


def test_unit_vectors_give_q():
    for p, n, M in [(3, 2, [[1, 1], [1, 1]]), (5, 4, [[0, 1], [1, 2]])]:
        A = ACoefficients(character_data(p, 1, 1, n), M)
        assert lambda_value(A, (1, 0)) == p
        assert lambda_value(A, (0, 1)) == p


def test_nontrivial_scaling_character_vanishes():
    A = ACoefficients(character_data(5, 1, 1, 4), [[0, 1], [1, 2]], local=SpectrumStore(5, 1, 4))
    value, evaluations = orbit_sum(A, (1, 1))
    assert value.is_zero() and evaluations == 0
    assert brute_force(A, (1, 1))[0].is_zero()


def test_budget():
    A = ACoefficients(character_data(3, 1, 1, 2), [[0, 1], [1, 0]])
    with pytest.raises(BudgetExceeded):
        brute_force(A, (2, 2), budget=10)
    with pytest.raises(BudgetExceeded):
        orbit_sum(A, (2, 2), budget=10)


def test_orbit_cost_is_much_smaller():
    for degs in [(2, 2), (3, 1), (2, 1, 1)]:
        assert orbit_cost(3, 3, degs) * 4 < 3 ** sum(degs)

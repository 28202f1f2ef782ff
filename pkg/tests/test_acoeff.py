import itertools

import pytest

from artifact.acoeff import (
    ACoefficients,
    MissingSpectrum,
    dual_matrix,
    generic_value,
    in_generic_locus,
    local_key,
    parse_matrix,
    scaling_weight,
    split_index,
)
from artifact.chars import character_data
from artifact.localsolve import SpectrumStore

from oracles import all_tuples, generic_a_complex


@pytest.fixture(scope="module")
def store3():
    return SpectrumStore(3, 1, 2)


def _tuples_up_to(F, m, max_total):
    for total in range(max_total + 1):
        for degs in itertools.product(range(total + 1), repeat=m):
            if sum(degs) != total:
                continue
            yield from itertools.product(*(list(F.enumerate_monic(d)) for d in degs))


def test_parse_and_split():
    assert parse_matrix("0,1;1,1") == [[0, 1], [1, 1]]
    assert split_index([[0, 1], [1, 1]]) == 1
    assert split_index([[0, 0, 2], [0, 1, 0], [2, 0, 1]]) == 2
    with pytest.raises(ValueError):
        split_index([[0, 1, 0], [1, 0, 0], [0, 0, 0]])


def test_local_key_and_scaling_weight():
    M = ((1, 1), (1, 1))
    assert local_key(M, (1, 1)) == ((1, 1), ((0, 1), (1, 0)))
    assert local_key(M, (2, 0)) == ((2,), ((1,),))
    assert local_key(M, (0, 1)) == ((1,), ((0,),))
    assert scaling_weight((2, 1), M) == 2 + 2
    assert scaling_weight((1, 1), ((0, 1), (1, 0))) == 1


def test_dual_matrix_examples():
    assert dual_matrix([[0, 1], [1, 2]], 4) == ((0, 3), (3, 1))
    # n = 2, zero diagonal, first row in {0, 1}: self-dual
    M = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert dual_matrix(M, 2) == tuple(map(tuple, M))


def test_dual_matrix_is_an_involution():
    import random

    rng = random.Random(11)
    for _ in range(1000):
        n = rng.choice([2, 4, 6])
        m = rng.randint(2, 4)
        s = rng.randint(1, m - 1)
        M = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                M[i][j] = M[j][i] = rng.randrange(n)
        for j in range(m):
            M[0][j] = M[j][0] = 0 if j < s else rng.randrange(1, n)
        assert dual_matrix(dual_matrix(M, n), n) == tuple(map(tuple, M))


def test_trivial_values():
    C = character_data(3, 1, 1, 2)
    A = ACoefficients(C, [[0, 1], [1, 0]])
    assert A([(1,), (1,)]) == 1
    assert A([(0, 1), (1,)]) == 1
    assert A([(1,), (2, 1)]) == 1
    assert A([(0, 1), (1, 1)]) == -1


def test_zero_matrix_gives_one(store3):
    C = character_data(3, 1, 1, 2)
    A = ACoefficients(C, [[0, 0], [0, 0]], local=store3)
    for fs in _tuples_up_to(C.F, 2, 3):
        assert A(fs) == 1


def test_missing_local_data_is_reported():
    C = character_data(3, 1, 1, 2)
    A = ACoefficients(C, [[1]])
    with pytest.raises(MissingSpectrum):
        A([(1, 2, 1)])


def test_single_polynomial_derivative_symbol():
    C = character_data(3, 1, 1, 2)
    f = (1, 0, 1)
    want = generic_a_complex([list(f)], [[1]], 2, 3)
    assert abs(generic_value(C, [[1]], [f]).embed() - want) < 1e-12
    assert abs(ACoefficients(C, [[1]])([f]).embed() - want) < 1e-12


@pytest.mark.parametrize(
    "p,n,M",
    [
        (3, 2, [[0, 1], [1, 1]]),
        (3, 2, [[1, 1, 0], [1, 0, 1], [0, 1, 1]]),
        (5, 4, [[0, 1], [1, 2]]),
        (5, 4, [[3, 2], [2, 1]]),
    ],
)
def test_generic_formula_against_complex_oracle(p, n, M):
    C = character_data(p, 1, 1, n)
    m = len(M)
    max_d = 2 if m == 2 else 1
    for degs in itertools.product(range(max_d + 1), repeat=m):
        for fs in all_tuples(p, degs):
            got = generic_value(C, M, [tuple(f) for f in fs])
            assert abs(got.embed() - generic_a_complex(fs, M, n, p)) < 1e-9


def _route_mismatches(chars, M, store, max_total):
    A = ACoefficients(chars, M, local=store)
    s = split_index(A.M) if any(A.M[0]) else len(M)
    bad = checked = 0
    for fs in _tuples_up_to(chars.F, len(M), max_total):
        if not in_generic_locus(chars.F, fs, min(s, len(M) - 1)):
            continue
        checked += 1
        if A(fs) != generic_value(chars, M, fs):
            bad += 1
    return checked, bad


@pytest.mark.parametrize("M", [[[0, 0], [0, 0]], [[0, 1], [1, 1]], [[0, 1], [1, 0]], [[1, 1], [1, 1]]])
def test_route_equality_q3(M, store3):
    checked, bad = _route_mismatches(character_data(3, 1, 1, 2), M, store3, 3)
    assert checked > 20
    assert bad == 0


def test_route_equality_q5_n4():
    store = SpectrumStore(5, 1, 4)
    checked, bad = _route_mismatches(character_data(5, 1, 1, 4), [[0, 1], [1, 2]], store, 2)
    assert checked > 30
    assert bad == 0


def test_shared_root_kills_value(store3):
    C = character_data(3, 1, 1, 2)
    A = ACoefficients(C, [[0, 0, 1], [0, 1, 1], [1, 1, 0]], local=store3)
    for a in range(3):
        pi = (C.F.neg(a), 1)
        assert A([pi, (1,), pi]).is_zero()


def test_value_independent_of_factor_listing(store3):
    C = character_data(3, 1, 1, 2)
    F = C.F
    A = ACoefficients(C, [[0, 1], [1, 1]], local=store3)
    # the same tuple built from its factors in different orders
    factors = [(0, 1), (1, 1), (1, 0, 1)]
    for perm in itertools.permutations(factors):
        f = (1,)
        for g in perm:
            f = F.pmul(f, g)
        assert A([f, (2, 1)]) == A([F.pmul(F.pmul((0, 1), (1, 1)), (1, 0, 1)), (2, 1)])


def test_prime_power_value_scales_with_prime_degree(store3):
    C = character_data(3, 1, 1, 2)
    A = ACoefficients(C, [[1]], local=store3)
    entry = store3.solve_vector(((1,),), (2,))
    for pi in [(0, 1), (1, 0, 1)]:
        deg = len(pi) - 1
        got = A([C.F.pmul(pi, pi)])
        assert got == entry.trace(deg)


def test_permuting_variables_permutes_the_matrix():
    # exact when chi(-1) = 1, which holds for q = 5, n = 2
    C = character_data(5, 1, 1, 2)
    store = SpectrumStore(5, 1, 2)
    M = [[0, 1, 1], [1, 1, 0], [1, 0, 0]]
    perm = [0, 2, 1]
    Mp = [[M[perm[i]][perm[j]] for j in range(3)] for i in range(3)]
    A = ACoefficients(C, M, local=store)
    Ap = ACoefficients(C, Mp, local=store)
    for fs in _tuples_up_to(C.F, 3, 2):
        assert A(fs) == Ap(tuple(fs[i] for i in perm))

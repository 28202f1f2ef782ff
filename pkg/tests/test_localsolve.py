import json

import pytest

from artifact.acoeff import ACoefficients, local_key
from artifact.chars import character_data
from artifact.localsolve import (
    LocalSpectrum,
    SpectrumStore,
    SpectrumUnresolved,
    check_axioms,
    key_from_str,
    key_to_str,
)
from artifact.tuplesum import brute_force


class SyntheticStore(SpectrumStore):
    """Residual sequence built from chosen (alpha, c, weight) triples."""

    def __init__(self, p, n, terms, **kw):
        super().__init__(p, 1, n, closed_forms=False, **kw)
        self.terms = terms

    def residual_sequence(self, key, e):
        q, r = self.q, sum(key[0])
        acc = self.K.zero()
        for alpha, c, w in self.terms:
            acc = acc + alpha**e * c * (q ** ((r - w) * e) - q**e)
        return acc, 1


def test_key_round_trip():
    for key in [((2,), ((1,),)), ((1, 2), ((0, 1), (1, 1))), ((1, 1, 1), ((0, 1, 0), (1, 0, 1), (0, 1, 0)))]:
        assert key_from_str(key_to_str(key)) == key
    assert key_to_str(((2,), ((1,),))) == "v=2;M=1"


def test_small_vectors_are_constant():
    store = SpectrumStore(3, 1, 2)
    entry = store.get(((1,), ((0,),)))
    assert entry.method.endswith("constant")
    assert entry.trace(1) == 1 and entry.trace(5) == 1


def test_zero_submatrix_is_constant_and_consistent():
    store = SpectrumStore(3, 1, 2)
    entry = store.get(((1, 1), ((0, 0), (0, 0))))
    for e in (1, 2):
        assert entry.predicted_sum(e) == 3 ** (2 * e)


def test_synthetic_one_term_round_trip():
    C = character_data(5, 1, 1, 4)
    alpha = C.sqrt_q() * C.zeta_n(1)
    store = SyntheticStore(5, 4, [(alpha, 2, 1)])
    entry = store.get(((3,), ((1,),)))
    assert entry.method == "fit: one term"
    for d in range(1, 8):
        assert entry.trace(d) == alpha**d * 2
    assert all(entry.residuals)


def test_synthetic_two_weight_round_trip():
    # traces must lie in Z[i], so take a Gaussian integer of norm 5
    C = character_data(5, 1, 1, 4)
    alpha = C.K.one() + C.zeta_n(1) * 2
    terms = [(C.K.one(), 1, 0), (alpha, -1, 1)]
    store = SyntheticStore(5, 4, terms, budget=10**40)
    entry = store.get(((3,), ((1,),)))
    for d in range(1, 8):
        want = sum((a**d * c for a, c, _ in terms), C.K.zero())
        assert entry.trace(d) == want
    assert len(entry.held_out) == 2
    assert sorted((w, c) for _, c, w in entry.pairs) == [(0, 1), (1, -1)]


def test_empty_sequence():
    store = SyntheticStore(3, 2, [])
    entry = store.get(((2,), ((1,),)))
    assert entry.method == "fit: empty"
    assert entry.trace(3).is_zero()


def test_unresolvable_within_budget():
    store = SpectrumStore(3, 1, 2, budget=5)
    with pytest.raises(SpectrumUnresolved):
        store.get(((2, 1), ((1, 1), (1, 0))))


def test_solved_square_prime_power_matches_enumeration():
    store = SpectrumStore(3, 1, 2)
    entry = store.get(((2,), ((1,),)))
    assert all(entry.residuals) and len(entry.held_out) == 2
    assert entry.margin() >= 0
    # the prime-power value at a degree-two prime, recomputed by brute force
    C = character_data(3, 1, 1, 2)
    A = ACoefficients(C, [[1]], local=store)
    pi = (1, 0, 1)
    assert A([C.F.pmul(pi, pi)]) == entry.trace(2)
    # global sums over extensions agree with the spectral prediction
    for e in (1, 2):
        Ce = character_data(3, 1, e, 2)
        total, _ = brute_force(ACoefficients(Ce, [[1]], local=store), (2,))
        assert total == entry.predicted_sum(e)


@pytest.mark.parametrize("M,v", [([[0, 1], [1, 1]], (1, 2)), ([[1, 1], [1, 0]], (2, 1)), ([[0, 1], [1, 0]], (1, 1))])
def test_solved_entries_predict_extension_sums(M, v):
    store = SpectrumStore(3, 1, 2)
    entry = store.solve_vector(M, v)
    rep = check_axioms(entry)
    assert rep["residuals_zero"] and rep["margin_ok"]
    C2 = character_data(3, 1, 2, 2)
    total, _ = brute_force(ACoefficients(C2, M, local=store), v)
    assert total == entry.predicted_sum(2)


def test_compatibility_over_extension():
    # local data solved over F_9 directly agrees with F_3 data raised to even degrees
    base = SpectrumStore(3, 1, 2).get(((2,), ((1,),)))
    ext = SpectrumStore(3, 2, 2).get(((2,), ((1,),)))
    K9 = ext.K
    for d in (1, 2, 3):
        assert abs(ext.trace(d).embed() - base.trace(2 * d).embed()) < 1e-9
    assert K9 is not None


def test_cache_round_trip(tmp_path):
    store = SpectrumStore(3, 1, 2, cache_dir=str(tmp_path))
    store.get(((2,), ((1,),)))
    store.get(((1, 1), ((0, 1), (1, 0))))
    text = store.dumps()
    again = SpectrumStore(3, 1, 2, cache_dir=str(tmp_path))
    assert set(again.entries) == set(store.entries)
    assert again.dumps() == text
    for key, entry in store.entries.items():
        other = again.entries[key]
        for d in range(1, 6):
            assert other.trace(d) == entry.trace(d)
    json.loads(text)


def test_cache_rejects_other_parameters(tmp_path):
    store = SpectrumStore(3, 1, 2)
    store.get(((2,), ((1,),)))
    with pytest.raises(ValueError):
        SpectrumStore(5, 1, 2).loads(store.dumps())

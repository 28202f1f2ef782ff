import itertools
import math

import pytest

from artifact.chars import character_data, gauss_sum_identity_check

from oracles import chi_complex, gauss_sum_complex


@pytest.mark.parametrize("q", [3, 5, 9, 13])
def test_gauss_sums_have_absolute_value_sqrt_q(q):
    p = 3 if q == 9 else q
    k = 2 if q == 9 else 1
    C = character_data(p, k, 1, q - 1)
    for a in range(1, q - 1):
        G = C.gauss_sum(a)
        assert abs(abs(G.embed()) - math.sqrt(q)) < 1e-9
        assert G * G.conj() == q
    assert C.gauss_sum(0) == -1


def test_gauss_sum_against_complex_oracle():
    for p, n in [(5, 4), (7, 6), (13, 12), (13, 4)]:
        C = character_data(p, 1, 1, n)
        for a in range(n):
            assert abs(C.gauss_sum(a).embed() - gauss_sum_complex(n, p, a)) < 1e-9


def test_quadratic_gauss_sum_q3():
    C = character_data(3, 1, 1, 2)
    G = C.gauss_sum(1)
    assert G == C.zeta_p(1) - C.zeta_p(2)
    assert G * G == -3


def test_character_values_against_oracle():
    for p, n in [(5, 4), (7, 3), (13, 6)]:
        C = character_data(p, 1, 1, n)
        for x in range(1, p):
            assert abs(C.chi(x).embed() - chi_complex(x, n, p)) < 1e-12
        assert C.chi(0).is_zero()


def test_character_has_exact_order():
    C = character_data(13, 1, 1, 6)
    g = 2  # least primitive root mod 13
    val = C.chi(g)
    assert val**6 == 1
    assert all(val**d != 1 for d in range(1, 6))


def test_sqrt_q():
    assert character_data(3, 2, 1, 2).sqrt_q() == 3
    s5 = character_data(5, 1, 1, 2).sqrt_q()
    assert s5 * s5 == 5
    assert s5.embed().real > 0
    s3 = character_data(3, 1, 1, 2).sqrt_q()
    assert abs(s3.embed() - math.sqrt(3)) < 1e-9


def test_residue_symbol_examples():
    C = character_data(3, 1, 1, 2)
    assert C.residue_symbol((0, 1), (1, 1)) == -1
    # shared root: zero unless the exponent vanishes
    assert C.residue_symbol((0, 1), (0, 1)).is_zero()
    assert C.residue_symbol((0, 1), (0, 1), 0) == 1
    assert C.residue_symbol((0, 1), (0, 1), 2) == 1


def test_residue_symbol_multiplicative():
    for p in (3, 5):
        C = character_data(p, 1, 1, 2)
        F = C.F
        polys = [f for d in (1, 2) for f in F.enumerate_monic(d)]
        for f in polys:
            for g, h in itertools.product(polys, repeat=2):
                lhs = C.residue_symbol(f, F.pmul(g, h))
                assert lhs == C.residue_symbol(f, g) * C.residue_symbol(f, h)
                lhs = C.residue_symbol(F.pmul(g, h), f)
                assert lhs == C.residue_symbol(g, f) * C.residue_symbol(h, f)


def test_extension_character_is_composed_with_norm():
    base = character_data(3, 1, 1, 2)
    for e in (2, 3):
        C = character_data(3, 1, e, 2)
        F = C.F
        for x in range(1, F.order):
            assert C.chi(x) == base.chi(F.norm_to_subfield(x, 3))


def test_hasse_davenport():
    for p, n in [(3, 2), (5, 4)]:
        base = character_data(p, 1, 1, n)
        for e in (2, 3):
            C = character_data(p, 1, e, n)
            for a in range(1, n):
                lhs = -C.gauss_sum(a)
                rhs = (-base.gauss_sum(a)) ** e
                assert lhs.embed() == pytest.approx(rhs.embed(), abs=1e-9)
                assert lhs == rhs


def test_additive_exponential():
    C = character_data(3, 1, 1, 2)
    F = C.F
    assert C.e_value((1, 2, 1), (1,)) == 1
    for lam in range(3):
        assert C.e_value((lam,) if lam else (), (0, 1)) == C.psi(lam)
    # orthogonality over residues mod T^2
    T2 = (0, 0, 1)
    for g, expect in (((1,), 0), (T2, 9)):
        total = C.K.zero()
        for coeffs in itertools.product(range(3), repeat=2):
            h = F.strip(coeffs)
            total = total + C.e_value(F.pmul(h, g), T2)
        assert total == expect


def test_twisted_gauss_sum_identity():
    assert gauss_sum_identity_check(character_data(3, 1, 1, 2), 3)["ok"]
    assert gauss_sum_identity_check(character_data(5, 1, 1, 2), 2)["ok"]
    assert gauss_sum_identity_check(character_data(5, 1, 1, 4), 2)["ok"]

import pytest

from iwasawa_biquad.arith import jacobi, primes_upto, sqrt_exact
from iwasawa_biquad.fields import BiquadField
from iwasawa_biquad.formclass import h2
from iwasawa_biquad.multiquad import (IwasawaInvariants, KurodaError, catalog_q_index, fukuda_h2_stable,
                                      iwasawa_hn, iwasawa_structure, kuroda_h2, kuroda_input,
                                      structure_report, unit_group, wada_q_index)
from iwasawa_biquad.quadunits import fundamental_unit


def test_unit_groups():
    assert unit_group((3,)).labels() == ["-1", "eps_3"]
    assert unit_group((2, 3)).labels() == ["-1", "eps_2", "sqrt(eps_3)", "sqrt(eps_6)"]


def test_unit_group_q1_7_mod_8():
    # Q(sqrt 2, sqrt 21): q2 = 3 is forced, so q1 = 7 and the extra unit is sqrt(eps_21 eps_42)
    assert unit_group((2, 21)).labels() == ["-1", "eps_2", "eps_21", "sqrt(eps_21*eps_42)"]


def test_kuroda_examples():
    K = BiquadField(3, 133)
    assert kuroda_h2(K) == h2(399) // 2
    assert kuroda_h2(BiquadField(2, 3)) == 1
    assert kuroda_h2((2, 57, 7)) == h2(399) // 2
    assert kuroda_input((2, 57, 7)).v == 9 and kuroda_input(K).v == 2


def test_wada_index_examples():
    assert wada_q_index((2, 57, 7)) == 32
    assert wada_q_index(BiquadField(3, 133)) == 2
    assert wada_q_index(BiquadField(2, 399)) == 1


def test_catalog_agrees_with_search():
    for gens in [(2, 3), (2, 7), (2, 21), (2, 57, 7)]:
        cat = catalog_q_index(gens)
        assert cat is None or cat == wada_q_index(gens)


def test_structure_first_family():
    res = iwasawa_structure(BiquadField(3, 133))
    m = h2(399).bit_length() - 1
    assert res.group == (1 << (m - 1),) and res.invariants == IwasawaInvariants(0, 0, m - 1)
    assert res.order == kuroda_h2(BiquadField(3, 133))


def test_structure_trivial_item():
    res = iwasawa_structure(BiquadField(3, 19))
    assert res.group == () and res.order == 1


def _second_family():
    P = [p for p in primes_upto(200) if p > 2]
    for q in P:
        if q % 8 != 7:
            continue
        for r in P:
            for s in P:
                if r < s and r % 8 == s % 8 == 3 and jacobi(q, r) == jacobi(q, s) == 1:
                    a = fundamental_unit(q * r * s).x
                    if sqrt_exact(q * (a - 1)) is None:
                        return q, r, s


def test_structure_of_L():
    q, r, s = _second_family()
    res, reasons = structure_report(q * r * s)
    assert res is not None, reasons
    assert res.group[0] == 2 and len(res.group) == 2 and res.invariants.nu == res.m


@pytest.mark.parametrize("inv,n,want", [((0, 0, 1), 7, 2), ((0, 0, 0), 5, 1), ((1, 0, 0), 3, 8)])
def test_iwasawa_hn(inv, n, want):
    assert iwasawa_hn(IwasawaInvariants(*inv), 2, n) == want


def test_fukuda():
    assert fukuda_h2_stable(BiquadField(3, 133))
    assert fukuda_h2_stable(BiquadField(3, 19))
    assert not fukuda_h2_stable(BiquadField(7, 31 * 47))


def test_kuroda_rejects_bad_degree():
    with pytest.raises(ValueError):
        kuroda_h2((2, 3, 5, 7))


def test_kuroda_error_is_arithmetic():
    assert issubclass(KurodaError, ArithmeticError)

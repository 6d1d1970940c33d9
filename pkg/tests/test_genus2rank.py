import pytest

from iwasawa_biquad.arith import jacobi, primes_upto
from iwasawa_biquad.genus2rank import (INDIRECT, UnsupportedShape, e_index, make_ext, norm_residue_symbol,
                                       product_formula_holds, ramified_count, rank_A, rules_agree,
                                       symbol_matrix, unit_generators)


def A(d, q=3):
    return make_ext((q,), d, "A", [("q", q)])


def A1(d, q=3):
    return make_ext((2, q), d, "A1", [("q", q)])


def test_ramified_count():
    assert ramified_count(A(19)) == 1
    assert ramified_count(make_ext((3,), 11 * 13)) == 4
    assert ramified_count(make_ext((2, 3), 19 * 7)) == 4


def test_unit_generators():
    assert unit_generators((3,)) == ["-1", "eps_3"]
    assert unit_generators((2, 3)) == ["-1", "eps_2", "sqrt(eps_3)", "sqrt(eps_6)"]


@pytest.mark.parametrize("p", [5, 11, 13, 19, 29, 37])
def test_eps2_symbol_at_inert_like_primes(p):
    vals = norm_residue_symbol("eps_2", p, A1(p))
    if p % 8 in (3, 5):
        assert set(vals) == {jacobi(-1, p)}


def test_sqrt_eps3_symbol():
    for p in (5, 19, 29):
        assert jacobi(3, p) == -1
        assert set(norm_residue_symbol("sqrt(eps_3)", p, A1(p))) == {1}


def test_minus_one_not_totally_split():
    assert set(norm_residue_symbol("-1", 19, A1(19))) == {1}


def test_e_index_examples():
    assert e_index(A1(19)) == (1, "direct-symbols")
    assert e_index(A(19))[0] == 0
    e, how = e_index(A1(23))
    assert (e, how) == (3, "indirect-h2")
    assert e_index(A1(23), route="direct")[0] == 3


@pytest.mark.parametrize("ext,rank", [(A(19), 0), (A1(19), 0), (A(19 * 7), 1), (A1(23), 0)])
def test_rank_examples(ext, rank):
    assert rank_A(ext).rank == rank


def test_make_ext_normalizes():
    ext = make_ext((3,), 7)  # 7 = 3 mod 4 is replaced by 21
    assert ext.ext_radicand == 21 and ext.ramified_primes == (7,)
    with pytest.raises(UnsupportedShape):
        make_ext((3,), 3)


def test_rules_and_product_formula():
    for q in (3, 7, 11):
        for p in primes_upto(120)[2:]:
            if p == q:
                continue
            assert rules_agree((2, q), p), (q, p)
            assert product_formula_holds(symbol_matrix(A1(p, q)))


def test_symbol_matrix_shape():
    m = symbol_matrix(A1(31 * 47, 7))
    assert m.rows == ("-1", "eps_2", "sqrt(eps_7)", "sqrt(eps_14)")
    assert len(m.cols) == 8 and m.gf2_rank() == 2
    assert product_formula_holds(m)


def test_indirect_symbol_marker():
    assert INDIRECT == "indirect"

from itertools import permutations

import pytest

from iwasawa_biquad.classify import (ITEMS, ExcludedField, UnsupportedForm, biquad_odd, is_L1_type, is_L_type,
                                     main_theorem_case, qo_form, quad_odd, stabilization,
                                     stabilization_check)
from iwasawa_biquad.fields import BiquadField as B
from iwasawa_biquad.arith import quartic_residue


def test_quad_odd():
    assert quad_odd(2) and quad_odd(21) and not quad_odd(15)


def test_biquad_odd_examples():
    assert biquad_odd(B(2, 3))
    assert biquad_odd(B(5, 21))
    want = quartic_residue(13, 17) != quartic_residue(17, 13)
    assert biquad_odd(B(13, 17)) is want


def test_qo_form_examples():
    f = qo_form(B(3, 19))
    assert f.form == "A" and f.role_map["q"] == 3 and f.d == 19
    f = qo_form(B(6, 85))
    assert f.form == "B" and f.role_map["q"] == 3 and f.d == 85
    f = qo_form(B(33, 5))
    assert f.form == "C" and f.role_map == {"q1": 11, "q2": 3, "delta": 1} and f.d == 5


def test_unsupported_forms():
    assert qo_form(B(2, 3)) is None
    with pytest.raises(UnsupportedForm):
        main_theorem_case(B(5, 13))


def test_is_L_type():
    assert not is_L_type(B(3, 17))
    assert is_L_type(B(7, 113))
    assert not is_L_type(B(3, 19))
    with pytest.raises(ExcludedField):
        main_theorem_case(B(7, 113))


@pytest.mark.parametrize("K,case,label,rank", [
    (B(3, 19), 1, "C1", 0),
    (B(3, 19 * 7), 2, "C2", 1),
    (B(6, 5), 10, "", 0),
])
def test_main_theorem_examples(K, case, label, rank):
    cp = main_theorem_case(K)
    assert (cp.case_id, cp.condition_label, cp.predicted_rank_infty) == (case, label, rank)


def test_no_item():
    assert main_theorem_case(B(6, 85)) is None


def test_item_table_shape():
    assert [it.case_id for it in ITEMS] == list(range(1, 30))
    assert {it.pred for it in ITEMS} == {0, 1, 2}


def test_permutation_invariance():
    # the classifier sees only the field, so any ordering of r, s, t gives the same answer
    for ps in permutations((19, 5, 7)):
        d = ps[0] * ps[1] * ps[2]
        assert main_theorem_case(B(3, d)) == main_theorem_case(B(3, 665))


def test_delta_alias_invariance():
    # Q(sqrt 33, sqrt 3*5*7) = Q(sqrt 33, sqrt 11*5*7)
    assert main_theorem_case(B(33, 105)) == main_theorem_case(B(33, 385))


def test_stabilization_examples():
    assert stabilization_check(B(3, 19))
    assert stabilization_check(B(3, 133))
    st = stabilization(B(3, 23))
    assert st.level0.rank == 0 and st.level1.rank == 0


def test_odd_class_number_gives_rank_zero():
    for K in (B(3, 19), B(3, 5), B(6, 5), B(7, 3)):
        if biquad_odd(K):
            assert stabilization(K).level0.rank == 0


def test_is_L1_type_sees_shared_level_one():
    # Q(sqrt 6, sqrt 73) and Q(sqrt 3, sqrt 73) share K_1
    assert not is_L_type(B(6, 73))
    assert is_L1_type(B(6, 73))
    assert not is_L1_type(B(6, 5))


def test_q_pair_family_outside_parity_list():
    # Q(sqrt q1q2, sqrt q1q3): odd class number by genus theory, absent from the list
    from iwasawa_biquad.multiquad import kuroda_h2
    K = B(21, 57)
    assert kuroda_h2(K) == 1
    assert not biquad_odd(K)

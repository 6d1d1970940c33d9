from fractions import Fraction
from math import isqrt

import pytest

from iwasawa_biquad.arith import is_squarefree
from iwasawa_biquad.quadunits import (NoPatternError, fundamental_unit, generic_sqrt_profile,
                                      sqrt_unit_in_field, subfield_radicands, unit_sqrt_profile)


@pytest.mark.parametrize("d,xyzn", [(2, (1, 1, 1, -1)), (5, (1, 1, 2, -1)), (399, (20, 1, 1, 1))])
def test_fundamental_unit_examples(d, xyzn):
    u = fundamental_unit(d)
    assert (u.x, u.y, u.sigma, u.norm) == xyzn


def test_rejects_non_squarefree():
    with pytest.raises(ValueError):
        fundamental_unit(12)
    with pytest.raises(ValueError):
        fundamental_unit(1)


def test_norm_plus_one_with_prime_three_mod_four():
    for d in range(2, 600):
        if is_squarefree(d) and any(d % p == 0 for p in (3, 7, 11, 19, 23, 31, 43)):
            assert fundamental_unit(d).norm == 1


def test_qrs_lemma_example():
    prof = unit_sqrt_profile("qrs", (3, 19, 7))
    assert prof.pattern == (19, -1)
    assert prof.radicands == (19, 21) and prof.scaled
    assert prof.b1 == prof.b2 == 1
    assert prof.expands()


@pytest.mark.parametrize("q,gamma", [(7, 0), (3, 1)])
def test_sqrt_two_eps_q(q, gamma):
    prof = unit_sqrt_profile("q", (q,))
    assert prof.gamma == gamma and prof.scaled and prof.expands()
    assert abs(prof.identity()) == 2


def test_generic_profile_expands():
    for d in (3, 6, 7, 14, 21, 42, 133, 399, 1457):
        assert generic_sqrt_profile(d).expands()


def test_no_pattern_on_negative_norm():
    with pytest.raises(NoPatternError):
        generic_sqrt_profile(2)


def test_uncataloged_shape():
    with pytest.raises(ValueError):
        unit_sqrt_profile("pq", (5, 3))


def test_membership():
    prof = unit_sqrt_profile("qrs", (3, 19, 7))
    assert sqrt_unit_in_field(prof, {2, 21, 19})
    assert not sqrt_unit_in_field(unit_sqrt_profile("q", (3,)), {3, 5})
    assert sqrt_unit_in_field(unit_sqrt_profile("q", (3,)), {3, 2})
    assert subfield_radicands({2, 3}) == {2, 3, 6}


def test_profile_has_fraction_coefficients():
    prof = unit_sqrt_profile("q", (7,))
    assert isinstance(prof.b1, Fraction) and (prof.b1, prof.b2) == (3, 1)

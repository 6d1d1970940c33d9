import pytest

from iwasawa_biquad.arith import is_squarefree, prime_divisors
from iwasawa_biquad.formclass import (FormClassGroup, field_discriminant, h2_wide, lemma_quad_odd,
                                      narrow_class_number, parity_table_check)


@pytest.mark.parametrize("D,h", [(12, 2), (8, 1), (5, 1), (316, 6)])
def test_narrow_class_number(D, h):
    assert narrow_class_number(D) == h


def test_399_two_part():
    assert narrow_class_number(1596) % 8 == 0
    g = h2_wide(399)
    assert g.narrow_two_rank == 3 and g.h2 == 8


@pytest.mark.parametrize("d,m", [(3, 0), (21, 0), (138, 1)])
def test_h2_wide(d, m):
    assert h2_wide(d).m == m


def test_genus_two_rank():
    for d in range(2, 400):
        if is_squarefree(d):
            D = field_discriminant(d)
            g = h2_wide(d)
            assert g.narrow_two_rank == len(prime_divisors(D)) - 1
            assert sum(f.bit_length() - 1 for f in g.invariant_factors) == g.m


def test_reduced_cycles_partition_forms():
    G = FormClassGroup(1596)
    for cyc in G.cycles:
        for a, b, c in cyc:
            assert b * b - 4 * a * c == 1596


@pytest.mark.parametrize("d", [2, 161, 15])
def test_parity_table_check(d):
    assert parity_table_check(d)


def test_quad_parity_small():
    assert lemma_quad_odd(2) and lemma_quad_odd(21) and not lemma_quad_odd(15)


def test_disc_cap():
    with pytest.raises(ValueError):
        h2_wide(3 * 5 * 7 * 11 * 13 * 17, disc_cap=1000)

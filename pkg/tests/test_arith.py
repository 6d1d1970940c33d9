import pytest

from iwasawa_biquad.arith import (CongruenceSpec, find_primes, is_prime, jacobi, quartic_residue,
                                  scholz_pair, sqrt_exact, squarefree_part)
from iwasawa_biquad.mqfield import MQField


@pytest.mark.parametrize("n,want", [(2, True), (1, False), (399, False), (7919, True)])
def test_is_prime(n, want):
    assert is_prime(n) is want


@pytest.mark.parametrize("n,want", [(361, 19), (0, 0), (114, None)])
def test_sqrt_exact(n, want):
    assert sqrt_exact(n) == want


@pytest.mark.parametrize("a,n,want", [(2, 7, 1), (1, 15, 1), (3, 19, -1), (6, 9, 0)])
def test_jacobi(a, n, want):
    assert jacobi(a, n) == want


def test_jacobi_matches_euler():
    for p in (3, 5, 7, 11, 13, 101):
        for a in range(1, p):
            assert jacobi(a, p) == (1 if pow(a, (p - 1) // 2, p) == 1 else -1)


@pytest.mark.parametrize("a,p,want", [(2, 17, -1), (1, 13, 1), (4, 17, 1)])
def test_quartic_residue(a, p, want):
    assert quartic_residue(a, p) == want


@pytest.mark.parametrize("p,r,want", [(2, 7, (1, -1)), (2, 17, (-1, -1)), (5, 11, (1, -1))])
def test_scholz_pair(p, r, want):
    assert scholz_pair(p, r) == want


def test_scholz_pair_against_residue_field():
    # eps_2 = 1 + sqrt 2 and eps_5 = (1 + sqrt 5)/2 reduced at both primes above r
    for p, rs in ((2, (7, 17, 23, 31, 41, 47, 73, 89, 97)), (5, (11, 19, 29, 31, 41, 59, 61, 71, 79, 89))):
        F = MQField((p,))
        eps = F.quadratic(p, 1, 1) if p == 2 else F.quadratic(p, 1, 1, 2)
        for r in rs:
            got = sorted(F.residue_data(r).characters(F, eps))
            assert got == sorted(scholz_pair(p, r)), (p, r)


def test_find_primes():
    assert find_primes(CongruenceSpec(7, 3, 50)) == [7, 23, 31, 47]
    assert find_primes(CongruenceSpec(3, 5, 30, ((3, -1),))) == [19]
    assert find_primes(CongruenceSpec(1, 3, 16)) == []


def test_congruence_spec_rejects_even_residue():
    with pytest.raises(ValueError):
        CongruenceSpec(2, 3, 50)


def test_squarefree_part():
    assert squarefree_part(12) == 3
    assert squarefree_part(2 * 3 * 3 * 7) == 14

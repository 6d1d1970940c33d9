"""Integer kernel: primality, squares, residue symbols, prime search."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

from sympy import factorint

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n < 2**64."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= 1 << 64:
        raise ValueError("is_prime only supports n < 2**64")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sqrt_exact(n: int) -> int | None:
    """Return k with k*k == n, or None when n is not a perfect square."""
    if n < 0:
        return None
    k = isqrt(n)
    return k if k * k == n else None


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi needs odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n > 0; (a/2) follows a mod 8."""
    if n <= 0:
        raise ValueError("kronecker needs positive n")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    return result * jacobi(a, n) if n > 1 else result


def quartic_residue(a: int, p: int) -> int:
    """(a/p)_4 for p = 1 mod 4 and a a quadratic residue mod p."""
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"quartic_residue needs a prime p = 1 mod 4, got {p}")
    if jacobi(a, p) != 1:
        raise ValueError(f"{a} is not a nonzero quadratic residue mod {p}")
    v = pow(a, (p - 1) // 4, p)
    if v == 1:
        return 1
    if v == p - 1:
        return -1
    raise AssertionError("unreachable: a^((p-1)/4) must be +-1")


def quartic_at_two(p: int) -> int:
    """(p/2)_4 for p = 1 mod 8, taken as +1 iff p = 1 mod 16."""
    if p % 8 != 1:
        raise ValueError("(p/2)_4 needs p = 1 mod 8")
    return 1 if p % 16 == 1 else -1


def scholz_pair(p: int, r: int) -> tuple[int, int]:
    """Values of (eps_p / R), (eps_p / R') at the two primes above r.

    For p = 2 or p = 1 mod 4 with r split in Q(sqrt p). When the values
    differ the pair is reported as (+1, -1); which ideal carries which sign
    is a labeling convention.
    """
    if not (p == 2 or (p % 4 == 1 and is_prime(p))) or not is_prime(r) or r == 2:
        raise ValueError("scholz_pair needs p = 2 or a prime p = 1 mod 4, and an odd prime r")
    if kronecker(p, r) != 1:
        raise ValueError(f"{r} does not split in Q(sqrt {p})")
    if p == 2:
        if r % 8 == 7:
            return (1, -1)
        v = quartic_residue(2, r) * quartic_at_two(r)
        return (v, v)
    if r % 4 == 3:
        return (1, -1)
    v = quartic_residue(p, r) * quartic_residue(r, p)
    return (v, v)


@dataclass(frozen=True)
class CongruenceSpec:
    residue: int
    lower: int
    upper: int
    symbol_constraints: tuple[tuple[int, int], ...] = field(default_factory=tuple)
    modulus: int = 8

    def __post_init__(self):
        if self.modulus != 8:
            raise ValueError("modulus is fixed to 8")
        if not 0 <= self.residue < 8 or self.residue % 2 == 0:
            raise ValueError("residue must be odd and in [0, 8)")
        if self.lower < 3:
            raise ValueError("lower must be at least 3")
        for base, value in self.symbol_constraints:
            if base == 0 or value not in (1, -1):
                raise ValueError(f"bad symbol constraint {(base, value)}")


@lru_cache(maxsize=64)
def primes_upto(n: int) -> tuple[int, ...]:
    """All primes <= n (simple sieve)."""
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i in range(n + 1) if sieve[i])


def find_primes(spec: CongruenceSpec) -> list[int]:
    out = []
    for p in primes_upto(spec.upper):
        if p < spec.lower or p % 8 != spec.residue:
            continue
        if all(jacobi(b, p) == v for b, v in spec.symbol_constraints):
            out.append(p)
    return out


@lru_cache(maxsize=200_000)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as sorted (prime, exponent) pairs."""
    return tuple(sorted(factorint(n).items()))


def prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factor(abs(n)))


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factor(abs(n)))


def squarefree_part(n: int) -> int:
    """Squarefree kernel of a nonzero integer, keeping the sign."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    s = 1
    for p, e in factor(abs(n)):
        if e % 2:
            s *= p
    return s if n > 0 else -s


def squarefree_divisors(n: int) -> list[int]:
    """Positive squarefree divisors of n, ascending."""
    divs = [1]
    for p in prime_divisors(n):
        divs += [d * p for d in divs]
    return sorted(divs)


def legendre_signs(a: int, primes) -> tuple[int, ...]:
    return tuple(jacobi(a, p) for p in primes)

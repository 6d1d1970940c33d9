"""Fundamental units of real quadratic fields and square roots of units."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .arith import is_prime, is_squarefree, jacobi, sqrt_exact, squarefree_divisors, squarefree_part


@dataclass(frozen=True)
class FundamentalUnit:
    """eps_d = (x + y sqrt d) / sigma with x^2 - d y^2 = norm * sigma^2."""

    d: int
    x: int
    y: int
    sigma: int
    norm: int


@lru_cache(maxsize=None)
def fundamental_unit(d: int) -> FundamentalUnit:
    if d <= 1 or not is_squarefree(d):
        raise ValueError(f"d = {d} must be squarefree and > 1")
    # regular continued fraction of w = (P + sqrt d)/Q, a generator of the maximal order
    P, Q = (1, 2) if d % 4 == 1 else (0, 1)
    s = isqrt(d)
    a = (P + s) // Q
    h_prev, h, k_prev, k = 1, a, 0, 1
    P = a * Q - P
    Q = (d - P * P) // Q
    start = (P, Q)
    while True:
        a = (P + s) // Q
        P = a * Q - P
        Q = (d - P * P) // Q
        if (P, Q) == start:
            return _unit_from_convergent(d, h, k)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev


def _unit_from_convergent(d, h, k):
    if d % 4 == 1:
        # h/k approximates (1 + sqrt d)/2, so h - k/2 + (k/2) sqrt d is a unit
        x, y, sigma = 2 * h - k, k, 2
        if x % 2 == 0 and y % 2 == 0:
            x, y, sigma = x // 2, y // 2, 1
    else:
        x, y, sigma = h, k, 1
    nrm = x * x - d * y * y
    if nrm not in (sigma * sigma, -sigma * sigma):
        raise AssertionError(f"Pell identity failed for d={d}")
    return FundamentalUnit(d, x, y, sigma, nrm // (sigma * sigma))


class NoPatternError(ValueError):
    """None of the cataloged square systems holds for this unit."""


class AmbiguousPatternError(AssertionError):
    """More than one cataloged system holds (internal consistency failure)."""


@dataclass(frozen=True)
class SquareRootProfile:
    """sqrt(eps_d) (or sqrt(2 eps_d) when scaled) = b1 sqrt(m1) + b2 sqrt(m2).

    ``pattern`` is (delta, sign): delta * (x + sign*sigma) is a perfect square.
    """

    d: int
    shape: str
    pattern: tuple[int, int]
    b1: Fraction
    b2: Fraction
    radicands: tuple[int, int]
    scaled: bool
    gamma: int | None = None

    @property
    def label(self) -> str:
        delta, sign = self.pattern
        pre = "" if delta == 1 else str(delta)
        return f"{pre}(x{'+' if sign > 0 else '-'}1)"

    def identity(self) -> Fraction:
        """b1^2 m1 - b2^2 m2, the rational norm-type identity of the root."""
        m1, m2 = self.radicands
        return self.b1 ** 2 * m1 - self.b2 ** 2 * m2

    def expands(self) -> bool:
        """True when (b1 sqrt m1 + b2 sqrt m2)^2 reproduces eps_d (or 2 eps_d)."""
        u = fundamental_unit(self.d)
        m1, m2 = self.radicands
        rational = self.b1 ** 2 * m1 + self.b2 ** 2 * m2
        cross_sq = 4 * self.b1 ** 2 * self.b2 ** 2 * m1 * m2
        k = 2 if self.scaled else 1
        want_rat = Fraction(k * u.x, u.sigma)
        want_sq = Fraction(k * u.y, u.sigma) ** 2 * self.d
        same_sign = (self.b1 * self.b2) >= 0
        return rational == want_rat and cross_sq == want_sq and same_sign


def _roles_ok(shape: str, primes: tuple[int, ...]) -> None:
    if not all(is_prime(p) for p in primes) or len(set(primes)) != len(primes):
        raise ValueError(f"{primes} must be distinct primes")
    mod8 = [p % 8 for p in primes]
    if shape in ("q", "2q"):
        if len(primes) != 1 or primes[0] % 4 != 3:
            raise ValueError(f"shape {shape} needs one prime = 3 mod 4")
    elif shape in ("qr7", "2qr7"):
        if len(primes) != 2 or mod8 != [7, 7]:
            raise ValueError(f"shape {shape} needs q = r = 7 mod 8")
    elif shape in ("q1q2", "2q1q2"):
        if len(primes) != 2 or primes[0] % 4 != 3 or primes[1] % 8 != 3:
            raise ValueError(f"shape {shape} needs q1 = 3 mod 4, q2 = 3 mod 8")
    elif shape in ("qrs", "2qrs"):
        q, r, s = primes if len(primes) == 3 else (0, 0, 0)
        if len(primes) != 3 or mod8 != [3, 3, 7]:
            raise ValueError(f"shape {shape} needs q = r = 3, s = 7 mod 8")
        if (jacobi(q, r), jacobi(q, s), jacobi(s, r)) != (-1, -1, 1):
            raise ValueError("shape needs (q/r) = (q/s) = -1 = -(s/r)")
    else:
        raise ValueError(f"uncataloged shape {shape!r}")


def _catalog(shape: str, primes: tuple[int, ...]):
    """(d, sign, allowed deltas) for a cataloged shape."""
    if shape == "q":
        (q,) = primes
        return q, 1, {1: 0, q: 1}
    if shape == "2q":
        (q,) = primes
        return 2 * q, 1, {1: 0, 2 * q: 1}
    if shape == "qr7":
        q, r = primes
        if jacobi(r, q) != 1:
            q, r = r, q
        return q * r, 1, {2 * r: None}
    if shape == "2qr7":
        q, r = primes
        if jacobi(r, q) != 1:
            q, r = r, q
        return 2 * q * r, 1, {1: None, r: None, 2 * r: None}
    if shape == "q1q2":
        q1, q2 = primes
        g = q1 % 8 == 7
        return q1 * q2, 1, {2 * q1: 0 if g else None, q1: 0 if g else None,
                            2 * q2: 1 if g else None, q2: 1 if g else None}
    if shape == "2q1q2":
        q1, q2 = primes
        if q1 % 8 == 7:
            return 2 * q1 * q2, 1, {2 * q1: 0, q2: 1}
        return 2 * q1 * q2, 1, {2 * q1 * q2: None}
    if shape == "qrs":
        q, r, s = primes
        return q * r * s, -1, {2 * q: None, r: None, s: None}
    if shape == "2qrs":
        q, r, s = primes
        return 2 * q * r * s, -1, {s: None}
    raise ValueError(f"uncataloged shape {shape!r}")


def _square_class(n: int, d: int) -> int:
    # (x + s)(x - s) = d y^2, so the squarefree part of x +- s divides 2d
    for c in squarefree_divisors(2 * d):
        if n % c == 0 and sqrt_exact(n // c) is not None:
            return c
    return squarefree_part(n)


def _profile(d: int, shape: str, sign: int, delta: int, gamma) -> SquareRootProfile:
    u = fundamental_unit(d)
    x, sg = u.x, u.sigma
    near, far = x + sign * sg, x - sign * sg
    m1, m2 = _square_class(near, d), _square_class(far, d)
    b1, b2 = sqrt_exact(near // m1), sqrt_exact(far // m2)
    if sg == 2:
        b1, b2, scaled = Fraction(b1, 2), Fraction(b2, 2), False
    elif m1 % 2 == 0 and m2 % 2 == 0:
        m1, m2, scaled = m1 // 2, m2 // 2, False
        b1, b2 = Fraction(b1), Fraction(b2)
    else:
        b1, b2, scaled = Fraction(b1), Fraction(b2), True
    prof = SquareRootProfile(d, shape, (delta, sign), b1, b2, (m1, m2), scaled, gamma)
    if not prof.expands():
        raise AssertionError(f"square-root expansion failed for d={d}")
    return prof


def unit_sqrt_profile(shape: str, primes) -> SquareRootProfile:
    """The unique cataloged square system for eps_d and the derived root."""
    primes = tuple(primes)
    _roles_ok(shape, primes)
    d, sign, allowed = _catalog(shape, primes)
    u = fundamental_unit(d)
    if u.norm != 1:
        raise NoPatternError(f"eps_{d} has norm -1, no square root in a real field")
    value = u.x + sign * u.sigma
    holding = [c for c in squarefree_divisors(2 * d) if sqrt_exact(c * value) is not None]
    if len(holding) > 1:
        raise AmbiguousPatternError(f"systems {holding} all hold for d={d}")
    hits = [c for c in holding if c in allowed]
    if not hits:
        raise NoPatternError(f"no cataloged system holds for shape {shape} {primes}: square part {holding}")
    delta = hits[0]
    return _profile(d, shape, sign, delta, allowed[delta])


def generic_sqrt_profile(d: int) -> SquareRootProfile:
    """Root decomposition of eps_d for any d with N(eps_d) = +1 (uncataloged)."""
    u = fundamental_unit(d)
    if u.norm != 1:
        raise NoPatternError(f"eps_{d} has norm -1")
    delta = _square_class(u.x + u.sigma, d)
    return _profile(d, "generic", 1, delta, None)


def subfield_radicands(field_basis) -> set[int]:
    """Radicands of all quadratic subfields of Q(sqrt b : b in field_basis)."""
    out: set[int] = set()
    for b in field_basis:
        b = squarefree_part(b)
        out |= {squarefree_part(b * c) for c in out} | {b}
    out.discard(1)
    return out


def sqrt_unit_in_field(profile: SquareRootProfile, field_basis) -> bool:
    """Does sqrt(eps_d) lie in the multiquadratic field spanned by field_basis?"""
    subs = subfield_radicands(field_basis)
    targets = profile.radicands
    if profile.scaled:
        targets = tuple(squarefree_part(2 * m) for m in targets)
    return all(t == 1 or t in subs for t in targets)

"""2-parts of class groups of real quadratic fields via indefinite binary forms."""

from __future__ import annotations

import threading
from array import array
from dataclasses import dataclass
from math import gcd, isqrt

from .arith import factor, is_prime, is_squarefree, prime_divisors
from .quadunits import fundamental_unit

DEFAULT_DISC_CAP = 10**6


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


@dataclass(frozen=True)
class ClassGroup2:
    """2-Sylow data of the wide (and narrow) class group of Q(sqrt d)."""

    d: int
    m: int
    m_narrow: int
    invariant_factors: tuple[int, ...]
    narrow_invariant_factors: tuple[int, ...]
    two_rank: int
    four_rank: int
    narrow_two_rank: int
    h: int
    h_narrow: int

    @property
    def h2(self) -> int:
        return 1 << self.m


def field_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return D > 1 and is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


_SPF = array("I", [0, 1])
_SPF_MAX = 1 << 22


def _spf_upto(n: int) -> array:
    """Smallest-prime-factor table, grown on demand."""
    global _SPF
    if len(_SPF) <= n:
        size = min(max(n + 1, 2 * len(_SPF)), _SPF_MAX + 1)
        spf = array("I", range(size))
        for i in range(2, isqrt(size - 1) + 1):
            if spf[i] == i:
                for j in range(i * i, size, i):
                    if spf[j] == j:
                        spf[j] = i
        _SPF = spf
    return _SPF


def _divisors(n: int) -> list[int]:
    if n > _SPF_MAX:
        pe = factor(n)
    else:
        spf = _spf_upto(n)
        pe, m = {}, n
        while m > 1:
            p = spf[m]
            pe[p] = pe.get(p, 0) + 1
            m //= p
        pe = pe.items()
    divs = [1]
    for p, e in pe:
        divs = [x * p**k for x in divs for k in range(e + 1)]
    return divs


def is_reduced(f: tuple[int, int, int], D: int) -> bool:
    a, b, _ = f
    if b <= 0 or b * b >= D:
        return False
    A = 2 * abs(a)
    return (A + b) ** 2 > D and (A - b < 0 or (A - b) ** 2 < D)


def rho(f: tuple[int, int, int], D: int, s: int) -> tuple[int, int, int]:
    """One reduction step (a, b, c) -> (c, b', c'), properly equivalent."""
    _, b, c = f
    ac = abs(c)
    if c * c > D:
        t = (-b) % (2 * ac)
        if t > ac:
            t -= 2 * ac
    else:
        t = -b + 2 * ac * ((s + b) // (2 * ac))
    return c, t, (t * t - D) // (4 * c)


def reduce_form(f: tuple[int, int, int], D: int, s: int) -> tuple[int, int, int]:
    while not is_reduced(f, D):
        f = rho(f, D, s)
    return f


def compose(f1, f2, D: int) -> tuple[int, int, int]:
    """Dirichlet composition of two primitive forms of discriminant D."""
    a1, b1, _ = f1
    a2, b2, _ = f2
    beta = (b1 + b2) // 2
    g1, u1, v1 = _egcd(a1, a2)
    e, x, w = _egcd(g1, beta)
    u, v = x * u1, x * v1
    a3 = a1 * a2 // (e * e)
    b3 = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2) // e
    m = 2 * abs(a3)
    b3 %= m
    c3 = (b3 * b3 - D) // (4 * a3)
    return a3, b3, c3


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class FormClassGroup:
    """Narrow class group of discriminant D as rho-cycles of reduced forms."""

    def __init__(self, D: int):
        if not is_fundamental(D) or D <= 0:
            raise ValueError(f"{D} is not a positive fundamental discriminant")
        self.D = D
        self.s = isqrt(D)
        self.cycle_of: dict[tuple[int, int, int], int] = {}
        self.cycles: list[list[tuple[int, int, int]]] = []
        for f in self._reduced_forms():
            if f in self.cycle_of:
                continue
            cid = len(self.cycles)
            cyc = []
            g = f
            while True:
                self.cycle_of[g] = cid
                cyc.append(g)
                g = rho(g, D, self.s)
                if g == f:
                    break
                if g in self.cycle_of:
                    raise AssertionError("rho orbit entered another cycle")
            self.cycles.append(cyc)
        b0 = D % 2
        self.identity = self.classify((1, b0, (b0 * b0 - D) // 4))
        self.minus_one = self.classify((-1, b0, (D - b0 * b0) // 4))

    def _reduced_forms(self):
        D, s = self.D, self.s
        for b in range(2 - D % 2 if D % 2 == 0 else 1, s + 1, 2):
            n = (D - b * b) // 4
            if n <= 0:
                continue
            lo, hi = (s - b) // 2, (s + b) // 2 + 1  # reduced forms have |a| in this window
            for a in sorted(x for x in _divisors(n) if lo <= x <= hi):
                for sa in (a, -a):
                    f = (sa, b, -n // sa)
                    if is_reduced(f, D):
                        yield f

    @property
    def order(self) -> int:
        return len(self.cycles)

    def classify(self, f) -> int:
        return self.cycle_of[reduce_form(tuple(f), self.D, self.s)]

    def rep(self, cid: int) -> tuple[int, int, int]:
        return self.cycles[cid][0]

    def mul(self, i: int, j: int) -> int:
        return self.classify(compose(self.rep(i), self.rep(j), self.D))

    def two_sylow_counts(self, modulo_minus_one: bool) -> list[int]:
        """log2 of |H[2^k]| for k = 0, 1, ... until it stabilizes."""
        sub = {self.identity}
        if modulo_minus_one:
            sub.add(self.minus_one)
        sq = [self.mul(i, i) for i in range(self.order)]
        current = list(range(self.order))
        counts = []
        while True:
            size = sum(1 for x in current if x in sub) // len(sub)
            counts.append(size.bit_length() - 1)
            if size & (size - 1):
                raise AssertionError("2-torsion count is not a power of two")
            if len(counts) > 1 and counts[-1] == counts[-2]:
                return counts[:-1]
            current = [sq[x] for x in current]


def _factors_from_counts(counts: list[int]) -> tuple[int, ...]:
    ge = [counts[k] - counts[k - 1] for k in range(1, len(counts))]
    out = []
    for j in range(1, len(counts)):
        exact = ge[j - 1] - (ge[j] if j < len(ge) else 0)
        out += [1 << j] * exact
    return tuple(sorted(out))


_MEMO: dict[int, ClassGroup2] = {}
_LOCK = threading.Lock()


def narrow_class_number(D: int) -> int:
    return FormClassGroup(D).order


def h2_wide(d: int, disc_cap: int | None = None) -> ClassGroup2:
    """2-part of the class group of Q(sqrt d), wide and narrow."""
    if d <= 1 or not is_squarefree(d):
        raise ValueError(f"d = {d} must be squarefree and > 1")
    cap = DEFAULT_DISC_CAP if disc_cap is None else disc_cap
    D = field_discriminant(d)
    if D > cap:
        raise ValueError(f"discriminant {D} exceeds the cap {cap}")
    hit = _MEMO.get(d)
    if hit is not None:
        return hit
    G = FormClassGroup(D)
    narrow = _factors_from_counts(G.two_sylow_counts(False))
    wide = _factors_from_counts(G.two_sylow_counts(True))
    norm = fundamental_unit(d).norm
    if (G.identity == G.minus_one) != (norm == -1):
        raise AssertionError(f"class of -1 form disagrees with N(eps_{d}) = {norm}")
    h_narrow = G.order
    h = h_narrow if norm == -1 else h_narrow // 2
    res = ClassGroup2(
        d=d,
        m=sum(f.bit_length() - 1 for f in wide),
        m_narrow=sum(f.bit_length() - 1 for f in narrow),
        invariant_factors=wide,
        narrow_invariant_factors=narrow,
        two_rank=len(wide),
        four_rank=sum(1 for f in wide if f >= 4),
        narrow_two_rank=len(narrow),
        h=h,
        h_narrow=h_narrow,
    )
    if 1 << res.m != h & -h:
        raise AssertionError(f"2-Sylow order disagrees with h = {h} for d = {d}")
    with _LOCK:
        _MEMO[d] = res
    return res


def h2(d: int, disc_cap: int | None = None) -> int:
    """2-part of the (wide) class number; Q itself counts as 1."""
    return 1 if d == 1 else h2_wide(d, disc_cap).h2


def lemma_quad_odd(d: int) -> bool:
    """Odd class number list: 2, p = 1 mod 4, q, 2q, q1 q2 (q's = 3 mod 4)."""
    ps = prime_divisors(d)
    if d == 2 or (len(ps) == 1 and d % 4 == 1 and is_prime(d)):
        return True
    odd = [p for p in ps if p != 2]
    if not all(p % 4 == 3 for p in odd):
        return False
    if d % 2 == 0:
        return len(odd) == 1
    return len(odd) in (1, 2)


def parity_table_check(d: int, disc_cap: int | None = None) -> bool:
    """Agreement between the computed parity of h(d) and the odd-class list."""
    return (h2_wide(d, disc_cap).m == 0) == lemma_quad_odd(d)

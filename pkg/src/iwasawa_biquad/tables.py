"""Closed-form 2-rank tables for fields of forms A, B, C at levels 0 and 1.

Each table row pairs a predicate on the prime roles with the rank it
asserts. Rows with "after a suitable permutation" semantics are tried on
every ordering of the primes. Lookups return a :class:`TableValue`, which
is an exact rank or an interval when the table only bounds it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Callable

from .arith import jacobi


@dataclass(frozen=True)
class TableValue:
    lo: int
    hi: int | None
    source: str

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, rank: int) -> bool:
        return rank >= self.lo and (self.hi is None or rank <= self.hi)

    def __str__(self):
        if self.exact:
            return str(self.lo)
        return f"[{self.lo},{'inf' if self.hi is None else self.hi}]"


def _exact(v: int, src: str) -> TableValue:
    return TableValue(v, v, src)


class Roles:
    """Symbol oracle for one base: ``sym(p)`` is (base/p), ``q8`` the base prime mod 8."""

    def __init__(self, base: int, q8: int, q1: int | None = None):
        self.base = base
        self.q8 = q8
        self.q1 = q1

    def sym(self, p: int) -> int:
        return jacobi(self.base, p)

    def s1(self, p: int) -> int:
        """(q1/p) for form C."""
        return jacobi(self.q1, p)


Row = tuple[str, Callable[..., bool]]


def _first(rows: list[Row], primes, c: Roles, permute: bool = True) -> str | None:
    orders = permutations(primes) if permute else [tuple(primes)]
    for order in orders:
        for label, pred in rows:
            if pred(*order, c):
                return label
    return None


def _m(p: int) -> int:
    return p % 8


# --- level 0, forms A and B --------------------------------------------------
def _in_P(p: int, c: Roles) -> bool:
    return p % 8 == 1 and c.sym(p) == 1


_A0_RS_RANK1: list[Row] = [
    ("C1", lambda r, s, c: c.sym(r) == c.sym(s) == -1),
    ("C2", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _m(s) != 1),
    ("C3", lambda r, s, c: c.sym(r) == c.sym(s) == 1
     and ((_m(r) == 7 and _m(s) in (3, 5)) or (_m(r) == 3 and _m(s) == 5))),
]

_B0_RS_RANK1: list[Row] = [
    ("C1", lambda r, s, c: c.sym(r) == c.sym(s) == -1),
    ("C2", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _m(s) != 1),
    ("C3", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _m(r) == 7 and _m(s) == 3),
]

# (-1/r) = (2/r) = -1 means r = 3 mod 8; (-1/s) != (2/s) means s = 5 or 7 mod 8
_AB0_RST_RANK2: list[Row] = [
    ("C1", lambda r, s, t, c: c.sym(r) == c.sym(s) == 1 and c.sym(t) == -1
     and _m(r) == 3 and _m(s) in (5, 7)),
    ("C2", lambda r, s, t, c: c.sym(r) == 1 and c.sym(s) == c.sym(t) == -1 and _m(r) != 1),
    ("C3", lambda r, s, t, c: c.sym(r) == c.sym(s) == c.sym(t) == -1),
]


def level0_AB(form: str, c: Roles, q: int, primes: tuple[int, ...]) -> TableValue:
    """Rank of A(K) for K = Q(sqrt q, sqrt d) (form A) or Q(sqrt 2q, sqrt d) (form B).

    ``c.sym`` must be (q/.) for form A and (2q/.) for form B; ``primes`` are
    the primes of d other than q.
    """
    tag = f"L0-{form}"
    n = len(primes)
    if n == 1:
        (r,) = primes
        one = jacobi(q, r) == 1 and r % 8 == 1
        return _exact(int(one), f"{tag} item1")
    if n == 2:
        qc = Roles(q, q % 8)
        if all(_in_P(p, qc) for p in primes):
            return TableValue(3, None, f"{tag} item2 excluded pair")
        rows = _A0_RS_RANK1 if form == "A" else _B0_RS_RANK1
        lab = _first(rows, primes, c)
        return _exact(1, f"{tag} item2 {lab}") if lab else _exact(2, f"{tag} item2 other")
    if n == 3:
        lab = _first(_AB0_RST_RANK2, primes, c)
        return _exact(2, f"{tag} item3 {lab}") if lab else TableValue(3, None, f"{tag} item3 other")
    return TableValue(3, None, f"{tag} t>5")


# --- level 0, form C ---------------------------------------------------------
def _c_all_plus(p, c):
    return c.sym(p) == 1 and c.s1(p) == 1 and jacobi(-1, p) == 1


_C0_RS_RANK1: list[Row] = [
    ("C1", lambda r, s, c: c.sym(r) == c.sym(s) == -1),
    ("C2", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1
     and not (c.s1(s) == jacobi(-1, s) == 1)),
    ("C3", lambda r, s, c: c.sym(r) == c.sym(s) == 1
     and (c.s1(r) == -1 or c.s1(s) == -1)
     and (jacobi(-1, r) == -1 or jacobi(-1, s) == -1)
     and (c.s1(r) * jacobi(-1, r) == -1 or c.s1(s) * jacobi(-1, s) == -1)),
]

_C0_RST_RANK2: list[Row] = [
    ("C1", lambda r, s, t, c: c.sym(r) == c.sym(s) == c.sym(t) == -1),
    ("C2", lambda r, s, t, c: c.sym(r) == -1 and c.sym(s) == 1 and c.sym(t) == -1
     and not (c.s1(s) == jacobi(-1, s) == 1)),
]


def level0_C(c: Roles, primes: tuple[int, ...]) -> TableValue:
    """Rank of A(K), K = Q(sqrt q1q2, sqrt delta*prod(primes)); ``c.sym`` = (q1q2/.)."""
    n = len(primes)
    if n == 1:
        (r,) = primes
        return _exact(int(_c_all_plus(r, c)), "L0-C item1")
    if n == 2:
        if all(_c_all_plus(p, c) for p in primes):
            return TableValue(3, None, "L0-C item2 excluded pair")
        lab = _first(_C0_RS_RANK1, primes, c)
        return _exact(1, f"L0-C item2 {lab}") if lab else _exact(2, "L0-C item2 other")
    if n == 3:
        lab = _first(_C0_RST_RANK2, primes, c)
        return _exact(2, f"L0-C item3 {lab}") if lab else TableValue(3, None, "L0-C item3 other")
    return TableValue(3, None, "L0-C t>5")


# --- level 1 over Q(sqrt 2, sqrt q) -----------------------------------------
def _mm(p, *allowed):
    return p % 8 in allowed


_A1_RS_RANK1: list[Row] = [
    ("C1a", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 5) and _mm(s, 3)),
    ("C1b", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3, 5) and _mm(s, 7) and c.q8 == 3),
    ("C2a", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 5) and _mm(s, 5, 3)),
    ("C2b", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3) and _mm(s, 3) and c.q8 == 7),
    ("C2c", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3) and _mm(s, 5)),
    ("C2d", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 7) and _mm(s, 3, 5) and c.q8 == 3),
    ("C2e", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3, 5) and _mm(s, 7) and c.q8 == 3),
    ("C3a", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 7) and _mm(s, 3, 5) and c.q8 == 3),
    ("C3b", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 3) and _mm(s, 5)),
]

_A1_RS_RANK2: list[Row] = [
    ("C1a", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3, 5) and _mm(s, 7) and c.q8 == 7),
    ("C1b", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3, 5) and r % 8 == s % 8),
    ("C1c", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3, 5) and _mm(s, 1)),
    ("C1d", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 7) and _mm(s, 7, 1) and c.q8 == 3),
    ("C2a", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 7) and _mm(s, 7) and c.q8 == 3),
    ("C2b", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3) and _mm(s, 3) and c.q8 == 3),
    ("C2c", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 1) and _mm(s, 7) and c.q8 == 3),
    ("C2d", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 1) and _mm(s, 3, 5)),
    ("C2e", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 7) and _mm(s, 3, 5) and c.q8 == 7),
    ("C2f", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3, 5) and _mm(s, 7) and c.q8 == 7),
    ("C3a", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 3, 5) and r % 8 == s % 8),
    ("C3b", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 7) and _mm(s, 3, 5) and c.q8 == 7),
]


def _pair(s, t, a, b):
    return {s % 8, t % 8} == {a, b} and sorted((s % 8, t % 8)) == sorted((a, b))


# three-prime rows: (label, symbol pattern predicate, rank rows, default)
def _three_prime_A1(r, s, t, c: Roles) -> TableValue | None:
    q8 = c.q8
    sy = (c.sym(r), c.sym(s), c.sym(t))
    src = "L1-A three-prime"
    if sy == (1, 1, -1) and _mm(r, 3) and _mm(s, 5):
        ok = _mm(t, 5) or (_mm(t, 3) and q8 == 7) or (_mm(t, 7) and q8 == 3)
        return _exact(2 if ok else 3, f"{src} item1")
    if sy == (1, 1, -1) and _mm(r, 3) and _mm(s, 7):
        four = (_mm(t, 1) and q8 == 7) or (_mm(t, 7) and q8 == 7)
        return _exact(4 if four else 3, f"{src} item2")
    if sy == (1, -1, -1) and _mm(r, 7):
        if q8 == 7 and (_pair(s, t, 1, 1) or _pair(s, t, 7, 7)):
            return _exact(5, f"{src} item3")
        threes = [(3, 3), (5, 5), (3, 5), (7, 5), (1, 5), (7, 3), (1, 3)]
        if q8 == 3 and any(_pair(s, t, a, b) for a, b in threes):
            return _exact(3, f"{src} item3")
        return _exact(4, f"{src} item3")
    if sy == (1, -1, -1) and _mm(r, 5):
        if _pair(s, t, 3, 5) or (_pair(s, t, 7, 3) and q8 == 3):
            return _exact(2, f"{src} item4")
        if _pair(s, t, 1, 1) or (q8 == 7 and (_pair(s, t, 7, 1) or _pair(s, t, 7, 7))):
            return _exact(4, f"{src} item4")
        return _exact(3, f"{src} item4")
    if sy == (1, -1, -1) and _mm(r, 3):
        if (_pair(s, t, 3, 5) and q8 == 7) or (_pair(s, t, 5, 7) and q8 == 3):
            return _exact(2, f"{src} item5")
        if (_pair(s, t, 1, 1) or (q8 == 7 and (_pair(s, t, 7, 7) or _pair(s, t, 7, 1)))
                or (_pair(s, t, 3, 3) and q8 == 3)):
            return _exact(4, f"{src} item5")
        return _exact(3, f"{src} item5")
    if sy == (-1, -1, -1):
        if q8 == 3 and sorted(p % 8 for p in (r, s, t)) == [3, 5, 7]:
            return _exact(2, f"{src} item6")
        return TableValue(3, 5, f"{src} item6")
    return None


# conditions on (q/.) with q mod 8, for base 2q fields of level-0 rank 2
_B1_RST_RANK2: list[Row] = [
    ("1a", lambda r, s, t, c: _mm(r, 3) and _mm(s, 5) and _mm(t, 3) and c.q8 == 7
     and (c.sym(r), c.sym(s), c.sym(t)) == (-1, -1, 1)),
    ("1b", lambda r, s, t, c: _mm(r, 3) and _mm(s, 5) and _mm(t, 5)
     and (c.sym(r), c.sym(s), c.sym(t)) == (-1, -1, 1)),
    ("1c", lambda r, s, t, c: _mm(r, 3) and _mm(s, 5) and _mm(t, 7) and c.q8 == 3
     and (c.sym(r), c.sym(s), c.sym(t)) == (-1, -1, -1)),
    ("2a", lambda r, s, t, c: _mm(r, 3) and _mm(s, 3) and _mm(t, 5) and c.q8 == 7
     and (c.sym(r), c.sym(s), c.sym(t)) == (-1, 1, 1)),
    ("2b", lambda r, s, t, c: _mm(r, 3) and _mm(s, 7) and _mm(t, 5) and c.q8 == 3
     and (c.sym(r), c.sym(s), c.sym(t)) == (-1, -1, 1)),
    ("2c", lambda r, s, t, c: _mm(r, 5) and _mm(s, 3) and _mm(t, 5)
     and (c.sym(r), c.sym(s), c.sym(t)) == (-1, 1, 1)),
    ("2d", lambda r, s, t, c: _mm(r, 5) and _mm(s, 7) and _mm(t, 3) and c.q8 == 3
     and (c.sym(r), c.sym(s), c.sym(t)) == (-1, -1, 1)),
    ("3", lambda r, s, t, c: _mm(r, 3) and _mm(s, 7) and _mm(t, 5) and c.q8 == 3
     and (c.sym(r), c.sym(s), c.sym(t)) == (1, -1, 1)),
]


def level1_q(q: int, primes: tuple[int, ...]) -> list[TableValue]:
    """Rank of A(K_1), K_1 = Q(sqrt 2, sqrt q, sqrt d), d the product of ``primes``.

    Several statements can speak about the same field; every applicable
    one is returned so callers can check all of them.
    """
    c = Roles(q, q % 8)
    n = len(primes)
    out: list[TableValue] = []
    if n == 1:
        (r,) = primes
        zero = _mm(r, 3, 5) or (_mm(r, 7) and q % 8 == 3)
        out.append(_exact(0 if zero else 1, "L1-A item1"))
    elif n == 2:
        lab = _first(_A1_RS_RANK1, primes, c)
        if lab:
            out.append(_exact(1, f"L1-A item2 rank1 {lab}"))
        else:
            lab = _first(_A1_RS_RANK2, primes, c)
            out.append(_exact(2, f"L1-A item2 rank2 {lab}") if lab else TableValue(3, 4, "L1-A item2 other"))
    elif n == 3:
        # three-prime statements apply to fields whose level-0 rank is 2
        if _first(_AB0_RST_RANK2, primes, c):
            for order in permutations(primes):
                v = _three_prime_A1(*order, c)
                if v is not None:
                    out.append(v)
                    break
        c2 = Roles(2 * q, q % 8)
        if _first(_AB0_RST_RANK2, primes, c2):
            lab = _first(_B1_RST_RANK2, primes, c)
            out.append(_exact(2, f"L1-B three-prime {lab}") if lab
                       else TableValue(3, None, "L1-B three-prime other"))
    return out


# --- level 1 over Q(sqrt 2, sqrt q1q2) ---------------------------------------
def _q1_7_or(c: Roles, cond: bool) -> bool:
    return c.q8 == 3 or (c.q8 == 7 and cond)


_C1_RS_RANK1: list[Row] = [
    ("C1a", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 5) and _mm(s, 3)
     and _q1_7_or(c, c.s1(r) == -1)),
    ("C1b", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3) and _mm(s, 3)
     and c.q8 == 7 and c.s1(r) != c.s1(s)),
    ("C1c", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3) and _mm(s, 7) and c.q8 == 3),
    ("C2a", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3) and _mm(s, 3)
     and c.q8 == 7 and c.s1(r) != c.s1(s)),
    ("C2b", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3) and _mm(s, 5)
     and c.q8 == 7 and c.s1(s) == -1),
    ("C2c", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 5) and _mm(s, 3)
     and _q1_7_or(c, c.s1(r) == -1)),
    ("C3a", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 3) and _mm(s, 3)
     and c.q8 == 7 and c.s1(r) != c.s1(s)),
    ("C3b", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 5) and _mm(s, 3)
     and c.q8 == 7 and c.s1(r) == -1),
]

_C1_RS_RANK2: list[Row] = [
    ("C1a", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 5) and _mm(s, 3)
     and c.q8 == 7 and c.s1(r) == 1),
    ("C1b", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 5) and _mm(s, 5)
     and _q1_7_or(c, c.s1(r) == -1 or c.s1(s) == -1)),
    ("C1c", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3) and _mm(s, 3)
     and _q1_7_or(c, c.s1(r) == c.s1(s))),
    ("C1d", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3) and _mm(s, 7) and c.q8 == 7),
    ("C1e", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 5) and _mm(s, 7)
     and _q1_7_or(c, c.s1(r) == -1)),
    ("C1f", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 5) and _mm(s, 1)
     and _q1_7_or(c, c.s1(r) == -1)),
    ("C1g", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 3) and _mm(s, 1)),
    ("C1h", lambda r, s, c: c.sym(r) == c.sym(s) == -1 and _mm(r, 7) and _mm(s, 7, 1) and c.q8 == 3),
    ("C2a", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 7, 1) and _mm(s, 7) and c.q8 == 3),
    ("C2b", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 5) and _mm(s, 5)
     and _q1_7_or(c, c.s1(r) == -1 or c.s1(s) == -1)),
    ("C2c", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3) and _mm(s, 3)
     and _q1_7_or(c, c.s1(r) == c.s1(s))),
    ("C2d", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 3) and _mm(s, 5)
     and _q1_7_or(c, c.s1(s) == 1)),
    ("C2e", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 5) and _mm(s, 3)
     and c.q8 == 7 and c.s1(r) == 1),
    ("C2f", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 1) and _mm(s, 5)
     and c.q8 == 7 and c.s1(s) == -1),
    ("C2g", lambda r, s, c: c.sym(r) == -1 and c.sym(s) == 1 and _mm(r, 1) and _mm(s, 3)),
    ("C3a", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 7) and _mm(s, 5)
     and _q1_7_or(c, c.s1(s) == -1)),
    ("C3b", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 7) and _mm(s, 3)
     and _q1_7_or(c, c.s1(r) != c.s1(s))),
    ("C3c", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 3) and _mm(s, 3)
     and _q1_7_or(c, c.s1(r) == c.s1(s))),
    ("C3d", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 5) and _mm(s, 5)
     and c.q8 == 7 and (c.s1(r) == -1 or c.s1(s) == -1)),
    ("C3e", lambda r, s, c: c.sym(r) == c.sym(s) == 1 and _mm(r, 5) and _mm(s, 3)
     and _q1_7_or(c, c.s1(r) == 1)),
]


def level1_q1q2(q1: int, q2: int, primes: tuple[int, ...]) -> list[TableValue]:
    """Rank of A(K_1), K_1 = Q(sqrt 2, sqrt q1q2, sqrt d)."""
    c = Roles(q1 * q2, q1 % 8, q1)
    n = len(primes)
    if n == 1:
        (r,) = primes
        zero = (_mm(r, 3) or (_mm(r, 5) and q1 % 8 == 7 and c.s1(r) == -1)
                or (_mm(r, 5) and q1 % 8 == 3 and c.sym(r) == -1) or (_mm(r, 7) and q1 % 8 == 3))
        return [_exact(0 if zero else 1, "L1-C item1")]
    if n == 2:
        lab = _first(_C1_RS_RANK1, primes, c)
        if lab:
            return [_exact(1, f"L1-C item2 rank1 {lab}")]
        lab = _first(_C1_RS_RANK2, primes, c)
        return [_exact(2, f"L1-C item2 rank2 {lab}") if lab else TableValue(3, 4, "L1-C item2 other")]
    if n == 3:
        pats = sorted(c.sym(p) for p in primes)
        if pats in ([-1, -1, -1], [-1, -1, 1]):
            return [TableValue(3, 5, "L1-C item3 bounded")]
    return []

"""Odd class number criteria, form detection (A-F), and the 29-item classifier.

The item list is data: every row carries its case id, sub-condition label,
the predicate on the prime roles and the predicted rank of A(K_inf).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import permutations
from typing import Callable

from .arith import is_prime, jacobi, prime_divisors, quartic_at_two, quartic_residue, squarefree_part
from .fields import BiquadField
from .formclass import lemma_quad_odd
from .genus2rank import RankResult, RelativeQuadExt, make_ext, rank_A

SUPPORTED = ("A", "B", "C")


class UnsupportedForm(ValueError):
    pass


class ExcludedField(ValueError):
    pass


class ClassifierTie(AssertionError):
    pass


def quad_odd(d: int) -> bool:
    """Q(sqrt d) has odd class number."""
    return lemma_quad_odd(d)


def _is_q(n: int) -> bool:
    return is_prime(n) and n % 4 == 3


def _is_p(n: int) -> bool:
    return is_prime(n) and n % 4 == 1


def _q_pair(n: int) -> tuple[int, int] | None:
    ps = prime_divisors(n)
    if len(ps) == 2 and ps[0] * ps[1] == n and all(p % 4 == 3 for p in ps):
        return ps
    return None


def _quartic_pair_differs(p1: int, p2: int) -> bool:
    """(p1/p2)_4 != (p2/p1)_4, with (p/2)_4 = +1 iff p = 1 mod 16."""
    if p1 == 2:
        return quartic_residue(2, p2) != quartic_at_two(p2)
    if p2 == 2:
        return _quartic_pair_differs(p2, p1)
    return quartic_residue(p1, p2) != quartic_residue(p2, p1)


def biquad_odd(K: BiquadField) -> bool:
    """K has odd class number, by the five-form list (p1 = 2 allowed in the last form)."""
    rads = K.canonical
    for a in rads:
        for b in rads:
            if a == b:
                continue
            if (a == 2 and _is_q(b)) or (_is_q(a) and _is_q(b)):
                return True
            if (_is_q(a) or (a % 2 == 0 and _is_q(a // 2))) and _is_p(b):
                q = a if a % 2 else a // 2
                if jacobi(b, q) == -1 or b % 8 == 5:
                    return True
            pair = _q_pair(b)
            if a == 2 and pair and any(x % 8 == 3 for x in pair):
                return True
            if _is_p(a) and pair and any(jacobi(x, a) == -1 for x in pair):
                return True
            if (a == 2 or _is_p(a)) and _is_p(b):
                if jacobi(a, b) == -1 or _quartic_pair_differs(a, b):
                    return True
    return False


# --- forms --------------------------------------------------------------------
@dataclass(frozen=True)
class FormMatch:
    form: str
    roles: tuple[tuple[str, int], ...]
    d: int
    primes: tuple[int, ...]

    @property
    def role_map(self) -> dict[str, int]:
        return dict(self.roles)

    @property
    def supported(self) -> bool:
        return self.form in SUPPORTED


def _others(K: BiquadField, x: int) -> list[int]:
    return [y for y in K.canonical if y != x]


def qo_forms(K: BiquadField) -> list[FormMatch]:
    """Every presentation of K in the catalog, forms A-F, in a fixed order."""
    out: list[FormMatch] = []
    rads = K.canonical
    for q in rads:
        if _is_q(q):
            for d in _others(K, q):
                if d % 2 and d % q:
                    out.append(FormMatch("A", (("q", q),), d, tuple(p for p in prime_divisors(d))))
    for x in rads:
        if x % 2 == 0 and _is_q(x // 2):
            q = x // 2
            for d in _others(K, x):
                if d % 4 == 1:
                    delta = q if d % q == 0 else 1
                    out.append(FormMatch("B", (("q", q), ("delta", delta)), d,
                                         tuple(p for p in prime_divisors(d) if p != q)))
    for x in rads:
        pair = _q_pair(x)
        if not pair:
            continue
        a, b = pair
        if b % 8 == 3 and a % 8 == 3:
            q1, q2 = b, a  # both 3 mod 8: q2 is the smaller
        elif b % 8 == 3:
            q1, q2 = a, b
        elif a % 8 == 3:
            q1, q2 = b, a
        else:
            continue
        cands = sorted(d for d in _others(K, x) if d % 4 == 1 and d % x)
        if cands:
            d = cands[0]
            delta = next((p for p in (q1, q2) if d % p == 0), 1)
            out.append(FormMatch("C", (("q1", q1), ("q2", q2), ("delta", delta)), d,
                                 tuple(p for p in prime_divisors(d) if p not in (q1, q2))))
        threes = [d for d in _others(K, x) if d % x and (d % 4 == 3 or d % 2 == 0)]
        if threes:
            tag = "D" if (q1 % 8 == 7 or q2 % 8 == 7) else "E"
            if tag == "D" or (q1 % 8 == 3 and q2 % 8 == 3):
                out.append(FormMatch(tag, (("q1", q1), ("q2", q2)), min(threes), ()))
    for p in rads:
        if not _is_p(p):
            continue
        for d in _others(K, p):
            if _f_condition(p, d):
                out.append(FormMatch("F", (("p", p),), d, ()))
    return out


def _f_condition(p: int, d: int) -> bool:
    pair = _q_pair(d)
    if pair:
        q1, q2 = pair
        return (jacobi(q2, p) == -1 or jacobi(q1, p) == -1) or q2 % 8 == 3 or q1 % 8 == 3
    if _is_q(d):
        return jacobi(p, d) == -1 or p % 8 == 5
    if _is_p(d):
        return jacobi(p, d) == -1 or quartic_residue(p, d) != quartic_residue(d, p)
    return False


def qo_form(K: BiquadField) -> FormMatch | None:
    forms = qo_forms(K)
    return forms[0] if forms else None


def is_L_type(K: BiquadField) -> bool:
    """K = Q(sqrt delta0, sqrt r) or Q(sqrt delta0, sqrt rs), r = 1 mod 8, (delta0/r) = 1."""
    for d0 in K.canonical:
        if not (_is_q(d0) or _q_pair(d0)):
            continue
        for d in _others(K, d0):
            ps = prime_divisors(d)
            if len(ps) not in (1, 2) or d % 2 == 0 or any(d0 % p == 0 for p in ps):
                continue
            if any(p % 8 == 1 and jacobi(d0, p) == 1 for p in ps):
                return True
    return False


def is_L1_type(K: BiquadField) -> bool:
    """K_1 = K(sqrt 2) equals L_1 for some L-type field L."""
    a, b = K.level_one_gens()[1:]
    for x in (a, squarefree_part(2 * a)):
        for y in (b, squarefree_part(2 * b)):
            if x != y and squarefree_part(x * y) != 1 and is_L_type(BiquadField(x, y)):
                return True
    return False


# --- the classifier ----------------------------------------------------------------
@dataclass(frozen=True)
class Ctx:
    form: str
    q: int = 0
    q1: int = 0
    q2: int = 0

    @property
    def q8(self) -> int:
        return (self.q or self.q1) % 8

    def J(self, p: int) -> int:
        """(q/p) for forms A, B; (q1q2/p) for form C."""
        return jacobi(self.q if self.q else self.q1 * self.q2, p)

    def J1(self, p: int) -> int:
        return jacobi(self.q1, p)


@dataclass(frozen=True)
class Item:
    case_id: int
    form: str
    nprimes: int
    pred: int
    conds: tuple[tuple[str, Callable[..., bool]], ...]
    delta_q: bool | None = None  # form B: d divisible by q


def m8(p, *vals):
    return p % 8 in vals


def _A(cid, n, pred, *conds):
    return Item(cid, "A", n, pred, tuple(conds))


def _B(cid, n, pred, dq, *conds):
    return Item(cid, "B", n, pred, tuple(conds), dq)


def _C(cid, n, pred, *conds):
    return Item(cid, "C", n, pred, tuple(conds))


ITEMS: tuple[Item, ...] = (
    _A(1, 1, 0,
       ("C1", lambda c, r: m8(r, 3, 5)),
       ("C2", lambda c, r: m8(r, 7) and c.q8 == 3)),
    _A(2, 2, 1,
       ("C1", lambda c, r, s: c.J(r) == c.J(s) == -1 and m8(r, 5) and m8(s, 3)),
       ("C2", lambda c, r, s: c.J(r) == c.J(s) == -1 and m8(r, 3, 5) and m8(s, 7) and c.q8 == 3)),
    _A(3, 2, 1,
       ("C1", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 5) and m8(s, 5, 3)),
       ("C2", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3) and m8(s, 3) and c.q8 == 7),
       ("C3", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3) and m8(s, 5)),
       ("C4", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 7) and m8(s, 3, 5) and c.q8 == 3),
       ("C5", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3, 5) and m8(s, 7) and c.q8 == 3)),
    _A(4, 2, 1,
       ("C1", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 7) and m8(s, 3, 5) and c.q8 == 3),
       ("C2", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 3) and m8(s, 5))),
    _A(5, 2, 2,
       ("", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 3, 5) and r % 8 == s % 8)),
    _A(6, 3, 2,
       ("C1", lambda c, r, s, t: m8(r, 3) and m8(s, 5) and (c.J(r), c.J(s), c.J(t)) == (1, 1, -1) and m8(t, 5)),
       ("C2", lambda c, r, s, t: m8(r, 3) and m8(s, 5) and (c.J(r), c.J(s), c.J(t)) == (1, 1, -1)
        and m8(t, 3) and c.q8 == 7),
       ("C3", lambda c, r, s, t: m8(r, 3) and m8(s, 5) and (c.J(r), c.J(s), c.J(t)) == (1, 1, -1)
        and m8(t, 7) and c.q8 == 3)),
    _A(7, 3, 2,
       ("C1", lambda c, r, s, t: m8(r, 5) and (c.J(r), c.J(s), c.J(t)) == (1, -1, -1) and m8(s, 3) and m8(t, 5)),
       ("C2", lambda c, r, s, t: m8(r, 5) and (c.J(r), c.J(s), c.J(t)) == (1, -1, -1)
        and m8(s, 7) and m8(t, 3) and c.q8 == 3)),
    _A(8, 3, 2,
       ("C1", lambda c, r, s, t: m8(r, 3) and (c.J(r), c.J(s), c.J(t)) == (1, -1, -1)
        and m8(s, 3) and m8(t, 5) and c.q8 == 7),
       ("C2", lambda c, r, s, t: m8(r, 3) and (c.J(r), c.J(s), c.J(t)) == (1, -1, -1)
        and m8(s, 5) and m8(t, 7) and c.q8 == 3)),
    _A(9, 3, 2,
       ("", lambda c, r, s, t: c.q8 == 3 and m8(r, 3) and m8(s, 5) and m8(t, 7)
        and c.J(r) == c.J(s) == c.J(t) == -1)),
    _B(10, 1, 0, False,
       ("", lambda c, r: m8(r, 5))),
    _B(11, 2, 1, False,
       ("", lambda c, r, s: c.q8 == 3 and m8(r, 3) and m8(s, 7) and c.J(r) == c.J(s) == -1)),
    _B(12, 2, 1, False,
       ("C1", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 5) and m8(s, 5)),
       ("C2", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3) and m8(s, 3) and c.q8 == 7),
       ("C3", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 7) and m8(s, 3) and c.q8 == 3),
       ("C4", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3) and m8(s, 7) and c.q8 == 3)),
    _B(13, 2, 1, False,
       ("", lambda c, r, s: c.q8 == 3 and m8(r, 7) and m8(s, 3) and c.J(r) == c.J(s) == 1)),
    _B(14, 2, 2, False,
       ("", lambda c, r, s: m8(r, 3, 5) and r % 8 == s % 8 and c.J(r) == c.J(s) == -1)),
    _B(15, 3, 2, False,
       ("C1", lambda c, r, s, t: m8(r, 3) and m8(s, 5) and m8(t, 3) and c.q8 == 7
        and (c.J(r), c.J(s), c.J(t)) == (-1, -1, 1)),
       ("C2", lambda c, r, s, t: m8(r, 3) and m8(s, 5) and m8(t, 7) and c.q8 == 3
        and (c.J(r), c.J(s), c.J(t)) == (-1, -1, -1))),
    _B(16, 3, 2, False,
       ("C1", lambda c, r, s, t: m8(r, 3) and m8(s, 3) and m8(t, 5) and c.q8 == 7
        and (c.J(r), c.J(s), c.J(t)) == (-1, 1, 1)),
       ("C2", lambda c, r, s, t: m8(r, 3) and m8(s, 7) and m8(t, 5) and c.q8 == 3
        and (c.J(r), c.J(s), c.J(t)) == (-1, -1, 1)),
       ("C3", lambda c, r, s, t: m8(r, 5) and m8(s, 7) and m8(t, 3) and c.q8 == 3
        and (c.J(r), c.J(s), c.J(t)) == (-1, -1, 1)),
       ("C4", lambda c, r, s, t: m8(r, 3) and m8(s, 7) and m8(t, 5) and c.q8 == 3
        and (c.J(r), c.J(s), c.J(t)) == (1, -1, 1))),
    _B(17, 1, 0, True,
       ("C1", lambda c, r: m8(r, 3)),
       ("C2", lambda c, r: m8(r, 7) and c.q8 == 3)),
    _B(18, 2, 1, True,
       ("C1", lambda c, r, s: c.J(r) == c.J(s) == -1 and m8(r, 5) and m8(s, 3)),
       ("C2", lambda c, r, s: c.J(r) == c.J(s) == -1 and m8(r, 5) and m8(s, 7) and c.q8 == 3)),
    _B(19, 2, 1, True,
       ("C1", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 5) and m8(s, 3)),
       ("C2", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3) and m8(s, 5)),
       ("C3", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 7) and m8(s, 5) and c.q8 == 3),
       ("C4", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 5) and m8(s, 7) and c.q8 == 3)),
    _B(20, 2, 1, True,
       ("C1", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 7) and m8(s, 5) and c.q8 == 3),
       ("C2", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 3) and m8(s, 5))),
    _B(21, 3, 2, True,
       ("", lambda c, r, s, t: m8(r, 3) and m8(s, 5) and m8(t, 5)
        and (c.J(r), c.J(s), c.J(t)) == (-1, -1, 1))),
    _B(22, 3, 2, True,
       ("", lambda c, r, s, t: m8(r, 5) and m8(s, 3) and m8(t, 5)
        and (c.J(r), c.J(s), c.J(t)) == (-1, 1, 1))),
    _C(23, 1, 0,
       ("C1", lambda c, r: m8(r, 3)),
       ("C2", lambda c, r: m8(r, 5) and c.q1 % 8 == 3 and c.J(r) == -1),
       ("C3", lambda c, r: m8(r, 5) and c.q1 % 8 == 7 and c.J1(r) == -1),
       ("C4", lambda c, r: m8(r, 7) and c.q1 % 8 == 3)),
    _C(24, 1, 1,
       ("", lambda c, r: m8(r, 5) and c.J(r) == c.J1(r) == 1)),
    _C(25, 2, 1,
       ("C1", lambda c, r, s: c.J(r) == c.J(s) == -1 and m8(r, 5) and m8(s, 3)
        and (c.q1 % 8 == 3 or (c.q1 % 8 == 7 and c.J1(r) == -1))),
       ("C2", lambda c, r, s: c.J(r) == c.J(s) == -1 and m8(r, 3) and m8(s, 3)
        and c.q1 % 8 == 7 and c.J1(r) != c.J1(s)),
       ("C3", lambda c, r, s: c.J(r) == c.J(s) == -1 and m8(r, 3) and m8(s, 7) and c.q1 % 8 == 3)),
    _C(26, 2, 1,
       ("C1", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3) and m8(s, 3)
        and c.q1 % 8 == 7 and c.J1(r) == 1 and c.J1(s) == -1),
       ("C2", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3) and m8(s, 5)
        and c.q1 % 8 == 7 and c.J1(s) == -1),
       ("C3", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 5) and m8(s, 3)
        and (c.q1 % 8 == 3 or (c.q1 % 8 == 7 and c.J1(r) == -1)))),
    _C(27, 2, 1,
       ("C1", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 3) and m8(s, 3)
        and c.q1 % 8 == 7 and c.J1(r) != c.J1(s)),
       ("C2", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 5) and m8(s, 3)
        and c.q1 % 8 == 7 and c.J1(r) == -1)),
    _C(28, 2, 2,
       ("C1", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 5) and m8(s, 5)
        and ((c.q1 % 8 == 3 and c.J1(s) == 1) or (c.q1 % 8 == 7 and c.J1(r) == -1 and c.J1(s) == 1))),
       ("C2", lambda c, r, s: c.J(r) == -1 == -c.J(s) and m8(r, 3) and m8(s, 5) and c.J1(s) == 1)),
    _C(29, 2, 2,
       ("C1", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 7) and m8(s, 5)
        and c.q1 % 8 == 3 and c.J1(s) == 1),
       ("C2", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 7) and m8(s, 3)
        and c.q1 % 8 == 3 and c.J1(r) == c.J1(s)),
       ("C3", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 3) and m8(s, 3) and c.J1(r) == c.J1(s)),
       ("C4", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 5) and m8(s, 5)
        and c.q1 % 8 == 7 and (c.J1(r) == -1 or c.J1(s) == -1)),
       ("C5", lambda c, r, s: c.J(r) == c.J(s) == 1 and m8(r, 5) and m8(s, 3) and c.J1(r) == 1)),
)

ITEM_BY_ID = {it.case_id: it for it in ITEMS}


@dataclass(frozen=True)
class CasePrediction:
    case_id: int
    condition_label: str
    predicted_rank_infty: int
    roles: tuple[tuple[str, int], ...]
    form: str
    iwasawa: tuple[int, int, int] | None = None
    aliases: tuple[int, ...] = ()

    @property
    def role_map(self) -> dict[str, int]:
        return dict(self.roles)


def _ctx(fm: FormMatch) -> Ctx:
    r = fm.role_map
    if fm.form == "C":
        return Ctx("C", q1=r["q1"], q2=r["q2"])
    return Ctx(fm.form, q=r["q"])


def match_items(fm: FormMatch, only: int | None = None) -> list[CasePrediction]:
    """All (item, condition, ordering) matches for one presentation."""
    ctx = _ctx(fm)
    hits: list[CasePrediction] = []
    for it in ITEMS if only is None else (ITEM_BY_ID[only],):
        if it.form != fm.form or it.nprimes != len(fm.primes):
            continue
        if it.delta_q is not None and it.delta_q != (fm.role_map.get("delta", 1) != 1):
            continue
        if it.case_id == 24 and fm.role_map.get("delta", 1) != 1:
            continue
        found = None
        for order in permutations(fm.primes):
            for label, pred in it.conds:
                if pred(ctx, *order):
                    found = (label, order)
                    break
            if found:
                break
        if found:
            label, order = found
            names = ("r", "s", "t")[: len(order)]
            roles = fm.roles + tuple(zip(names, order))
            iw = (0, 0, 0) if it.pred == 0 else None
            hits.append(CasePrediction(it.case_id, label, it.pred, roles, fm.form, iw))
    return hits


def main_theorem_case(K: BiquadField) -> CasePrediction | None:
    """The matched item for K, or None when no item applies."""
    forms = qo_forms(K)
    supported = [f for f in forms if f.supported]
    if not supported:
        if forms:
            raise UnsupportedForm(f"{K} has form {forms[0].form}, not covered")
        raise UnsupportedForm(f"{K} is not of a cataloged form")
    if is_L_type(K):
        raise ExcludedField(f"{K} is of type L")
    hits: list[CasePrediction] = []
    for fm in supported:
        hits.extend(match_items(fm))
    if not hits:
        return None
    ranks = {h.predicted_rank_infty for h in hits}
    if len(ranks) > 1:
        ids = sorted({h.case_id for h in hits})
        raise ClassifierTie(f"{K} matches items {ids} with different predicted ranks")
    first = hits[0]
    others = tuple(sorted({h.case_id for h in hits} - {first.case_id}))
    return replace(first, aliases=others) if others else first


# --- levels 0 and 1 ---------------------------------------------------------------
def level_exts(fm: FormMatch) -> tuple[RelativeQuadExt, RelativeQuadExt]:
    r = fm.role_map
    if fm.form == "A":
        q = r["q"]
        return (make_ext((q,), fm.d, "A", fm.roles), make_ext((2, q), fm.d, "A1", fm.roles))
    if fm.form == "B":
        q = r["q"]
        return (make_ext((2 * q,), fm.d, "B", fm.roles), make_ext((2, q), fm.d, "B1", fm.roles))
    if fm.form == "C":
        base = r["q1"] * r["q2"]
        return (make_ext((base,), fm.d, "C", fm.roles), make_ext((2, base), fm.d, "C1", fm.roles))
    raise UnsupportedForm(f"form {fm.form} has no rank engine")


@dataclass(frozen=True)
class Stabilization:
    form: FormMatch
    level0: RankResult
    level1: RankResult

    @property
    def stable(self) -> bool:
        return self.level0.rank == self.level1.rank


def stabilization(K: BiquadField, check_table: bool = True, disc_cap: int | None = None) -> Stabilization:
    forms = [f for f in qo_forms(K) if f.supported]
    if not forms:
        raise UnsupportedForm(f"{K} is not of form A, B or C")
    fm = forms[0]
    e0, e1 = level_exts(fm)
    table1 = check_table and not is_L1_type(K)
    return Stabilization(fm, rank_A(e0, check_table=check_table, disc_cap=disc_cap),
                         rank_A(e1, check_table=table1, disc_cap=disc_cap))


def stabilization_check(K: BiquadField, disc_cap: int | None = None) -> bool:
    """rank A(K) == rank A(K_1)."""
    return stabilization(K, disc_cap=disc_cap).stable


def field_from_roles(form: str, roles: dict[str, int], primes) -> BiquadField:
    """Build K from role values; ``primes`` are r, s, t."""
    prod = 1
    for p in primes:
        prod *= p
    delta = roles.get("delta", 1)
    if form == "A":
        return BiquadField(roles["q"], prod)
    if form == "B":
        return BiquadField(2 * roles["q"], delta * prod)
    if form == "C":
        return BiquadField(roles["q1"] * roles["q2"], squarefree_part(delta * prod))
    raise UnsupportedForm(form)

"""Unit groups of multiquadratic fields, Kuroda's formula, and Iwasawa data.

Unit groups are built by Wada's method: start from the fundamental units
of the quadratic subfields and keep adjoining square roots of products
that are squares in the field. Squares are located with quadratic
characters at totally split primes and then confirmed by an exact
square root, so the index q(k) is proven, not estimated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from sympy import nextprime

from .arith import is_prime, jacobi, prime_divisors, squarefree_part
from .fields import BiquadField
from .formclass import DEFAULT_DISC_CAP, field_discriminant, h2, h2_wide
from .mqfield import Elt, MQField
from .quadunits import fundamental_unit


@dataclass(frozen=True)
class UnitGen:
    label: str
    elt: Elt
    exponents: tuple[Fraction, ...]


@dataclass(frozen=True)
class UnitGroup:
    """Fundamental system of units (without -1) and the Wada index q(k)."""

    gens: tuple[int, ...]
    radicands: tuple[int, ...]
    units: tuple[UnitGen, ...]
    q_index: int

    @property
    def field(self) -> MQField:
        return _field(self.gens)

    def labels(self) -> list[str]:
        return ["-1"] + [u.label for u in self.units]


@lru_cache(maxsize=4096)
def _field(gens: tuple[int, ...]) -> MQField:
    return MQField(gens)


def _label(radicands, exps) -> str:
    den = lcm(*(e.denominator for e in exps))
    parts = []
    for d, e in zip(radicands, exps):
        k = int(e * den)
        if k:
            parts.append(f"eps_{d}" + (f"^{k}" if k > 1 else ""))
    body = "*".join(parts)
    if den == 1:
        return body
    if den == 2:
        return f"sqrt({body})"
    return f"({body})^(1/{den})"


def _kernel(rows: list[int], k: int) -> list[int]:
    """Basis of {v : XOR of rows[i] over bits i of v is 0}, reduced, pivot = top bit."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for i in range(k):
        val, tag = rows[i], 1 << i
        while val:
            top = val.bit_length() - 1
            if top not in pivots:
                pivots[top] = (val, tag)
                break
            pv, pt = pivots[top]
            val ^= pv
            tag ^= pt
        if not val:
            kernel.append(tag)
    # reduced echelon form keyed on the highest set bit
    basis: list[int] = []
    for v in kernel:
        for b in basis:
            if v >> (b.bit_length() - 1) & 1:
                v ^= b
        if v:
            for j, b in enumerate(basis):
                if b >> (v.bit_length() - 1) & 1:
                    basis[j] = b ^ v
            basis.append(v)
    return sorted(basis, key=lambda b: b.bit_length())


def _split_primes(field: MQField, dens: int):
    p = 2
    while True:
        p = nextprime(p)
        if dens % p == 0 or any(g % p == 0 for g in field.gens):
            continue
        if all(jacobi(g, p) == 1 for g in field.gens):
            yield p


def square_classes(field: MQField, elts: list[Elt], min_extra: int = 12):
    """Exponent vectors v (bitmasks) with prod elts^v a square, with the roots.

    Returns a reduced basis as a list of (v, root). Every element must be
    positive at the identity embedding.
    """
    k = len(elts)
    dens = lcm(*(e[1] for e in elts))
    rows = [0] * k
    ncols = 0
    primes = _split_primes(field, dens)
    stable, prev = 0, None
    while True:
        p = next(primes)
        rd = field.residue_data(p)
        for img in rd.images:
            for i, e in enumerate(elts):
                x, _ = field.reduce(e, img)
                if jacobi(x, p) == -1:
                    rows[i] |= 1 << ncols
            ncols += 1
        basis = _kernel(rows, k)
        stable = stable + 1 if basis == prev else 0
        prev = basis
        if stable < min_extra or ncols < 4 * k:
            continue
        out = []
        for v in basis:
            prod = field.one()
            for i in range(k):
                if v >> i & 1:
                    prod = field.mul(prod, elts[i])
            root = field.sqrt(prod)
            if root is None:
                break
            out.append((v, field.positive(root)))
        else:
            return out
        stable = 0


@lru_cache(maxsize=4096)
def unit_group(gens: tuple[int, ...]) -> UnitGroup:
    """Wada's method over the quadratic subfields of Q(sqrt g : g in gens)."""
    field = _field(tuple(gens))
    rads = tuple(field.radicands())
    elts = []
    for d in rads:
        u = fundamental_unit(d)
        elts.append(field.quadratic(d, u.x, u.y, u.sigma))
    n = len(rads)
    exps = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    roots_taken = 0
    while True:
        found = square_classes(field, elts)
        if not found:
            break
        new_elts, new_exps = list(elts), list(exps)
        for v, root in found:
            pivot = v.bit_length() - 1
            members = [i for i in range(n) if v >> i & 1]
            new_elts[pivot] = root
            new_exps[pivot] = tuple(sum(exps[i][j] for i in members) / 2 for j in range(n))
        elts, exps = new_elts, new_exps
        roots_taken += len(found)
    units = tuple(UnitGen(_label(rads, e), x, e) for x, e in zip(elts, exps))
    return UnitGroup(tuple(gens), rads, units, 1 << roots_taken)


def _gens_of(field) -> tuple[int, ...]:
    if isinstance(field, BiquadField):
        return (field.d1, field.d2)
    if isinstance(field, MQField):
        return field.gens
    return tuple(field)


def wada_q_index(field) -> int:
    """q(k) = [E_k : prod E_{k_i}] by exhaustive square-root search."""
    return unit_group(_gens_of(field)).q_index


def catalog_q_index(gens) -> int | None:
    """Unit index predicted by the closed-form unit groups, when one applies."""
    field = _field(tuple(gens))
    rads = set(field.radicands())
    primes = sorted({p for d in rads for p in prime_divisors(d) if p != 2})
    if field.n == 2:
        if len(primes) == 1 and 2 in rads and primes[0] % 4 == 3:
            return 4  # Q(sqrt 2, sqrt q): sqrt(eps_q), sqrt(eps_2q)
        if len(primes) == 2 and 2 in rads and all(p % 4 == 3 for p in primes):
            if primes[0] * primes[1] in rads and any(p % 8 == 3 for p in primes):
                return 2  # Q(sqrt 2, sqrt q1q2): eta
    if field.n == 3 and len(primes) == 3 and 2 in rads:
        for q, r, s in _qrs_roles(primes):
            if {q * r, s} <= rads and _s_side_condition(q, r, s):
                return 32
    return None


def _qrs_roles(primes):
    from itertools import permutations

    for q, r, s in permutations(primes):
        if q % 8 == 3 and r % 8 == 3 and s % 8 == 7 and q < r or (q % 8 == 3 and r % 8 == 3 and s % 8 == 7):
            if (jacobi(q, r), jacobi(q, s), jacobi(s, r)) == (-1, -1, 1):
                yield q, r, s


def _s_side_condition(q, r, s) -> bool:
    """s(a - 1) is not a square, eps_qrs = a + b sqrt(qrs)."""
    from .arith import sqrt_exact

    u = fundamental_unit(q * r * s)
    return sqrt_exact(s * (u.x - 1)) is None


class KurodaError(ArithmeticError):
    pass


@dataclass(frozen=True)
class KurodaInput:
    gens: tuple[int, ...]
    subfield_radicands: tuple[int, ...]
    v: int
    q_index: int
    h2_subfields: tuple[int, ...]


def kuroda_input(field, disc_cap: int | None = None) -> KurodaInput:
    gens = _gens_of(field)
    fld = _field(gens)
    if fld.n not in (2, 3):
        raise ValueError("only degree 4 and 8 fields are supported")
    v = fld.n * ((1 << (fld.n - 1)) - 1)
    rads = tuple(fld.radicands())
    cap = DEFAULT_DISC_CAP if disc_cap is None else disc_cap
    worst = max(field_discriminant(d) for d in rads)
    if worst > cap:
        raise ValueError(f"discriminant {worst} exceeds the cap {cap}")
    hs = tuple(h2(d, disc_cap) for d in rads)
    return KurodaInput(gens, rads, v, wada_q_index(gens), hs)


def kuroda_h2(field, disc_cap: int | None = None) -> int:
    """2-part of h(k) = q(k) prod h(k_i) / 2^v for real k of degree 4 or 8."""
    ki = kuroda_input(field, disc_cap)
    num = ki.q_index
    for h in ki.h2_subfields:
        num *= h
    if num % (1 << ki.v):
        raise KurodaError(f"non-integral Kuroda value: {ki}")
    return num >> ki.v


# Iwasawa data ------------------------------------------------------------
@dataclass(frozen=True)
class IwasawaInvariants:
    lambda_: int
    mu: int
    nu: int


@dataclass(frozen=True)
class StructureResult:
    """A(K_inf) as a list of 2-power invariant factors (empty = trivial)."""

    group: tuple[int, ...]
    m: int | None
    invariants: IwasawaInvariants
    family: str

    @property
    def order(self) -> int:
        out = 1
        for f in self.group:
            out *= f
        return out

    @property
    def descriptor(self) -> str:
        if not self.group:
            return "trivial"
        return " x ".join(f"Z/{f}" for f in self.group)


def iwasawa_hn(inv: IwasawaInvariants, ell: int, n: int) -> int:
    """ell^(lambda n + mu ell^n + nu)."""
    if n < 0 or not is_prime(ell):
        raise ValueError("need n >= 0 and ell prime")
    e = inv.lambda_ * n + inv.mu * ell**n + inv.nu
    if e < 0:
        raise ValueError(f"negative exponent {e}")
    return ell**e


def _group(*factors: int) -> tuple[int, ...]:
    return tuple(sorted(f for f in factors if f > 1))


def _qrs_triples(K: BiquadField):
    """Role assignments (q, r, s) with K = Q(sqrt q, sqrt rs)."""
    for q in K.canonical:
        if not is_prime(q):
            continue
        for d in K.canonical:
            ps = prime_divisors(d)
            if d % 2 and len(ps) == 2 and q not in ps:
                r, s = ps
                yield q, r, s
                yield q, s, r


def structure_report(K, disc_cap: int | None = None) -> tuple[StructureResult | None, list[str]]:
    """Structure of A(K_inf) when a proven family applies, else the reasons."""
    from .arith import sqrt_exact

    reasons: list[str] = []
    if isinstance(K, int):
        ps = prime_divisors(K)
        if len(ps) != 3 or K % 2 == 0:
            return None, ["L must be Q(sqrt qrs) with three odd primes"]
        for q in ps:
            r, s = [p for p in ps if p != q]
            if (q % 8, r % 8, s % 8) != (7, 3, 3):
                continue
            if jacobi(q, r) != 1 or jacobi(q, s) != 1:
                reasons.append(f"(q/r) = (q/s) = 1 fails for q={q}")
                continue
            a = fundamental_unit(K).x
            if sqrt_exact(q * (a - 1)) is not None:
                reasons.append(f"q(a-1) = {q * (a - 1)} is a square")
                continue
            m = h2_wide(K, disc_cap).m
            return StructureResult(_group(2, 1 << (m - 1)), m, IwasawaInvariants(0, 0, m), "L-corollary"), []
        return None, reasons or ["no role assignment q = 7, r = s = 3 mod 8"]
    for q, r, s in _qrs_triples(K):
        tag = f"(q,r,s)=({q},{r},{s})"
        a = None
        if (q % 8, r % 8, s % 8) == (3, 3, 7):
            if (jacobi(q, s), jacobi(q, r), jacobi(s, r)) == (-1, -1, 1):
                a = fundamental_unit(q * r * s).x
                if sqrt_exact(s * (a - 1)) is None:
                    m = h2_wide(q * r * s, disc_cap).m
                    return StructureResult(_group(1 << (m - 1)), m, IwasawaInvariants(0, 0, m - 1), "cyclic-2^(m-1)"), []
                reasons.append(f"{tag}: s(a-1) is a square")
        if (q % 8, r % 8, s % 8) == (7, 3, 3):
            if jacobi(q, s) == 1 and jacobi(q, r) == 1:
                a = fundamental_unit(q * r * s).x
                if sqrt_exact(q * (a - 1)) is None:
                    m = h2_wide(q * r * s, disc_cap).m
                    group = _group(2, 1 << (m - 2))
                    return StructureResult(group, m, IwasawaInvariants(0, 0, m - 1), "Z/2 x Z/2^(m-2)"), []
                reasons.append(f"{tag}: q(a-1) is a square")
        if _z2_conditions(q, r, s):
            return StructureResult((2,), None, IwasawaInvariants(0, 0, 1), "Z/2"), []
    from .classify import main_theorem_case

    try:
        pred = main_theorem_case(K)
    except ValueError as exc:
        pred = None
        reasons.append(str(exc))
    if pred is not None and pred.predicted_rank_infty == 0:
        return StructureResult((), None, IwasawaInvariants(0, 0, 0), f"item {pred.case_id}: trivial"), []
    reasons.append("no structure theorem applies")
    return None, reasons


def _z2_conditions(q, r, s) -> bool:
    """Conditions C1-C5 under which A(K_inf) = Z/2 for K = Q(sqrt q, sqrt rs)."""
    if not all(p % 4 == 3 for p in (q, r, s)):
        return False
    qm, rm, sm = q % 8, r % 8, s % 8
    qr, qs, sr, rs_ = jacobi(q, r), jacobi(q, s), jacobi(s, r), jacobi(r, s)
    return (
        (rm == 3 and qm == 3 and sm == 7 and qs == qr == -1 and sr == -1)
        or (rm == 3 and sm == 3 and qm == 7 and qr == -1 and qs == 1)
        or (sm == 3 and qm == 3 and rm == 7 and qr == -1 and qs == 1 and rs_ == -1)
        or (rm == 3 and qm == 3 and sm == 7 and qr == -1 and qs == 1 and rs_ == -1)
        or (sm == 3 and qm == 3 and rm == 7 and qs == qr == 1 and rs_ == 1)
    )


def iwasawa_structure(K, disc_cap: int | None = None) -> StructureResult | None:
    return structure_report(K, disc_cap)[0]


def fukuda_h2_stable(K: BiquadField, disc_cap: int | None = None) -> bool:
    """h_2(K) == h_2(K_1), computed by Kuroda's formula at both levels."""
    return kuroda_h2(K, disc_cap) == kuroda_h2(K.level_one_gens(), disc_cap)


def level_one_field(K: BiquadField) -> tuple[int, int, int]:
    return K.level_one_gens()


__all__ = [
    "UnitGen",
    "UnitGroup",
    "unit_group",
    "wada_q_index",
    "catalog_q_index",
    "KurodaInput",
    "kuroda_input",
    "kuroda_h2",
    "KurodaError",
    "IwasawaInvariants",
    "StructureResult",
    "iwasawa_hn",
    "iwasawa_structure",
    "structure_report",
    "fukuda_h2_stable",
    "squarefree_part",
]

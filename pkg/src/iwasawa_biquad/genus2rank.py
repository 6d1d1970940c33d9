"""2-rank of A(K) via the ambiguous class number formula rank = t - 1 - e.

The base F must have odd class number and K = F(sqrt m) with 2 unramified
in K/F. Then the only places where a unit of F can fail to be a local norm
are the primes P of F dividing m, and the norm residue symbol (u, m)_P is
the quadratic character of u modulo P. Those characters are computed
exactly in the residue field, so e is the GF(2)-rank of a sign matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .arith import jacobi, prime_divisors, scholz_pair, squarefree_part
from .formclass import h2
from .mqfield import MQField
from .multiquad import unit_group
from . import tables

INDIRECT = "indirect"


class UnsupportedShape(ValueError):
    pass


class TableMismatch(AssertionError):
    """The computed rank contradicts a closed-form table entry."""


@dataclass(frozen=True)
class RelativeQuadExt:
    """K = F(sqrt m) with F = Q(sqrt b : b in base_radicands)."""

    base_radicands: tuple[int, ...]
    ext_radicand: int
    shape_tag: str = "generic"
    prime_tuple: tuple[tuple[str, int], ...] = ()

    @property
    def base_field(self) -> MQField:
        return _field(self.base_radicands)

    @property
    def ramified_primes(self) -> tuple[int, ...]:
        base = set()
        for g in self.base_radicands:
            base |= set(prime_divisors(g))
        return tuple(p for p in prime_divisors(self.ext_radicand) if p not in base)

    def role(self, name: str) -> int | None:
        return dict(self.prime_tuple).get(name)


@dataclass(frozen=True)
class SymbolMatrix:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def gf2_rank(self) -> int:
        return _gf2_rank([_mask(col) for col in zip(*self.entries)] if self.entries else [])

    def swapped(self, p: int) -> "SymbolMatrix":
        """The matrix with the columns above p listed in reverse order."""
        idx = [j for j, c in enumerate(self.cols) if c.startswith(f"{p}:")]
        perm = list(range(len(self.cols)))
        for a, b in zip(idx, reversed(idx)):
            perm[a] = b
        return SymbolMatrix(
            self.rows,
            tuple(self.cols[j] for j in perm),
            tuple(tuple(row[j] for j in perm) for row in self.entries),
        )

    def row_products(self) -> tuple[int, ...]:
        out = []
        for row in self.entries:
            v = 1
            for x in row:
                v *= x
            out.append(v)
        return tuple(out)


@dataclass(frozen=True)
class RankResult:
    t: int
    e: int
    rank: int
    method: str
    table: tables.TableValue | None = None
    checks: tuple[str, ...] = field(default=())

    @property
    def exact(self) -> bool:
        return True


# --- base fields and their units ---------------------------------------------
@lru_cache(maxsize=4096)
def _field(gens: tuple[int, ...]) -> MQField:
    return MQField(gens)


@lru_cache(maxsize=4096)
def _units(gens: tuple[int, ...]):
    """Labels and elements of -1 and a fundamental system of units of F."""
    fld = _field(gens)
    ug = unit_group(gens)
    labels = ("-1",) + tuple(u.label for u in ug.units)
    elts = (fld.rational(-1),) + tuple(u.elt for u in ug.units)
    return labels, elts


def unit_generators(base) -> list[str]:
    """Generator labels of E_F, e.g. ['-1', 'eps_2', 'sqrt(eps_3)', 'sqrt(eps_6)']."""
    gens = tuple(sorted(base)) if not isinstance(base, MQField) else base.gens
    return list(_units(_canonical_gens(gens))[0])


def _canonical_gens(gens) -> tuple[int, ...]:
    """Small independent generators of the field, sorted."""
    fld = MQField(tuple(gens))
    rads = fld.radicands()
    chosen: list[int] = []
    span = {1}
    for d in rads:
        if d not in span:
            chosen.append(d)
            span |= {squarefree_part(d * x) for x in span}
    return tuple(chosen)


def make_ext(base, d: int, shape_tag: str = "generic", roles=()) -> RelativeQuadExt:
    """Canonical presentation F(sqrt m) of F(sqrt d) with m odd and m = 1 mod 4."""
    gens = _canonical_gens(base)
    fld = _field(gens)
    if fld.contains_sqrt(squarefree_part(d)):
        raise UnsupportedShape(f"sqrt {d} already lies in the base")
    cands = [squarefree_part(d)] + [squarefree_part(d * b) for b in fld.radicands()]
    good = sorted(m for m in cands if m % 4 == 1)
    if not good:
        raise UnsupportedShape(f"2 ramifies in F(sqrt {d})/F for F = Q(sqrt {gens})")
    return RelativeQuadExt(gens, good[0], shape_tag, tuple(roles))


# --- exact symbol columns ----------------------------------------------------
@lru_cache(maxsize=500_000)
def symbol_columns(gens: tuple[int, ...], p: int) -> tuple[tuple[int, ...], ...]:
    """For each prime P of F above p: the characters (u/P) for every unit generator."""
    fld = _field(gens)
    _, elts = _units(gens)
    rd = fld.residue_data(p)
    per_unit = [rd.characters(fld, u) for u in elts]
    return tuple(zip(*per_unit))


def _mask(col) -> int:
    m = 0
    for i, v in enumerate(col):
        if v == -1:
            m |= 1 << i
    return m


def _gf2_rank(vectors) -> int:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


@lru_cache(maxsize=500_000)
def _column_masks(gens, p) -> tuple[int, ...]:
    return tuple(_mask(c) for c in symbol_columns(gens, p))


def ramified_count(ext: RelativeQuadExt) -> int:
    """Number of primes of F ramified in K (finite primes only, F totally real)."""
    return sum(len(_column_masks(ext.base_radicands, p)) for p in ext.ramified_primes)


def symbol_matrix(ext: RelativeQuadExt) -> SymbolMatrix:
    labels, _ = _units(ext.base_radicands)
    cols, data = [], []
    for p in ext.ramified_primes:
        for j, col in enumerate(symbol_columns(ext.base_radicands, p)):
            cols.append(f"{p}:{j}")
            data.append(col)
    entries = tuple(zip(*data)) if data else tuple(() for _ in labels)
    return SymbolMatrix(labels, tuple(cols), entries)


def fast_rank(gens: tuple[int, ...], primes) -> tuple[int, int, int]:
    """(t, e, rank) for F(sqrt d) where ``primes`` are the primes ramified in K/F."""
    masks: list[int] = []
    for p in primes:
        masks.extend(_column_masks(gens, p))
    e = _gf2_rank(masks)
    t = len(masks)
    return t, e, t - 1 - e


# --- the rules route -----------------------------------------------------------
def _square_class_rational(fld: MQField, u) -> int | None:
    """A squarefree c (sign included) with c*u a square in fld, if any."""
    primes = sorted({2} | {p for g in fld.gens for p in prime_divisors(g)})
    for k in range(len(primes) + 1):
        for combo in combinations(primes, k):
            c = 1
            for x in combo:
                c *= x
            for sc in (c, -c):
                if fld.sqrt(fld.scale(u, sc)) is not None:
                    return sc
    return None


def _legendre(c: int, p: int) -> int:
    return jacobi(c % p, p)


@lru_cache(maxsize=100_000)
def rules_columns(gens: tuple[int, ...], p: int) -> tuple:
    """Per unit generator: a tuple of symbol values over the primes above p, or INDIRECT.

    Values come from splitting-type rules: quadratic-subfield norms,
    rational square classes and Scholz reciprocity. No residue field
    arithmetic in F is performed here.
    """
    fld = _field(gens)
    labels, elts = _units(gens)
    rd = fld.residue_data(p)
    g = len(rd.labels)
    split_subfields = [d for d in fld.radicands() if jacobi(d, p) == 1]
    total = len(split_subfields) == len(fld.radicands())
    out = []
    for lab, u in zip(labels, elts):
        out.append(_rule_value(fld, lab, u, p, g, split_subfields, total))
    return tuple(out)


def _rule_value(fld, lab, u, p, g, split_subfields, total):
    if lab == "-1":
        return (_legendre(-1, p),) * g if total else (1,) * g
    if not total:
        if fld.n == 1:
            # inert in a quadratic field: u^(p+1) = N(u)
            x = fld.mul(u, fld.conj(u, (-1,)))
            return (_legendre(x[0][0] // x[1], p),) * g
        (k0,) = split_subfields
        # the Frobenius fixes k0 and flips the inert generators
        sigma = tuple(-1 if jacobi(fld.gens[i], p) == -1 else 1 for i in range(fld.n))
        nrm = fld.mul(u, fld.conj(u, sigma))
        if fld.is_rational(nrm):
            return (_legendre(nrm[0][0] // nrm[1], p),) * g
        c = _square_class_rational(_field((k0,)), _to_quadratic(fld, nrm, k0))
        if c is not None:
            return (_legendre(c, p),) * g
        return INDIRECT
    # p totally decomposed
    if lab == "eps_2":
        pair = scholz_pair(2, p)
        # each prime of Q(sqrt 2) above p splits into g/2 primes of F
        return tuple(sorted(pair * (g // 2)))
    if lab.startswith("eps_") and "*" not in lab and "^" not in lab:
        c = _square_class_rational(fld, u)
        if c is not None:
            return (_legendre(c, p),) * g
    return INDIRECT


def _to_quadratic(fld: MQField, a, k0: int):
    """Rewrite an element of the subfield Q(sqrt k0) of fld in the field Q(sqrt k0)."""
    sub = _field((k0,))
    mask, c = fld.lookup[k0]
    coeffs, den = a
    return sub.quadratic(k0, coeffs[0] * c, coeffs[mask], den * c) if c != 1 else \
        sub.quadratic(k0, coeffs[0], coeffs[mask], den)


def norm_residue_symbol(u_label: str, p: int, ext: RelativeQuadExt):
    """Values of (u, m)_P over the primes P above p by the rules route, or INDIRECT."""
    labels, _ = _units(ext.base_radicands)
    if p not in ext.ramified_primes:
        raise ValueError(f"{p} is not ramified in K/F")
    return rules_columns(ext.base_radicands, p)[labels.index(u_label)]


# --- e and rank -------------------------------------------------------------------
def _hard_case(ext: RelativeQuadExt):
    """(auxiliary radicand) when the indirect route applies, else None."""
    gens = ext.base_radicands
    if len(gens) != 2 or 2 not in gens:
        return None
    other = [g for g in gens if g != 2][0]
    ram = ext.ramified_primes
    if len(ram) != 1:
        return None
    (r,) = ram
    if r % 8 != 7 or jacobi(other, r) != 1:
        return None
    ps = prime_divisors(other)
    if len(ps) == 1:
        return 2 * other * r, other % 8
    q1 = ext.role("q1")
    if q1 is None:
        q1 = next(p for p in ps if p % 8 == 7) if any(p % 8 == 7 for p in ps) else max(ps)
    return 2 * q1 * r, q1 % 8


def e_index(ext: RelativeQuadExt, route: str = "auto", disc_cap: int | None = None) -> tuple[int, str]:
    """(e, method). Routes: 'direct', 'indirect-h2', 'auto'."""
    gens = ext.base_radicands
    t, e_direct, _ = fast_rank(gens, ext.ramified_primes)
    if route == "direct":
        return e_direct, "direct-symbols"
    hard = _hard_case(ext)
    if route == "indirect-h2":
        if hard is None:
            raise UnsupportedShape("no auxiliary-field criterion for this shape")
        return _e_from_h2(hard, disc_cap), "indirect-h2"
    if hard is not None:
        e = _e_from_h2(hard, disc_cap)
        if e != e_direct:
            raise TableMismatch(f"indirect route e={e} but residue symbols give e={e_direct} for {ext}")
        return e, "indirect-h2"
    return e_direct, "direct-symbols"


def _e_from_h2(hard, disc_cap) -> int:
    aux, _ = hard
    return 3 if h2(aux, disc_cap) == 2 else 2


def table_prediction(ext: RelativeQuadExt) -> list[tables.TableValue]:
    """Closed-form table entries that speak about this field, if any."""
    tag = ext.shape_tag
    roles = dict(ext.prime_tuple)
    primes = tuple(sorted(ext.ramified_primes))
    if tag == "A":
        q = roles["q"]
        return [tables.level0_AB("A", tables.Roles(q, q % 8), q, primes)]
    if tag == "B":
        q = roles["q"]
        return [tables.level0_AB("B", tables.Roles(2 * q, q % 8), q, primes)]
    if tag == "C":
        q1, q2 = roles["q1"], roles["q2"]
        return [tables.level0_C(tables.Roles(q1 * q2, q1 % 8, q1), primes)]
    if tag in ("A1", "B1"):
        return tables.level1_q(roles["q"], primes)
    if tag == "C1":
        return tables.level1_q1q2(roles["q1"], roles["q2"], primes)
    return []


def rank_A(ext: RelativeQuadExt, route: str = "auto", check_table: bool = True,
           disc_cap: int | None = None) -> RankResult:
    """rg(A(K)) = t - 1 - e, checked against every applicable table entry."""
    t = ramified_count(ext)
    e, method = e_index(ext, route, disc_cap)
    rank = t - 1 - e
    if rank < 0:
        raise AssertionError(f"negative rank for {ext}")
    entries = table_prediction(ext) if check_table else []
    for entry in entries:
        if not entry.contains(rank):
            raise TableMismatch(f"{ext}: computed rank {rank}, table {entry.source} says {entry}")
    return RankResult(t, e, rank, method, entries[0] if entries else None,
                      tuple(en.source for en in entries))


def rules_agree(gens: tuple[int, ...], p: int) -> bool:
    """Rules-route values match the residue-field characters as multisets."""
    direct = list(zip(*symbol_columns(gens, p)))
    for rule, exact in zip(rules_columns(gens, p), direct):
        if rule != INDIRECT and sorted(rule) != sorted(exact):
            return False
    return True


def product_formula_holds(mat: SymbolMatrix) -> bool:
    return all(v == 1 for v in mat.row_products())

"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line."""

import random
import time
from math import isqrt

from iwasawa_biquad.arith import is_squarefree, jacobi, primes_upto, sqrt_exact
from iwasawa_biquad.classify import _q_pair, biquad_odd, level_exts
from iwasawa_biquad.fields import BiquadField
from iwasawa_biquad.formclass import h2, h2_wide, lemma_quad_odd
from iwasawa_biquad.genus2rank import product_formula_holds, rules_agree, symbol_matrix
from iwasawa_biquad import harness
from iwasawa_biquad.multiquad import iwasawa_structure, kuroda_h2, structure_report, wada_q_index
from iwasawa_biquad.quadunits import fundamental_unit, unit_sqrt_profile

BIG_CAP = 10**8  # criteria 5-7 reach discriminants near 8 * 150^3


def _odd_primes(bound):
    return [p for p in primes_upto(bound - 1) if p > 2]


def _lemma_triples(bound):
    """q = r = 3, s = 7 mod 8 with (q/r) = (q/s) = -1 and (s/r) = 1."""
    P = _odd_primes(bound)
    return [(q, r, s) for q in P for r in P for s in P
            if q != r and q % 8 == r % 8 == 3 and s % 8 == 7
            and jacobi(q, r) == jacobi(q, s) == -1 and jacobi(s, r) == 1]


# 1 ---------------------------------------------------------------------------------
def test_parity_regression(acceptance_line):
    t0 = time.perf_counter()
    quad_bad = [d for d in range(2, 3001)
                if is_squarefree(d) and (h2_wide(d).m == 0) != lemma_quad_odd(d)]
    rng = random.Random(20240601)
    small = [2] + _odd_primes(200)
    q_pairs = [a * b for a in small for b in small if a < b and a % 4 == b % 4 == 3 and a * b < 400]
    pool = small + q_pairs
    sqf = [d for d in range(2, 400) if is_squarefree(d)]
    fields: set = set()
    while len(fields) < 500:
        src = pool if len(fields) % 2 == 0 else sqf
        a, b = rng.sample(src, 2)
        try:
            fields.add(BiquadField(a, b))
        except ValueError:
            continue
    bi_bad = [K for K in sorted(fields, key=lambda K: K.canonical)
              if (kuroda_h2(K) == 1) != biquad_odd(K)]
    n_odd = sum(biquad_odd(K) for K in fields)
    # three primes = 3 mod 4 spread over the radicands: Q(sqrt q1q2, sqrt q1q3)
    q_triangle = sum(all(_q_pair(d) for d in K.canonical) for K in bi_bad)
    dt = time.perf_counter() - t0
    ok = not quad_bad and not bi_bad and dt <= 300
    acceptance_line(1, ok, f"quadratic mismatches {len(quad_bad)}, biquadratic mismatches {len(bi_bad)} "
                           f"of 500 ({n_odd} odd; {q_triangle} of shape Q(sqrt q1q2, sqrt q1q3)), {dt:.1f}s")
    assert ok, (quad_bad[:5], bi_bad[:5])


# 2 ---------------------------------------------------------------------------------
def test_rank_table_equivalence(acceptance_line):
    t0 = time.perf_counter()
    results = harness.table_sweeps()
    total = sum(r.mismatch_count for r in results)
    checked = sum(r.checked for r in results)
    detail = ", ".join(f"{r.form}{r.level}/{r.nprimes}p:{r.mismatch_count}" for r in results if r.mismatch_count)
    acceptance_line(2, total == 0, f"{checked} fields checked, {total} mismatches"
                                   f"{' (' + detail + ')' if detail else ''}, {time.perf_counter() - t0:.0f}s")
    for r in results:
        for m in r.mismatches[:3]:
            print("  ", m)
    assert total == 0


# 3 ---------------------------------------------------------------------------------
def test_main_theorem_campaign(acceptance_line):
    t0 = time.perf_counter()
    rep = harness.verify(range(1, 30))
    dt = time.perf_counter() - t0
    s = rep.summary
    empty = [c for c in range(1, 30) if str(c) not in s["per_case"]]
    ok = s["disagree"] == 0 and dt <= 1800
    acceptance_line(3, ok, f"{s['tuples']} tuples over {29 - len(empty)} items, {s['disagree']} disagreements, "
                           f"{dt:.0f}s")
    assert ok, [r for r in rep.rows if not r["agree"]][:3]


# 4 ---------------------------------------------------------------------------------
def test_exactly_one_square(acceptance_line):
    bad = []
    triples = _lemma_triples(200)
    for q, r, s in triples:
        a = fundamental_unit(q * r * s).x
        squares = [c for c in (2 * q, r, s) if sqrt_exact(c * (a - 1)) is not None]
        prof = unit_sqrt_profile("qrs", (q, r, s))
        if len(squares) != 1 or prof.pattern[0] != squares[0] or not prof.expands():
            bad.append((q, r, s))
    acceptance_line(4, not bad, f"{len(triples)} triples, {len(bad)} violations")
    assert not bad


# 5 ---------------------------------------------------------------------------------
def test_triquadratic_identity(acceptance_line):
    bad, n = [], 0
    for q, r, s in _lemma_triples(150):
        a = fundamental_unit(q * r * s).x
        if sqrt_exact(s * (a - 1)) is not None:
            continue  # the unit lemma assumes s(a-1) is not a square
        n += 1
        gens = (2, q * r, s)
        if kuroda_h2(gens, BIG_CAP) * 2 != h2(q * r * s, BIG_CAP) or wada_q_index(gens) != 32:
            bad.append((q, r, s))
    acceptance_line(5, n > 0 and not bad, f"{n} triples, {len(bad)} violations")
    assert n and not bad


# 6 ---------------------------------------------------------------------------------
def test_structure_desk_check(acceptance_line):
    def check(q, r, s):
        K = BiquadField(q, r * s)
        m = h2_wide(q * r * s, BIG_CAP).m
        res = iwasawa_structure(K, BIG_CAP)
        return (res is not None and res.group == (1 << (m - 1),) and res.invariants.nu == m - 1
                and kuroda_h2(K, BIG_CAP) == 1 << (m - 1))

    a = fundamental_unit(399).x
    desk = sqrt_exact(7 * (a - 1)) is None and check(3, 19, 7)
    extra = [t for t in _lemma_triples(200)
             if t != (3, 19, 7) and sqrt_exact(t[2] * (fundamental_unit(t[0] * t[1] * t[2]).x - 1)) is None][:12]
    bad = [t for t in extra if not check(*t)]
    ok = desk and len(extra) >= 10 and not bad
    acceptance_line(6, ok, f"(3,19,7) {'ok' if desk else 'wrong'}, {len(extra)} further triples, {len(bad)} violations")
    assert ok


# 7 ---------------------------------------------------------------------------------
def test_second_family(acceptance_line):
    P = _odd_primes(200)
    found, bad = [], []
    for q in P:
        for r in P:
            for s in P:
                if not (r < s and q % 8 == 7 and r % 8 == s % 8 == 3 and jacobi(q, r) == jacobi(q, s) == 1):
                    continue
                a = fundamental_unit(q * r * s).x
                if sqrt_exact(q * (a - 1)) is not None:
                    continue
                found.append((q, r, s))
                g = h2_wide(q * r * s, BIG_CAP)
                res, _ = structure_report(q * r * s, BIG_CAP)
                want = tuple(sorted((2, 1 << (g.m - 1))))
                if g.two_rank != 2 or g.four_rank != 1 or res is None or res.group != want:
                    bad.append((q, r, s))
        if len(found) >= 20:
            break
    ok = len(found) >= 5 and not bad
    acceptance_line(7, ok, f"{len(found)} triples, {len(bad)} violations")
    assert ok


# 8 ---------------------------------------------------------------------------------
def _minimal(d):
    """No unit in (1, eps_d): brute force over 2*eta = X + Y sqrt d with Y up to 2 sqrt(Y_eps) + 2."""
    u = fundamental_unit(d)
    Y_eps = 2 * u.y // u.sigma
    # a smaller unit eta > 1 would satisfy eta^2 <= eps, which bounds its Y by this
    limit = min(Y_eps - 1, 2 * isqrt(Y_eps) + 2)
    for Y in range(1, limit + 1):
        for sign in (4, -4):
            X2 = d * Y * Y + sign
            X = isqrt(X2) if X2 > 0 else None
            if X is not None and X * X == X2 and (d % 4 == 1 or (X % 2 == 0 and Y % 2 == 0)):
                return False
    return True


def test_unit_suite(acceptance_line):
    pell_bad = []
    for d in range(2, 2001):
        if is_squarefree(d):
            u = fundamental_unit(d)
            if u.x * u.x - d * u.y * u.y != u.norm * u.sigma ** 2:
                pell_bad.append(d)
    min_bad = [d for d in range(2, 501) if is_squarefree(d) and not _minimal(d)]
    mats = pf_bad = 0
    rules_bad = []
    for form in ("A", "B", "C"):
        for n in (1, 2):
            for fm in harness.presentations(form, n, 60):
                for ext in level_exts(fm):
                    mats += 1
                    if not product_formula_holds(symbol_matrix(ext)):
                        pf_bad += 1
                    for p in ext.ramified_primes:
                        if not rules_agree(ext.base_radicands, p):
                            rules_bad.append((ext.base_radicands, p))
    ok = not pell_bad and not min_bad and not pf_bad and not rules_bad
    acceptance_line(8, ok, f"Pell violations {len(pell_bad)}, minimality violations {len(min_bad)}, "
                           f"product formula violations {pf_bad} of {mats} matrices, rule disagreements {len(rules_bad)}")
    assert ok

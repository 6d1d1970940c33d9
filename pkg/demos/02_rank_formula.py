"""2-rank of A(K) from the ambiguous class number formula at levels 0 and 1.

Run: python3 demos/02_rank_formula.py
"""

from iwasawa_biquad.genus2rank import e_index, make_ext, rank_A, symbol_matrix

# Level 0: K = Q(sqrt 3, sqrt 133) over F = Q(sqrt 3).
ext = make_ext((3,), 133, "A", [("q", 3)])
res = rank_A(ext)
print(f"K = Q(sqrt3, sqrt133): t = {res.t}, e = {res.e}, rank = {res.rank}, table {res.table.source} says {res.table}")

# Level 1: K_1 = K(sqrt 2) over Q(sqrt 2, sqrt 3). The symbols of each base unit at the
# primes above 7 and 19 form a sign matrix whose GF(2) rank is e.
ext1 = make_ext((2, 3), 133, "A1", [("q", 3)])
mat = symbol_matrix(ext1)
print("columns:", mat.cols)
for label, row in zip(mat.rows, mat.entries):
    print(f"  {label:>14}: {' '.join('+' if v > 0 else '-' for v in row)}")
print("rank at level 1:", rank_A(ext1).rank)

# The hard case r = 7 mod 8 is also settled through h2 of Q(sqrt 2qr), and both routes agree.
hard = make_ext((2, 3), 23, "A1", [("q", 3)])
print("e via h2 route:", e_index(hard), " e via symbols:", e_index(hard, route="direct"))

# A class where the formula and the closed-form level-1 table disagree (see notes/decisions.md).
odd = make_ext((2, 7), 31 * 47, "A1", [("q", 7)])
print("Q(sqrt2, sqrt7, sqrt1457): rank", rank_A(odd, check_table=False).rank)

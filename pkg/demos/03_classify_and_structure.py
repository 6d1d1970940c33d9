"""Classify fields by the 29 items and read off the structure of A(K_inf).

Run: python3 demos/03_classify_and_structure.py
"""

from iwasawa_biquad.classify import main_theorem_case, qo_form, stabilization
from iwasawa_biquad.fields import BiquadField
from iwasawa_biquad.multiquad import iwasawa_structure, kuroda_h2

for K in [BiquadField(3, 19), BiquadField(3, 133), BiquadField(6, 5), BiquadField(33, 5), BiquadField(6, 85)]:
    form = qo_form(K)
    cp = main_theorem_case(K)
    st = stabilization(K)
    item = "no item" if cp is None else f"item {cp.case_id} {cp.condition_label} -> rank {cp.predicted_rank_infty}"
    print(f"{str(K):<22} form {form.form}  {item:<28} levels {st.level0.rank}/{st.level1.rank}")

# (q, r, s) = (3, 19, 7): A(K_inf) is cyclic of order 2^(m-1) with h2(qrs) = 2^m.
K = BiquadField(3, 19 * 7)
res = iwasawa_structure(K)
print(f"\n{K}: A(K_inf) = {res.descriptor}, invariants {res.invariants}, h2(K) = {kuroda_h2(K)}")

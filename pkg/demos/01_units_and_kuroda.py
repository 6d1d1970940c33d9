"""Units of quadratic and multiquadratic fields, then Kuroda's class number formula.

Run: python3 demos/01_units_and_kuroda.py
"""

from iwasawa_biquad.fields import BiquadField
from iwasawa_biquad.formclass import h2_wide
from iwasawa_biquad.multiquad import kuroda_input, kuroda_h2, unit_group, wada_q_index
from iwasawa_biquad.quadunits import fundamental_unit, unit_sqrt_profile

# The fundamental unit of Q(sqrt 399) is 20 + sqrt 399, of norm +1.
u = fundamental_unit(399)
print(f"eps_399 = {u.x} + {u.y} sqrt 399, norm {u.norm:+d}")

# With (q, r, s) = (3, 19, 7) exactly one of 2q(a-1), r(a-1), s(a-1) is a square;
# here r(a-1) = 19^2, so sqrt(2 eps_399) = sqrt 19 + sqrt 21.
prof = unit_sqrt_profile("qrs", (3, 19, 7))
print("square system:", prof.label, "root radicands", prof.radicands, "expands:", prof.expands())

# Wada's method: subfield units plus every square root that exists in the field.
for gens in [(2, 3), (2, 21), (2, 57, 7)]:
    print(f"E of Q{tuple(f'sqrt{g}' for g in gens)}:", unit_group(gens).labels(), "q =", wada_q_index(gens))

# Kuroda: h2(K) = q(K) * prod h2(k_i) / 2^v.
K = BiquadField(3, 133)
ki = kuroda_input(K)
print(f"{K}: q = {ki.q_index}, subfield h2 = {ki.h2_subfields}, v = {ki.v}, h2(K) = {kuroda_h2(K)}")
print("h2(399) =", h2_wide(399).h2, "so h2(K) = h2(399)/2 as expected")

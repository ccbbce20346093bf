"""
Monitor constructions: complementation, products, unions, intersections
========================================================================

Any PBA's almost-sure language is the complement of the positive language
of a finite probabilistic monitor obtained by leaking half the mass out of
every final state.  Monitor acceptance multiplies under the product
construction, which is what closes almost-sure languages under union.
"""

from probuchi import (
    almost_sure_intersection,
    almost_sure_union,
    complement_to_fpm,
    fpm_product,
    gen_m_id,
    gen_m_id_swapped,
    lasso,
    lasso_acceptance,
    reject_pba,
    rename_states,
)
from probuchi.textio import serialize

b = gen_m_id()
m = complement_to_fpm(b)
print(serialize(m))

for cycle in ("1", "0", "10"):
    w = lasso("", cycle)
    pb_, pm = lasso_acceptance(b, w), lasso_acceptance(m, w)
    print(f"word (;{cycle}):  mu_B = {pb_}   mu_M = {pm}   "
          f"(in L_=1(B) iff mu_M = 0: {(pb_ == 1) == (pm == 0)})")

# product multiplies acceptance exactly
prod = fpm_product(m, m)
w = lasso("", "0")
print("product on ;0:", lasso_acceptance(prod, w), "=",
      lasso_acceptance(m, w), "^2")

# reject_pba flips a monitor into a PBA accepting exactly its rejected words
flipped = reject_pba(m)
print("flipped on ;1:", lasso_acceptance(flipped, lasso("", "1")))

# union and intersection under almost-sure semantics
swapped = gen_m_id_swapped()           # L_=1 = { 0^omega }
u = almost_sure_union(b, swapped)      # L_=1 = { 0^omega, 1^omega }
i = almost_sure_intersection(b, rename_states(swapped, suffix="'"))
for cycle in ("1", "0", "10"):
    w = lasso("", cycle)
    print(f"(;{cycle}) in union: {lasso_acceptance(u, w) == 1}   "
          f"in intersection: {lasso_acceptance(i, w) == 1}")

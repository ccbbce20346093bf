"""
Decision procedures with certified answers
==========================================

Emptiness and universality are decidable for monitors (positive semantics),
for hierarchical PBAs (positive semantics), and for every PBA under
almost-sure semantics.  Each nonempty/non-universal answer carries a lasso
certificate whose exact probability is re-verified before it is returned.
"""

from probuchi import (
    complement_to_fpm,
    gen_m_id,
    gen_succinct,
    lasso_acceptance,
)
from probuchi.decide import (
    almost_sure_empty,
    almost_sure_universal,
    fpm_positive_empty,
    fpm_positive_universal,
    hpba_probable_empty,
    hpba_probable_universal,
)

m = gen_m_id()

w = hpba_probable_empty(m)
print("L_>0(m_id) nonempty, witness", w, "with mu =", lasso_acceptance(m, w))
ce = hpba_probable_universal(m)
print("L_>0(m_id) not universal, counterexample", ce,
      "with mu =", lasso_acceptance(m, ce))

w = almost_sure_empty(m)
print("L_=1(m_id) nonempty, witness", w, "with mu =", lasso_acceptance(m, w))
ce = almost_sure_universal(m)
print("L_=1(m_id) not universal, counterexample", ce,
      "with mu =", lasso_acceptance(m, ce))

# the monitor procedures expose their subset witness (C, u, v):
# u reaches C with positive probability, v keeps C inside itself surely
mon = complement_to_fpm(m)
sw = fpm_positive_empty(mon)
print("subset witness for L_>0(comp):", sorted(sw.states), sw.u, sw.v)
print("its lasso", sw.lasso(), "has mu =", lasso_acceptance(mon, sw.lasso()))
ce = fpm_positive_universal(mon)
print("monitor not universal, rejected lasso", ce,
      "mu =", lasso_acceptance(mon, ce))

# the succinct deadline monitors
for n in (1, 2):
    s = gen_succinct(n)
    print(f"succinct({n}): probable-empty witness", hpba_probable_empty(s),
          "| universality counterexample", hpba_probable_universal(s))

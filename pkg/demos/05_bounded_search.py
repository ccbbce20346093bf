"""
Bounded searches where the full problems are undecidable
========================================================

Positive emptiness of a general PBA sits at the second level of the
arithmetic hierarchy, so only one direction is answerable: a bounded search
for a strongly asymptotic witness, whose matrix inequalities are exact and
re-verified.  Containment is refutation-only for the same reason.  The
four-state automaton from gen_p3 accepts no ultimately periodic word at all
with positive probability, which is why true witnesses must keep growing.
"""

from fractions import Fraction

from probuchi import (
    Automaton,
    BuchiAcceptance,
    RabinAcceptance,
    gen_m_id,
    gen_p3,
    lasso,
    lasso_acceptance,
    rabin_decomposition,
)
from probuchi.decide import (
    acceptance_lower_bound,
    containment_refute,
    pba_positive_nonempty_bounded,
)

m = gen_m_id()
w = pba_positive_nonempty_bounded(m, max_len=1, max_j=3)
print("witness set:", sorted(w.states), "reach word:", w.u, "segments:", w.segments)
lb = acceptance_lower_bound(m, w)
print("assembled lasso:", lb.lasso, "lower bound:", lb.value,
      "actual:", lasso_acceptance(m, lb.lasso))

# every lasso is rejected almost surely by the growing-blocks automaton
p3 = gen_p3(Fraction(1, 64))
for cycle in (("x",), ("x", "@"), ("x", "x", "@")):
    print("p3 on cycle", cycle, "-> mu =",
          lasso_acceptance(p3, lasso((), cycle)))

# containment refutation
top = Automaton(
    name="everything",
    role="pba",
    alphabet=("0", "1"),
    states=("s",),
    initial="s",
    acceptance=BuchiAcceptance(frozenset({"s"})),
    transitions={("s", a): (("s", Fraction(1)),) for a in ("0", "1")},
)
refuted = containment_refute(top, m, "almost-sure", bound=2)
print("'everything contained in L_=1(m_id)' refuted by", refuted)
print("'L_=1(m_id) contained in everything' within bound 3:",
      containment_refute(m, top, "almost-sure", bound=3), "(unknown = holds so far)")

# Rabin decomposition of a deterministic two-pair automaton
det = Automaton(
    name="fin_or_inf",
    role="pra",
    alphabet=("a", "b"),
    states=("q0", "q1"),
    initial="q0",
    acceptance=RabinAcceptance(
        ((frozenset({"q1"}), frozenset({"q0"})),
         (frozenset(), frozenset({"q1"})))
    ),
    transitions={
        ("q0", "a"): (("q1", Fraction(1)),),
        ("q0", "b"): (("q0", Fraction(1)),),
        ("q1", "a"): (("q1", Fraction(1)),),
        ("q1", "b"): (("q0", Fraction(1)),),
    },
)
family = rabin_decomposition(det)
print(f"decomposition into {len(family)} positive/negative pairs:")
w = lasso("", "ab")
for (index_set, j), pos, neg in family:
    print(f"  I={sorted(index_set)} j={j}: mu+ = {lasso_acceptance(pos, w)}"
          f"  mu- = {lasso_acceptance(neg, w)}")
print("Rabin mu of ;ab:", lasso_acceptance(det, w))

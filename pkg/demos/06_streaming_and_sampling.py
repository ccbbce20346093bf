"""
Streaming monitors and Monte Carlo estimation
=============================================

A monitor session keeps the exact state distribution and emits the current
reject mass after every symbol; the stream is monotone and converges to one
minus the acceptance probability of the word being fed.  The sampler is an
independent floating-point cross-check of the exact engine, reproducible
from a single root seed.
"""

from probuchi import complement_to_fpm, gen_m_id, lasso, lasso_acceptance
from probuchi.sim import MonitorSession, mc_lasso_estimate, monitor_stream

mon = complement_to_fpm(gen_m_id())
print("feeding 0 0 to the complement monitor:")
for i, p in enumerate(monitor_stream(mon, ["0", "0"])):
    print(f"  after {i} symbol(s): reject mass = {p}")

w = lasso("", "10")
target = 1 - lasso_acceptance(mon, w)
session = MonitorSession(mon)
for s in w.stem:
    session.feed(s)
for _ in range(32):
    for s in w.cycle:
        session.feed(s)
print("reject mass after 32 cycles of ;10:", float(session.reject_probability))
print("limit 1 - mu:", float(target))

m = gen_m_id()
exact = lasso_acceptance(m, w)
for seed in (1, 2, 3):
    est = mc_lasso_estimate(m, w, n=10_000, seed=seed)
    print(f"seed {seed}: mean {est.mean:.4f} (stderr {est.stderr:.4f}),"
          f" exact {float(exact):.4f}")

"""
Common ratio effect and reversals
=================================

Compare f = (f1, lam*p; unknown, 1 - lam*p) against g = (g1, p; 0, 1 - p).
Scaling both winning chances down by lam can flip the choice. The break-even
probability p_bar marks where it flips.
"""

from regretfear import AgentProfile, FearFn
from regretfear.analysis import (
    TwoOutcomeSetup,
    find_break_even,
    psi_closed_modified,
    verify_prop1,
    verify_prop2,
)
from regretfear.dsl import parse_profile
from regretfear.errors import NoReversalFound, NoRoot

# %%
# A square-root fear function: f1=10, g1=3, lam=0.8.
setup = TwoOutcomeSetup(10.0, 3.0, 0.8, 1.0, parse_profile("v:poly:0.5"))
be = find_break_even(setup)
print(f"p_bar = {be.p_bar:.6f} (residual {be.residual:.1e}, bracket {be.bracket})")
for p in (0.3, be.p_bar, 0.95):
    print(f"  p={p:.3f}  psi={psi_closed_modified(setup.at(p)):+.4f}")

report = verify_prop1(setup)
print(f"checked {len(report.checked)} points around p_bar, "
      f"{len(report.violations)} disagree with the predicted side")

# %%
# Not every parameterization has a break-even point: with f1=4000, g1=3000
# the fear-adjusted f loses for every p.
try:
    find_break_even(TwoOutcomeSetup(4000, 3000, 0.8, 1.0, parse_profile("v:poly:0.5")))
except NoRoot as exc:
    print("4000 vs 3000:", exc)

# %%
# Small probabilities: classical regret theory prefers (2500, 0.33) to
# (2400, 0.34). Once the missing mass of f is unknown rather than zero, the
# preference reverses.
rep = verify_prop2(TwoOutcomeSetup(2500, 2400, 33 / 34, 0.34))
print(f"classical {rep.classical.symbol} (phi={rep.phi:.3g}), "
      f"fear-adjusted {rep.modified.symbol} (psi={rep.psi:.3g}) at p={rep.p}")

# %%
# Without fear (v = 1) the two rules agree and no reversal exists.
fearless = TwoOutcomeSetup(2500, 2400, 33 / 34, 0.34, AgentProfile(v=FearFn.unit()))
try:
    verify_prop2(fearless)
except NoReversalFound as exc:
    print("v = 1:", exc)

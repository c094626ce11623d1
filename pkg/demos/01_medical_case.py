"""
Surgery or radiotherapy?
========================

A patient chooses between surgery f and radiotherapy g. Outcomes are given
directly as utilities. Classical regret theory already prefers radiotherapy;
the question is what happens once either treatment carries a small chance of
an outcome nobody can describe in advance.
"""

from regretfear import AgentProfile, compare, joint_matrix
from regretfear.analysis import medical_pair

# Q(x) = x**3 and the linear fear function v(x) = 1 - x.
profile = AgentProfile()
print("profile:", profile.spec)

# %%
# The decision matrix of the classical case is the independent product of the
# two prospects: four states with probabilities 0.18, 0.42, 0.12 and 0.28.
surgery, radio = medical_pair("classical")
for prob, x, y in joint_matrix(surgery, radio).rows:
    print(f"  p={prob:.2f}  surgery={x}  radiotherapy={y}")

# %%
# Add an unknown outcome of mass 0.1 to surgery (case I), to radiotherapy
# (case II) or to both (case III). The unknown mass is taken evenly from the
# known branches, and every known utility of that treatment is scaled by
# v(0.1) = 0.9.
for case, p_fu, p_gu in [("classical", 0, 0), ("I", 0.1, 0), ("II", 0, 0.1), ("III", 0.1, 0.1)]:
    f, g = medical_pair(case, p_fu, p_gu)
    verdict = compare(profile, f, g)
    print(f"{case:>9}: f={f}  g={g}")
    print(f"{'':>9}  psi={verdict.psi:+.4f}  {verdict.relation.symbol}")

# %%
# Case II flips the preference: once radiotherapy has an unknown side, surgery
# is preferred, although radiotherapy wins every other comparison.

"""
Reflection effect
=================

With u(x) = x and v(x) = 1 - x, mirroring every outcome through zero
mirrors the preference: the agent who avoids (4000, 0.8; unknown, 0.2) in
favour of a sure 3000 seeks the risky option when both are losses.
"""

import numpy as np

from regretfear import AgentProfile
from regretfear.analysis import verify_reflection

rep = verify_reflection(4000, 3000, 0.8, 1.0, AgentProfile())
print(f"gains:  psi={rep.original.psi:+.4g} {rep.original.relation.symbol}")
print(f"losses: psi={rep.mirrored.psi:+.4g} {rep.mirrored.relation.symbol}")

# %%
# The effect is exact for any such pair, not just this one.
rng = np.random.default_rng(1)
trials = [verify_reflection(*rng.uniform(-10, 10, 2), *rng.uniform(0.01, 1, 2), AgentProfile())
          for _ in range(500)]
print(f"{sum(r.holds for r in trials)}/{len(trials)} random pairs reflect")

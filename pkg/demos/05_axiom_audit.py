"""
Auditing the axioms
===================

The fear-adjusted rule should still be complete, monotone, d-transitive and
trade-off consistent. The audits draw random prospects and look for
counterexamples; every finding carries the seed and sample index needed to
replay it.
"""

from regretfear import AgentProfile, RegretQ
from regretfear.audit import AuditConfig, audit_completeness, format_reports, replay, run_audits

cfg = AuditConfig(n=2000, seed=0)
print(format_reports(run_audits(cfg), cfg))

# %%
# A regret function that is not skew-symmetric breaks completeness: Psi(f, g)
# and Psi(g, f) no longer tell the same story.
broken = AuditConfig(n=500, seed=0,
                     profile=AgentProfile(q=RegretQ.custom(lambda x: x ** 3 - 0.01, "shifted")))
report = audit_completeness(broken)
print(report.line())
first = report.findings[0]
print("replay of sample", first.index, "->", replay("completeness", broken, first.index)[0])

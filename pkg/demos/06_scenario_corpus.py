"""
Scenario corpora
================

The bundled corpora hold the classic choice problems, first with zero
outcomes and then with unknown ones, together with the choice most people
made. A fixed profile will not match every modal answer; the report shows
where it does.
"""

from collections import Counter

from regretfear import AgentProfile, compare
from regretfear.dsl import bundled_corpus, format_case

profile = AgentProfile()
for name in ("table1", "table2"):
    tally = Counter()
    for case in bundled_corpus(name):
        verdict = compare(profile, case.f, case.g)
        tally["agree" if verdict.relation is case.expect else "disagree"] += 1
    print(f"{name}: {dict(tally)}")

# %%
# Cases are plain text, so they are easy to write by hand.
print(format_case(bundled_corpus("table2")[1]))

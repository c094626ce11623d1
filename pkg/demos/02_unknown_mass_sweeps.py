"""
How much unknown does it take?
==============================

Sweep the unknown mass p_u of one treatment and watch Psi. When surgery
carries the unknown (case I), Psi falls steadily. When radiotherapy carries
it (case II), Psi rises and crosses zero once: that is the point where the
preference reverses. The crossing depends on the fear function.
"""

import sys

import numpy as np

from regretfear import FearFn
from regretfear.analysis import sweep_contour, sweep_pu

fears = [FearFn.poly(1), FearFn.poly(2), FearFn.poly(0.5), FearFn.sinpoly(1)]

case_i = sweep_pu("I", fears, grid=101, p_max=0.8)
case_ii = sweep_pu("II", fears, grid=101, p_max=0.6)
pus = case_ii.coords[:, 0]

for spec, col in case_ii.columns.items():
    k = int(np.argmax(col > 0))
    # Linear interpolation between the two grid points around the crossing.
    p0, p1, y0, y1 = pus[k - 1], pus[k], col[k - 1], col[k]
    cross = p0 - y0 * (p1 - p0) / (y1 - y0)
    drop = case_i.columns[spec][-1] - case_i.columns[spec][0]
    print(f"{spec:>10}: case II reverses near p_u = {cross:.3f}; "
          f"case I falls by {-drop:.3f} over [0, 0.8]")

# %%
# The same data as CSV, ready for any plotting tool. Pass a path to save it.
if len(sys.argv) > 1:
    with open(sys.argv[1], "w", encoding="utf-8", newline="") as fh:
        case_ii.write_csv(fh)
    print("wrote", sys.argv[1])

# %%
# With unknowns on both sides (case III) the sign of Psi depends on both
# masses. A coarse grid shows where surgery wins.
contour = sweep_contour(FearFn.poly(1), fu_grid=5, gu_grid=4)
for p_fu, p_gu, psi in contour.rows():
    print(f"p_fu={p_fu:.2f} p_gu={p_gu:.2f} psi={psi:+.4f}")

"""Regret theory for prospects that contain unknown outcomes.

Known outcomes are valued at ``v(p_u) * u(x)``, where ``p_u`` is the total
probability of the prospect's unknown outcomes and ``v`` is a decreasing fear
function with ``v(0) = 1`` and ``v(1) = 0``. Unknown outcomes are worth zero.
Two prospects are compared through the regret functional
``Psi = sum p_i Q(u_bar(f_i) - u_bar(g_i))``.
"""

from regretfear.engine import (
    AgentProfile,
    PreferenceVerdict,
    Relation,
    adjusted_utility,
    compare,
    psi_classical,
    psi_matrix,
    psi_modified,
)
from regretfear.functions import FearFn, RegretQ, RegretR, UtilityFn, eval_q, eval_u, eval_v
from regretfear.prospect import (
    UNKNOWN,
    DecisionMatrix,
    Prospect,
    joint_matrix,
    unknown_mass,
    validate,
)
from regretfear.dsl import format_prospect, parse_profile, parse_prospect

__version__ = "0.1.0"

__all__ = [
    "AgentProfile", "DecisionMatrix", "FearFn", "PreferenceVerdict", "Prospect", "RegretQ",
    "RegretR", "Relation", "UNKNOWN", "UtilityFn", "adjusted_utility", "compare", "eval_q",
    "eval_u", "eval_v", "format_prospect", "joint_matrix", "parse_profile", "parse_prospect",
    "psi_classical", "psi_matrix", "psi_modified", "unknown_mass", "validate",
]

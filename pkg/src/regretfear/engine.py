"""Fear-adjusted utilities, the choice functional Psi, and preference verdicts.

For two prospects ``f`` and ``g`` the decision matrix is the independent
product of their branches. Known outcomes are valued at
``v(p_u) * u(x)`` where ``p_u`` is the unknown mass of the prospect that owns
the outcome; unknown outcomes are valued at zero. Then

    Psi = sum over states of  prob * Q(u_bar(f_state) - u_bar(g_state))

and ``f`` is weakly preferred to ``g`` iff ``Psi >= 0``. With no unknown
outcomes this is exactly classical regret theory.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Literal

from regretfear.errors import DomainViolation, UnknownOutcomePresent
from regretfear.functions import FearFn, RegretQ, UtilityFn
from regretfear.prospect import (
    UNKNOWN,
    DecisionMatrix,
    Interpretation,
    Outcome,
    Prospect,
    joint_matrix,
    unknown_mass,
)

Mode = Literal["classical", "modified"]


@dataclass(frozen=True)
class AgentProfile:
    """Utility ``u``, fear ``v`` and regret ``Q`` of one decision maker.

    ``fear_overrides`` optionally maps a decision-matrix row index to its own
    fear function; every other state uses the common ``v``.
    """

    u: UtilityFn = field(default_factory=UtilityFn.identity)
    v: FearFn = field(default_factory=FearFn.linear)
    q: RegretQ = field(default_factory=lambda: RegretQ.power_odd(3))
    tie_eps: float = 1e-12
    fear_overrides: Mapping[int, FearFn] | None = None

    def __post_init__(self):
        if not self.tie_eps > 0:
            raise ValueError("tie_eps must be positive")

    @property
    def spec(self) -> str:
        return f"{self.u.spec} {self.v.spec} {self.q.spec}"

    def fear_for(self, state: int | None) -> FearFn:
        if state is not None and self.fear_overrides and state in self.fear_overrides:
            return self.fear_overrides[state]
        return self.v


class Relation(enum.Enum):
    F_STRICT = "f>g"
    G_STRICT = "f<g"
    INDIFFERENT = "f~g"

    @property
    def symbol(self) -> str:
        return self.value

    def mirrored(self) -> Relation:
        if self is Relation.F_STRICT:
            return Relation.G_STRICT
        if self is Relation.G_STRICT:
            return Relation.F_STRICT
        return self


@dataclass(frozen=True)
class PreferenceVerdict:
    psi: float
    relation: Relation


def classify(psi: float, tie_eps: float) -> Relation:
    if psi > tie_eps:
        return Relation.F_STRICT
    if psi < -tie_eps:
        return Relation.G_STRICT
    return Relation.INDIFFERENT


def adjusted_utility(profile: AgentProfile, outcome: Outcome, p_u_of_owner: float,
                     interpretation: Interpretation = "money",
                     state: int | None = None) -> float:
    """Fear-adjusted utility of one outcome; unknown outcomes are worth zero."""
    if not 0.0 <= p_u_of_owner <= 1.0:
        raise DomainViolation(f"unknown mass must lie in [0, 1], got {p_u_of_owner!r}")
    if outcome is UNKNOWN:
        return 0.0
    weight = profile.fear_for(state)(p_u_of_owner)
    value = outcome if interpretation == "utility" else profile.u(outcome)
    return weight * value


def _clip_mass(p: float) -> float:
    # fsum of probabilities can overshoot 1 by an ulp.
    return 1.0 if 1.0 < p <= 1.0 + 1e-9 else p


def psi_matrix(profile: AgentProfile, matrix: DecisionMatrix,
               f_interpretation: Interpretation = "money",
               g_interpretation: Interpretation = "money",
               p_fu: float | None = None, p_gu: float | None = None) -> float:
    """Psi over an explicit decision matrix.

    Unknown masses default to the marginal unknown mass of each side of the
    matrix. The row terms are summed with ``math.fsum`` (exactly rounded, so
    the result does not depend on accumulated rounding).
    """
    if p_fu is None or p_gu is None:
        mf, mg = matrix.marginal_unknown_mass()
        p_fu = mf if p_fu is None else p_fu
        p_gu = mg if p_gu is None else p_gu
    p_fu, p_gu = _clip_mass(p_fu), _clip_mass(p_gu)
    q = profile.q
    if not profile.fear_overrides:
        # Hoist the common fear weights out of the row loop.
        wf, wg = profile.v(p_fu), profile.v(p_gu)
        u = profile.u
        terms = []
        for prob, x, y in matrix.rows:
            ux = 0.0 if x is UNKNOWN else wf * (x if f_interpretation == "utility" else u(x))
            uy = 0.0 if y is UNKNOWN else wg * (y if g_interpretation == "utility" else u(y))
            terms.append(prob * q(ux - uy))
        return math.fsum(terms)
    terms = []
    for i, (prob, x, y) in enumerate(matrix.rows):
        ux = adjusted_utility(profile, x, p_fu, f_interpretation, i)
        uy = adjusted_utility(profile, y, p_gu, g_interpretation, i)
        terms.append(prob * q(ux - uy))
    return math.fsum(terms)


def psi_modified(profile: AgentProfile, f: Prospect, g: Prospect) -> float:
    """Psi of the fear-adjusted rule for two independent prospects."""
    return psi_matrix(profile, joint_matrix(f, g), f.interpretation, g.interpretation,
                      unknown_mass(f), unknown_mass(g))


def psi_classical(profile: AgentProfile, f: Prospect, g: Prospect) -> float:
    """Classical regret-theory Psi; defined only for prospects without unknowns.

    Shares the code path of :func:`psi_modified`: with zero unknown mass every
    fear weight is ``v(0) == 1``.
    """
    if f.has_unknown or g.has_unknown:
        raise UnknownOutcomePresent("classical regret theory has no value for unknown outcomes")
    return psi_modified(profile, f, g)


def psi(profile: AgentProfile, f: Prospect, g: Prospect, mode: Mode = "modified") -> float:
    if mode == "classical":
        return psi_classical(profile, f, g)
    if mode == "modified":
        return psi_modified(profile, f, g)
    raise ValueError(f"unknown mode {mode!r}")


def compare(profile: AgentProfile, f: Prospect, g: Prospect,
            mode: Mode = "modified") -> PreferenceVerdict:
    value = psi(profile, f, g, mode)
    return PreferenceVerdict(value, classify(value, profile.tie_eps))

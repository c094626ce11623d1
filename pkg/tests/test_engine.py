from __future__ import annotations

import numpy as np
import pytest

import oracle
from regretfear import (
    UNKNOWN,
    AgentProfile,
    DecisionMatrix,
    FearFn,
    Prospect,
    RegretQ,
    Relation,
    adjusted_utility,
    compare,
    psi_classical,
    psi_matrix,
    psi_modified,
)
from regretfear.errors import DomainViolation, UnknownOutcomePresent
from regretfear.engine import psi

PROFILE = AgentProfile()
G = Prospect([(0.7, 0.3), (0.28, 0.7)], "utility")
F = Prospect([(0.5, 0.6), (0.27, 0.4)], "utility")
F_I = Prospect([(0.5, 0.55), (0.27, 0.35), (UNKNOWN, 0.1)], "utility")
G_II = Prospect([(0.7, 0.25), (0.28, 0.65), (UNKNOWN, 0.1)], "utility")


def _plain(p):
    return [(None if x is UNKNOWN else x, q) for x, q in p.branches]


def test_adjusted_utility():
    assert adjusted_utility(PROFILE, UNKNOWN, 0.4) == 0.0
    assert adjusted_utility(PROFILE, 0.5, 0.1, "utility") == pytest.approx(0.45, abs=1e-16)
    assert adjusted_utility(PROFILE, 0.5, 0.0) == 0.5
    with pytest.raises(DomainViolation):
        adjusted_utility(PROFILE, 0.5, 1.5)


@pytest.mark.parametrize("f, g, reported, tol", [
    (F, G, -0.0065, 5e-5),
    (F_I, G, -0.0225, 1e-4),
    (F, G_II, 0.0092, 1e-4),
    (F_I, G_II, -0.0049, 1e-4),
])
def test_medical_values(f, g, reported, tol):
    value = psi_modified(PROFILE, f, g)
    assert abs(value - reported) <= tol
    assert value == pytest.approx(oracle.psi(_plain(f), _plain(g)), abs=1e-15)


def test_medical_frozen_values():
    # Exact-arithmetic values of the four medical sums, rounded to double.
    assert psi_classical(PROFILE, F, G) == pytest.approx(-0.00650896, abs=1e-15)
    assert psi_modified(PROFILE, F_I, G) == pytest.approx(-0.02254728925, abs=1e-15)
    assert psi_modified(PROFILE, F, G_II) == pytest.approx(0.0092423532, abs=1e-15)
    assert psi_modified(PROFILE, F_I, G_II) == pytest.approx(-0.004875847245, abs=1e-15)


def test_case_ii_is_strict_preference():
    assert compare(PROFILE, F, G_II).relation is Relation.F_STRICT


def test_classical_rejects_unknown():
    with pytest.raises(UnknownOutcomePresent):
        psi_classical(PROFILE, F_I, G)
    with pytest.raises(ValueError):
        psi(PROFILE, F, G, "other")


def test_classical_antisymmetric_and_self():
    assert psi_classical(PROFILE, F, G) == -psi_classical(PROFILE, G, F)
    assert psi_classical(PROFILE, F, F) == 0.0
    assert compare(PROFILE, F, F).relation is Relation.INDIFFERENT


def test_total_unknown_indifference():
    f = Prospect([(UNKNOWN, 1.0)])
    g = Prospect([(UNKNOWN, 0.4), (UNKNOWN, 0.6)])
    verdict = compare(PROFILE, f, g)
    assert verdict.psi == 0.0
    assert verdict.relation is Relation.INDIFFERENT


def test_owner_mass_not_opponent():
    # g's outcome must be weighted by v(p_gu) = 1, not by f's unknown mass.
    f = Prospect([(1.0, 0.5), (UNKNOWN, 0.5)])
    g = Prospect.certain(1.0)
    expected = 0.5 * (0.5 - 1.0) ** 3 + 0.5 * (0.0 - 1.0) ** 3
    assert psi_modified(PROFILE, f, g) == pytest.approx(expected, abs=1e-16)


def test_money_interpretation_applies_u():
    from regretfear.functions import UtilityFn

    prof = AgentProfile(u=UtilityFn.power(0.5))
    f = Prospect([(4.0, 1.0)])
    g = Prospect([(1.0, 1.0)])
    assert psi_modified(prof, f, g) == 1.0
    assert psi_modified(prof, f.with_interpretation("utility"), g) == 27.0


def test_fear_overrides_per_state():
    m = DecisionMatrix.aligned([0.5, 0.25, 0.25], [1.0, 1.0, UNKNOWN], [0.0, 0.0, 0.0])
    prof = AgentProfile(fear_overrides={0: FearFn.poly(2)})
    wf0, wf1 = 1 - 0.25 ** 2, 1 - 0.25
    expected = 0.5 * wf0 ** 3 + 0.25 * wf1 ** 3
    assert psi_matrix(prof, m) == pytest.approx(expected, abs=1e-16)


def test_tie_eps_classification():
    prof = AgentProfile(tie_eps=1e-3)
    g = Prospect.certain(0.0)
    assert compare(prof, Prospect.certain(0.09), g).relation is Relation.INDIFFERENT
    assert compare(prof, Prospect.certain(0.11), g).relation is Relation.F_STRICT
    with pytest.raises(ValueError):
        AgentProfile(tie_eps=0.0)


def test_matches_oracle_on_random_pairs():
    rng = np.random.default_rng(7)
    for _ in range(300):
        branches = []
        for _side in range(2):
            n = int(rng.integers(1, 5))
            probs = rng.dirichlet(np.ones(n))
            xs = rng.uniform(-2, 2, n)
            unk = rng.random(n) < 0.3
            branches.append([(None if k else float(x), float(p))
                             for x, p, k in zip(xs, probs, unk)])
        f = Prospect([(UNKNOWN if x is None else x, p) for x, p in branches[0]], "utility")
        g = Prospect([(UNKNOWN if x is None else x, p) for x, p in branches[1]], "utility")
        assert psi_modified(PROFILE, f, g) == pytest.approx(
            oracle.psi(*branches), rel=1e-12, abs=1e-13)


def test_custom_q_is_used():
    prof = AgentProfile(q=RegretQ.custom(lambda x: 2 * x, "double"))
    assert psi_modified(prof, Prospect.certain(1.0), Prospect.certain(0.25)) == 1.5

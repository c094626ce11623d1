from __future__ import annotations

import math
import pickle

import pytest

from regretfear.errors import (
    EmptyProspect,
    NegativeProbability,
    NonFiniteOutcome,
    ProbabilitySumMismatch,
    ValidationError,
)
from regretfear.prospect import (
    UNKNOWN,
    DecisionMatrix,
    Prospect,
    joint_matrix,
    unknown_mass,
    validate,
)


def test_valid_prospects():
    assert len(Prospect([(2400, 1.0)])) == 1
    p = Prospect([(2500, 0.33), (UNKNOWN, 0.67)])
    assert p.has_unknown
    assert p.outcomes == (2500.0, UNKNOWN)


def test_sum_mismatch_reports_total():
    with pytest.raises(ProbabilitySumMismatch) as info:
        Prospect([(2500, 0.33), (UNKNOWN, 0.60)])
    assert info.value.total == pytest.approx(0.93)


@pytest.mark.parametrize("branches, error", [
    ([], EmptyProspect),
    ([(1.0, 1.2), (2.0, -0.2)], NegativeProbability),
    ([(math.nan, 1.0)], NonFiniteOutcome),
    ([(math.inf, 1.0)], NonFiniteOutcome),
    ([(1.0, math.nan)], ProbabilitySumMismatch),
])
def test_validation_errors(branches, error):
    with pytest.raises(error):
        validate(branches)
    with pytest.raises(ValidationError):
        Prospect(branches)


def test_sum_tolerance():
    Prospect([(1, 0.5), (2, 0.5 + 5e-10)])
    with pytest.raises(ProbabilitySumMismatch):
        Prospect([(1, 0.5), (2, 0.5 + 1e-8)])


def test_normalized_rescales():
    p = Prospect.normalized([(1, 2.0), (UNKNOWN, 2.0)])
    assert p.probs == (0.5, 0.5)
    with pytest.raises(ProbabilitySumMismatch):
        Prospect.normalized([(1, 0.0)])


def test_interpretation_checked():
    with pytest.raises(ValueError):
        Prospect([(1, 1.0)], "dollars")


def test_unknown_singleton_survives_pickle():
    assert pickle.loads(pickle.dumps(UNKNOWN)) is UNKNOWN
    p = Prospect([(1, 0.5), (UNKNOWN, 0.5)])
    assert pickle.loads(pickle.dumps(p)) == p


@pytest.mark.parametrize("branches, mass", [
    ([(4000, 0.8), (UNKNOWN, 0.2)], 0.2),
    ([(3000, 1.0)], 0.0),
    ([(UNKNOWN, 0.3), (UNKNOWN, 0.7)], 1.0),
])
def test_unknown_mass(branches, mass):
    assert unknown_mass(Prospect(branches)) == mass


def test_joint_matrix_classical_probs():
    f = Prospect([(0.5, 0.6), (0.27, 0.4)])
    g = Prospect([(0.7, 0.3), (0.28, 0.7)])
    m = joint_matrix(f, g)
    assert m.probs == pytest.approx((0.18, 0.42, 0.12, 0.28), abs=1e-15)
    assert [(x, y) for _, x, y in m.rows] == [(0.5, 0.7), (0.5, 0.28), (0.27, 0.7), (0.27, 0.28)]


def test_joint_matrix_with_unknown_probs():
    f = Prospect([(0.5, 0.55), (0.27, 0.35), (UNKNOWN, 0.1)])
    g = Prospect([(0.7, 0.3), (0.28, 0.7)])
    m = joint_matrix(f, g)
    assert m.probs == pytest.approx((0.165, 0.385, 0.105, 0.245, 0.03, 0.07), abs=1e-15)
    assert m.marginal_unknown_mass() == pytest.approx((0.1, 0.0))


def test_joint_matrix_certainties_and_pruning():
    m = joint_matrix(Prospect.certain(3.0), Prospect.certain(2.0))
    assert m.rows == ((1.0, 3.0, 2.0),)
    f = Prospect([(1, 1.0), (2, 0.0)])
    assert len(joint_matrix(f, f)) == 1
    assert len(joint_matrix(f, f, prune=False)) == 4


def test_aligned_and_swapped():
    m = DecisionMatrix.aligned([0.25, 0.75], [1.0, UNKNOWN], [2.0, 3.0])
    assert m.swapped().rows == ((0.25, 2.0, 1.0), (0.75, 3.0, UNKNOWN))
    assert m.marginal_unknown_mass() == (0.75, 0.0)
    with pytest.raises(ValueError):
        DecisionMatrix.aligned([1.0], [1.0, 2.0], [1.0])


def test_negated_keeps_unknowns():
    p = Prospect([(-4000, 0.8), (UNKNOWN, 0.2)])
    assert p.negated().outcomes == (4000.0, UNKNOWN)
    assert str(p) == "(-4000, 0.8; ?, 0.2)"

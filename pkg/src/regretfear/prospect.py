"""Prospects with possibly-unknown outcomes and their joint decision matrices.

A prospect is a finite list of ``(outcome, probability)`` branches. An outcome
is either a finite float or the :data:`UNKNOWN` marker. All branches carrying
:data:`UNKNOWN` are aggregated into a single unknown mass ``p_u``; their
individual identities are irrelevant to the theory.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Literal, Union

from regretfear.errors import (
    EmptyProspect,
    NegativeProbability,
    NonFiniteOutcome,
    ProbabilitySumMismatch,
)

PROB_TOL = 1e-9

Interpretation = Literal["money", "utility"]
INTERPRETATIONS = ("money", "utility")


class _Unknown:
    """Singleton marker for an outcome whose payoff is unspecified."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNKNOWN"

    def __str__(self) -> str:
        return "?"

    def __reduce__(self):
        return (_Unknown, ())


UNKNOWN = _Unknown()

Outcome = Union[float, _Unknown]
Branch = tuple[Outcome, float]


def is_unknown(outcome: Outcome) -> bool:
    return outcome is UNKNOWN


def validate(branches: Iterable[tuple[Outcome, float]]) -> None:
    """Raise a :class:`~regretfear.errors.ValidationError` unless ``branches`` form a prospect.

    Checks, in order: at least one branch, finite known outcomes,
    non-negative probabilities, and a probability sum within ``1e-9`` of one.
    """
    branches = list(branches)
    if not branches:
        raise EmptyProspect()
    for i, (outcome, prob) in enumerate(branches):
        if outcome is not UNKNOWN and not math.isfinite(outcome):
            raise NonFiniteOutcome(outcome, i)
        if prob < 0:
            raise NegativeProbability(prob, i)
    total = math.fsum(prob for _, prob in branches)
    if not abs(total - 1.0) <= PROB_TOL:
        raise ProbabilitySumMismatch(total)


@dataclass(frozen=True)
class Prospect:
    """An immutable, validated prospect.

    ``interpretation`` states whether known outcomes are money amounts that
    pass through the utility function (``"money"``) or are already utility
    values (``"utility"``).
    """

    branches: tuple[Branch, ...]
    interpretation: Interpretation = "money"

    def __init__(self, branches: Iterable[tuple[Outcome, float]],
                 interpretation: Interpretation = "money"):
        cleaned = tuple(
            (outcome if outcome is UNKNOWN else float(outcome), float(prob))
            for outcome, prob in branches
        )
        if interpretation not in INTERPRETATIONS:
            raise ValueError(f"interpretation must be one of {INTERPRETATIONS}")
        validate(cleaned)
        object.__setattr__(self, "branches", cleaned)
        object.__setattr__(self, "interpretation", interpretation)

    @classmethod
    def normalized(cls, branches: Iterable[tuple[Outcome, float]],
                   interpretation: Interpretation = "money") -> Prospect:
        """Rescale probabilities to sum to one; only ever used on explicit request."""
        branches = list(branches)
        if not branches:
            raise EmptyProspect()
        total = math.fsum(float(p) for _, p in branches)
        if not total > 0:
            raise ProbabilitySumMismatch(total)
        return cls([(x, float(p) / total) for x, p in branches], interpretation)

    @classmethod
    def certain(cls, outcome: Outcome, interpretation: Interpretation = "money") -> Prospect:
        return cls([(outcome, 1.0)], interpretation)

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)

    @property
    def outcomes(self) -> tuple[Outcome, ...]:
        return tuple(x for x, _ in self.branches)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.branches)

    @property
    def has_unknown(self) -> bool:
        return any(x is UNKNOWN for x, _ in self.branches)

    def negated(self) -> Prospect:
        """Mirror every known outcome through zero."""
        return Prospect(
            [(x if x is UNKNOWN else -x, p) for x, p in self.branches],
            self.interpretation,
        )

    def with_interpretation(self, interpretation: Interpretation) -> Prospect:
        return Prospect(self.branches, interpretation)

    def __str__(self) -> str:
        from regretfear.dsl import format_prospect

        return format_prospect(self)


def unknown_mass(p: Prospect) -> float:
    """Total probability carried by unknown branches of ``p``."""
    return math.fsum(prob for outcome, prob in p.branches if outcome is UNKNOWN)


@dataclass(frozen=True)
class DecisionMatrix:
    """Joint state table: each row is ``(prob, outcome_f, outcome_g)``.

    Rows of a matrix built by :func:`joint_matrix` come from the independent
    product of two prospects. Audits also build state-aligned matrices
    directly, where both prospects share one state partition.
    """

    rows: tuple[tuple[float, Outcome, Outcome], ...]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(r[0] for r in self.rows)

    def marginal_unknown_mass(self) -> tuple[float, float]:
        """Unknown mass of the f side and of the g side."""
        pf = math.fsum(p for p, x, _ in self.rows if x is UNKNOWN)
        pg = math.fsum(p for p, _, y in self.rows if y is UNKNOWN)
        return pf, pg

    def swapped(self) -> DecisionMatrix:
        return DecisionMatrix(tuple((p, y, x) for p, x, y in self.rows))

    @classmethod
    def aligned(cls, probs: Iterable[float], f_outcomes: Iterable[Outcome],
                g_outcomes: Iterable[Outcome]) -> DecisionMatrix:
        """Build a matrix for two state-contingent prospects on shared states."""
        rows = tuple(
            (float(p), x, y) for p, x, y in zip(probs, f_outcomes, g_outcomes, strict=True)
        )
        return cls(rows)


def joint_matrix(f: Prospect, g: Prospect, prune: bool = True) -> DecisionMatrix:
    """Independent product of two prospects, f-branch-major.

    Rows with zero probability are dropped when ``prune`` is true.
    """
    rows = []
    for x, pf in f.branches:
        for y, pg in g.branches:
            prob = pf * pg
            if prune and prob == 0.0:
                continue
            rows.append((prob, x, y))
    return DecisionMatrix(tuple(rows))

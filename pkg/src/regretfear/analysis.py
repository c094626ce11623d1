"""Two-outcome closed forms, break-even search, ratio-effect checks and sweeps.

The two-outcome setups compare ``f = (f1, lam*p; X, 1 - lam*p)`` against
``g = (g1, p; 0, 1 - p)``, where ``X`` is an unknown outcome (the
``f_has_unknown`` variant) or zero (``both_zero``). The unknown mass of ``f``
co-varies with ``p`` as ``1 - lam*p``.

The medical sweeps reproduce the surgery/radiotherapy example: an unknown risk
of mass ``p_u`` is funded by removing ``p_u/m`` from each of the ``m`` known
branches of the affected treatment.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Literal, TextIO

import numpy as np

from regretfear.engine import (
    AgentProfile,
    Mode,
    PreferenceVerdict,
    Relation,
    classify,
    compare,
    psi_classical,
    psi_modified,
)
from regretfear.errors import DomainViolation, HypothesisUnmet, NoReversalFound, NoRoot
from regretfear.functions import FearFn, RegretQ, UtilityFn
from regretfear.prospect import UNKNOWN, Prospect

Variant = Literal["f_has_unknown", "g_has_unknown", "both_zero"]

# --------------------------------------------------------------------------- setups


@dataclass(frozen=True)
class TwoOutcomeSetup:
    f1: float
    g1: float
    lam: float
    p: float
    profile: AgentProfile = field(default_factory=AgentProfile)
    variant: Variant = "f_has_unknown"

    def __post_init__(self):
        for name in ("f1", "g1", "lam", "p"):
            if not math.isfinite(getattr(self, name)):
                raise DomainViolation(f"{name} must be finite")
        if not 0.0 < self.lam < 1.0:
            raise DomainViolation(f"lam must lie in (0, 1), got {self.lam!r}")
        if not 0.0 < self.p <= 1.0:
            raise DomainViolation(f"p must lie in (0, 1], got {self.p!r}")
        if self.variant not in ("f_has_unknown", "g_has_unknown", "both_zero"):
            raise DomainViolation(f"unknown variant {self.variant!r}")

    @property
    def p_fu(self) -> float:
        return 1.0 - self.lam * self.p if self.variant == "f_has_unknown" else 0.0

    def at(self, p: float) -> TwoOutcomeSetup:
        return replace(self, p=p)

    def with_variant(self, variant: Variant) -> TwoOutcomeSetup:
        return replace(self, variant=variant)

    def prospects(self) -> tuple[Prospect, Prospect]:
        pf = self.lam * self.p
        f_rest = UNKNOWN if self.variant == "f_has_unknown" else 0.0
        g_rest = UNKNOWN if self.variant == "g_has_unknown" else 0.0
        f = Prospect([(self.f1, pf), (f_rest, 1.0 - pf)])
        g = Prospect([(self.g1, self.p), (g_rest, 1.0 - self.p)])
        return f, g


def psi_setup(s: TwoOutcomeSetup, mode: Mode = "modified") -> float:
    """Psi of a setup through the generic decision-matrix engine."""
    if mode == "classical":
        return psi_classical(s.profile, *s.with_variant("both_zero").prospects())
    return psi_modified(s.profile, *s.prospects())


def _require_zero_utility_at_zero(u: UtilityFn) -> None:
    if not u.zero_at_zero:
        raise DomainViolation("closed forms assume u(0) == 0")


def _bracket(p: float, lam: float, q: RegretQ, a: float, b: float) -> float:
    return p * (lam * q(a) - q(b) + lam * p * (q(a - b) - q(a) + q(b)))


def psi_closed_modified(s: TwoOutcomeSetup) -> float:
    """Closed form of Psi when f carries the unknown branch."""
    if s.variant != "f_has_unknown":
        raise DomainViolation("the modified closed form needs variant 'f_has_unknown'")
    prof = s.profile
    _require_zero_utility_at_zero(prof.u)
    a = prof.v(1.0 - s.lam * s.p) * prof.u(s.f1)
    return _bracket(s.p, s.lam, prof.q, a, prof.u(s.g1))


def psi_closed_classical(s: TwoOutcomeSetup) -> float:
    """Closed form of the classical functional (often written Phi)."""
    if s.variant != "both_zero":
        raise DomainViolation("the classical closed form needs variant 'both_zero'")
    prof = s.profile
    _require_zero_utility_at_zero(prof.u)
    return _bracket(s.p, s.lam, prof.q, prof.u(s.f1), prof.u(s.g1))


# --------------------------------------------------------------------------- break-even


@dataclass(frozen=True)
class BreakEven:
    p_bar: float
    residual: float
    bracket: tuple[float, float]
    sign_changes: int
    converged: bool

    @property
    def multiple(self) -> bool:
        return self.sign_changes > 1


def find_break_even(s: TwoOutcomeSetup, mode: Mode = "modified", grid: int = 1024,
                    tol: float = 1e-10, max_iter: int = 200) -> BreakEven:
    """Smallest ``p`` in (0, 1] with Psi(p) = 0, by grid scan then bisection.

    Raises :class:`NoRoot` when Psi keeps one sign over the whole grid.
    """
    ps = np.arange(1, grid + 1) / grid

    def f(p: float) -> float:
        return psi_setup(s.at(float(p)), mode)

    vals = np.array([f(p) for p in ps])
    crossings = [i for i in range(grid - 1) if vals[i] * vals[i + 1] < 0 or vals[i] == 0.0]
    if vals[-1] == 0.0:
        crossings.append(grid - 1)
    if not crossings:
        raise NoRoot(f"Psi keeps sign {int(np.sign(vals[0]))} on the {grid}-point grid")
    i = crossings[0]
    if vals[i] == 0.0:
        p_bar = float(ps[i])
        lo = float(ps[i - 1]) if i > 0 else p_bar
        hi = float(ps[i + 1]) if i + 1 < grid else p_bar
        return BreakEven(p_bar, 0.0, (lo, hi), len(crossings), True)
    lo, hi = float(ps[i]), float(ps[i + 1])
    flo = vals[i]
    mid, fmid = lo, flo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) <= tol or mid in (lo, hi):
            break
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return BreakEven(mid, fmid, (float(ps[i]), float(ps[i + 1])), len(crossings),
                     abs(fmid) <= tol)


# --------------------------------------------------------------------------- ratio-effect and reversal checks


class Prop1Case(enum.Enum):
    CASE_I = "case_I"
    CASE_II = "case_II"
    NEITHER = "neither"


def check_prop1_conditions(s: TwoOutcomeSetup) -> Prop1Case:
    """Which sign pattern of the ratio-effect conditions holds at the setup's ``p``."""
    prof = s.profile
    a = prof.v(1.0 - s.lam * s.p) * prof.u(s.f1)
    b = prof.u(s.g1)
    if s.f1 > s.g1 > 0 and 0 < a < b:
        return Prop1Case.CASE_I
    if s.f1 < s.g1 < 0 and b < a < 0:
        return Prop1Case.CASE_II
    return Prop1Case.NEITHER


@dataclass(frozen=True)
class SamplePoint:
    p: float
    case: Prop1Case
    predicted: Relation
    observed: Relation


@dataclass(frozen=True)
class Prop1Report:
    break_even: BreakEven
    checked: tuple[SamplePoint, ...]
    skipped: int

    @property
    def violations(self) -> list[SamplePoint]:
        return [pt for pt in self.checked if pt.predicted != pt.observed]

    @property
    def checked_above(self) -> int:
        return sum(pt.p > self.break_even.p_bar for pt in self.checked)

    @property
    def checked_below(self) -> int:
        return sum(pt.p < self.break_even.p_bar for pt in self.checked)


def verify_prop1(s: TwoOutcomeSetup, samples: int = 64) -> Prop1Report:
    """Check the ratio-effect prediction on both sides of the break-even point.

    Only sample points where the side conditions still hold are checked; the
    fear weight moves with ``p``, so the conditions can fail on one side.
    """
    s = s.with_variant("f_has_unknown")
    try:
        be = find_break_even(s)
    except NoRoot as exc:
        raise HypothesisUnmet(f"no break-even probability: {exc}") from None
    half = samples // 2
    below = [be.p_bar * k / (half + 1) for k in range(1, half + 1)]
    above = [be.p_bar + (1.0 - be.p_bar) * k / (samples - half)
             for k in range(1, samples - half + 1)]
    checked, skipped = [], 0
    for p in below + above:
        if abs(p - be.p_bar) <= 1e-9 or not 0 < p <= 1:
            skipped += 1
            continue
        sp = s.at(p)
        case = check_prop1_conditions(sp)
        if case is Prop1Case.NEITHER:
            skipped += 1
            continue
        f_wins = p > be.p_bar if case is Prop1Case.CASE_I else p < be.p_bar
        predicted = Relation.F_STRICT if f_wins else Relation.G_STRICT
        observed = compare(sp.profile, *sp.prospects()).relation
        checked.append(SamplePoint(p, case, predicted, observed))
    if not checked:
        raise HypothesisUnmet("the side conditions fail at every sample point")
    return Prop1Report(be, tuple(checked), skipped)


@dataclass(frozen=True)
class Prop2Report:
    case: Prop1Case
    baseline: Relation
    k: int
    p: float
    psi: float
    phi: float
    classical: Relation
    modified: Relation
    conditions_hold: bool


def verify_prop2(s: TwoOutcomeSetup, max_k: int = 40) -> Prop2Report:
    """Halve ``p`` until the fear-adjusted verdict reverses the classical one.

    The classical baseline at the given ``p`` must be ``f > g`` with
    ``f1 > g1 > 0`` (case I) or ``f < g`` with ``f1 < g1 < 0`` (case II).
    """
    tie = s.profile.tie_eps
    classical_setup = s.with_variant("both_zero")
    phi0 = psi_setup(classical_setup, "classical")
    baseline = classify(phi0, tie)
    if s.f1 > s.g1 > 0 and baseline is Relation.F_STRICT:
        case = Prop1Case.CASE_I
    elif s.f1 < s.g1 < 0 and baseline is Relation.G_STRICT:
        case = Prop1Case.CASE_II
    else:
        raise HypothesisUnmet(
            f"classical baseline {baseline.symbol} with f1={s.f1}, g1={s.g1} "
            "does not match either case")
    modified_setup = s.with_variant("f_has_unknown")
    for k in range(max_k + 1):
        pk = s.p * 2.0 ** -k
        phi = psi_setup(classical_setup.at(pk), "classical")
        psi_k = psi_setup(modified_setup.at(pk), "modified")
        rel_c, rel_m = classify(phi, tie), classify(psi_k, tie)
        if rel_c is not Relation.INDIFFERENT and rel_m is rel_c.mirrored():
            holds = check_prop1_conditions(modified_setup.at(pk)) is case
            return Prop2Report(case, baseline, k, pk, psi_k, phi, rel_c, rel_m, holds)
    raise NoReversalFound(f"no reversal down to p = {s.p * 2.0 ** -max_k!r}")


@dataclass(frozen=True)
class ReflectionReport:
    original: PreferenceVerdict
    mirrored: PreferenceVerdict

    @property
    def holds(self) -> bool:
        return self.mirrored.relation is self.original.relation.mirrored()


def is_bilinear(profile: AgentProfile) -> bool:
    u, v = profile.u, profile.v
    identity = u.family == "identity" or (u.family == "affine" and u.a == 1 and u.c == 0)
    return identity and v == FearFn.linear() and not profile.fear_overrides


def verify_reflection(f1: float, g1: float, p_f: float, p_g: float,
                      profile: AgentProfile) -> ReflectionReport:
    """Compare ``(f1, p_f; ?, 1-p_f)`` vs ``(g1, p_g; 0, 1-p_g)`` with its negated pair."""
    if not is_bilinear(profile):
        raise DomainViolation("reflection needs u = identity and v(x) = 1 - x")
    f = Prospect([(f1, p_f), (UNKNOWN, 1.0 - p_f)], "utility")
    g = Prospect([(g1, p_g), (0.0, 1.0 - p_g)], "utility")
    return ReflectionReport(compare(profile, f, g), compare(profile, f.negated(), g.negated()))


# --------------------------------------------------------------------------- medical sweeps

SURGERY = Prospect([(0.5, 0.6), (0.27, 0.4)], "utility")
RADIOTHERAPY = Prospect([(0.7, 0.3), (0.28, 0.7)], "utility")
MEDICAL_PROFILE = AgentProfile(UtilityFn.identity(), FearFn.linear(), RegretQ.power_odd(3))


def with_unknown_risk(base: Prospect, p_u: float, clamp: bool = False) -> Prospect:
    """Add an unknown branch of mass ``p_u``, taking ``p_u/m`` from each of m known branches.

    When a known branch would go negative this raises :class:`DomainViolation`,
    unless ``clamp`` is set: then exhausted branches stay at zero and the
    remainder is spread over the others.
    """
    if base.has_unknown:
        raise DomainViolation("base prospect already has an unknown branch")
    if not 0.0 <= p_u <= 1.0:
        raise DomainViolation(f"p_u must lie in [0, 1], got {p_u!r}")
    if p_u == 0.0:
        return base
    probs = list(base.probs)
    m = len(probs)
    if min(probs) - p_u / m < -1e-12:
        if not clamp:
            raise DomainViolation(
                f"p_u={p_u!r} drives a known probability negative (max {m * min(probs)!r})")
        probs = _water_fill(probs, p_u)
    else:
        probs = [max(0.0, p - p_u / m) for p in probs]
    branches = list(zip(base.outcomes, probs)) + [(UNKNOWN, p_u)]
    return Prospect(branches, base.interpretation)


def _water_fill(probs: list[float], amount: float) -> list[float]:
    out = list(probs)
    remaining = amount
    active = [i for i, p in enumerate(out) if p > 0]
    while remaining > 1e-15 and active:
        share = remaining / len(active)
        take = min(share, min(out[i] for i in active))
        for i in active:
            out[i] -= take
        remaining -= take * len(active)
        active = [i for i in active if out[i] > 1e-15]
    return [max(0.0, p) for p in out]


def max_unknown_mass(base: Prospect) -> float:
    return min(len(base) * min(base.probs), 1.0)


def medical_pair(case: str, p_fu: float = 0.0, p_gu: float = 0.0,
                 clamp: bool = False) -> tuple[Prospect, Prospect]:
    """Surgery/radiotherapy pair for case ``classical``, ``I``, ``II`` or ``III``."""
    if case == "classical":
        return SURGERY, RADIOTHERAPY
    if case == "I":
        return with_unknown_risk(SURGERY, p_fu, clamp), RADIOTHERAPY
    if case == "II":
        return SURGERY, with_unknown_risk(RADIOTHERAPY, p_gu, clamp)
    if case == "III":
        return (with_unknown_risk(SURGERY, p_fu, clamp),
                with_unknown_risk(RADIOTHERAPY, p_gu, clamp))
    raise ValueError(f"unknown medical case {case!r}")


@dataclass
class SweepTable:
    """Grid coordinates plus one Psi column per fear function, in grid order."""

    coord_names: tuple[str, ...]
    coords: np.ndarray
    columns: dict[str, np.ndarray]

    def header(self) -> list[str]:
        return list(self.coord_names) + list(self.columns)

    def rows(self):
        cols = list(self.columns.values())
        for i in range(len(self.coords)):
            yield [float(c) for c in self.coords[i]] + [float(col[i]) for col in cols]

    def write_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.header())
        for row in self.rows():
            writer.writerow([f"{x:.17g}" for x in row])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


SWEEP_P_MAX = 0.5


def _grid(points: int | Sequence[float], upper: float) -> np.ndarray:
    if isinstance(points, (int, np.integer)):
        if points < 2:
            raise DomainViolation("a sweep grid needs at least 2 points")
        return np.linspace(0.0, upper, int(points))
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 1 or len(arr) < 1:
        raise DomainViolation("grid must be a 1-d sequence of probabilities")
    return arr


def sweep_pu(case: Literal["I", "II"], fears: Sequence[FearFn], grid: int | Sequence[float] = 101,
             profile: AgentProfile = MEDICAL_PROFILE, p_max: float | None = None,
             clamp: bool = False) -> SweepTable:
    """Psi versus the unknown mass of surgery (case I) or radiotherapy (case II).

    The default range is ``[0, SWEEP_P_MAX]``; with 101 points its grid contains
    ``p_u = 0.1`` exactly. ``p_max`` may go up to the largest admissible mass
    (0.8 for case I, 0.6 for case II), or beyond with ``clamp``.
    """
    if case not in ("I", "II"):
        raise ValueError("sweep_pu handles cases 'I' and 'II'")
    if not fears:
        raise ValueError("at least one fear function is required")
    upper = SWEEP_P_MAX if p_max is None else p_max
    pus = _grid(grid, upper)
    columns = {}
    for fear in fears:
        prof = replace(profile, v=fear)
        col = []
        for pu in pus:
            pu = float(pu)
            f, g = medical_pair(case, pu, pu, clamp)
            col.append(psi_modified(prof, f, g))
        columns[fear.spec] = np.array(col)
    return SweepTable(("p_u",), pus.reshape(-1, 1), columns)


def sweep_contour(fear: FearFn, fu_grid: int | Sequence[float] = 41,
                  gu_grid: int | Sequence[float] = 41, profile: AgentProfile = MEDICAL_PROFILE,
                  clamp: bool = False) -> SweepTable:
    """Psi over a row-major grid of surgery and radiotherapy unknown masses (case III)."""
    fus = _grid(fu_grid, max_unknown_mass(SURGERY))
    gus = _grid(gu_grid, max_unknown_mass(RADIOTHERAPY))
    prof = replace(profile, v=fear)
    coords, values = [], []
    for pfu in fus:
        for pgu in gus:
            f, g = medical_pair("III", float(pfu), float(pgu), clamp)
            coords.append((float(pfu), float(pgu)))
            values.append(psi_modified(prof, f, g))
    return SweepTable(("p_fu", "p_gu"), np.array(coords).reshape(-1, 2),
                      {fear.spec: np.array(values)})

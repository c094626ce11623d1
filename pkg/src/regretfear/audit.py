"""Sampled checks of the preference axioms on random prospects.

Each audit draws ``n`` samples. Sample ``i`` of audit ``a`` uses its own
generator seeded with ``(seed, code(a), i)``, so every finding can be
replayed on its own with :func:`replay`. Audits that need prospects on a
shared state partition (monotonicity, d-transitivity, trade-off consistency)
work on state-aligned decision matrices; null states are states of
probability zero.

Continuity cannot be decided from finitely many samples. Its audit only
flags verdicts that jump between the two strict classes under a ``1e-9``
perturbation without passing near zero, and its findings are warnings.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from regretfear.engine import AgentProfile, Relation, classify, psi_matrix, psi_modified
from regretfear.errors import ConvexityRequired, RootSolveFailed
from regretfear.prospect import UNKNOWN, DecisionMatrix, Interpretation, Outcome, Prospect

TRADEOFF_TOL = 1e-9
CONTINUITY_EPS = 1e-9
CONTINUITY_BAND = 1e-6


@dataclass(frozen=True)
class AuditConfig:
    n: int = 10_000
    lo: float = -1.0
    hi: float = 1.0
    max_branches: int = 4
    seed: int = 0
    profile: AgentProfile = field(default_factory=AgentProfile)
    interpretation: Interpretation = "money"
    unknown_rate: float = 0.3

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if self.max_branches < 2:
            raise ValueError("max_branches must be at least 2")


@dataclass(frozen=True)
class Finding:
    audit: str
    seed: int
    index: int
    detail: str


@dataclass
class AuditReport:
    name: str
    checked: int = 0
    skipped: int = 0
    solve_failures: int = 0
    findings: list[Finding] = field(default_factory=list)
    heuristic: bool = False
    note: str = ""

    @property
    def counterexamples(self) -> int:
        return 0 if self.heuristic else len(self.findings)

    def line(self) -> str:
        kind = "warnings" if self.heuristic else "counterexamples"
        text = (f"{self.name}: checked={self.checked} skipped={self.skipped} "
                f"{kind}={len(self.findings)}")
        if self.solve_failures:
            text += f" solve_failures={self.solve_failures}"
        if self.heuristic:
            text += " (heuristic)"
        if self.note:
            text += f" [{self.note}]"
        return text


# --------------------------------------------------------------------------- sampling


def random_prospect(rng: np.random.Generator, cfg: AuditConfig) -> Prospect:
    """Random prospect with 1..max_branches branches, some of them unknown."""
    n = int(rng.integers(1, cfg.max_branches + 1))
    probs = rng.dirichlet(np.ones(n)) if n > 1 else np.ones(1)
    outcomes = rng.uniform(cfg.lo, cfg.hi, n)
    unknown = rng.random(n) < cfg.unknown_rate
    return Prospect(
        [(UNKNOWN if unk else float(x), float(p)) for x, p, unk in zip(outcomes, probs, unknown)],
        cfg.interpretation,
    )


def _random_states(rng: np.random.Generator, cfg: AuditConfig, min_states: int = 2,
                   null_state: bool = False) -> list[float]:
    n = int(rng.integers(min_states, cfg.max_branches + 2))
    probs = [float(p) for p in rng.dirichlet(np.ones(n))]
    if null_state:
        probs.insert(int(rng.integers(0, n + 1)), 0.0)
    return probs


def _random_outcomes(rng: np.random.Generator, cfg: AuditConfig, n: int,
                     known: Sequence[int] = ()) -> list[Outcome]:
    xs = rng.uniform(cfg.lo, cfg.hi, n)
    unknown = rng.random(n) < cfg.unknown_rate
    return [float(x) if (not unk or i in known) else UNKNOWN
            for i, (x, unk) in enumerate(zip(xs, unknown))]


def _mass(probs: Sequence[float], xs: Sequence[Outcome]) -> float:
    return math.fsum(p for p, x in zip(probs, xs) if x is UNKNOWN)


def _ubar(cfg: AuditConfig, probs: Sequence[float], xs: Sequence[Outcome]) -> list[float]:
    # Same arithmetic as the engine so that constructed premises hold exactly.
    prof = cfg.profile
    w = prof.v(min(_mass(probs, xs), 1.0))
    util = (lambda x: x) if cfg.interpretation == "utility" else prof.u
    return [0.0 if x is UNKNOWN else w * util(x) for x in xs]


def _psi(cfg: AuditConfig, probs: Sequence[float], xs: Sequence[Outcome],
         ys: Sequence[Outcome]) -> float:
    matrix = DecisionMatrix.aligned(probs, xs, ys)
    return psi_matrix(cfg.profile, matrix, cfg.interpretation, cfg.interpretation)


def _outcome_for(cfg: AuditConfig, target: float, weight: float) -> float:
    """Outcome whose fear-adjusted utility is ``target`` under fear weight ``weight``."""
    raw = target / weight
    return raw if cfg.interpretation == "utility" else cfg.profile.u.inverse(raw)


def _dominating(rng: np.random.Generator, cfg: AuditConfig, probs: Sequence[float],
                base: Sequence[Outcome], strict: Sequence[int],
                direction: int = 1) -> list[Outcome] | None:
    """Outcomes whose adjusted utilities weakly dominate ``base`` (or are dominated,
    for ``direction=-1``), strictly so at the ``strict`` states.

    Returns ``None`` when every known state would carry zero fear weight.
    """
    ub = _ubar(cfg, probs, base)
    n = len(probs)
    xs: list[Outcome] = [0.0] * n
    for i in range(n):
        can_be_unknown = i not in strict and direction * ub[i] <= 0
        if can_be_unknown and rng.random() < cfg.unknown_rate:
            xs[i] = UNKNOWN
    weight = cfg.profile.v(min(_mass(probs, xs), 1.0))
    if weight == 0.0:
        return None
    span = cfg.hi - cfg.lo
    util = (lambda x: x) if cfg.interpretation == "utility" else cfg.profile.u
    for i in range(n):
        if xs[i] is UNKNOWN:
            continue
        if i in strict:
            gap = rng.uniform(0.01, 0.25) * span
        else:
            gap = 0.0 if rng.random() < 0.5 else rng.uniform(0.0, 0.25) * span
        x = _outcome_for(cfg, ub[i] + direction * gap, weight)
        toward = math.inf if direction > 0 else -math.inf
        for _ in range(64):
            if direction * (weight * util(x) - ub[i]) >= 0:
                break
            x = math.nextafter(x, toward)
        xs[i] = x
    new = _ubar(cfg, probs, xs)
    for i in range(n):
        diff = direction * (new[i] - ub[i])
        if diff < 0 or (i in strict and not diff > 0):
            return None
    return xs


# --------------------------------------------------------------------------- per-sample checks

SampleResult = tuple[str, str]  # (status, detail); status in ok/skip/finding/solve_fail


def _sample_completeness(cfg: AuditConfig, rng: np.random.Generator) -> SampleResult:
    f, g = random_prospect(rng, cfg), random_prospect(rng, cfg)
    fg, gf = psi_modified(cfg.profile, f, g), psi_modified(cfg.profile, g, f)
    if not (math.isfinite(fg) and math.isfinite(gf)):
        return "finding", f"non-finite Psi: {fg!r}, {gf!r} for f={f} g={g}"
    tie = cfg.profile.tie_eps
    if classify(gf, tie) is not classify(fg, tie).mirrored():
        return "finding", f"verdicts disagree: Psi(f,g)={fg!r} Psi(g,f)={gf!r} for f={f} g={g}"
    return "ok", ""


def _strict_state(rng: np.random.Generator, probs: Sequence[float]) -> int:
    candidates = [i for i, p in enumerate(probs) if p >= 0.05]
    return int(rng.choice(candidates)) if candidates else int(np.argmax(probs))


def _sample_monotonicity(cfg: AuditConfig, rng: np.random.Generator) -> SampleResult:
    kind = int(rng.integers(0, 3))
    tie = cfg.profile.tie_eps
    if kind == 0:
        probs = _random_states(rng, cfg)
        g = _random_outcomes(rng, cfg, len(probs))
        fg, gf = _psi(cfg, probs, g, g), _psi(cfg, probs, g, g)
        if not (abs(fg) <= tie and abs(gf) <= tie):
            return "finding", f"equal prospects not indifferent: Psi={fg!r}"
        return "ok", ""
    if kind == 1:
        # Strict improvement only on a null state: weak conclusion only.
        probs = _random_states(rng, cfg, null_state=True)
        null = probs.index(0.0)
        g = _random_outcomes(rng, cfg, len(probs))
        f = _dominating(rng, cfg, probs, g, [null])
        if f is None:
            return "skip", ""
        fg = _psi(cfg, probs, f, g)
        if not fg >= 0:
            return "finding", f"weak monotonicity: Psi={fg!r} < 0"
        return "ok", ""
    probs = _random_states(rng, cfg, null_state=rng.random() < 0.3)
    g = _random_outcomes(rng, cfg, len(probs))
    strict = _strict_state(rng, probs)
    f = _dominating(rng, cfg, probs, g, [strict])
    if f is None:
        return "skip", ""
    fg = _psi(cfg, probs, f, g)
    if classify(fg, tie) is not Relation.F_STRICT:
        return "finding", f"strong monotonicity: Psi={fg!r} not strictly positive"
    return "ok", ""


def _sample_d_transitivity(cfg: AuditConfig, rng: np.random.Generator) -> SampleResult:
    probs = _random_states(rng, cfg, null_state=rng.random() < 0.3)
    n = len(probs)
    a, b = _random_outcomes(rng, cfg, n), _random_outcomes(rng, cfg, n)
    if _psi(cfg, probs, a, b) < 0:
        a, b = b, a
    strict = _strict_state(rng, probs)
    tie = cfg.profile.tie_eps
    if rng.random() < 0.5:
        # f >=_SD g and g >= h  =>  f > h
        g, h = a, b
        f = _dominating(rng, cfg, probs, g, [strict])
        clause = "f>=SD g, g>=h"
    else:
        # f >= g and g >=_SD h  =>  f > h
        f, g = a, b
        h = _dominating(rng, cfg, probs, g, [strict], direction=-1)
        clause = "f>=g, g>=SD h"
    if f is None or h is None:
        return "skip", ""
    fh = _psi(cfg, probs, f, h)
    if classify(fh, tie) is not Relation.F_STRICT:
        return "finding", f"{clause} but Psi(f,h)={fh!r}"
    return "ok", ""


def _substituted(xs: Sequence[Outcome], i: int, value: Outcome) -> list[Outcome]:
    out = list(xs)
    out[i] = value
    return out


def _near(rng: np.random.Generator, cfg: AuditConfig, xs: Sequence[Outcome],
          mask: Sequence[Outcome] | None = None) -> list[Outcome]:
    """Outcomes within a tenth of the range of ``xs``; unknown where ``mask`` is."""
    mask = xs if mask is None else mask
    span = cfg.hi - cfg.lo
    out: list[Outcome] = []
    for x, m in zip(xs, mask):
        if m is UNKNOWN:
            out.append(UNKNOWN)
        else:
            centre = rng.uniform(cfg.lo, cfg.hi) if x is UNKNOWN else x
            out.append(float(np.clip(centre + rng.uniform(-0.1, 0.1) * span, cfg.lo, cfg.hi)))
    return out


def _sample_tradeoff(cfg: AuditConfig, rng: np.random.Generator) -> SampleResult:
    prof = cfg.profile
    q = prof.q
    probs = _random_states(rng, cfg, min_states=2)
    n = len(probs)
    # Substitute on the two likeliest states; small p_i pushes the solved
    # outcomes out of range.
    i, j = (int(k) for k in np.argsort(probs)[::-1][:2])
    f = _random_outcomes(rng, cfg, n, known=[i])
    near = rng.random() < 0.5
    g = _near(rng, cfg, f) if near else _random_outcomes(rng, cfg, n, known=[i])
    # x and y share the unknown states of f and g, hence their fear weights.
    x = [UNKNOWN if fo is UNKNOWN else float(v) for fo, v in
         zip(f, rng.uniform(cfg.lo, cfg.hi, n))]
    y = _near(rng, cfg, x, g) if near else [
        UNKNOWN if go is UNKNOWN else float(v) for go, v in zip(g, rng.uniform(cfg.lo, cfg.hi, n))]
    if x[j] is UNKNOWN or y[j] is UNKNOWN:
        return "skip", ""
    wf = prof.v(min(_mass(probs, f), 1.0))
    wg = prof.v(min(_mass(probs, g), 1.0))
    if wf == 0.0 or wg == 0.0:
        return "skip", ""
    util = (lambda t: t) if cfg.interpretation == "utility" else prof.u
    alpha, gamma = (float(t) for t in rng.uniform(cfg.lo, cfg.hi, 2))
    try:
        uf, ug = _ubar(cfg, probs, f), _ubar(cfg, probs, g)
        rest = math.fsum(probs[k] * q(uf[k] - ug[k]) for k in range(n) if k != i)
        d = q.inverse(-rest / probs[i])
        beta = _outcome_for(cfg, wf * util(alpha) - d, wg)
        delta = _outcome_for(cfg, wf * util(gamma) - d, wg)
    except (RootSolveFailed, ValueError, OverflowError):
        return "solve_fail", "premise solve failed"
    if not (cfg.lo <= beta <= cfg.hi and cfg.lo <= delta <= cfg.hi):
        return "skip", ""
    p1 = _psi(cfg, probs, _substituted(f, i, alpha), _substituted(g, i, beta))
    p2 = _psi(cfg, probs, _substituted(f, i, gamma), _substituted(g, i, delta))
    if abs(p1) > TRADEOFF_TOL or abs(p2) > TRADEOFF_TOL:
        return "solve_fail", f"premise residuals {p1!r}, {p2!r}"
    lhs = wf * util(alpha) - wg * util(beta)
    rhs = wf * util(gamma) - wg * util(delta)
    if abs(lhs - rhs) > TRADEOFF_TOL:
        return "finding", f"adjusted trade-offs differ: {lhs!r} vs {rhs!r}"
    xa, yb = _substituted(x, i, alpha), _substituted(y, i, beta)
    try:
        ux, uy = _ubar(cfg, probs, xa), _ubar(cfg, probs, yb)
        others = math.fsum(probs[k] * q(ux[k] - uy[k]) for k in range(n) if k not in (i, j))
        e = q.inverse((-probs[i] * q(ux[i] - uy[i]) - others) / probs[j])
        y_j = _outcome_for(cfg, ux[j] - e, wg)
    except (RootSolveFailed, ValueError, OverflowError):
        return "solve_fail", "third premise solve failed"
    if not cfg.lo <= y_j <= cfg.hi:
        return "skip", ""
    y = _substituted(y, j, y_j)
    p3 = _psi(cfg, probs, xa, _substituted(y, i, beta))
    if abs(p3) > TRADEOFF_TOL:
        return "solve_fail", f"third premise residual {p3!r}"
    concl = _psi(cfg, probs, _substituted(x, i, gamma), _substituted(y, i, delta))
    if abs(concl) > TRADEOFF_TOL:
        return "finding", f"conclusion not indifferent: Psi={concl!r}"
    return "ok", ""


def _sample_continuity(cfg: AuditConfig, rng: np.random.Generator) -> SampleResult:
    f, g = random_prospect(rng, cfg), random_prospect(rng, cfg)
    direction = rng.uniform(-1.0, 1.0, len(f))
    moved = Prospect(
        [(x if x is UNKNOWN else x + CONTINUITY_EPS * float(d), p)
         for (x, p), d in zip(f.branches, direction)],
        f.interpretation,
    )
    tie = cfg.profile.tie_eps
    a, b = psi_modified(cfg.profile, f, g), psi_modified(cfg.profile, moved, g)
    ra, rb = classify(a, tie), classify(b, tie)
    jumped = {ra, rb} == {Relation.F_STRICT, Relation.G_STRICT}
    if jumped and min(abs(a), abs(b)) > CONTINUITY_BAND:
        return "finding", f"verdict jumps from {a!r} to {b!r} under a {CONTINUITY_EPS} nudge"
    return "ok", ""


AUDITS: dict[str, tuple[int, Callable[[AuditConfig, np.random.Generator], SampleResult]]] = {
    "completeness": (1, _sample_completeness),
    "monotonicity": (2, _sample_monotonicity),
    "d_transitivity": (3, _sample_d_transitivity),
    "tradeoff_consistency": (4, _sample_tradeoff),
    "continuity": (5, _sample_continuity),
}


def _rng(cfg: AuditConfig, code: int, index: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, code, index])


def _run(name: str, cfg: AuditConfig) -> AuditReport:
    code, sample = AUDITS[name]
    report = AuditReport(name, heuristic=name == "continuity")
    for index in range(cfg.n):
        status, detail = sample(cfg, _rng(cfg, code, index))
        if status == "ok":
            report.checked += 1
        elif status == "skip":
            report.skipped += 1
        elif status == "solve_fail":
            report.solve_failures += 1
        else:
            report.checked += 1
            report.findings.append(Finding(name, cfg.seed, index, detail))
    return report


def replay(name: str, cfg: AuditConfig, index: int) -> tuple[str, str]:
    """Re-run a single sample of an audit; returns ``(status, detail)``."""
    code, sample = AUDITS[name]
    return sample(cfg, _rng(cfg, code, index))


def audit_completeness(cfg: AuditConfig) -> AuditReport:
    """Every sampled pair gets a finite Psi and mirrored verdicts in both orders."""
    return _run("completeness", cfg)


def audit_monotonicity(cfg: AuditConfig) -> AuditReport:
    """Equal pairs are indifferent; weak dominance gives Psi >= 0; strict dominance
    on a non-null state gives strict preference."""
    return _run("monotonicity", cfg)


def audit_d_transitivity(cfg: AuditConfig) -> AuditReport:
    if not cfg.profile.q.is_convex_on_positive():
        raise ConvexityRequired(f"{cfg.profile.q.spec} is not convex on positive arguments")
    return _run("d_transitivity", cfg)


def audit_tradeoff_consistency(cfg: AuditConfig) -> AuditReport:
    return _run("tradeoff_consistency", cfg)


def audit_continuity(cfg: AuditConfig) -> AuditReport:
    return _run("continuity", cfg)


def run_audits(cfg: AuditConfig) -> list[AuditReport]:
    reports = [audit_completeness(cfg), audit_monotonicity(cfg)]
    try:
        reports.append(audit_d_transitivity(cfg))
    except ConvexityRequired as exc:
        reports.append(AuditReport("d_transitivity", note=f"not run: {exc}"))
    reports.append(audit_tradeoff_consistency(cfg))
    reports.append(audit_continuity(cfg))
    return reports


def format_reports(reports: Sequence[AuditReport], cfg: AuditConfig) -> str:
    lines = [f"audit seed={cfg.seed} n={cfg.n} profile={cfg.profile.spec} "
             f"range=[{cfg.lo!r}, {cfg.hi!r}] interpretation={cfg.interpretation}"]
    lines += [r.line() for r in reports]
    total = sum(r.counterexamples for r in reports)
    lines.append(f"total counterexamples={total}")
    return "\n".join(lines) + "\n"


def findings_csv(reports: Sequence[AuditReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["audit", "seed", "index", "heuristic", "detail"])
    for r in reports:
        for fd in r.findings:
            writer.writerow([fd.audit, fd.seed, fd.index, int(r.heuristic), fd.detail])
    return buf.getvalue()


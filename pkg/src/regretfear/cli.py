"""Command-line interface.

Exit codes: 0 ok, 1 audit counterexample, 2 usage, parse, validation or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path
from typing import TextIO

from regretfear import analysis, audit
from regretfear.dsl import (
    BUNDLED,
    DEFAULT_PROFILE_SPEC,
    bundled_corpus,
    format_prospect,
    load_corpus,
    parse_function,
    parse_profile,
    parse_prospect,
)
from regretfear.engine import AgentProfile, compare
from regretfear.errors import HypothesisUnmet, NoReversalFound, NoRoot, RegretFearError
from regretfear.functions import FearFn, RegretQ, UtilityFn

REFERENCE_MEDCASE = (
    # name, p_fu, p_gu, reported value, tolerance
    ("classical", 0.0, 0.0, -0.0065, 5e-5),
    ("I", 0.1, 0.0, -0.0225, 1e-4),
    ("II", 0.0, 0.1, 0.0092, 1e-4),
    ("III", 0.1, 0.1, -0.0049, 1e-4),
)


class UsageError(Exception):
    pass


def _g(x: float) -> str:
    return f"{x:.17g}"


def _globals() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", default=None,
                        help=f"function tokens, default '{DEFAULT_PROFILE_SPEC}'")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid", type=int, default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--normalize", action="store_true",
                        help="rescale prospect probabilities to sum to one")
    common.add_argument("--interpretation", choices=("money", "utility"), default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _globals()
    parser = argparse.ArgumentParser(
        prog="regretfear",
        description="Regret-theoretic choice between prospects with unknown outcomes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[common], help="evaluate Psi for two prospects")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--mode", choices=("modified", "classical"), default="modified")

    p = sub.add_parser("medcase", parents=[common],
                       help="recompute the surgery/radiotherapy example")
    p.add_argument("--pu", type=float, default=0.1, help="unknown mass used in cases I-III")

    p = sub.add_parser("sweep", parents=[common], help="Psi versus p_u, CSV")
    p.add_argument("--case", choices=("I", "II"), required=True)
    p.add_argument("--fear", action="append", default=[], help="fear token, repeatable")
    p.add_argument("--pu-max", type=float, default=None)
    p.add_argument("--clamp", action="store_true")

    p = sub.add_parser("contour", parents=[common], help="Psi over (p_fu, p_gu), CSV")
    p.add_argument("--fear", default="v:poly:1")
    p.add_argument("--clamp", action="store_true")

    p = sub.add_parser("corpus", parents=[common], help="predict scenario corpora")
    p.add_argument("sources", nargs="*",
                   help=f"corpus files or bundled names {', '.join(BUNDLED)}")

    p = sub.add_parser("audit", parents=[common], help="sampled axiom audits")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--lo", type=float, default=-1.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--max-branches", type=int, default=4)
    p.add_argument("--findings", default=None, help="write findings CSV here")

    for name, text in (("breakeven", "break-even probability of a two-outcome setup"),
                       ("prop1", "check the ratio effect around the break-even point"),
                       ("prop2", "scan small p for a preference reversal")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--f1", type=float, required=True)
        p.add_argument("--g1", type=float, required=True)
        p.add_argument("--lam", type=float, required=True)
        p.add_argument("--p", type=float, default=1.0)
        if name == "breakeven":
            p.add_argument("--mode", choices=("modified", "classical"), default="modified")

    p = sub.add_parser("reflect", parents=[common],
                       help="reflection effect under bilinear adjusted utility")
    p.add_argument("--f1", type=float, required=True)
    p.add_argument("--g1", type=float, required=True)
    p.add_argument("--pf", type=float, required=True)
    p.add_argument("--pg", type=float, required=True)
    return parser


def _profile(args, override: AgentProfile | None) -> AgentProfile:
    if override is not None:
        return override
    return parse_profile(args.profile or DEFAULT_PROFILE_SPEC)


def _open_out(args, stdout: TextIO):
    if args.out is None:
        return stdout, False
    try:
        return open(args.out, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from None


def cmd_compare(args, profile: AgentProfile, out: TextIO) -> int:
    interp = args.interpretation or "money"
    f = parse_prospect(args.f, interp, args.normalize)
    g = parse_prospect(args.g, interp, args.normalize)
    verdict = compare(profile, f, g, args.mode)
    out.write(f"psi={_g(verdict.psi)} relation={verdict.relation.symbol} mode={args.mode} "
              f"profile={profile.spec}\n")
    return 0


def cmd_medcase(args, profile: AgentProfile, out: TextIO) -> int:
    reference_setting = (profile.u == UtilityFn.identity() and profile.v == FearFn.linear()
                     and profile.q == RegretQ.power_odd(3) and args.pu == 0.1)
    out.write(f"medical case profile={profile.spec} p_u={args.pu!r}\n")
    for name, fu, gu, reported, tol in REFERENCE_MEDCASE:
        f, g = analysis.medical_pair(name, fu and args.pu, gu and args.pu)
        verdict = compare(profile, f, g)
        if reference_setting:
            status = "PASS" if abs(verdict.psi - reported) <= tol else "FAIL"
        else:
            status = "report-only"
        out.write(f"{name:<9} psi={_g(verdict.psi)} relation={verdict.relation.symbol} "
                  f"reference={reported} tol={tol:g} {status}\n")
    return 0


def cmd_sweep(args, profile: AgentProfile, out: TextIO) -> int:
    if not args.fear:
        raise UsageError("sweep needs at least one --fear token")
    fears = [_fear(tok) for tok in args.fear]
    table = analysis.sweep_pu(args.case, fears, args.grid or 101, profile,
                              p_max=args.pu_max, clamp=args.clamp)
    stream, close = _open_out(args, out)
    try:
        table.write_csv(stream)
    finally:
        if close:
            stream.close()
    return 0


def cmd_contour(args, profile: AgentProfile, out: TextIO) -> int:
    n = args.grid or 41
    table = analysis.sweep_contour(_fear(args.fear), n, n, profile, clamp=args.clamp)
    stream, close = _open_out(args, out)
    try:
        table.write_csv(stream)
    finally:
        if close:
            stream.close()
    return 0


def _fear(token: str) -> FearFn:
    fn = parse_function(token)
    if not isinstance(fn, FearFn):
        raise UsageError(f"{token!r} is not a fear function token")
    return fn


def cmd_corpus(args, profile: AgentProfile, out: TextIO) -> int:
    sources = args.sources or ["table1", "table2"]
    total = with_expect = agree = 0
    out.write(f"corpus profile={profile.spec}\n")
    for source in sources:
        if source in BUNDLED and not Path(source).exists():
            cases = bundled_corpus(source)
            label = source
        else:
            cases = load_corpus(source, args.normalize)
            label = Path(source).stem
        for case in cases:
            f, g = case.f, case.g
            if args.interpretation:
                f = f.with_interpretation(args.interpretation)
                g = g.with_interpretation(args.interpretation)
            verdict = compare(profile, f, g)
            total += 1
            line = (f"{label}:{case.name:<4} f={format_prospect(f)} g={format_prospect(g)} "
                    f"psi={_g(verdict.psi)} predicted={verdict.relation.symbol}")
            if case.expect is not None:
                with_expect += 1
                ok = verdict.relation is case.expect
                agree += ok
                line += f" expect={case.expect.symbol} {'agree' if ok else 'disagree'}"
            out.write(line + "\n")
    out.write(f"cases={total} with_expectation={with_expect} agree={agree}\n")
    return 0


def cmd_audit(args, profile: AgentProfile, out: TextIO) -> int:
    cfg = audit.AuditConfig(n=args.n, lo=args.lo, hi=args.hi, max_branches=args.max_branches,
                            seed=args.seed, profile=profile,
                            interpretation=args.interpretation or "money")
    reports = audit.run_audits(cfg)
    text = audit.format_reports(reports, cfg)
    for r in reports:
        for fd in r.findings[:5]:
            text += f"  {fd.audit}[seed={fd.seed} index={fd.index}] {fd.detail}\n"
    stream, close = _open_out(args, out)
    try:
        stream.write(text)
    finally:
        if close:
            stream.close()
    if args.findings:
        Path(args.findings).write_text(audit.findings_csv(reports), encoding="utf-8")
    return 1 if any(r.counterexamples for r in reports) else 0


def _setup(args, profile: AgentProfile) -> analysis.TwoOutcomeSetup:
    return analysis.TwoOutcomeSetup(args.f1, args.g1, args.lam, args.p, profile)


def cmd_breakeven(args, profile: AgentProfile, out: TextIO) -> int:
    s = _setup(args, profile)
    try:
        be = analysis.find_break_even(s, args.mode, grid=args.grid or 1024)
    except NoRoot as exc:
        out.write(f"no root: {exc}\n")
        return 0
    p_fu = 1.0 - s.lam * be.p_bar if args.mode == "modified" else 0.0
    out.write(f"p_bar={_g(be.p_bar)} residual={_g(be.residual)} "
              f"bracket=[{_g(be.bracket[0])}, {_g(be.bracket[1])}] "
              f"sign_changes={be.sign_changes} converged={be.converged}\n")
    # p_bar is a probability of the known g outcome; report the matching
    # unknown mass separately so the two are not confused.
    out.write(f"unknown mass of f at p_bar: p_fu={_g(p_fu)}\n")
    return 0


def cmd_prop1(args, profile: AgentProfile, out: TextIO) -> int:
    s = _setup(args, profile)
    out.write(f"conditions at p={args.p!r}: {analysis.check_prop1_conditions(s).value}\n")
    try:
        rep = analysis.verify_prop1(s)
    except HypothesisUnmet as exc:
        out.write(f"hypothesis unmet: {exc}\n")
        return 0
    out.write(f"p_bar={_g(rep.break_even.p_bar)} checked_below={rep.checked_below} "
              f"checked_above={rep.checked_above} skipped={rep.skipped} "
              f"violations={len(rep.violations)}\n")
    for pt in rep.violations:
        out.write(f"  violation p={_g(pt.p)} predicted={pt.predicted.symbol} "
                  f"observed={pt.observed.symbol}\n")
    return 0


def cmd_prop2(args, profile: AgentProfile, out: TextIO) -> int:
    s = _setup(args, profile)
    try:
        rep = analysis.verify_prop2(s)
    except (HypothesisUnmet, NoReversalFound) as exc:
        out.write(f"{type(exc).__name__}: {exc}\n")
        return 0
    out.write(f"{rep.case.value}: baseline {rep.baseline.symbol}; reversal at k={rep.k} "
              f"p={_g(rep.p)} classical={rep.classical.symbol} phi={_g(rep.phi)} "
              f"modified={rep.modified.symbol} psi={_g(rep.psi)} "
              f"conditions_hold={rep.conditions_hold}\n")
    return 0


def cmd_reflect(args, profile: AgentProfile, out: TextIO) -> int:
    bilinear = replace(profile, u=UtilityFn.identity(), v=FearFn.linear(), fear_overrides=None)
    rep = analysis.verify_reflection(args.f1, args.g1, args.pf, args.pg, bilinear)
    out.write(f"original psi={_g(rep.original.psi)} {rep.original.relation.symbol}; "
              f"mirrored psi={_g(rep.mirrored.psi)} {rep.mirrored.relation.symbol}; "
              f"reflection={'holds' if rep.holds else 'fails'}\n")
    return 0


COMMANDS = {
    "compare": cmd_compare, "medcase": cmd_medcase, "sweep": cmd_sweep,
    "contour": cmd_contour, "corpus": cmd_corpus, "audit": cmd_audit,
    "breakeven": cmd_breakeven, "prop1": cmd_prop1, "prop2": cmd_prop2,
    "reflect": cmd_reflect,
}


def main(argv: Sequence[str] | None = None, *, profile: AgentProfile | None = None,
         stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Run the CLI; ``profile`` replaces the parsed ``--profile`` (a hook for tests)."""
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, _profile(args, profile), out)
    except (RegretFearError, UsageError, ValueError, OSError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

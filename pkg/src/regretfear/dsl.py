"""Text formats: prospects, profile specs, and scenario corpora.

Prospect grammar (whitespace insignificant)::

    prospect := "(" pair (";" pair)* ")"
    pair     := outcome "," prob
    outcome  := number | "?"

Profile specs are space-separated registry tokens, for example
``u:identity v:poly:1 q:power:3``. Corpus files hold ``[case <name>]``
sections with ``key = value`` lines and ``#`` comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from regretfear.engine import AgentProfile, Relation
from regretfear.errors import ParseError, ValidationError
from regretfear.functions import FearFn, RegretQ, RegretR, UtilityFn
from regretfear.prospect import INTERPRETATIONS, UNKNOWN, Interpretation, Prospect

_NUMBER = re.compile(r"[+\-−]?(?:\d+\.?\d*|\.\d+)(?:[eE][+\-]?\d+)?")


def _fmt(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def format_prospect(p: Prospect) -> str:
    """Canonical text of a prospect; ``parse_prospect`` inverts it exactly."""
    parts = []
    for x, prob in p.branches:
        parts.append(f"{'?' if x is UNKNOWN else _fmt(x)}, {_fmt(prob)}")
    return "(" + "; ".join(parts) + ")"


class _Scanner:
    def __init__(self, text: str, line: int = 1, col0: int = 1):
        self.text = text
        self.pos = 0
        self.line0 = line
        self.col0 = col0

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = before.count("\n")
        if line:
            return self.line0 + line, pos - before.rfind("\n")
        return self.line0, self.col0 + pos

    def error(self, message: str, pos: int | None = None) -> ParseError:
        line, col = self.where(pos)
        return ParseError(message, line, col)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def number(self, what: str) -> float:
        self.skip_ws()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return float(m.group().replace("−", "-"))


def parse_prospect(text: str, interpretation: Interpretation = "money",
                   normalize: bool = False, line: int = 1, column: int = 1) -> Prospect:
    """Parse prospect text; probabilities are validated unless ``normalize`` rescales them."""
    sc = _Scanner(text, line, column)
    sc.expect("(")
    branches = []
    while True:
        if sc.peek() == "?":
            sc.pos += 1
            outcome = UNKNOWN
        else:
            outcome = sc.number("an outcome (number or '?')")
        sc.expect(",")
        prob = sc.number("a probability")
        branches.append((outcome, prob))
        nxt = sc.peek()
        if nxt == ";":
            sc.pos += 1
            continue
        if nxt == ")":
            sc.pos += 1
            break
        raise sc.error(f"expected ';' or ')', found {nxt or 'end of input'!r}")
    if sc.peek():
        raise sc.error("trailing characters after prospect")
    if normalize:
        return Prospect.normalized(branches, interpretation)
    return Prospect(branches, interpretation)


# --------------------------------------------------------------------------- profiles

DEFAULT_PROFILE_SPEC = "u:identity v:poly:1 q:power:3"


def _num(tok: str, s: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise ParseError(f"bad number {s!r} in {tok!r}") from None


def _odd(tok: str, s: str) -> int:
    k = _num(tok, s)
    if k != int(k) or int(k) < 1 or int(k) % 2 == 0:
        raise ParseError(f"exponent in {tok!r} must be an odd integer >= 1")
    return int(k)


def parse_function(token: str) -> UtilityFn | FearFn | RegretQ:
    """Parse one registry token such as ``u:power:0.5`` or ``r:power:3:0.5``."""
    parts = token.split(":")
    head, rest = parts[0], parts[1:]
    try:
        match head, rest:
            case "u", ["identity"]:
                return UtilityFn.identity()
            case "u", ["affine", a, c]:
                return UtilityFn.affine(_num(token, a), _num(token, c))
            case "u", ["power", a]:
                return UtilityFn.power(_num(token, a))
            case "v", ["poly", a]:
                return FearFn.poly(_num(token, a))
            case "v", ["sin", a]:
                return FearFn.sinpoly(_num(token, a))
            case "v", ["none"]:
                return FearFn.unit()
            case "q", ["power", k]:
                return RegretQ.power_odd(_odd(token, k))
            case "q", ["linear"]:
                return RegretQ.linear()
            case "r", ["power", k, beta]:
                return RegretQ.from_r(RegretR.power_odd(_odd(token, k), _num(token, beta)))
            case "r", ["zero"]:
                return RegretQ.from_r(RegretR.zero())
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"invalid parameters in {token!r}: {exc}") from None
    raise ParseError(f"unknown function token {token!r}")


def parse_profile(spec: str | None = None, tie_eps: float = 1e-12) -> AgentProfile:
    """Build a profile from tokens; omitted components take the defaults."""
    chosen = {"u": UtilityFn.identity(), "v": FearFn.linear(), "q": RegretQ.power_odd(3)}
    seen = set()
    for token in (spec or "").split():
        if token.startswith("tie:"):
            tie_eps = _num(token, token[4:])
            continue
        fn = parse_function(token)
        slot = {UtilityFn: "u", FearFn: "v", RegretQ: "q"}[type(fn)]
        if slot in seen:
            raise ParseError(f"{slot} given twice in profile {spec!r}")
        seen.add(slot)
        chosen[slot] = fn
    return AgentProfile(chosen["u"], chosen["v"], chosen["q"], tie_eps)


# --------------------------------------------------------------------------- corpora

_EXPECT = {r.symbol: r for r in Relation}


@dataclass(frozen=True)
class Case:
    name: str
    f: Prospect
    g: Prospect
    expect: Relation | None = None
    interpretation: Interpretation = "money"
    note: str = ""


def parse_corpus(text: str, normalize: bool = False) -> list[Case]:
    """Parse a scenario corpus into its ordered cases."""
    cases: list[Case] = []
    current: dict | None = None
    names: set[str] = set()

    def finish():
        if current is None:
            return
        for key in ("f", "g"):
            if key not in current:
                raise ParseError(f"case {current['name']!r} has no {key!r} line",
                                 current["line"], 1)
        interp = current.get("interpretation", ("money", 0, 0))[0]
        if interp not in INTERPRETATIONS:
            raise ParseError(f"unknown interpretation {interp!r}", current["line"], 1)
        prospects = {}
        for key in ("f", "g"):
            value, line, col = current[key]
            try:
                prospects[key] = parse_prospect(value, interp, normalize, line, col)
            except ValidationError as exc:
                raise ParseError(f"case {current['name']!r}: {exc}", line, col) from None
        expect = None
        if "expect" in current:
            value, line, col = current["expect"]
            if value not in _EXPECT:
                raise ParseError(f"expect must be one of {sorted(_EXPECT)}", line, col)
            expect = _EXPECT[value]
        cases.append(Case(current["name"], prospects["f"], prospects["g"], expect, interp,
                          current.get("note", ("", 0, 0))[0]))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = re.fullmatch(r"\[case\s+(.+?)\s*\]", stripped)
        if m:
            finish()
            name = m.group(1)
            if name in names:
                raise ParseError(f"duplicate case name {name!r}", lineno, 1)
            names.add(name)
            current = {"name": name, "line": lineno}
            continue
        if current is None:
            raise ParseError("content before the first [case ...] header", lineno, 1)
        key, sep, value = raw.partition("=")
        if not sep:
            raise ParseError("expected 'key = value'", lineno, 1)
        key = key.strip()
        if key not in ("f", "g", "expect", "interpretation", "note"):
            raise ParseError(f"unknown key {key!r}", lineno, 1)
        if key in current:
            raise ParseError(f"key {key!r} repeated", lineno, 1)
        col = len(raw) - len(value.lstrip()) + 1 if value.strip() else len(raw) + 1
        current[key] = (value.strip(), lineno, col)
    finish()
    return cases


def load_corpus(path: str | Path, normalize: bool = False) -> list[Case]:
    return parse_corpus(Path(path).read_text(encoding="utf-8"), normalize)


BUNDLED = ("table1", "table2", "medical")


def bundled_corpus(name: str) -> list[Case]:
    """Load one of the corpora shipped with the package."""
    if name not in BUNDLED:
        raise KeyError(f"no bundled corpus {name!r}; choose from {BUNDLED}")
    text = resources.files("regretfear").joinpath("data", f"{name}.cases").read_text("utf-8")
    return parse_corpus(text)


def format_case(case: Case) -> str:
    lines = [f"[case {case.name}]", f"f = {format_prospect(case.f)}",
             f"g = {format_prospect(case.g)}"]
    if case.expect is not None:
        lines.append(f"expect = {case.expect.symbol}")
    lines.append(f"interpretation = {case.interpretation}")
    if case.note:
        lines.append(f"note = {case.note}")
    return "\n".join(lines)

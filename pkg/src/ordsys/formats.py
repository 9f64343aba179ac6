"""Line-oriented text formats for systems, set families and conditions.

Every writer emits a canonical form, so parse-then-write is idempotent.
Blank lines and lines starting with ``#`` are ignored by the readers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import core
from .generic import Condition, validate_condition
from .omega1 import OmegaOneSystem
from .ordinal import DEFAULT_LAMBDA, Ordinal, OrdinalError, format_cnf, format_set, parse_cnf, parse_set
from .vc import SetFamily


class FormatError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {msg}")


_TOKEN = re.compile(r"(\w+)=(\S+)")
_ORDER = re.compile(r"^order\s+s=(\{[^}]*\})\s*:\s*(.*)$")
_ENTRY = re.compile(r"^g\s+s=(\{[^}]*\})\s+x=(\S+)\s+v=(\d+)$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def _header(no: int, line: str, magic: str) -> dict:
    if not line.startswith(magic + " "):
        raise FormatError(no, 1, f"expected header starting with '{magic}'")
    return {k: v for k, v in _TOKEN.findall(line[len(magic):])}


def _need(no: int, line: str, tokens: dict, key: str) -> str:
    if key not in tokens:
        raise FormatError(no, len(line) + 1, f"header lacks {key}=")
    return tokens[key]


def _ordinal(no: int, line: str, text: str) -> Ordinal:
    try:
        return parse_cnf(text)
    except OrdinalError as exc:
        raise FormatError(no, max(line.find(text), 0) + 1, str(exc)) from None


def _set(no: int, line: str, text: str) -> frozenset:
    try:
        return parse_set(text)
    except OrdinalError as exc:
        raise FormatError(no, max(line.find(text), 0) + 1, str(exc)) from None


def _int(no: int, line: str, text: str) -> int:
    if not text.isdigit():
        raise FormatError(no, max(line.find(text), 0) + 1, f"expected a natural number, got {text!r}")
    return int(text)


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

RULES = ("Natural", "BlockShuffle", "Omega1")


def build_rule(rule: str, n: int, universe):
    """A rule-backed system; ``universe`` is a bound or a finite set."""
    name = rule.partition(":")[0]
    if name == "Omega1":
        if n != 2:
            raise ValueError("the Omega1 rule defines a depth 2 system")
        if isinstance(universe, frozenset):
            raise ValueError("the Omega1 rule needs a range universe")
        return OmegaOneSystem(universe)
    if name == "Natural" and isinstance(universe, frozenset):
        return core.NaturalSystem(n, universe)
    if isinstance(universe, frozenset):
        raise ValueError(f"rule {name} needs a range universe")
    return core.nice_nested_system(universe, n, rule)


def parse_system(text: str, validate: bool = True) -> core.OrderingSystem:
    lines = list(_lines(text))
    if not lines:
        raise FormatError(1, 1, "empty system file")
    no, head = lines[0]
    tok = _header(no, head, "ordsys v1")
    n = _int(no, head, _need(no, head, tok, "n"))
    if n < 1:
        raise FormatError(no, head.find("n=") + 1, "depth must be positive")
    uni = _need(no, head, tok, "universe")
    kind, _, body = uni.partition(":")
    if kind == "finite":
        universe = _set(no, head, body)
    elif kind == "range":
        universe = _ordinal(no, head, body)
    else:
        raise FormatError(no, head.find("universe=") + 1, "universe must be finite:{...} or range:<CNF>")
    flavor = _need(no, head, tok, "flavor")
    if flavor == "rule":
        rule = _need(no, head, tok, "rule")
        if rule.partition(":")[0] not in RULES:
            raise FormatError(no, head.find("rule=") + 1, f"unknown rule {rule!r}")
        if len(lines) > 1:
            raise FormatError(lines[1][0], 1, "rule systems carry no order lines")
        try:
            return build_rule(rule, n, universe)
        except (ValueError, OrdinalError) as exc:
            raise FormatError(no, head.find("rule=") + 1, str(exc)) from None
    if flavor != "explicit":
        raise FormatError(no, head.find("flavor=") + 1, f"unknown flavor {flavor!r}")
    if kind != "finite":
        raise FormatError(no, head.find("universe=") + 1, "explicit systems need a finite universe")
    table: dict = {}
    where: dict = {}
    for no, line in lines[1:]:
        m = _ORDER.match(line)
        if not m:
            raise FormatError(no, 1, "expected 'order s={...} : a,b,...'")
        s = _set(no, line, m.group(1))
        body = m.group(2).strip()
        seq = [_ordinal(no, line, t.strip()) for t in body.split(",")] if body else []
        if s in table:
            raise FormatError(no, 1, f"second order for {format_set(s)}")
        table[s] = seq
        where[s] = no
    if frozenset() not in table:
        raise FormatError(lines[0][0], 1, "no base order (order s={} : ...)")
    sys = core.ExplicitSystem(n, table, universe)
    if validate:
        rep = core.validate_system(sys)
        if not rep.valid:
            v = rep.witness
            raise FormatError(where.get(v.s, lines[0][0]), 1, f"invalid system: {v}")
    return sys


def dump_system(sys: core.OrderingSystem) -> str:
    universe = sys.finite_universe
    if isinstance(sys, core.ExplicitSystem) or (universe is not None and not isinstance(sys, OmegaOneSystem)):
        declared = getattr(sys, "universe", None) or universe
        out = [f"ordsys v1 n={sys.n} universe=finite:{format_set(declared)} flavor=explicit"]
        for s in core.index_sets(tuple(sorted(declared)), sys.n - 1):
            seq = sys.order(s).elements()
            out.append(f"order s={format_set(s)} : {','.join(format_cnf(x) for x in seq)}".rstrip())
        return "\n".join(out) + "\n"
    bound = getattr(sys, "bound", None)
    if bound is None:
        raise ValueError(f"{type(sys).__name__} has no text form")
    return f"ordsys v1 n={sys.n} universe=range:{format_cnf(bound)} flavor=rule rule={sys.rule()}\n"


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def parse_family(text: str) -> SetFamily:
    lines = list(_lines(text))
    if not lines:
        raise FormatError(1, 1, "empty family file")
    no, head = lines[0]
    tok = _header(no, head, "family v1")
    ground = _set(no, head, _need(no, head, tok, "ground"))
    members = []
    for no, line in lines[1:]:
        m = _set(no, line, line)
        if not m <= ground:
            raise FormatError(no, 1, f"member {format_set(m)} leaves the ground set")
        members.append(m)
    return SetFamily(ground, members)


def dump_family(F: SetFamily) -> str:
    out = [f"family v1 ground={format_set(F.ground)}"]
    out.extend(format_set(m) for m in F.members)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# conditions
# ---------------------------------------------------------------------------


@dataclass
class CondFile:
    base: core.OrderingSystem
    cond: Condition
    rule: str
    bound: Ordinal


def parse_cond(text: str) -> CondFile:
    lines = list(_lines(text))
    if not lines:
        raise FormatError(1, 1, "empty condition file")
    no, head = lines[0]
    tok = _header(no, head, "cond v1")
    n = _int(no, head, _need(no, head, tok, "n"))
    rule = _need(no, head, tok, "base")
    bound = _ordinal(no, head, tok["lambda"]) if "lambda" in tok else DEFAULT_LAMBDA
    if rule.partition(":")[0] not in ("Natural", "BlockShuffle"):
        raise FormatError(no, head.find("base=") + 1, f"base must be a nice rule, got {rule!r}")
    try:
        base = core.nice_nested_system(bound, n, rule)
    except ValueError as exc:
        raise FormatError(no, 1, str(exc)) from None
    cond = Condition(n)
    for no, line in lines[1:]:
        m = _ENTRY.match(line)
        if not m:
            raise FormatError(no, 1, "expected 'g s={...} x=<CNF> v=<nat>'")
        s = _set(no, line, m.group(1))
        x = _ordinal(no, line, m.group(2))
        if cond.get(s, x) is not None:
            raise FormatError(no, 1, f"point {format_cnf(x)} assigned twice for {format_set(s)}")
        cond.assign(s, x, int(m.group(3)))
        try:
            ok = validate_condition(base, cond)
        except core.InadmissibleIndex as exc:
            raise FormatError(no, 1, str(exc)) from None
        if not ok:
            clause, _, _ = ok.witness
            raise FormatError(no, 1, f"invalid condition ({clause})")
    return CondFile(base, cond, rule, bound)


def dump_cond(cond: Condition, rule: str = "Natural", bound=DEFAULT_LAMBDA) -> str:
    head = f"cond v1 n={cond.n} base={rule}"
    if Ordinal.of(bound) != DEFAULT_LAMBDA:
        head += f" lambda={format_cnf(bound)}"
    out = [head]
    for x, s, v in cond.entries():
        out.append(f"g s={format_set(s)} x={format_cnf(x)} v={v}")
    return "\n".join(out) + "\n"


KINDS = ("system", "family", "cond")


def convert_text(text: str, kind: str) -> str:
    if kind == "system":
        return dump_system(parse_system(text))
    if kind == "family":
        return dump_family(parse_family(text))
    if kind == "cond":
        c = parse_cond(text)
        return dump_cond(c.cond, c.rule, c.bound)
    raise ValueError(f"unknown kind {kind!r}")

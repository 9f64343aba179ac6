"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import core, formats, generic, omega1, vc, verify
from .ordinal import DEFAULT_LAMBDA, OrdinalError, format_cnf, format_set, omega_power, parse_cnf, parse_set

DEFAULT_SEED = 42


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Report:
    """Collects ``KEY: value`` lines (or tab separated with ``--format tsv``)."""

    def __init__(self, fmt: str = "text"):
        self.fmt = fmt
        self.lines: list[str] = []

    def kv(self, key: str, value):
        sep = "\t" if self.fmt == "tsv" else ": "
        self.lines.append(f"{key}{sep}{value}")

    def row(self, *fields):
        sep = "\t" if self.fmt == "tsv" else " "
        self.lines.append(sep.join(str(f) for f in fields))

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


RULE_ALIASES = {"trivial": "Natural", "natural": "Natural", "omega1": "Omega1"}


def load_system(args) -> core.OrderingSystem:
    source = args.system
    if source is None:
        raise UsageError("--system is required")
    rule = RULE_ALIASES.get(source.lower(), source)
    if rule.partition(":")[0] in formats.RULES:
        bound = parse_cnf(args.lambda_) if args.lambda_ else (omega_power(2) if rule == "Omega1" else DEFAULT_LAMBDA)
        universe = parse_set(args.universe) if getattr(args, "universe", None) else bound
        n = args.n if args.n is not None else 2
        try:
            return formats.build_rule(rule, n, universe)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return formats.parse_system(_read(source))


def _common(p: argparse.ArgumentParser, system=False):
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("--out")
    if system:
        p.add_argument("--system", help="system file, or a rule: trivial, BlockShuffle:<seed>, omega1")
        p.add_argument("--n", type=int)
        p.add_argument("--lambda", dest="lambda_", metavar="CNF")
        p.add_argument("--universe", metavar="SET", help="finite universe for rule systems")


def build_parser() -> Parser:
    p = Parser(prog="ordsys", description="Ordering systems, closures and VC dimension.")
    sub = p.add_subparsers(dest="command", parser_class=Parser)

    c = sub.add_parser("validate", help="check a system against the definition")
    _common(c, system=True)
    c.add_argument("--set", dest="fragment", help="probe fragment for infinite universes")

    c = sub.add_parser("closure", help="least closed superset of a finite set")
    _common(c, system=True)
    c.add_argument("--set", required=True)
    c.add_argument("--budget", type=int, default=core.DEFAULT_BUDGET)

    c = sub.add_parser("vc", help="VC dimension of a family or of a system's closed sets")
    _common(c, system=True)
    c.add_argument("--family")
    c.add_argument("--mode", default="all", help="all, segments or small:<k>")
    c.add_argument("--cap", type=int)

    c = sub.add_parser("segments", help="list closed n-initial segments")
    _common(c, system=True)
    c.add_argument("--set", dest="carrier", help="restrict to this finite carrier")

    c = sub.add_parser("omega1", help="inspect the transfinite construction")
    _common(c)
    c.add_argument("--lambda", dest="lambda_", metavar="CNF", default="w^2")
    c.add_argument("--alpha", help="print the order indexed by {alpha}")
    c.add_argument("--delta", help="dump the layer chain of a limit")
    c.add_argument("--upto", type=int, default=5)
    c.add_argument("--length", type=int, default=20, help="prefix length for --alpha")
    c.add_argument("--set", help="closure of a finite set")

    c = sub.add_parser("generic", help="meet closure requests with finite conditions")
    _common(c)
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--lambda", dest="lambda_", metavar="CNF")
    c.add_argument("--base", default="Natural")
    c.add_argument("--cond", help="start from this condition file")
    c.add_argument("--set", action="append", default=[], help="closure request (repeatable)")
    c.add_argument("--policy", default=generic.FRONT_FILL)
    c.add_argument("--repair", action="store_true")

    c = sub.add_parser("verify", help="run property suites")
    _common(c)
    c.add_argument("--suite", default="all", choices=verify.SUITES + ("all", "segments"))
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--samples", type=int)
    c.add_argument("--system", help="system file for the segments suite")

    c = sub.add_parser("convert", help="canonicalise a file")
    c.add_argument("--in", dest="in_path", required=True)
    c.add_argument("--out", dest="out_path", required=True)
    c.add_argument("--kind", choices=formats.KINDS, required=True)
    return p


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args, rep: Report) -> int:
    sys_ = load_system(args)
    frag = parse_set(args.fragment) if args.fragment else None
    if frag is None and sys_.finite_universe is None:
        raise UsageError("infinite universes need --set with a probe fragment")
    res = core.validate_system(sys_, frag)
    rep.kv("VALID", "yes" if res.valid else "no")
    rep.kv("CHECKED", res.checked)
    for v in res.violations:
        rep.kv("VIOLATION", str(v))
    return 0 if res.valid else 1


def cmd_closure(args, rep: Report) -> int:
    sys_ = load_system(args)
    A = parse_set(args.set)
    out = core.closure(sys_, A, args.budget)
    if out.tag == "closed":
        rep.kv("CLOSED", format_set(out.set))
    elif out.tag == "infinite":
        s, b = out.witness
        rep.kv("INFINITE", f"s={format_set(s)} b={format_cnf(b)}")
        rep.kv("PARTIAL", format_set(out.set))
    else:
        rep.kv("BUDGET_EXCEEDED", format_set(out.set))
    return 0


def _mode(text: str):
    if text == "all":
        return vc.ALL
    if text == "segments":
        return vc.SEGMENTS_ONLY
    if text.startswith("small:"):
        return vc.ClosuresOfSmall(int(text[6:]))
    raise UsageError(f"unknown mode {text!r}")


def cmd_vc(args, rep: Report) -> int:
    if args.family:
        F = formats.parse_family(_read(args.family))
    elif args.system:
        F = vc.closed_family(load_system(args), _mode(args.mode))
    else:
        raise UsageError("vc needs --family or --system")
    res = vc.vc_dimension(F, args.cap)
    rep.kv("VC", res.dimension)
    rep.kv("MEMBERS", len(F))
    rep.kv("WITNESS", "-" if res.witness is None else format_set(res.witness))
    if res.capped:
        rep.kv("CAPPED", "yes")
    for trace in sorted(res.certificate, key=lambda t: (len(t), sorted(t))):
        rep.row("TRACE", format_set(trace), "<-", format_set(res.certificate[trace]))
    return 0


def cmd_segments(args, rep: Report) -> int:
    sys_ = load_system(args)
    if args.carrier:
        sys_ = core.restrict_to(sys_, parse_set(args.carrier))
    if sys_.finite_universe is None:
        raise UsageError("segments needs a finite universe (use --set)")
    total = closed = 0
    for s in core.index_sets(sys_.finite_universe, sys_.n - 1):
        if len(s) != sys_.n - 1:
            continue
        for b in sys_.order(s).elements():
            D = core.initial_segment(sys_, s, b)
            ok = bool(core.is_closed(sys_, D))
            total += 1
            closed += ok
            rep.row("SEGMENT", f"s={format_set(s)}", f"b={format_cnf(b)}", f"set={format_set(D)}",
                    f"closed={'yes' if ok else 'no'}")
    rep.kv("SEGMENTS", total)
    rep.kv("CLOSED_SEGMENTS", closed)
    return 0


def cmd_omega1(args, rep: Report) -> int:
    sys_ = omega1.build(parse_cnf(args.lambda_))
    did = False
    if args.alpha:
        alpha = parse_cnf(args.alpha)
        o = omega1.order_at(sys_, alpha)
        rep.kv("ORDER", f"alpha={format_cnf(alpha)} prefix=({','.join(format_cnf(x) for x in o.prefix(args.length))})")
        did = True
    if args.delta:
        for line in omega1.limit_chain(sys_, parse_cnf(args.delta), args.upto).dump():
            rep.lines.append(line)
        did = True
    if args.set:
        out = core.closure(sys_, parse_set(args.set))
        rep.kv("CLOSED" if out.closed else "CLOSURE", format_set(out.set) if out.closed else str(out))
        did = True
    if not did:
        raise UsageError("omega1 needs --alpha, --delta or --set")
    return 0


def cmd_generic(args, rep: Report) -> int:
    bound = parse_cnf(args.lambda_) if args.lambda_ else DEFAULT_LAMBDA
    if args.cond:
        cf = formats.parse_cond(_read(args.cond))
        base, start, rule, bound = cf.base, cf.cond, cf.rule, cf.bound
    else:
        rule = args.base
        try:
            base = core.nice_nested_system(bound, args.n, rule)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        start = None
    try:
        policy = generic.parse_policy(args.policy)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sess = generic.GenericSession(base, policy, start)
    status = 0
    for text in args.set:
        try:
            B, cert = sess.closure_generic(parse_set(text), repair=args.repair)
        except generic.PolicyConflict as exc:
            rep.kv("CONFLICT", str(exc))
            status = 1
            break
        rep.kv("CLOSED", format_set(B))
        rep.kv("CERTIFIED", "yes" if cert else "no")
        if not cert:
            status = 1
    rep.kv("ENTRIES", len(sess.current))
    if args.out:
        _write(args.out, formats.dump_cond(sess.current, rule, bound))
        args.out = None
    return status


def cmd_verify(args, rep: Report) -> int:
    if args.suite == "segments":
        if not args.system:
            raise UsageError("the segments suite needs --system")
        groups = [("segments", verify.segments_battery(formats.parse_system(_read(args.system), validate=False)))]
    else:
        names = verify.SUITES if args.suite == "all" else (args.suite,)
        groups = [(name, verify.run_suite(name, args.seed, args.samples)) for name in names]
    failed = False
    for name, results in groups:
        for r in results:
            rep.row(("PASS" if r.ok else "FAIL"), f"{name}/{r.name}", f"checked={r.checked}")
            if not r.ok:
                failed = True
                rep.row("WITNESS", f"{name}/{r.name}", r.witness)
    rep.kv("SEED", args.seed)
    rep.kv("RESULT", "FAIL" if failed else "PASS")
    return 1 if failed else 0


def cmd_convert(args, rep: Report) -> int:
    text = formats.convert_text(_read(args.in_path), args.kind)
    _write(args.out_path, text)
    rep.kv("WROTE", args.out_path)
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "closure": cmd_closure,
    "vc": cmd_vc,
    "segments": cmd_segments,
    "omega1": cmd_omega1,
    "generic": cmd_generic,
    "verify": cmd_verify,
    "convert": cmd_convert,
}


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Run a command; returns ``(exit_code, stdout_text)``.  Diagnostics for
    exit code 2 are returned as a single ``error:`` line."""
    try:
        args = build_parser().parse_args(list(argv))
        if args.command is None:
            raise UsageError("a command is required")
        rep = Report(getattr(args, "format", "text"))
        code = COMMANDS[args.command](args, rep)
        text = rep.text()
        out = getattr(args, "out", None)
        if out:
            _write(out, text)
        return code, text
    except SystemExit as exc:  # --help
        return int(exc.code or 0), ""
    except UsageError as exc:
        return 2, f"error: {exc}\n"
    except formats.FormatError as exc:
        return 2, f"error: {exc}\n"
    except (OrdinalError, core.InadmissibleIndex, ValueError) as exc:
        return 2, f"error: {exc}\n"


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if code == 2 else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

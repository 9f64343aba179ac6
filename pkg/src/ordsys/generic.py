"""Finite conditions adding a new top level to a nice ordering system.

For a nice depth-``n`` base, an index set ``s`` of size ``n`` has an infinite
predomain exactly when it contains no natural number ("Inf" sets).  A
condition assigns, per Inf set, injective natural-number values to finitely
many predomain points; the new level-``n`` order on ``predom(s)`` compares
those values.  Non-Inf sets keep the usual order on their finite predomain.

:func:`const_extend` strengthens a condition so that a finite set ``B``
containing a request becomes closed in every further strengthening, and
:func:`red_check` tests the sufficient criterion for that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from . import core
from .ordinal import Ordinal, format_cnf, format_set
from .orders import ListOrder, WellOrder, restrict_order


class ConditionError(ValueError):
    pass


class PolicyConflict(RuntimeError):
    def __init__(self, s):
        self.s = s
        super().__init__(f"current values for {format_set(s)} do not form an initial segment of w")


class UndefinedValues(ValueError):
    def __init__(self, missing):
        self.missing = missing
        shown = ", ".join(f"({format_cnf(x)}, {format_set(s)})" for x, s in missing[:8])
        super().__init__(f"no value assigned to {len(missing)} point(s): {shown}")


def _fs(items) -> frozenset:
    return frozenset(Ordinal.of(x) for x in items)


def is_inf(s) -> bool:
    """Inf sets over a nice base are exactly those without natural numbers."""
    return not any(Ordinal.of(x).is_finite for x in s)


def naturals_of(B) -> list[int]:
    return sorted(int(x) for x in B if Ordinal.of(x).is_finite)


def is_initial_segment(values) -> bool:
    values = sorted(values)
    return values == list(range(len(values)))


def inf_sets(B, n: int):
    """``Inf(B)``: the ``n``-subsets of ``B`` without natural numbers, sorted."""
    big = sorted(x for x in _fs(B) if not x.is_finite)
    return [frozenset(c) for c in combinations(big, n)]


class Condition:
    """Finite per-index-set injective maps into the naturals."""

    def __init__(self, n: int, table: Mapping | None = None):
        self.n = n
        self.table: dict[frozenset, dict] = {}
        for s, row in (table or {}).items():
            s = _fs(s)
            self.table[s] = {Ordinal.of(x): int(v) for x, v in row.items()}
        self.table = {s: row for s, row in self.table.items() if row}

    @classmethod
    def from_entries(cls, n: int, entries: Iterable) -> "Condition":
        """Build from ``(x, s, v)`` triples; a repeated ``(x, s)`` is an error."""
        c = cls(n)
        for x, s, v in entries:
            s = _fs(s)
            x = Ordinal.of(x)
            row = c.table.setdefault(s, {})
            if x in row:
                raise ConditionError(f"point {format_cnf(x)} assigned twice for {format_set(s)}")
            row[x] = int(v)
        return c

    def copy(self) -> "Condition":
        return Condition(self.n, self.table)

    def row(self, s) -> dict:
        return self.table.get(_fs(s) if not isinstance(s, frozenset) else s, {})

    def dom(self, s) -> set:
        return set(self.row(s))

    def im(self, s) -> set:
        return set(self.row(s).values())

    def get(self, s, x):
        return self.row(s).get(Ordinal.of(x))

    def assign(self, s: frozenset, x, v: int):
        self.table.setdefault(s, {})[Ordinal.of(x)] = int(v)

    def index_sets(self) -> list:
        return sorted(self.table, key=lambda s: sorted(s))

    def entries(self) -> list[tuple]:
        """Canonical ``(x, s, v)`` triples."""
        return [(x, s, self.table[s][x]) for s in self.index_sets() for x in sorted(self.table[s])]

    def extends(self, other: "Condition") -> bool:
        """``self`` strengthens ``other`` (contains all of its entries)."""
        return all(self.get(s, x) == v for x, s, v in other.entries())

    def __len__(self):
        return sum(len(r) for r in self.table.values())

    def __eq__(self, other):
        return isinstance(other, Condition) and self.n == other.n and self.entries() == other.entries()

    def __repr__(self):
        body = ", ".join(f"({format_cnf(x)},{format_set(s)})->{v}" for x, s, v in self.entries())
        return f"Condition(n={self.n}, {{{body}}})"


def validate_condition(base: core.OrderingSystem, p: Condition) -> core.Check:
    """Keys in the right predomains and per-index-set injectivity.

    Witness: ``(clause, s, x)``.
    """
    if p.n != base.n:
        return core.Check(False, ("depth", None, None))
    for s in p.index_sets():
        if len(s) != base.n:
            return core.Check(False, ("index-size", s, None))
        if not is_inf(s):
            return core.Check(False, ("finite-predomain", s, None))
        pre = core.predom_of(base, s)
        seen: dict = {}
        for x in sorted(p.table[s]):
            v = p.table[s][x]
            if x not in pre:
                return core.Check(False, ("predomain", s, x))
            if v < 0:
                return core.Check(False, ("value", s, x))
            if v in seen:
                return core.Check(False, ("injective", s, x))
            seen[v] = x
    return core.Check(True)


# ---------------------------------------------------------------------------
# the extension passes
# ---------------------------------------------------------------------------


@dataclass
class ConstWitness:
    B: frozenset
    q: Condition
    pass_trace: list = field(default_factory=list)  # (label, B_i, q_i)
    notes: list = field(default_factory=list)


def _close_naturals(B: frozenset) -> frozenset:
    nats = naturals_of(B)
    if not nats:
        return B
    return B | {Ordinal.of(i) for i in range(nats[-1] + 1)}


def _least_missing(used: set, count: int, start: int = 0) -> list[int]:
    out = []
    v = start
    while len(out) < count:
        if v not in used:
            out.append(v)
        v += 1
    return out


def const_extend(base: core.OrderingSystem, A: Iterable, p: Condition) -> ConstWitness:
    """Strengthen ``p`` to ``q`` and grow ``A`` to a finite ``B`` so that
    J1-J5 hold; see :func:`check_j` for the clauses."""
    n = base.n
    A = _fs(A)
    wit = ConstWitness(A, p.copy())
    B = A
    q = p.copy()
    wit.pass_trace.append(("1", B, q.copy()))

    # pass 2: B meets w in an initial segment
    B = _close_naturals(B)
    wit.pass_trace.append(("2", B, q.copy()))

    # pass 3: fill the gaps below the largest value of each row with fresh
    # natural-number points (gap set read as [0, max im) - im)
    for s in q.index_sets():
        im = q.im(s)
        gaps = [v for v in range(max(im)) if v not in im]
        points = _least_missing({int(x) for x in q.dom(s) if x.is_finite}, len(gaps))
        for x, v in zip(points, gaps):
            q.assign(s, Ordinal.of(x), v)
    wit.pass_trace.append(("3", B, q.copy()))
    wit.notes.append("pass 3 gap set taken as [0, max im) minus im")

    # pass 4: every domain point joins B (read as B3 | points), then re-close
    for s in q.index_sets():
        B = B | frozenset(q.dom(s))
    B = _close_naturals(B)
    wit.pass_trace.append(("4", B, q.copy()))
    wit.notes.append("pass 4 adds domain points to B3")

    # pass 5: give every predomain point of B a value, for each Inf(B) set
    for s in inf_sets(B, n):
        pre = core.predom_of(base, s)
        todo = sorted(x for x in B if x in pre and x not in q.dom(s))
        values = _least_missing(q.im(s), len(todo))
        for x, v in zip(todo, values):
            q.assign(s, x, v)
    wit.pass_trace.append(("5", B, q.copy()))
    wit.notes.append("pass 5 assigns m_s fresh values")
    wit.B, wit.q = B, q
    verdict = check_j(base, A, p, B, q)
    if not verdict:
        raise AssertionError(f"extension broke {verdict.witness}")
    return wit


def check_j(base: core.OrderingSystem, A, p: Condition, B, q: Condition) -> core.Check:
    """J1: q extends p and A is inside B.  J2: B meets w in an initial segment.
    J3: every row's image is an initial segment of w.  J4: every row's domain
    lies in predom(s) & B.  J5: for s in Inf(B), the row covers predom(s) & B.

    Witness: ``(clause, s)``.
    """
    A, B = _fs(A), _fs(B)
    if not q.extends(p) or not A <= B:
        return core.Check(False, ("J1", None))
    if not is_initial_segment(naturals_of(B)):
        return core.Check(False, ("J2", None))
    if not validate_condition(base, q):
        return core.Check(False, ("Q", None))
    for s in q.index_sets():
        if not is_initial_segment(q.im(s)):
            return core.Check(False, ("J3", s))
        pre = core.predom_of(base, s)
        if not all(x in B and x in pre for x in q.dom(s)):
            return core.Check(False, ("J4", s))
    for s in inf_sets(B, base.n):
        pre = core.predom_of(base, s)
        if not {x for x in B if x in pre} <= q.dom(s):
            return core.Check(False, ("J5", s))
    return core.Check(True)


def red_check(base: core.OrderingSystem, B, p: Condition) -> core.Check:
    """The sufficient criterion for ``B`` to stay closed under every
    strengthening of ``p``.  Witness: ``(clause, s)``."""
    B = _fs(B)
    if not is_initial_segment(naturals_of(B)):
        return core.Check(False, ("jt1", None))
    for s in inf_sets(B, base.n):
        pre = core.predom_of(base, s)
        if {x for x in B if x in pre} != p.dom(s):
            return core.Check(False, ("jt2", s))
        if not is_initial_segment(p.im(s)):
            return core.Check(False, ("jt3", s))
    return core.Check(True)


def values_dominate(base: core.OrderingSystem, B, q: Condition, q2: Condition) -> core.Check:
    """For s in Inf(B): every point valued by ``q2`` but not by ``q`` gets a
    value above every value ``q`` gives to ``B``'s predomain points."""
    B = _fs(B)
    for s in inf_sets(B, base.n):
        old = q.row(s)
        top = max(old.values(), default=-1)
        for x, v in q2.row(s).items():
            if x not in old and v <= top:
                return core.Check(False, (s, x))
    return core.Check(True)


# ---------------------------------------------------------------------------
# sessions
# ---------------------------------------------------------------------------

FRONT_FILL = "FrontFill"


@dataclass(frozen=True)
class FreshLarge:
    seed: int = 0
    spread: int = 50

    def __str__(self):
        return f"FreshLarge:{self.seed}"


def parse_policy(text: str):
    name, _, arg = text.partition(":")
    if name == FRONT_FILL:
        return FRONT_FILL
    if name == "FreshLarge":
        return FreshLarge(int(arg or 0))
    raise ValueError(f"unknown policy {text!r}")


class GenericSession:
    """A growing condition over a nice base, answering top-level queries."""

    def __init__(self, base: core.OrderingSystem, policy=FRONT_FILL, current: Condition | None = None):
        self.base = base
        self.n = base.n
        self.policy = policy
        self.current = current.copy() if current is not None else Condition(base.n)
        self.log: list = []
        self._rng = random.Random(policy.seed) if isinstance(policy, FreshLarge) else None

    def _check_point(self, s, x):
        if x not in core.predom_of(self.base, s):
            raise ValueError(f"{format_cnf(x)} is not in the predomain of {format_set(s)}")

    def value(self, s, x) -> int:
        """``g_s(x)``, assigning one per the policy if needed."""
        s, x = _fs(s), Ordinal.of(x)
        v = self.current.get(s, x)
        if v is None:
            self._check_point(s, x)
            im = self.current.im(s)
            if self.policy == FRONT_FILL:
                v = _least_missing(im, 1)[0]
            else:
                v = max(im, default=-1) + 1 + self._rng.randint(1, self.policy.spread)
            self.current.assign(s, x, v)
            self.log.append(("assign", s, x, v))
        return v

    def compare_generic(self, s, x, y) -> int:
        """-1, 0, 1 for Less, Equal, Greater in the new order indexed by ``s``."""
        s, x, y = _fs(s), Ordinal.of(x), Ordinal.of(y)
        if len(s) != self.n:
            raise ValueError(f"top-level queries need |s| = {self.n}")
        self._check_point(s, x)
        self._check_point(s, y)
        if x == y:
            return 0
        if not is_inf(s):
            return -1 if x < y else 1
        for z in sorted({x, y}):
            self.value(s, z)
        a, b = self.current.get(s, x), self.current.get(s, y)
        return -1 if a < b else 1

    def closure_generic(self, A, repair: bool = False) -> tuple[frozenset, bool]:
        """Meet the dense set for ``A``: strengthen the session so a finite
        ``B`` containing ``A`` is closed in every later extension."""
        wit = const_extend(self.base, A, self.current)
        if not repair:
            for s in inf_sets(wit.B, self.n):
                if not is_initial_segment(self.current.im(s)):
                    raise PolicyConflict(s)
        self.current = wit.q
        self.log.append(("closure", _fs(A), wit.B))
        return wit.B, bool(red_check(self.base, wit.B, wit.q))

    def snapshot(self) -> Condition:
        return self.current.copy()


# ---------------------------------------------------------------------------
# induced fragments
# ---------------------------------------------------------------------------


class FragmentSystem(core.OrderingSystem):
    """The depth ``n+1`` system a condition induces on a finite carrier.

    Orders are built on demand; Inf orders sort by assigned value.  With
    ``complete`` set, points lacking a value are treated as receiving fresh
    values above all assigned ones, in increasing ordinal order (itself a
    legal strengthening); otherwise they raise :class:`UndefinedValues`.
    """

    flavor = "explicit"

    def __init__(self, base: core.OrderingSystem, cond: Condition, carrier, complete: bool = False,
                 shared: dict | None = None):
        super().__init__(base.n + 1)
        self.parent = base
        self.cond = cond
        self.universe = tuple(sorted(_fs(carrier)))
        self._carrier = frozenset(self.universe)
        self.complete = complete
        if shared is not None:
            self._orders = shared

    def _build(self, s):
        if not s <= self._carrier:
            raise core.InadmissibleIndex(s, reason="outside the carrier")
        if len(s) < self.parent.n:
            return restrict_order(self.parent.order(s), self.universe)
        pre = core.predom_of(self.parent, s)
        members = [x for x in self.universe if x in pre]
        if not is_inf(s):
            return ListOrder(members)
        row = self.cond.row(s)
        missing = [x for x in members if x not in row]
        if missing and not self.complete:
            raise UndefinedValues([(x, s) for x in missing])
        valued = sorted((x for x in members if x in row), key=row.get)
        return ListOrder(valued + missing)

    def missing_values(self) -> list:
        out = []
        for s in combinations(self.universe, self.parent.n):
            s = frozenset(s)
            if is_inf(s):
                pre = core.predom_of(self.parent, s)
                out.extend((x, s) for x in self.universe if x in pre and self.cond.get(s, x) is None)
        return out

    def to_explicit(self) -> core.ExplicitSystem:
        missing = self.missing_values()
        if missing and not self.complete:
            raise UndefinedValues(missing)
        table = {}
        for s in core.index_sets(self.universe, self.n - 1):
            table[s] = self.order(s).elements()
        return core.ExplicitSystem(self.n, table, self.universe)


def induced_fragment(session: GenericSession | Condition, carrier, base: core.OrderingSystem | None = None,
                     complete: bool = False, lazy: bool = False):
    """The depth ``n+1`` system on ``carrier`` induced by the session's condition."""
    if isinstance(session, GenericSession):
        base, cond = session.base, session.current
    else:
        cond = session
        if base is None:
            raise ValueError("a bare condition needs its base system")
    frag = FragmentSystem(base, cond, carrier, complete)
    return frag if lazy else frag.to_explicit()


def closed_at_top(frag: FragmentSystem, B, index_sets: Iterable | None = None) -> core.Check:
    """Top-level closedness of ``B`` in ``frag`` over the given index sets
    (default: all of ``[B]^n``).  Witness ``(s, a, b)``."""
    B = _fs(B)
    if index_sets is None:
        index_sets = [frozenset(c) for c in combinations(sorted(B), frag.n - 1)]
    for s in index_sets:
        o = frag.order(s)
        inside = [b for b in sorted(B) if b in o]
        pos = sorted(o.position(b) for b in inside)
        if pos != list(range(len(pos))):
            for b in inside:
                for i in range(o.position(b)):
                    a = o.at(i)
                    if a not in B:
                        return core.Check(False, (s, a, b))
    return core.Check(True)


# ---------------------------------------------------------------------------
# random inputs
# ---------------------------------------------------------------------------


def random_big(rng: random.Random, bound, max_coeff: int = 3) -> Ordinal:
    """A random infinite ordinal below ``bound`` with small coefficients."""
    from .ordinal import random_ordinal

    while True:
        x = random_ordinal(rng, bound, max_coeff)
        if not x.is_finite:
            return x


def random_condition(rng: random.Random, base: core.OrderingSystem, pool: list, entries: int,
                     max_value: int = 12) -> Condition:
    """A random valid condition on Inf sets drawn from ``pool`` (infinite
    ordinals), with points from small naturals and the pool itself."""
    q = Condition(base.n)
    big = sorted({x for x in pool if not x.is_finite})
    if len(big) < base.n:
        return q
    for _ in range(entries):
        s = frozenset(rng.sample(big, base.n))
        pre = core.predom_of(base, s)
        cands = [Ordinal.of(rng.randrange(10))] + [x for x in big if x in pre]
        x = rng.choice(cands)
        if x in q.dom(s):
            continue
        free = [v for v in range(max_value) if v not in q.im(s)]
        q.assign(s, x, rng.choice(free))
    return q


def random_extension(rng: random.Random, base: core.OrderingSystem, q: Condition, pool: list,
                     entries: int = 6, max_value: int = 200) -> Condition:
    """A random legal strengthening of ``q``: new points (inside or outside
    ``pool``) on old and new Inf sets, with arbitrary unused values."""
    r = q.copy()
    big = sorted({x for x in pool if not x.is_finite})
    if len(big) < base.n:
        return r
    for _ in range(entries):
        s = frozenset(rng.sample(big, base.n))
        pre = core.predom_of(base, s)
        cands = [Ordinal.of(rng.randrange(40))] + [x for x in big if x in pre]
        x = rng.choice(cands)
        if x in r.dom(s):
            continue
        used = r.im(s)
        v = rng.randrange(max_value)
        while v in used:
            v += 1
        r.assign(s, x, v)
    return r

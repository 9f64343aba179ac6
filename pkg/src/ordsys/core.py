"""n-ordering systems and the structure-level algorithms on them.

A system of depth ``n`` assigns a well-order to every index set ``s`` with
``|s| < n``.  The order for the empty set is the base order on the universe;
for nonempty ``s`` the domain is forced: writing ``m`` for the last element of
the pivot chain of ``s`` (its *Min*), ``dom(s)`` is the set of predecessors of
``m`` in the order of ``s - {m}``.
"""

from __future__ import annotations

import functools
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .ordinal import DEFAULT_LAMBDA, OMEGA, Ordinal, OrdinalBound, cantor_pair, format_cnf, format_set
from .orders import (
    INF,
    InfiniteSegment,
    KeyOrder,
    ListOrder,
    NaturalRange,
    NotEnumerable,
    SegmentOrder,
    WellOrder,
    restrict_order,
)

DEFAULT_BUDGET = 100_000


class InadmissibleIndex(ValueError):
    def __init__(self, s, element=None, reason=""):
        self.s = frozenset(s)
        self.element = element
        msg = f"index set {format_set(self.s)} is inadmissible"
        if element is not None:
            msg += f" at {format_cnf(element)}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class DomainMismatch(ValueError):
    def __init__(self, s, detail=""):
        self.s = frozenset(s)
        super().__init__(f"order supplied for {format_set(self.s)} has the wrong domain {detail}".rstrip())


class ProvablyInfinite(InfiniteSegment):
    def __init__(self, s, b):
        self.s = frozenset(s)
        self.b = b
        Exception.__init__(self, f"segment below {format_cnf(b)} in the order of {format_set(self.s)} is infinite")


@dataclass(frozen=True)
class Check:
    """A boolean verdict with an optional witness explaining a ``False``."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def _fs(items) -> frozenset:
    return frozenset(Ordinal.of(x) for x in items)


def _bound_of(bound) -> Ordinal:
    # Rule systems accept any nonzero bound; OrdinalBound's stricter check is
    # for user-facing configuration.
    if bound is None:
        return DEFAULT_LAMBDA
    if isinstance(bound, OrdinalBound):
        return bound.lam
    bound = Ordinal.of(bound)
    if bound.is_zero:
        raise ValueError("empty universe")
    return bound


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


class OrderingSystem:
    """Query interface shared by every representation.

    Subclasses implement ``_build(s)``; orders are memoised per index set.
    """

    flavor = "rule"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("depth must be positive")
        self.n = n
        self._orders: dict[frozenset, WellOrder] = {}
        self._chains: dict[frozenset, tuple] = {}

    def order(self, s=()) -> WellOrder:
        s = s if isinstance(s, frozenset) else _fs(s)
        o = self._orders.get(s)
        if o is None:
            if len(s) >= self.n:
                raise InadmissibleIndex(s, reason=f"depth {self.n} systems index sets of size < {self.n}")
            o = self._orders[s] = self._build(s)
        return o

    def _build(self, s: frozenset) -> WellOrder:
        raise NotImplementedError

    @property
    def base(self) -> WellOrder:
        return self.order(frozenset())

    @property
    def finite_universe(self) -> tuple | None:
        b = self.base
        return b.elements() if b.is_finite else None

    def rule(self) -> str:
        raise NotImplementedError(f"{type(self).__name__} has no rule description")

    def _forced_domain(self, s: frozenset) -> WellOrder:
        chain = pivot_chain(self, s)
        return SegmentOrder(self.order(frozenset(chain[:-1])), chain[-1])


class ExplicitSystem(OrderingSystem):
    """Every order stored as an enumeration (finite universes)."""

    flavor = "explicit"

    def __init__(self, n: int, table: Mapping, universe: Iterable | None = None):
        super().__init__(n)
        self.table = {_fs(k): ListOrder(v) for k, v in table.items()}
        if frozenset() not in self.table:
            raise InadmissibleIndex(frozenset(), reason="no base order")
        if universe is None:
            universe = self.table[frozenset()].seq
        self.universe = tuple(sorted(_fs(universe)))

    def _build(self, s):
        try:
            return self.table[s]
        except KeyError:
            raise InadmissibleIndex(s, reason="no order stored") from None


class NaturalSystem(OrderingSystem):
    """Every order is the usual ordinal order (the trivial system)."""

    def __init__(self, n: int, universe=None):
        super().__init__(n)
        if universe is None or isinstance(universe, (Ordinal, OrdinalBound, int)):
            self.bound = _bound_of(universe)
            self.universe = None
        else:
            self.bound = None
            self.universe = tuple(sorted(_fs(universe)))

    def _build(self, s):
        if self.universe is not None:
            top = min(s) if s else None
            if not set(s) <= set(self.universe):
                raise InadmissibleIndex(s, reason="not inside the universe")
            return ListOrder([x for x in self.universe if top is None or x < top])
        if any(x >= self.bound for x in s):
            raise InadmissibleIndex(s, reason="not below the bound")
        return NaturalRange(min(s) if s else self.bound)

    def rule(self):
        return "Natural"


class BlockShuffleSystem(OrderingSystem):
    """A nice system on ``[0, bound)`` whose orders list the naturals first and
    then shuffle the omega-blocks ``[lim, lim + w)`` pseudorandomly."""

    CHUNK = 8

    def __init__(self, n: int, bound=None, seed: int = 0):
        super().__init__(n)
        self.bound = _bound_of(bound)
        self.seed = int(seed)
        self._width = max(self.bound.degree, 1)

    def _build(self, s):
        if not s:
            return NaturalRange(self.bound)
        if any(x >= self.bound for x in s):
            raise InadmissibleIndex(s, reason="not below the bound")
        tag = f"{self.seed}|{format_set(s)}"
        return KeyOrder(self._forced_domain(s), functools.partial(self._key, tag))

    def _key(self, tag, x):
        x = Ordinal.of(x)
        if x.is_finite:
            return (0, int(x), 0)
        lim, m = x.split_finite()
        coeffs = dict(lim.terms)
        code = 0
        for e in range(self._width, 0, -1):
            code = cantor_pair(code, coeffs.get(e, 0))
        return (1, _chunk_shuffle(tag, code, self.CHUNK), m)

    def rule(self):
        return f"BlockShuffle:{self.seed}"


@functools.lru_cache(maxsize=65536)
def _chunk_perm(tag: str, chunk: int, width: int) -> tuple:
    perm = list(range(width))
    random.Random(f"{tag}#{chunk}").shuffle(perm)
    return tuple(perm)


def _chunk_shuffle(tag: str, code: int, width: int) -> int:
    chunk, r = divmod(code, width)
    return chunk * width + _chunk_perm(tag, chunk, width)[r]


class DerivedSystem(OrderingSystem):
    """The depth ``n-1`` system induced below ``x0``: ``t -> order(t | {x0})``."""

    def __init__(self, parent: OrderingSystem, x0):
        if parent.n < 2:
            raise ValueError("a 1-system has no derived systems")
        super().__init__(parent.n - 1)
        self.parent = parent
        self.x0 = Ordinal.of(x0)
        self.flavor = parent.flavor

    def _build(self, t):
        dom = self.parent.order(frozenset([self.x0]))
        for x in t:
            if x not in dom:
                raise InadmissibleIndex(t, x, f"not below {format_cnf(self.x0)}")
        return self.parent.order(t | {self.x0})


class RestrictedLevels(OrderingSystem):
    def __init__(self, parent: OrderingSystem, k: int):
        super().__init__(k)
        self.parent = parent
        self.flavor = parent.flavor

    def _build(self, s):
        return self.parent.order(s)

    def rule(self):
        return self.parent.rule()


class ExtendedSystem(OrderingSystem):
    """Bottom-up extension of a system by one level, with lazily supplied top orders."""

    def __init__(self, parent: OrderingSystem, top: Callable[[frozenset], WellOrder]):
        super().__init__(parent.n + 1)
        self.parent = parent
        self.top = top

    def _build(self, s):
        if len(s) < self.parent.n:
            return self.parent.order(s)
        o = self.top(s)
        if not isinstance(o, WellOrder):
            o = ListOrder(o)
        pre = predom_of(self.parent, s)
        if pre.is_finite and o.is_finite:
            if set(pre.elements()) != set(o.elements()):
                raise DomainMismatch(s)
        return o


# ---------------------------------------------------------------------------
# pivots, domains, predomains
# ---------------------------------------------------------------------------


def _max_in(order: WellOrder, items) -> Ordinal:
    it = iter(items)
    best = next(it)
    for x in it:
        if order.less(best, x):
            best = x
    return best


def pivot_chain(sys: OrderingSystem, s, length: int | None = None) -> tuple:
    """Greedy pivots ``(x0, x1, ...)``: ``x0`` is the base-order maximum of
    ``s`` and ``x_{i+1}`` the maximum of the rest in the order of
    ``{x0..xi}``."""
    s = s if isinstance(s, frozenset) else _fs(s)
    full = length is None or length >= len(s)
    if full:
        cached = sys._chains.get(s)
        if cached is not None:
            return cached
    length = len(s) if length is None else min(length, len(s))
    if length > sys.n:
        raise InadmissibleIndex(s, reason=f"pivot chains have length at most {sys.n}")
    chain: list = []
    rest = set(s)
    while len(chain) < length:
        o = sys.order(frozenset(chain))
        for x in sorted(rest):
            if x not in o:
                raise InadmissibleIndex(s, x, f"not in the domain of {format_set(chain)}")
        m = _max_in(o, sorted(rest))
        chain.append(m)
        rest.discard(m)
    out = tuple(chain)
    if full:
        sys._chains[s] = out
    return out


def pivot_set(sys: OrderingSystem, s, k: int) -> tuple[frozenset, Ordinal | None]:
    """The unique ``k``-subset ``s_k`` with ``s - s_k`` inside ``dom(s_k)``.

    The second component is ``Min s`` when ``k == |s| - 1``.
    """
    s = _fs(s)
    if k < 0 or k > min(sys.n - 1, len(s)):
        raise InadmissibleIndex(s, reason=f"k={k} outside 0..min(n-1, |s|)")
    if k == len(s) - 1:
        chain = pivot_chain(sys, s)
        return frozenset(chain[:k]), chain[-1]
    chain = pivot_chain(sys, s, k)
    return frozenset(chain), None


def min_of(sys: OrderingSystem, s) -> Ordinal:
    """The unique ``y`` in ``s`` with ``y`` in the domain of ``s - {y}``."""
    return pivot_chain(sys, _fs(s))[-1]


def domain_of(sys: OrderingSystem, s) -> WellOrder:
    """dom of the order indexed by ``s`` (membership plus enumeration)."""
    s = _fs(s)
    if s:
        pivot_chain(sys, s)
    return sys.order(s)


def predom_of(sys: OrderingSystem, s) -> WellOrder:
    """Predecessors of ``Min s`` in the order of ``s - {Min s}`` (``|s| <= n``)."""
    s = _fs(s)
    if not s:
        return sys.base
    if len(s) > sys.n:
        raise InadmissibleIndex(s, reason=f"predomains need |s| <= {sys.n}")
    chain = pivot_chain(sys, s)
    return SegmentOrder(sys.order(frozenset(chain[:-1])), chain[-1])


def derived(sys: OrderingSystem, x0) -> DerivedSystem:
    return DerivedSystem(sys, x0)


def restrict_levels(sys: OrderingSystem, k: int) -> OrderingSystem:
    if k < 1 or k > sys.n:
        raise ValueError(f"cannot restrict a depth {sys.n} system to {k} levels")
    if k == sys.n:
        return sys
    if isinstance(sys, ExplicitSystem):
        return ExplicitSystem(k, {s: o.seq for s, o in sys.table.items() if len(s) < k}, sys.universe)
    return RestrictedLevels(sys, k)


def restrict_to(sys: OrderingSystem, carrier: Iterable) -> ExplicitSystem:
    """The system induced on a finite ``carrier`` (domains intersected)."""
    carrier = sorted(_fs(carrier))
    table = {}
    for k in range(sys.n):
        for s in combinations(carrier, k):
            table[frozenset(s)] = restrict_order(sys.order(frozenset(s)), carrier).seq
    return ExplicitSystem(sys.n, table, carrier)


def index_sets(universe: Sequence, max_size: int):
    for k in range(max_size + 1):
        for s in combinations(universe, k):
            yield frozenset(s)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    clause: str
    s: frozenset
    element: Ordinal | None = None
    detail: str = ""

    def __str__(self):
        el = "" if self.element is None else f" element={format_cnf(self.element)}"
        return f"{self.clause}: s={format_set(self.s)}{el} {self.detail}".rstrip()


@dataclass
class ValidationReport:
    valid: bool
    violations: list = field(default_factory=list)
    checked: str = "exhaustive"

    def __bool__(self):
        return self.valid

    @property
    def witness(self):
        return self.violations[0] if self.violations else None


def _validate_rec(sys, prefix: frozenset, allowed: set, depth: int, out: list):
    try:
        o = sys.order(prefix)
    except InadmissibleIndex as exc:
        out.append(Violation("missing-order", prefix, None, str(exc)))
        return
    if not o.is_finite:
        out.append(Violation("well-order", prefix, None, "infinite domain in a finite check"))
        return
    elems = o.elements()
    seen: set = set()
    for x in elems:
        if x in seen:
            out.append(Violation("well-order", prefix, x, "listed twice"))
        seen.add(x)
    for x in elems:
        if x not in allowed:
            out.append(Violation("domain", prefix, x, "not a predecessor of the pivot"))
    for x in sorted(allowed - seen):
        out.append(Violation("domain", prefix, x, "predecessor missing from the domain"))
    if depth > 1:
        before: list = []
        for x0 in elems:
            if x0 in allowed and x0 not in before:
                _validate_rec(sys, prefix | {x0}, set(before), depth - 1, out)
            before.append(x0)


def validate_system(sys: OrderingSystem, fragment: Iterable | None = None, depth: int = 32) -> ValidationReport:
    """Check the recursive definition of an n-ordering system.

    Finite universes are checked exhaustively.  Infinite ones need a finite
    probe ``fragment``: the system induced on it is checked exhaustively and
    each probed order's enumeration prefix (``depth`` positions) is checked
    for consistency with its comparison.
    """
    if fragment is None:
        universe = sys.finite_universe
        if universe is None:
            raise ValueError("an infinite universe needs a probe fragment")
        out: list = []
        declared = set(getattr(sys, "universe", None) or universe)
        _validate_rec(sys, frozenset(), declared, sys.n, out)
        if isinstance(sys, ExplicitSystem):
            for s in sorted(sys.table, key=lambda t: (len(t), sorted(t))):
                if len(s) >= sys.n or not s <= declared:
                    out.append(Violation("stray-order", s, None, "index set outside [X]^<n"))
        return ValidationReport(not out, out)
    frag = sorted(_fs(fragment))
    out = []
    for s in index_sets(frag, sys.n - 1):
        try:
            o = sys.order(s)
        except InadmissibleIndex as exc:
            out.append(Violation("missing-order", s, None, str(exc)))
            continue
        pre = o.prefix(depth)
        if len(set(pre)) != len(pre):
            out.append(Violation("well-order", s, None, "enumeration repeats"))
        for i, x in enumerate(pre):
            if x not in o or o.position(x) != i:
                out.append(Violation("enumeration", s, x, f"expected at position {i}"))
                break
            if i and not o.less(pre[i - 1], x):
                out.append(Violation("enumeration", s, x, "enumeration not increasing"))
                break
    if not out:
        sub = validate_system(restrict_to(sys, frag))
        out.extend(sub.violations)
    return ValidationReport(not out, out, f"fragment of {len(frag)} elements, prefix depth {depth}")


# ---------------------------------------------------------------------------
# closed sets and closures
# ---------------------------------------------------------------------------


def _segment_witness(o: WellOrder, S, b):
    p = o.position(b)
    if p is None:
        raise NotEnumerable(f"cannot locate {format_cnf(b)}")
    if p == INF:
        return o.first_missing(S)
    for i in range(p):
        a = o.at(i)
        if a not in S:
            return a
    return None


def _level_violation(sys, S: frozenset, k: int):
    ordered = sorted(S)
    for s in combinations(ordered, k):
        s = frozenset(s)
        o = sys.order(s)
        inside = [b for b in ordered if b in o]
        if not inside:
            continue
        pos = [o.position(b) for b in inside]
        if all(isinstance(p, int) for p in pos) and sorted(pos) == list(range(len(pos))):
            continue
        for b in inside:
            a = _segment_witness(o, S, b)
            if a is not None:
                return (s, a, b)
    return None


def is_closed(sys: OrderingSystem, S) -> Check:
    """``S`` is closed iff for all ``s`` in ``[S]^(n-1)`` and ``b`` in ``S``,
    everything below ``b`` in the order of ``s`` lies in ``S``.

    The witness is ``(s, a, b)`` with ``a`` below ``b`` and missing from ``S``.
    """
    S = _fs(S)
    if sys.n - 1 > len(S):
        return Check(True)
    w = _level_violation(sys, S, sys.n - 1)
    return Check(w is None, w)


def lower_level_violations(sys: OrderingSystem, S) -> list:
    """Diagnostic: the same downward condition at levels ``|s| < n-1``.

    Closedness itself does not require these.
    """
    S = _fs(S)
    out = []
    for k in range(min(sys.n - 1, len(S) + 1)):
        w = _level_violation(sys, S, k)
        if w is not None:
            out.append(w)
    return out


def initial_segment(sys: OrderingSystem, s, b) -> frozenset:
    """``s | {b} | {a : a below b in the order of s}`` for ``|s| = n-1``.

    Raises :class:`ProvablyInfinite` when ``b`` has infinitely many
    predecessors.
    """
    s = _fs(s)
    b = Ordinal.of(b)
    if len(s) != sys.n - 1:
        raise InadmissibleIndex(s, reason=f"closed initial segments need |s| = {sys.n - 1}")
    o = domain_of(sys, s)
    if b not in o:
        raise InadmissibleIndex(s, b, "not in the domain")
    try:
        below = o.below(b)
    except InfiniteSegment:
        raise ProvablyInfinite(s, b) from None
    return s | {b} | frozenset(below)


@dataclass(frozen=True)
class ClosureOutcome:
    tag: str  # "closed" | "budget" | "infinite"
    set: frozenset
    witness: tuple | None = None

    @property
    def closed(self) -> bool:
        return self.tag == "closed"

    def __str__(self):
        if self.tag == "closed":
            return f"Closed({format_set(self.set)})"
        if self.tag == "infinite":
            s, b = self.witness
            return f"ProvablyInfinite(s={format_set(s)}, b={format_cnf(b)})"
        return f"BudgetExceeded({format_set(self.set)})"


def closure(sys: OrderingSystem, A, budget: int = DEFAULT_BUDGET) -> ClosureOutcome:
    """Least closed superset of ``A`` by a semi-naive worklist.

    Each element is processed once; on processing ``z`` every pair ``(s, b)``
    with ``s | {b}`` inside the processed elements and touching ``z`` is
    expanded.  ``budget`` bounds the number of added elements.
    """
    C = set(_fs(A))
    queue = deque(sorted(C))
    done: list = []
    added = 0
    k = sys.n - 1
    # positions [0, ensured[s]) of the order of s are already inside C
    ensured: dict = {}

    def require(s, o, b):
        nonlocal added
        p = o.position(b)
        if p is None:
            return ClosureOutcome("budget", frozenset(C), (s, b))
        if p == INF:
            return ClosureOutcome("infinite", frozenset(C), (s, b))
        start = ensured.get(s, 0)
        if p <= start:
            return None
        if p - len(C) > budget - added:
            return ClosureOutcome("budget", frozenset(C), (s, b))
        ensured[s] = p
        for i in range(start, p):
            a = o.at(i)
            if a not in C:
                C.add(a)
                queue.append(a)
                added += 1
                if added > budget:
                    return ClosureOutcome("budget", frozenset(C), (s, b))
        return None

    while queue:
        z = queue.popleft()
        if k >= 1:
            for t in combinations(done, k - 1):
                s = frozenset(t) | {z}
                o = sys.order(s)
                for b in done + [z]:
                    if b in o:
                        r = require(s, o, b)
                        if r is not None:
                            return r
        for t in combinations(done, k):
            s = frozenset(t)
            o = sys.order(s)
            if z in o:
                r = require(s, o, z)
                if r is not None:
                    return r
        done.append(z)
    return ClosureOutcome("closed", frozenset(C))


def closed_with(sys: OrderingSystem, C, y) -> bool:
    """Whether ``C | {y}`` is closed, given that ``C`` already is."""
    C = _fs(C)
    y = Ordinal.of(y)
    D = C | {y}
    k = sys.n - 1
    if k > len(D):
        return True
    others = sorted(C)

    def ok(o, b):
        p = o.position(b)
        if p is None:
            raise NotEnumerable(f"cannot locate {format_cnf(b)}")
        if p == INF:
            return False
        return sum(1 for a in D if a in o and o.less(a, b)) == p

    if k >= 1:
        for t in combinations(others, k - 1):
            s = frozenset(t) | {y}
            o = sys.order(s)
            for b in D:
                if b in o and not ok(o, b):
                    return False
    for t in combinations(others, k):
        o = sys.order(frozenset(t))
        if y in o and not ok(o, y):
            return False
    return True


def closure_rules(sys: OrderingSystem, universe: Sequence | None = None) -> list[tuple[int, int]]:
    """Closedness as Horn rules on bitmasks over a finite universe.

    A set (as a mask) is closed iff for every rule ``(P, R)``: ``P`` inside the
    set implies ``R`` inside the set.  Rules sharing a premise are merged.
    """
    universe = tuple(universe if universe is not None else sys.finite_universe)
    bit = {x: 1 << i for i, x in enumerate(universe)}
    rules: dict[int, int] = {}
    for s in combinations(universe, sys.n - 1):
        s = frozenset(s)
        o = sys.order(s)
        smask = 0
        for x in s:
            smask |= bit[x]
        acc = 0
        for b in o.elements():
            if b in bit:
                if acc:
                    P = smask | bit[b]
                    rules[P] = rules.get(P, 0) | acc
                acc |= bit[b]
    return sorted(rules.items())


# ---------------------------------------------------------------------------
# extension, niceness, order-type bounds
# ---------------------------------------------------------------------------


def extend_bottom_up(sys: OrderingSystem, top_orders) -> OrderingSystem:
    """Add a level: ``top_orders`` maps each ``s`` in ``[X]^n`` to a well-order
    on ``predom(s)`` (a mapping, or a callable for infinite universes)."""
    universe = sys.finite_universe
    if universe is None or callable(top_orders) and not isinstance(top_orders, Mapping):
        fn = top_orders if callable(top_orders) else (lambda s: top_orders[s])
        return ExtendedSystem(sys, fn)
    top = {_fs(k): v for k, v in top_orders.items()}
    table = {}
    for s in index_sets(universe, sys.n - 1):
        table[s] = sys.order(s).elements()
    for s in combinations(universe, sys.n):
        s = frozenset(s)
        if s not in top:
            raise DomainMismatch(s, "(missing)")
        o = top[s]
        seq = o.elements() if isinstance(o, WellOrder) else tuple(Ordinal.of(x) for x in o)
        pre = set(predom_of(sys, s).elements())
        if set(seq) != pre or len(seq) != len(pre):
            raise DomainMismatch(s, f"{format_set(seq)} != {format_set(pre)}")
        table[s] = seq
    return ExplicitSystem(sys.n + 1, table, universe)


def check_nice(sys: OrderingSystem, depth: int = 64, fragment: Iterable | None = None,
               reference: WellOrder | None = None) -> Check:
    """Niceness: the base order is the reference order and each order starts
    with the first ``min(|dom|, w)`` reference elements, in reference order.

    Exhaustive on finite universes; on infinite ones every index set inside
    ``fragment`` is probed to ``depth`` positions.  The witness is the index set.
    """
    universe = sys.finite_universe
    if reference is None:
        reference = ListOrder(sorted(universe)) if universe is not None else NaturalRange(sys.base.order_type())
    ref = reference.prefix(depth if universe is None else len(universe))
    base = sys.base
    if universe is not None:
        if base.elements() != reference.elements():
            return Check(False, frozenset())
        sets = index_sets(universe, sys.n - 1)
    else:
        if base.prefix(depth) != ref:
            return Check(False, frozenset())
        probe = sorted(_fs(fragment if fragment is not None else ()))
        sets = index_sets(probe, sys.n - 1)
    for s in sets:
        if not s:
            continue
        o = sys.order(s)
        alpha = o.size if o.size is not None else len(ref)
        alpha = min(alpha, len(ref))
        if o.prefix(alpha) != ref[:alpha]:
            return Check(False, s)
    return Check(True)


@dataclass
class BoundReport:
    status: str  # "pass" | "fail" | "undecidable"
    witness: frozenset | None = None
    detail: str = ""
    undecided: list = field(default_factory=list)

    def __bool__(self):
        return self.status == "pass"


def check_order_bound(sys: OrderingSystem, v: Sequence, fragment: Iterable) -> BoundReport:
    """Check ``otp(order(s)) <= v[|s|]`` for every ``s`` inside ``fragment``.

    Orders that report their order type are compared exactly; otherwise a
    finite bound is tested by enumerating one position past it and the bound
    ``w`` by checking that every probed element has a finite position.
    """
    v = [Ordinal.of(x) for x in v]
    if len(v) != sys.n:
        raise ValueError(f"bound needs {sys.n} entries")
    frag = sorted(_fs(fragment))
    undecided = []
    for s in index_sets(frag, sys.n - 1):
        o = sys.order(s)
        bound = v[len(s)]
        otp = o.order_type()
        if otp is not None:
            if otp > bound:
                return BoundReport("fail", s, f"order type {format_cnf(otp)} > {format_cnf(bound)}")
            continue
        if bound.is_finite:
            if len(o.prefix(int(bound) + 1)) > int(bound):
                return BoundReport("fail", s, f"more than {format_cnf(bound)} elements")
            continue
        probes = [x for x in frag if x in o]
        positions = [o.position(x) for x in probes]
        if any(p == INF for p in positions):
            if bound <= OMEGA:
                x = probes[[p == INF for p in positions].index(True)]
                return BoundReport("fail", s, f"{format_cnf(x)} sits at a transfinite position")
            undecided.append(s)
        elif any(p is None for p in positions):
            undecided.append(s)
    if undecided:
        return BoundReport("undecidable", None, "some orders could not be measured", undecided)
    return BoundReport("pass")


@dataclass(frozen=True)
class InfResult:
    infinite: bool
    predom: frozenset | None = None

    def __bool__(self):
        return self.infinite


def inf_test(sys: OrderingSystem, s) -> InfResult:
    """For a nice system and ``|s| = n``: ``predom(s)`` is infinite iff ``s``
    has no natural numbers, and otherwise it is ``[0, min(s & w))``."""
    s = _fs(s)
    if len(s) != sys.n:
        raise InadmissibleIndex(s, reason=f"expected |s| = {sys.n}")
    nats = [x for x in s if x.is_finite]
    if not nats:
        return InfResult(True)
    return InfResult(False, frozenset(Ordinal.of(i) for i in range(int(min(nats)))))


def nice_nested_system(bound, n: int, rule: str = "Natural") -> OrderingSystem:
    """A nice depth-``n`` system on ``[0, bound)``.

    ``rule`` is ``Natural`` or ``BlockShuffle:<seed>``.
    """
    name, _, arg = rule.partition(":")
    if name == "Natural":
        return NaturalSystem(n, bound)
    if name == "BlockShuffle":
        return BlockShuffleSystem(n, bound, int(arg or 0))
    raise ValueError(f"unknown rule {rule!r}")


def random_system(rng: random.Random, n: int, universe: Sequence | int) -> ExplicitSystem:
    """A uniformly shuffled n-system on a finite universe, built level by level
    through :func:`extend_bottom_up`."""
    if isinstance(universe, int):
        universe = range(universe)
    universe = sorted(_fs(universe))
    base = list(universe)
    rng.shuffle(base)
    sys = ExplicitSystem(1, {frozenset(): base}, universe)
    while sys.n < n:
        top = {}
        for s in combinations(universe, sys.n):
            dom = list(predom_of(sys, s).elements())
            rng.shuffle(dom)
            top[frozenset(s)] = dom
        sys = extend_bottom_up(sys, top)
    return sys

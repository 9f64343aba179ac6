"""A 2-ordering system below a countable bound whose closed 2-initial
segments are all closed, built by transfinite recursion.

Only the orders indexed by singletons need constructing; the base order is
the usual one.  The order indexed by ``{a}`` lives on ``[0, a)``:

* ``a = 0``: empty;
* ``a = b + 1``: ``b`` first, then the order of ``{b}``;
* ``a`` a limit: enumerate ``[0, a)`` canonically as ``f(0), f(1), ...``,
  grow finite closed sets ``S_0 = {} , S_{k+1} = closure(S_k | {f(k)})`` and
  list each new layer ``S_{k+1} - S_k`` so that every prefix stays closed
  (repeatedly taking the least ordinal that keeps the prefix closed).  The
  order lists the layers one after the other.

Every order has all positions finite, so all closures are finite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import core
from .ordinal import (
    Ordinal,
    OrdinalBound,
    canonical_enum,
    canonical_index,
    format_cnf,
    format_set,
    omega_power,
    random_ordinal,
)
from .orders import ListOrder, NaturalRange, WellOrder


class ConstructionError(RuntimeError):
    """A step of the recursion failed; the construction invariant is broken."""


class LimitChain:
    """Lazily grown layers ``S_k`` and per-layer enumerations for a limit."""

    def __init__(self, sys: "OmegaOneSystem", delta: Ordinal):
        self.sys = sys
        self.delta = delta
        self.S = [frozenset()]
        self.layers: list[tuple] = []
        self.seq: list = []  # concatenation of the layers
        self.pos: dict = {}

    def step(self):
        k = len(self.layers)
        prev = self.S[-1]
        target = canonical_enum(self.delta, k)
        out = core.closure(self.sys, prev | {target}, self.sys.budget)
        if not out.closed:
            raise ConstructionError(f"closure failed at limit {format_cnf(self.delta)} step {k}: {out}")
        remaining = set(out.set - prev)
        current = prev
        layer = []
        while remaining:
            for y in sorted(remaining):
                if core.closed_with(self.sys, current, y):
                    break
            else:
                raise ConstructionError(
                    f"no closed extension of {format_set(current)} inside {format_set(out.set)}"
                )
            layer.append(y)
            remaining.discard(y)
            current = current | {y}
        for y in layer:
            self.pos[y] = len(self.seq)
            self.seq.append(y)
        self.layers.append(tuple(layer))
        self.S.append(out.set)

    def ensure_steps(self, k: int):
        while len(self.layers) < k:
            self.step()

    def ensure_member(self, x: Ordinal):
        if x not in self.pos:
            self.ensure_steps(canonical_index(self.delta, x) + 1)

    def ensure_length(self, k: int):
        while len(self.seq) <= k:
            self.step()

    def layer_of(self, x) -> int:
        """``n_x``: the largest ``k`` with ``x`` outside ``S_k``."""
        self.ensure_member(x)
        return next(k for k in range(len(self.S)) if x in self.S[k + 1])


class LimitOrder(WellOrder):
    def __init__(self, chain: LimitChain):
        self.chain = chain
        self.size = None

    def __contains__(self, x):
        return Ordinal.of(x) < self.chain.delta

    def position(self, x):
        x = Ordinal.of(x)
        if not x < self.chain.delta:
            return None
        self.chain.ensure_member(x)
        return self.chain.pos[x]

    def less(self, x, y):
        return self.position(x) < self.position(y)

    def at(self, k):
        if k < 0:
            raise IndexError(k)
        self.chain.ensure_length(k)
        return self.chain.seq[k]


class SuccessorOrder(WellOrder):
    """``[lim + k - 1, ..., lim]`` followed by the order of ``{lim}``."""

    def __init__(self, lim: Ordinal, k: int, tail: WellOrder):
        self.lim = lim
        self.k = k
        self.tail = tail
        self.size = None if tail.size is None else tail.size + k

    def __contains__(self, x):
        return Ordinal.of(x) < self.lim + self.k

    def position(self, x):
        x = Ordinal.of(x)
        if x >= self.lim:
            m = int(x.left_minus(self.lim))
            return self.k - 1 - m if m < self.k else None
        p = self.tail.position(x)
        return None if p is None else p + self.k

    def less(self, x, y):
        return self.position(x) < self.position(y)

    def at(self, k):
        if k < 0 or (self.size is not None and k >= self.size):
            raise IndexError(k)
        if k < self.k:
            return self.lim + (self.k - 1 - k)
        return self.tail.at(k - self.k)


class OmegaOneSystem(core.OrderingSystem):
    def __init__(self, bound=None, overrides: Mapping | None = None, budget: int = core.DEFAULT_BUDGET):
        super().__init__(2)
        self.bound = OrdinalBound(bound if bound is not None else omega_power(2)).lam
        self.budget = budget
        self._limits: dict = {}
        self.overrides = {Ordinal.of(a): ListOrder(seq) for a, seq in (overrides or {}).items()}
        for a, o in self.overrides.items():
            if not a.is_finite or sorted(o.elements()) != list(range(int(a))):
                raise ValueError("overrides must be permutations of a finite [0, a)")

    def rule(self):
        return "Omega1"

    def _build(self, s):
        if not s:
            return NaturalRange(self.bound)
        (a,) = s
        if not a < self.bound:
            raise core.InadmissibleIndex(s, a, "not below the bound")
        return self.stage(a)

    def stage(self, a) -> WellOrder:
        a = Ordinal.of(a)
        key = frozenset([a])
        cached = self._orders.get(key)
        if cached is not None:
            return cached
        if a in self.overrides:
            o = self.overrides[a]
        elif a.is_zero:
            o = ListOrder(())
        elif a.is_finite:
            o = ListOrder(range(int(a) - 1, -1, -1))
        elif a.is_limit:
            o = LimitOrder(self.limit_chain_of(a))
        else:
            lim, k = a.split_finite()
            o = SuccessorOrder(lim, k, self.stage(lim))
        self._orders[key] = o
        return o

    def limit_chain_of(self, delta) -> LimitChain:
        delta = Ordinal.of(delta)
        ch = self._limits.get(delta)
        if ch is None:
            ch = self._limits[delta] = LimitChain(self, delta)
        return ch


def build(bound=None, **kw) -> OmegaOneSystem:
    return OmegaOneSystem(bound, **kw)


def order_at(sys: OmegaOneSystem, alpha) -> WellOrder:
    alpha = Ordinal.of(alpha)
    if not alpha < sys.bound:
        raise ValueError(f"{format_cnf(alpha)} is not below the bound {format_cnf(sys.bound)}")
    return sys.stage(alpha)


@dataclass(frozen=True)
class ChainView:
    delta: Ordinal
    S: tuple
    layers: tuple

    def dump(self) -> list[str]:
        lines = []
        for k in range(1, len(self.S)):
            f = ",".join(format_cnf(x) for x in self.layers[k - 1])
            lines.append(f"chain delta={format_cnf(self.delta)} n={k} S={format_set(self.S[k])} f=({f})")
        return lines


def limit_chain(sys: OmegaOneSystem, delta, upto: int) -> ChainView:
    """``(S_0..S_upto)`` and the enumerations of the first ``upto`` layers."""
    delta = Ordinal.of(delta)
    if not delta.is_limit or not delta < sys.bound:
        raise ValueError(f"{format_cnf(delta)} is not a limit below the bound")
    ch = sys.limit_chain_of(delta)
    ch.ensure_steps(upto)
    return ChainView(delta, tuple(ch.S[: upto + 1]), tuple(ch.layers[:upto]))


def entails(sys: OmegaOneSystem, A: Iterable, x, stage) -> bool:
    """``x`` lies in every closed superset of ``A`` (closedness below ``stage``)."""
    A = frozenset(Ordinal.of(a) for a in A)
    x = Ordinal.of(x)
    stage = Ordinal.of(stage)
    if any(not a < stage for a in A | {x}):
        raise ValueError(f"entailment query leaves the stage {format_cnf(stage)}")
    out = core.closure(sys, A, sys.budget)
    if not out.closed:
        raise ConstructionError(f"closure of {format_set(A)} failed: {out}")
    return x in out.set


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


@dataclass
class PropertyResult:
    name: str
    ok: bool
    checked: int = 0
    witness: object = None

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status} {self.name} checked={self.checked}"
        if self.witness is not None:
            out += f" witness={self.witness}"
        return out


@dataclass
class ConstructionReport:
    results: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    def __getitem__(self, name):
        return next(r for r in self.results if r.name == name)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results] + [f"NOTE {n}" for n in self.notes]


def _fmt(*xs) -> str:
    return " ".join(format_set(x) if isinstance(x, frozenset) else format_cnf(x) for x in xs)


def verify_construction(sys: OmegaOneSystem, alpha_max, samples: int = 200, seed: int = 0,
                        closure_sets: int = 100) -> ConstructionReport:
    """Sampled certification of the recursion's invariants below ``alpha_max``.

    Properties: (1) base order is the usual order, (2) stage coherence against
    a freshly built system queried in a different order, (3) order types via
    finite positions, (4) closed 2-initial segments are closed, (5) the
    entailment dichotomy, plus finite closures and closed prefixes of limit
    orders.
    """
    alpha_max = Ordinal.of(alpha_max)
    rng = random.Random(seed)
    rep = ConstructionReport()

    def draw():
        return random_ordinal(rng, alpha_max)

    # (1)
    bad = None
    for _ in range(samples):
        x, y = draw(), draw()
        if sys.base.less(x, y) != (x < y):
            bad = _fmt(x, y)
            break
    if bad is None and sys.base.prefix(20) != tuple(Ordinal.of(i) for i in range(20)):
        bad = "base enumeration"
    rep.results.append(PropertyResult("usual-base-order", bad is None, samples, bad))

    # (3) and positions
    bad = None
    for _ in range(samples):
        b = draw()
        o = sys.stage(b)
        if b.is_finite:
            if o.size != int(b) or set(o.elements()) != {Ordinal.of(i) for i in range(int(b))}:
                bad = _fmt(b)
                break
        else:
            x = random_ordinal(rng, b)
            p = o.position(x)
            if not isinstance(p, int) or o.at(p) != x:
                bad = _fmt(b, x)
                break
    rep.results.append(PropertyResult("order-type", bad is None, samples, bad))

    # (2) coherence: rebuild with queries in decreasing stage order
    stages = sorted({draw() for _ in range(min(samples, 40))}, reverse=True)
    fresh = OmegaOneSystem(sys.bound, budget=sys.budget)
    fresh.overrides = dict(sys.overrides)
    bad = None
    for b in stages:
        k = 24 if not b.is_finite else int(b)
        if fresh.stage(b).prefix(k) != sys.stage(b).prefix(k):
            bad = _fmt(b)
            break
    rep.results.append(PropertyResult("stage-coherence", bad is None, len(stages), bad))

    # (4) closed 2-initial segments
    bad = None
    for _ in range(samples):
        beta = draw()
        while beta.is_zero:
            beta = draw()
        gamma = random_ordinal(rng, beta)
        D = core.initial_segment(sys, {beta}, gamma)
        chk = core.is_closed(sys, D)
        if not chk:
            s, a, b = chk.witness
            bad = f"beta={format_cnf(beta)} gamma={format_cnf(gamma)} s={format_set(s)} a={format_cnf(a)} b={format_cnf(b)}"
            break
    rep.results.append(PropertyResult("segments-closed", bad is None, samples, bad))

    # (5) dichotomy
    bad = None
    checked = 0
    for _ in range(samples):
        stage = draw()
        if stage.is_zero:
            continue
        base = [random_ordinal(rng, stage) for _ in range(rng.randint(0, 2))]
        S = core.closure(sys, base, sys.budget).set
        outside = [random_ordinal(rng, stage) for _ in range(4)]
        outside = [x for x in dict.fromkeys(outside) if x not in S]
        if len(outside) < 2:
            continue
        beta, gamma = outside[:2]
        checked += 1
        if entails(sys, S | {gamma}, beta, stage) and entails(sys, S | {beta}, gamma, stage):
            bad = f"S={format_set(S)} beta={format_cnf(beta)} gamma={format_cnf(gamma)}"
            break
    rep.results.append(PropertyResult("entailment-dichotomy", bad is None, checked, bad))

    # finite closures
    bad = None
    for _ in range(closure_sets):
        A = {draw() for _ in range(rng.randint(1, 4))}
        out = core.closure(sys, A, sys.budget)
        if not out.closed or not core.is_closed(sys, out.set):
            bad = f"A={format_set(A)} {out}"
            break
    rep.results.append(PropertyResult("finite-closures", bad is None, closure_sets, bad))

    # closed prefixes of limit orders
    bad = None
    checked = 0
    limits = sorted({x.split_finite()[0] for x in (draw() for _ in range(samples))
                     if not x.is_finite} | ({alpha_max} if alpha_max.is_limit and alpha_max < sys.bound else set()))
    for delta in limits:
        o = sys.stage(delta)
        for k in (1, 2, 3, 5, 8, 13, 21):
            checked += 1
            P = frozenset(o.prefix(k))
            if not core.is_closed(sys, P):
                bad = f"delta={format_cnf(delta)} prefix={k}"
                break
        if bad:
            break
    rep.results.append(PropertyResult("limit-prefixes-closed", bad is None, checked, bad))
    rep.notes.append("limit layers use n_x = max{k : x not in S_k}; S_0 is empty")
    return rep


def fragment(sys: OmegaOneSystem, rng: random.Random, size: int, below) -> frozenset:
    """A random finite closed subset of ``[0, below)`` of at most ``size``
    elements: the closure of random seeds, grown while it stays small."""
    below = Ordinal.of(below)
    S: frozenset = frozenset()
    for _ in range(4 * size):
        x = random_ordinal(rng, below)
        out = core.closure(sys, S | {x}, sys.budget)
        if out.closed and len(out.set) <= size:
            S = out.set
    return S

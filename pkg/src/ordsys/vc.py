"""Shattering, VC dimension and cofinality for finite set families."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from . import core
from .ordinal import Ordinal, format_set


def _canon(members: Iterable, index: dict) -> tuple:
    seen = {frozenset(Ordinal.of(x) for x in m) for m in members}
    return tuple(sorted(seen, key=lambda m: (len(m), sorted(index[x] for x in m))))


class SetFamily:
    """A finite family of subsets of a finite ground set, canonically sorted
    (by size, then lexicographically by ground position) and deduplicated."""

    def __init__(self, ground: Iterable, members: Iterable):
        self.ground = tuple(sorted({Ordinal.of(x) for x in ground}))
        self.index = {x: i for i, x in enumerate(self.ground)}
        members = list(members)
        for m in members:
            for x in m:
                if Ordinal.of(x) not in self.index:
                    raise ValueError(f"member {format_set(m)} leaves the ground set")
        self.members = _canon(members, self.index)
        self._bits = None

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        return isinstance(other, SetFamily) and (self.ground, self.members) == (other.ground, other.members)

    def __repr__(self):
        return f"SetFamily(ground={format_set(self.ground)}, {len(self.members)} members)"

    @property
    def bits(self) -> np.ndarray:
        """Membership matrix: row per member, column per ground element."""
        if self._bits is None:
            b = np.zeros((len(self.members), len(self.ground)), dtype=np.uint8)
            for r, m in enumerate(self.members):
                for x in m:
                    b[r, self.index[x]] = 1
            self._bits = b
        return self._bits

    def _codes(self, cols) -> np.ndarray:
        codes = np.zeros(len(self.members), dtype=np.int64)
        for c in cols:
            codes = (codes << 1) | self.bits[:, c]
        return codes


def _subset_of(cols, code: int, ground) -> frozenset:
    d = len(cols)
    return frozenset(ground[c] for j, c in enumerate(cols) if code >> (d - 1 - j) & 1)


def _missing_trace(F: SetFamily, cols: tuple):
    """First subset of ``cols`` (by size, then lexicographic) that is no trace."""
    d = len(cols)
    present = set(np.unique(F._codes(cols)).tolist()) if len(F) else set()
    for k in range(d + 1):
        for sub in combinations(range(d), k):
            code = sum(1 << (d - 1 - j) for j in sub)
            if code not in present:
                return frozenset(F.ground[cols[j]] for j in sub)
    return None


def shatters(F: SetFamily, A) -> core.Check:
    """Every subset of ``A`` is ``A & S`` for some member ``S``.

    The witness is the first missing trace.
    """
    A = sorted({Ordinal.of(x) for x in A})
    for x in A:
        if x not in F.index:
            raise ValueError(f"{x} is not in the ground set")
    cols = tuple(F.index[x] for x in A)
    if not len(F):
        return core.Check(False, frozenset())
    codes = F._codes(cols)
    if len(np.unique(codes)) == 1 << len(cols):
        return core.Check(True)
    return core.Check(False, _missing_trace(F, cols))


@dataclass
class VcResult:
    dimension: int
    witness: frozenset | None
    certificate: dict = field(default_factory=dict)  # trace -> realizing member
    capped: bool = False
    failures: list = field(default_factory=list)  # (candidate, missing trace) one level up

    def __str__(self):
        w = "-" if self.witness is None else format_set(self.witness)
        return f"VC={self.dimension}{' (capped)' if self.capped else ''} witness={w}"


def vc_dimension(F: SetFamily, cap: int | None = None, explain: bool = False) -> VcResult:
    """Exact VC dimension by ascending search over shattered sets.

    Shattered sets are closed under subsets, so a ``(d+1)``-candidate is only
    tried when all of its ``d``-subsets are shattered.  With ``explain`` the
    result lists, for each surviving candidate one level above the dimension,
    its first missing trace.
    """
    m = len(F.ground)
    cap = m if cap is None else min(cap, m)
    if not len(F):
        return VcResult(0, None)
    bits = F.bits.astype(np.int64)
    level = {(): np.zeros(len(F), dtype=np.int64)}
    d = 0
    failures = []
    while d < cap:
        nxt = {}
        tried = []
        for A, codes in level.items():
            start = A[-1] + 1 if A else 0
            for e in range(start, m):
                B = A + (e,)
                if d and any(B[:i] + B[i + 1:] not in level for i in range(d)):
                    continue
                c = (codes << 1) | bits[:, e]
                if np.count_nonzero(np.bincount(c, minlength=1 << (d + 1))) == 1 << (d + 1):
                    nxt[B] = c
                else:
                    tried.append(B)
        if not nxt:
            if explain:
                failures = [(frozenset(F.ground[c] for c in B), _missing_trace(F, B)) for B in tried]
            break
        level = nxt
        d += 1
    cols = min(level)
    witness = frozenset(F.ground[c] for c in cols)
    codes = level[cols]
    cert = {}
    for row, code in enumerate(codes.tolist()):
        t = _subset_of(cols, code, F.ground)
        cert.setdefault(t, F.members[row])
    capped = d == cap and cap < m
    return VcResult(d, witness, cert, capped, failures)


def check_certificate(F: SetFamily, res: VcResult) -> bool:
    """Re-validate a result: witness shattered and every listed trace realised."""
    if res.witness is None:
        return res.dimension == 0
    if len(res.witness) != res.dimension or not shatters(F, res.witness):
        return False
    if len(res.certificate) != 1 << res.dimension:
        return False
    members = set(F.members)
    return all(S in members and res.witness & S == t for t, S in res.certificate.items())


def restrict_family(F: SetFamily, X0) -> SetFamily:
    X0 = {Ordinal.of(x) for x in X0}
    ground = [x for x in F.ground if x in X0]
    return SetFamily(ground, [m & X0 for m in F.members])


def is_cofinal(F: SetFamily, lambda_bound: int) -> core.Check:
    """Every subset of the ground set of size ``< lambda_bound`` is covered by
    a member.  The witness is a smallest uncovered set."""
    top = min(lambda_bound - 1, len(F.ground))
    if top < 0:
        return core.Check(True)
    if not len(F):
        return core.Check(False, frozenset())
    bits = F.bits

    def covered(cols):
        return bool(np.any(np.all(bits[:, list(cols)] == 1, axis=1))) if cols else True

    if all(covered(c) for c in combinations(range(len(F.ground)), top)):
        return core.Check(True)
    for k in range(top + 1):
        for c in combinations(range(len(F.ground)), k):
            if not covered(c):
                return core.Check(False, frozenset(F.ground[i] for i in c))
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# closed families of ordering systems
# ---------------------------------------------------------------------------

ALL = "all"
SEGMENTS_ONLY = "segments"


@dataclass(frozen=True)
class ClosuresOfSmall:
    k: int


MAX_POWERSET = 22


def closed_masks(sys: core.OrderingSystem, universe=None) -> np.ndarray:
    """Bitmasks (over the sorted universe) of every closed subset."""
    universe = tuple(universe if universe is not None else sys.finite_universe)
    m = len(universe)
    if m > MAX_POWERSET:
        raise ValueError(f"powerset scan limited to {MAX_POWERSET} elements, got {m}")
    masks = np.arange(1 << m, dtype=np.int64)
    ok = np.ones(1 << m, dtype=bool)
    for P, R in core.closure_rules(sys, universe):
        ok &= ~(((masks & P) == P) & ((masks & R) != R))
    return masks[ok]


def closed_family(sys: core.OrderingSystem, mode=ALL, budget: int = core.DEFAULT_BUDGET) -> SetFamily:
    universe = sys.finite_universe
    if universe is None:
        raise ValueError("closed families need a finite universe")
    if mode == ALL:
        members = []
        for mask in closed_masks(sys, universe).tolist():
            members.append(frozenset(x for i, x in enumerate(universe) if mask >> i & 1))
        return SetFamily(universe, members)
    if mode == SEGMENTS_ONLY:
        members = []
        for s in combinations(universe, sys.n - 1):
            o = sys.order(frozenset(s))
            for b in o.elements():
                members.append(core.initial_segment(sys, s, b))
        return SetFamily(universe, members)
    if isinstance(mode, ClosuresOfSmall):
        members = []
        for A in core.index_sets(universe, mode.k):
            out = core.closure(sys, A, budget)
            if not out.closed:
                raise ValueError(f"closure of {format_set(A)} failed: {out}")
            members.append(out.set)
        return SetFamily(universe, members)
    raise ValueError(f"unknown mode {mode!r}")

"""Seeded property batteries behind ``ordsys verify``.

Each suite returns a list of :class:`PropertyResult`; output is a pure
function of ``(suite, seed, samples)``.
"""

from __future__ import annotations

import random
from itertools import combinations

from . import core, generic, omega1, vc
from .omega1 import PropertyResult
from .ordinal import DEFAULT_LAMBDA, Ordinal, format_cnf, format_set, omega_power, parse_cnf, random_ordinal
from .orders import NaturalRange

SUITES = ("core", "vc", "omega1", "generic")


def _result(name, checked, bad) -> PropertyResult:
    return PropertyResult(name, bad is None, checked, bad)


def _random_subset(rng, universe, k):
    return frozenset(rng.sample(list(universe), min(k, len(universe))))


# ---------------------------------------------------------------------------
# core
# ---------------------------------------------------------------------------


def brute_pivot_sets(sys, s, k) -> list:
    """All ``k``-subsets ``t`` of ``s`` with ``s - t`` inside ``dom(t)``."""
    out = []
    for t in combinations(sorted(s), k):
        t = frozenset(t)
        try:
            o = sys.order(t)
        except core.InadmissibleIndex:
            continue
        if all(x in o for x in s - t):
            out.append(t)
    return out


def closed_supersets_meet(sys, A) -> frozenset:
    """Intersection of every closed superset of ``A`` (finite universes)."""
    universe = sys.finite_universe
    A = frozenset(A)
    best = frozenset(universe)
    for mask in vc.closed_masks(sys, universe).tolist():
        S = frozenset(x for i, x in enumerate(universe) if mask >> i & 1)
        if A <= S:
            best &= S
    return best


def suite_core(seed: int, samples: int) -> list:
    rng = random.Random(f"core/{seed}")
    out = []
    systems = [core.random_system(rng, rng.randint(1, 4), rng.randint(1, 7)) for _ in range(max(samples // 10, 5))]

    bad = None
    for sys in systems:
        rep = core.validate_system(sys)
        if not rep:
            bad = str(rep.witness)
            break
    out.append(_result("random-systems-valid", len(systems), bad))

    bad = None
    checked = 0
    for sys in systems:
        universe = sys.finite_universe
        for s in core.index_sets(universe, sys.n - 2):
            o = sys.order(s)
            for a in o.elements():
                checked += 1
                if set(core.domain_of(sys, s | {a}).elements()) != set(o.below(a)):
                    bad = f"s={format_set(s)} a={format_cnf(a)}"
                    break
    out.append(_result("domain-recursion", checked, bad))

    bad = None
    for _ in range(samples):
        sys = rng.choice(systems)
        universe = sys.finite_universe
        s = _random_subset(rng, universe, rng.randint(0, 5))
        k = rng.randint(0, min(sys.n - 1, len(s)))
        found = brute_pivot_sets(sys, s, k)
        if found != [core.pivot_set(sys, s, k)[0]]:
            bad = f"s={format_set(s)} k={k} found={len(found)}"
            break
    out.append(_result("pivot-uniqueness", samples, bad))

    bad = None
    checked = 0
    for _ in range(samples):
        sys = rng.choice(systems)
        if sys.n < 2:
            continue
        universe = sys.finite_universe
        x0 = rng.choice(universe)
        below = sys.base.below(x0)
        d = core.derived(sys, x0)
        t = _random_subset(rng, below, rng.randint(1, sys.n - 1))
        if not t:
            continue
        try:
            core.pivot_chain(d, t)
        except core.InadmissibleIndex:
            continue
        checked += 1
        if set(core.predom_of(d, t).elements()) != set(core.predom_of(sys, t | {x0}).elements()):
            bad = f"t={format_set(t)} x0={format_cnf(x0)}"
            break
    out.append(_result("two-predomains", checked, bad))

    bad = None
    checked = 0
    for sys in systems:
        universe = sys.finite_universe
        if len(universe) > 7:
            continue
        for _ in range(3):
            A = _random_subset(rng, universe, rng.randint(0, 3))
            res = core.closure(sys, A)
            checked += 1
            if not res.closed or res.set != closed_supersets_meet(sys, A):
                bad = f"A={format_set(A)} got={res}"
                break
    out.append(_result("closure-minimal", checked, bad))

    bad = None
    checked = 0
    for sys in systems:
        universe = sys.finite_universe
        for mask in vc.closed_masks(sys, universe).tolist():
            S = frozenset(x for i, x in enumerate(universe) if mask >> i & 1)
            if len(S) < sys.n:
                continue
            chain = core.pivot_chain(sys, S, sys.n)
            checked += 1
            if core.initial_segment(sys, chain[:-1], chain[-1]) != S:
                bad = f"S={format_set(S)}"
                break
    out.append(_result("closed-sets-are-segments", checked, bad))

    bad = None
    nice = [core.NaturalSystem(2, DEFAULT_LAMBDA), core.BlockShuffleSystem(3, DEFAULT_LAMBDA, seed)]
    checked = 0
    for sys in nice:
        for _ in range(samples // 4):
            s = frozenset(random_ordinal(rng, DEFAULT_LAMBDA, 4) for _ in range(sys.n))
            if len(s) != sys.n:
                continue
            checked += 1
            res = core.inf_test(sys, s)
            pre = core.predom_of(sys, s)
            if res.infinite:
                if not all(Ordinal.of(i) in pre for i in range(20)) or pre.is_finite:
                    bad = f"s={format_set(s)}"
            elif set(pre.elements()) != res.predom:
                bad = f"s={format_set(s)}"
            if bad:
                break
    out.append(_result("inf-characterisation", checked, bad))

    bad = None
    checked = 0
    sys = nice[1]
    frag_pool = [random_ordinal(rng, DEFAULT_LAMBDA, 3) for _ in range(8)]
    for x0 in sorted(set(frag_pool))[-3:]:
        if x0.is_zero:
            continue
        d = core.derived(sys, x0)
        probe = [x for x in frag_pool if x < x0]
        checked += 1
        if not core.check_nice(d, depth=24, fragment=probe, reference=sys.order({x0})):
            bad = f"x0={format_cnf(x0)}"
            break
    out.append(_result("nice-reduction", checked, bad))

    bad = None
    checked = 0
    for sys in systems[:10]:
        universe = sys.finite_universe
        size = len(universe)
        top = {}
        for s in combinations(universe, sys.n):
            dom = list(core.predom_of(sys, s).elements())
            rng.shuffle(dom)
            top[frozenset(s)] = dom
        ext = core.extend_bottom_up(sys, top)
        v = [Ordinal.of(size)] * sys.n
        top_bound = max((len(o) for o in top.values()), default=0)
        checked += 1
        if not core.validate_system(ext) or not core.check_order_bound(ext, v + [Ordinal.of(top_bound)], universe):
            bad = f"n={sys.n} size={size}"
            break
    out.append(_result("bottom-up-extension", checked, bad))
    return out


# ---------------------------------------------------------------------------
# vc
# ---------------------------------------------------------------------------


def random_family(rng, m: int, count: int) -> vc.SetFamily:
    members = [frozenset(x for x in range(m) if rng.random() < 0.5) for _ in range(count)]
    return vc.SetFamily(range(m), members)


def suite_vc(seed: int, samples: int) -> list:
    rng = random.Random(f"vc/{seed}")
    out = []
    bad = None
    for _ in range(samples):
        F = random_family(rng, rng.randint(1, 8), rng.randint(1, 20))
        A = _random_subset(rng, F.ground, rng.randint(0, 6))
        traces = vc.restrict_family(F, A)
        if (len(traces) == 1 << len(A)) != bool(vc.shatters(F, A)):
            bad = f"A={format_set(A)}"
            break
    out.append(_result("trace-count-matches-shattering", samples, bad))

    bad = None
    for _ in range(samples):
        F = random_family(rng, rng.randint(1, 8), rng.randint(1, 20))
        res = vc.vc_dimension(F)
        if not vc.check_certificate(F, res):
            bad = str(res)
            break
    out.append(_result("certificate-sound", samples, bad))

    bad = None
    for _ in range(samples):
        F = random_family(rng, rng.randint(1, 8), rng.randint(1, 20))
        X0 = _random_subset(rng, F.ground, rng.randint(0, len(F.ground)))
        if vc.vc_dimension(vc.restrict_family(F, X0)).dimension > vc.vc_dimension(F).dimension:
            bad = f"X0={format_set(X0)}"
            break
    out.append(_result("restriction-monotone", samples, bad))

    bad = None
    for _ in range(samples // 2):
        F = random_family(rng, rng.randint(1, 8), rng.randint(1, 20))
        shift = parse_cnf("w*2+1")
        moved = vc.SetFamily([shift + x for x in F.ground], [{shift + x for x in m} for m in F.members])
        if vc.vc_dimension(moved).dimension != vc.vc_dimension(F).dimension:
            bad = "relabelled family"
            break
    out.append(_result("relabel-invariant", samples // 2, bad))

    bad = None
    for _ in range(samples // 2):
        n = rng.randint(1, 4)
        sys = core.random_system(rng, n, rng.randint(n, 10))
        res = vc.vc_dimension(vc.closed_family(sys))
        if res.dimension > n:
            bad = f"n={n} witness={format_set(res.witness)}"
            break
    out.append(_result("closed-family-vc-at-most-n", samples // 2, bad))
    return out


# ---------------------------------------------------------------------------
# omega1
# ---------------------------------------------------------------------------


def omega1_fragment_vc(sys, rng, count: int, size: int = 12, below=None) -> tuple[int, list]:
    below = below if below is not None else parse_cnf("w*5")
    dims = []
    for _ in range(count):
        frag = omega1.fragment(sys, rng, size, below)
        dims.append(vc.vc_dimension(vc.closed_family(core.restrict_to(sys, frag))).dimension)
    return max(dims, default=0), dims


def suite_omega1(seed: int, samples: int) -> list:
    sys = omega1.build(omega_power(2))
    rep = omega1.verify_construction(sys, parse_cnf("w*5"), samples, seed, closure_sets=min(samples, 100))
    out = list(rep.results)
    rng = random.Random(f"omega1/{seed}")
    best, dims = omega1_fragment_vc(sys, rng, 10)
    out.append(PropertyResult("fragment-vc-at-most-2", best <= 2, len(dims), None if best <= 2 else f"vc={best}"))
    return out


# ---------------------------------------------------------------------------
# generic
# ---------------------------------------------------------------------------


def random_request(rng, pool, naturals: int = 10, size: int = 8):
    A = set()
    for _ in range(rng.randint(0, size)):
        if rng.random() < 0.6:
            A.add(rng.choice(pool))
        else:
            A.add(Ordinal.of(rng.randrange(naturals)))
    return frozenset(A)


def const_red_case(rng, n: int, extensions: int):
    """One const-then-red case; returns None or a failure description."""
    base = core.NaturalSystem(n, DEFAULT_LAMBDA)
    pool = [generic.random_big(rng, DEFAULT_LAMBDA) for _ in range(6)]
    A = random_request(rng, pool)
    p = generic.random_condition(rng, base, pool, rng.randint(0, 6))
    wit = generic.const_extend(base, A, p)
    j = generic.check_j(base, A, p, wit.B, wit.q)
    if not j:
        return f"A={format_set(A)} {j.witness[0]}"
    red = generic.red_check(base, wit.B, wit.q)
    if not red:
        return f"A={format_set(A)} {red.witness[0]}"
    full = generic.closed_at_top(generic.FragmentSystem(base, wit.q, wit.B), wit.B)
    if not full:
        return f"A={format_set(A)} not closed"
    infs = generic.inf_sets(wit.B, n)
    for _ in range(extensions):
        r = generic.random_extension(rng, base, wit.q, pool + sorted(wit.B))
        carrier = set(wit.B)
        for s in infs:
            carrier |= r.dom(s)
        frag = generic.FragmentSystem(base, r, carrier, complete=True)
        chk = generic.closed_at_top(frag, wit.B, infs)
        if not chk or not generic.values_dominate(base, wit.B, wit.q, r):
            return f"A={format_set(A)} extension breaks closedness"
    return None


def suite_generic(seed: int, samples: int, extensions: int = 10) -> list:
    rng = random.Random(f"generic/{seed}")
    out = []
    bad = None
    for i in range(samples):
        bad = const_red_case(rng, 2 + i % 2, extensions)
        if bad:
            break
    out.append(_result("const-implies-red", samples, bad))

    bad = None
    sess = generic.GenericSession(core.NaturalSystem(2, DEFAULT_LAMBDA))
    pool = [generic.random_big(rng, DEFAULT_LAMBDA) for _ in range(5)]
    for _ in range(max(samples // 20, 5)):
        before = sess.snapshot()
        B, cert = sess.closure_generic(random_request(rng, pool, 6, 4))
        if not cert or not sess.current.extends(before) or not generic.validate_condition(sess.base, sess.current):
            bad = f"B={format_set(B)}"
            break
    out.append(_result("session-monotone-certified", max(samples // 20, 5), bad))

    bad = None
    checked = 0
    sess = generic.GenericSession(core.NaturalSystem(2, DEFAULT_LAMBDA))
    for _ in range(10):
        B, _ = sess.closure_generic(random_request(rng, pool, 5, 3))
        if len(B) > 12:
            continue
        frag = generic.induced_fragment(sess, B)
        checked += 1
        if not core.validate_system(frag) or vc.vc_dimension(vc.closed_family(frag)).dimension > 3:
            bad = f"B={format_set(B)}"
            break
    out.append(_result("fragment-vc-at-most-n+1", checked, bad))
    return out


def run_suite(name: str, seed: int, samples: int | None = None) -> list:
    if name == "core":
        return suite_core(seed, samples or 100)
    if name == "vc":
        return suite_vc(seed, samples or 100)
    if name == "omega1":
        return suite_omega1(seed, samples or 100)
    if name == "generic":
        return suite_generic(seed, samples or 500)
    raise ValueError(f"unknown suite {name!r}")


def segments_battery(sys: core.OrderingSystem) -> list:
    """Validity plus: every closed n-initial segment is closed (finite systems)."""
    out = []
    rep = core.validate_system(sys)
    out.append(PropertyResult("system-valid", rep.valid, 1, None if rep.valid else str(rep.witness)))
    bad = None
    checked = 0
    universe = sys.finite_universe
    for s in combinations(universe, sys.n - 1):
        o = sys.order(frozenset(s))
        for b in o.elements():
            checked += 1
            D = core.initial_segment(sys, s, b)
            chk = core.is_closed(sys, D)
            if not chk:
                t, a, bb = chk.witness
                bad = (f"s={format_set(s)} b={format_cnf(b)} segment={format_set(D)} "
                       f"violation=(s={format_set(t)}, a={format_cnf(a)}, b={format_cnf(bb)})")
                break
        if bad:
            break
    out.append(_result("segments-closed", checked, bad))
    return out

"""End-to-end acceptance checks.

Each test prints one ``ACCEPTANCE k: PASS|FAIL`` line (collected again in
the terminal summary) and enforces its time budget.
"""

import os
import random
import subprocess
import sys
import time
from itertools import combinations

from ordsys import core, generic, omega1, vc
from ordsys.formats import KINDS, convert_text
from ordsys.ordinal import DEFAULT_LAMBDA, Ordinal, format_set, omega_power, parse_cnf, random_ordinal

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

_SUFFIX_KIND = {".sys": "system", ".fam": "family", ".cond": "cond"}


def _brute_pivots(sys_, s, k):
    """Every k-subset t of s whose complement lies in the domain of t."""
    hits = []
    for t in combinations(sorted(s), k):
        t = frozenset(t)
        try:
            o = sys_.order(t)
        except core.InadmissibleIndex:
            continue
        if all(x in o for x in s - t):
            hits.append(t)
    return hits


def test_closed_family_vc_at_most_depth(acceptance):
    rng = random.Random(20240601)
    start = time.perf_counter()
    worst = None
    excess = -99
    for i in range(200):
        n = 1 + i % 4
        size = rng.randint(n, 12)
        sys_ = core.random_system(rng, n, size)
        d = vc.vc_dimension(vc.closed_family(sys_, vc.ALL)).dimension
        if d - n > excess:
            excess, worst = d - n, (n, size, d)
    elapsed = time.perf_counter() - start
    ok = excess <= 0 and elapsed < 60
    acceptance(1, ok, f"200 systems, max(vc - n) = {excess} at (n, size, vc) = {worst}, {elapsed:.1f}s")


def test_initial_segments_vc_one(acceptance):
    start = time.perf_counter()
    dims = []
    for m in range(11):
        ground = list(range(m + 1))
        family = vc.SetFamily(ground, [frozenset(range(j)) for j in range(m + 2)])
        dims.append(vc.vc_dimension(family).dimension)
    elapsed = time.perf_counter() - start
    ok = set(dims) == {1} and elapsed < 1
    acceptance(2, ok, f"m = 0..10 dims {dims}, {elapsed:.2f}s")


def test_k_subset_family_vc(acceptance):
    start = time.perf_counter()
    dims = {}
    for n in range(4):
        ground = list(range(2 * n + 4))
        family = vc.SetFamily(ground, [frozenset(c) for c in combinations(ground, n + 1)])
        dims[n] = vc.vc_dimension(family).dimension
    elapsed = time.perf_counter() - start
    ok = all(d == n + 1 for n, d in dims.items()) and elapsed < 30
    acceptance(3, ok, f"dims {dims}, {elapsed:.2f}s")


def test_pivot_uniqueness(acceptance):
    rng = random.Random(4)
    start = time.perf_counter()
    systems = [core.random_system(rng, rng.randint(1, 5), rng.randint(1, 9)) for _ in range(40)]
    bad = None
    for _ in range(500):
        sys_ = rng.choice(systems)
        universe = sys_.finite_universe
        s = frozenset(rng.sample(universe, min(len(universe), rng.randint(0, 5))))
        k = rng.randint(0, min(sys_.n - 1, len(s)))
        hits = _brute_pivots(sys_, s, k)
        if len(hits) != 1 or hits[0] != core.pivot_set(sys_, s, k)[0]:
            bad = (format_set(s), k, len(hits))
            break
    elapsed = time.perf_counter() - start
    ok = bad is None and elapsed < 30
    acceptance(4, ok, f"500 cases, first failure {bad}, {elapsed:.2f}s")


def test_omega1_construction(acceptance):
    start = time.perf_counter()
    sys_ = omega1.build(omega_power(2))
    rep = omega1.verify_construction(sys_, parse_cnf("w*5"), 200, 42, closure_sets=100)
    elapsed = time.perf_counter() - start
    failed = [r.name for r in rep.results if not r.ok]
    ok = rep.ok and elapsed < 120
    acceptance(5, ok, f"{len(rep.results)} properties, failed {failed}, {elapsed:.1f}s")


def test_omega1_fragment_vc(acceptance):
    start = time.perf_counter()
    sys_ = omega1.build(omega_power(2))
    rng = random.Random(6)
    dims, sizes = [], []
    for _ in range(20):
        frag = omega1.fragment(sys_, rng, 12, parse_cnf("w*5"))
        sizes.append(len(frag))
        dims.append(vc.vc_dimension(vc.closed_family(core.restrict_to(sys_, frag))).dimension)
    elapsed = time.perf_counter() - start
    ok = max(dims) <= 2 and 2 in dims and max(sizes) <= 12 and elapsed < 60
    acceptance(6, ok, f"20 fragments (sizes {min(sizes)}..{max(sizes)}), dims {sorted(set(dims))}, {elapsed:.1f}s")


def _const_red_case(rng, n, extensions):
    base = core.NaturalSystem(n, DEFAULT_LAMBDA)
    pool = [generic.random_big(rng, DEFAULT_LAMBDA) for _ in range(6)]
    A = set()
    for _ in range(rng.randint(0, 8)):
        A.add(rng.choice(pool) if rng.random() < 0.6 else Ordinal.of(rng.randrange(10)))
    p = generic.random_condition(rng, base, pool, rng.randint(0, 6))
    wit = generic.const_extend(base, A, p)
    if not generic.check_j(base, A, p, wit.B, wit.q):
        return "J clauses"
    if not generic.red_check(base, wit.B, wit.q):
        return "red"
    if not generic.closed_at_top(generic.FragmentSystem(base, wit.q, wit.B), wit.B):
        return "closed at the condition"
    infs = generic.inf_sets(wit.B, n)
    for _ in range(extensions):
        r = generic.random_extension(rng, base, wit.q, pool + sorted(wit.B))
        if not r.extends(wit.q):
            return "extension is not an extension"
        carrier = set(wit.B)
        for s in infs:
            carrier |= r.dom(s)
        frag = generic.FragmentSystem(base, r, carrier, complete=True)
        if not generic.closed_at_top(frag, wit.B, infs):
            return "closed under an extension"
        if not generic.values_dominate(base, wit.B, wit.q, r):
            return "value domination"
    return None


def test_const_implies_red(acceptance):
    rng = random.Random(7)
    start = time.perf_counter()
    bad = None
    for i in range(500):
        why = _const_red_case(rng, 2 + i % 2, 100)
        if why:
            bad = (i, why)
            break
    elapsed = time.perf_counter() - start
    ok = bad is None and elapsed < 180
    acceptance(7, ok, f"500 cases x 100 extensions, first failure {bad}, {elapsed:.1f}s")


def _shatters_some(family, size):
    ground = sorted(family.ground)
    return [c for c in combinations(ground, size) if vc.shatters(family, c)]


def test_generic_fragment_vc(acceptance):
    rng = random.Random(8)
    start = time.perf_counter()
    base = core.NaturalSystem(2, DEFAULT_LAMBDA)
    dims, sizes, four = [], [], 0
    for _ in range(30):
        session = generic.GenericSession(base)
        pool = [generic.random_big(rng, DEFAULT_LAMBDA) for _ in range(3)]
        A = set(rng.sample(pool, rng.randint(2, 3)))
        A |= {Ordinal.of(rng.randrange(8)) for _ in range(rng.randint(1, 2))}
        B, _ = session.closure_generic(A)
        frag = generic.induced_fragment(session, B)
        family = vc.closed_family(frag)
        sizes.append(len(B))
        dims.append(vc.vc_dimension(family).dimension)
        four += len(_shatters_some(family, 4))
    elapsed = time.perf_counter() - start
    ok = max(dims) <= 3 and four == 0 and elapsed < 120
    acceptance(8, ok, f"30 carriers (sizes {min(sizes)}..{max(sizes)}), dims {sorted(set(dims))}, "
                      f"shattered 4-sets {four}, {elapsed:.1f}s")


def test_inf_characterisation(acceptance):
    rng = random.Random(9)
    start = time.perf_counter()
    bases = [core.NaturalSystem(n, DEFAULT_LAMBDA) for n in (1, 2, 3)]
    bases += [core.BlockShuffleSystem(n, DEFAULT_LAMBDA, seed) for n in (1, 2, 3) for seed in (1, 2)]
    probe = 300
    bad = None
    done = finite = 0
    while done < 1000:
        sys_ = rng.choice(bases)
        s = set()
        while len(s) < sys_.n:
            s.add(Ordinal.of(rng.randrange(12)) if rng.random() < 0.3 else random_ordinal(rng, DEFAULT_LAMBDA, 5))
        s = frozenset(s)
        done += 1
        res = core.inf_test(sys_, s)
        seen = core.predom_of(sys_, s).prefix(probe)
        probed_infinite = len(seen) == probe
        if res.infinite != probed_infinite:
            bad = format_set(s)
            break
        if not res.infinite:
            finite += 1
            if set(seen) != set(res.predom) or len(seen) != len(res.predom):
                bad = format_set(s)
                break
    elapsed = time.perf_counter() - start
    ok = bad is None and elapsed < 30
    acceptance(9, ok, f"{done} index sets ({finite} finite), first failure {bad}, {elapsed:.2f}s")


def _verify_output():
    cmd = [sys.executable, "-m", "ordsys", "verify", "--suite", "all", "--seed", "42"]
    proc = subprocess.run(cmd, capture_output=True, cwd=ROOT)
    return proc.returncode, proc.stdout


def test_formats_and_determinism(acceptance):
    start = time.perf_counter()
    data = os.path.join(ROOT, "data")
    mismatched = []
    files = sorted(os.listdir(data))
    for name in files:
        kind = _SUFFIX_KIND[os.path.splitext(name)[1]]
        assert kind in KINDS
        with open(os.path.join(data, name), encoding="utf-8") as fh:
            text = fh.read()
        if convert_text(text, kind) != text:
            mismatched.append(name)
    first = _verify_output()
    second = _verify_output()
    elapsed = time.perf_counter() - start
    ok = not mismatched and first == second and first[0] == 0 and elapsed < 60
    acceptance(10, ok, f"{len(files)} files round-trip (mismatched {mismatched}), verify exit {first[0]}, "
                       f"identical={first == second}, {elapsed:.1f}s")

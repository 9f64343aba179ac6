import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordsys import core, vc
from ordsys.ordinal import Ordinal


def nat(*xs):
    return frozenset(Ordinal.of(x) for x in xs)


def naive_shatters(members, A) -> bool:
    A = frozenset(A)
    return len({A & m for m in members}) == 2 ** len(A)


def naive_vc(ground, members) -> int:
    """Largest shattered subset by plain enumeration (0 for an empty family)."""
    if not members:
        return 0
    best = 0
    for k in range(len(ground) + 1):
        if any(naive_shatters(members, c) for c in combinations(ground, k)):
            best = k
        else:
            break
    return best


families = st.integers(1, 7).flatmap(
    lambda m: st.tuples(
        st.just(m),
        st.lists(st.sets(st.integers(0, m - 1)), min_size=0, max_size=24),
    )
)


def make(m, members):
    return vc.SetFamily(range(m), [frozenset(s) for s in members])


def segments(m):
    return vc.SetFamily(range(m + 1), [frozenset(range(j)) for j in range(m + 2)])


# ---------------------------------------------------------------------------
# shattering and VC
# ---------------------------------------------------------------------------


def test_shatters_examples():
    F = segments(5)
    assert vc.shatters(F, ())
    chk = vc.shatters(F, nat(1, 3))
    assert not chk and chk.witness == nat(3)
    P = vc.SetFamily(range(3), [frozenset(c) for k in range(4) for c in combinations(range(3), k)])
    assert vc.shatters(P, nat(0, 1, 2))


def test_vc_examples():
    assert vc.vc_dimension(segments(5)).dimension == 1
    power = vc.SetFamily(range(4), [frozenset(c) for k in range(5) for c in combinations(range(4), k)])
    assert vc.vc_dimension(power).dimension == 4
    pairs = vc.SetFamily(range(8), [frozenset(c) for c in combinations(range(8), 2)])
    res = vc.vc_dimension(pairs, explain=True)
    assert res.dimension == 2
    assert not any(naive_shatters(pairs.members, c) for c in combinations(pairs.ground, 3))
    assert res.failures and all(missing is not None for _, missing in res.failures)


def test_empty_family_has_dimension_zero():
    res = vc.vc_dimension(vc.SetFamily(range(3), []))
    assert res.dimension == 0 and res.witness is None
    assert not vc.shatters(vc.SetFamily(range(3), []), ())


def test_duplicates_removed_and_order_canonical():
    F = vc.SetFamily([2, 0, 1], [{1, 0}, {0}, {0, 1}, set()])
    assert F.members == (frozenset(), nat(0), nat(0, 1))


def test_member_outside_ground_rejected():
    with pytest.raises(ValueError):
        vc.SetFamily(range(2), [{5}])


@settings(max_examples=300, deadline=None)
@given(families)
def test_vc_matches_naive(case):
    m, members = case
    F = make(m, members)
    res = vc.vc_dimension(F)
    assert res.dimension == naive_vc(F.ground, F.members)
    assert vc.check_certificate(F, res)


@settings(max_examples=200, deadline=None)
@given(families, st.integers(0, 10**6))
def test_shatters_matches_naive(case, seed):
    m, members = case
    F = make(m, members)
    A = random.Random(seed).sample(F.ground, random.Random(seed + 1).randint(0, m))
    chk = vc.shatters(F, A)
    assert bool(chk) == (bool(F.members) and naive_shatters(F.members, A))
    if not chk and F.members:
        assert chk.witness <= frozenset(A)
        assert chk.witness not in {frozenset(A) & S for S in F.members}


@settings(max_examples=150, deadline=None)
@given(families, st.integers(0, 10**6))
def test_restriction_is_monotone(case, seed):
    m, members = case
    F = make(m, members)
    X0 = random.Random(seed).sample(F.ground, random.Random(seed).randint(0, m))
    sub = vc.restrict_family(F, X0)
    assert vc.vc_dimension(sub).dimension <= vc.vc_dimension(F).dimension


@settings(max_examples=100, deadline=None)
@given(families, st.integers(0, 10**6))
def test_relabelling_keeps_dimension(case, seed):
    m, members = case
    perm = list(range(m))
    random.Random(seed).shuffle(perm)
    F = make(m, members)
    G = make(m, [{perm[x] for x in s} for s in members])
    assert vc.vc_dimension(F).dimension == vc.vc_dimension(G).dimension


def test_restrict_family_examples():
    F = segments(4)
    assert vc.restrict_family(F, F.ground) == F
    empty = vc.restrict_family(F, ())
    assert empty.members == (frozenset(),)


def test_cap():
    power = vc.SetFamily(range(5), [frozenset(c) for k in range(6) for c in combinations(range(5), k)])
    res = vc.vc_dimension(power, cap=2)
    assert res.dimension == 2 and res.capped


# ---------------------------------------------------------------------------
# cofinality
# ---------------------------------------------------------------------------


def test_cofinal_examples():
    assert vc.is_cofinal(segments(5), 7)
    F = vc.SetFamily(range(2), [{0}, {1}])
    assert vc.is_cofinal(F, 2)
    chk = vc.is_cofinal(F, 3)
    assert not chk and chk.witness == nat(0, 1)
    pairs = vc.SetFamily(range(8), [frozenset(c) for c in combinations(range(8), 2)])
    assert vc.is_cofinal(pairs, 3)
    assert not vc.is_cofinal(pairs, 4)


# ---------------------------------------------------------------------------
# closed families
# ---------------------------------------------------------------------------


def test_closed_family_trivial_two_system():
    sys_ = core.NaturalSystem(2, nat(*range(5)))
    F = vc.closed_family(sys_, vc.ALL)
    assert frozenset() in F.members
    assert all(nat(x) in F.members for x in range(5))
    assert all(core.is_closed(sys_, S) for S in F.members)


def test_closed_family_one_system_is_initial_segments():
    sys_ = core.NaturalSystem(1, nat(*range(6)))
    F = vc.closed_family(sys_, vc.ALL)
    assert set(F.members) == {nat(*range(j)) for j in range(7)}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 9))
def test_closed_family_vc_at_most_depth(seed, n, size):
    sys_ = core.random_system(random.Random(seed), n, max(size, n))
    F = vc.closed_family(sys_)
    assert vc.vc_dimension(F).dimension <= n


def test_segments_mode_lists_initial_segments():
    rng = random.Random(5)
    sys_ = core.random_system(rng, 2, 6)
    segs = vc.closed_family(sys_, vc.SEGMENTS_ONLY)
    expected = set()
    for a in sys_.universe:
        seq = sys_.order({a}).elements()
        for i, b in enumerate(seq):
            expected.add(frozenset(seq[:i]) | {a, b})
    assert set(segs.members) == expected
    natural = core.NaturalSystem(2, nat(*range(6)))
    assert all(core.is_closed(natural, S) for S in vc.closed_family(natural, vc.SEGMENTS_ONLY))


def test_closures_of_small_are_closures():
    rng = random.Random(5)
    sys_ = core.random_system(rng, 3, 6)
    small = vc.closed_family(sys_, vc.ClosuresOfSmall(2))
    expected = {core.closure(sys_, A).set for A in core.index_sets(sys_.universe, 2)}
    assert set(small.members) == expected
    assert all(core.is_closed(sys_, S) for S in small.members)

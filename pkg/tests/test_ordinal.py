import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordsys.ordinal import (
    DEFAULT_LAMBDA,
    OMEGA,
    Kind,
    Ordinal,
    OrdinalBound,
    OrdinalError,
    canonical_enum,
    canonical_index,
    cantor_pair,
    cantor_unpair,
    classify,
    compare,
    format_cnf,
    format_set,
    omega_power,
    parse_cnf,
    parse_set,
    random_ordinal,
)

TOP = 4  # ordinals below w^TOP in these tests


def dense(x: Ordinal) -> tuple:
    """Coefficient vector from w^(TOP-1) down to w^0."""
    coeffs = dict(x.terms)
    return tuple(coeffs.get(e, 0) for e in range(TOP - 1, -1, -1))


def from_dense(vec) -> Ordinal:
    return Ordinal([(TOP - 1 - i, c) for i, c in enumerate(vec) if c])


def dense_add(a, b) -> tuple:
    # leading term of b absorbs everything of a below it
    lead = next((i for i, c in enumerate(b) if c), None)
    if lead is None:
        return a
    return a[:lead] + (a[lead] + b[lead],) + b[lead + 1:]


ordinals = st.lists(st.integers(0, 5), min_size=TOP, max_size=TOP).map(from_dense)


@given(ordinals, ordinals)
def test_compare_matches_lexicographic_coefficients(a, b):
    da, db = dense(a), dense(b)
    expected = (da > db) - (da < db)
    assert compare(a, b) == expected
    assert compare(b, a) == -expected
    assert (a < b) + (a == b) + (a > b) == 1


@given(ordinals, ordinals, ordinals)
def test_order_is_transitive(a, b, c):
    if a <= b and b <= c:
        assert a <= c


@given(ordinals, ordinals)
def test_addition_matches_coefficient_oracle(a, b):
    assert dense(a + b) == dense_add(dense(a), dense(b))


@given(ordinals, ordinals)
def test_left_minus_inverts_addition(a, b):
    assert (a + b).left_minus(a) == b


@settings(max_examples=1000)
@given(ordinals)
def test_format_parse_round_trip(x):
    assert parse_cnf(format_cnf(x)) == x


@settings(max_examples=300)
@given(st.integers(0, 10_000))
def test_cantor_pairing_round_trip(z):
    j, m = cantor_unpair(z)
    assert cantor_pair(j, m) == z


LIMITS = [OMEGA, parse_cnf("w*2"), omega_power(2), parse_cnf("w^2+w*3"), omega_power(3), parse_cnf("w^3*2+w")]


@pytest.mark.parametrize("delta", LIMITS, ids=format_cnf)
def test_canonical_enum_injective_and_invertible(delta):
    seen = set()
    for i in range(1000):
        x = canonical_enum(delta, i)
        assert x < delta
        assert x not in seen
        seen.add(x)
        assert canonical_index(delta, x) == i


@settings(max_examples=300)
@given(st.integers(0, 10_000), st.sampled_from(LIMITS))
def test_canonical_enum_round_trip_far(i, delta):
    assert canonical_index(delta, canonical_enum(delta, i)) == i


def test_canonical_enum_frozen_values():
    # worked out by hand from the diagonal pairing on blocks
    assert [format_cnf(canonical_enum(omega_power(2), i)) for i in range(6)] == ["0", "w", "1", "w*2", "w+1", "2"]
    assert canonical_enum(parse_cnf("w*2"), 1) == OMEGA
    assert canonical_index(parse_cnf("w*2"), OMEGA) == 1
    assert [int(canonical_enum(OMEGA, i)) for i in range(5)] == [0, 1, 2, 3, 4]


def test_canonical_enum_rejects_non_limits():
    with pytest.raises(OrdinalError):
        canonical_enum(Ordinal.of(5), 0)
    with pytest.raises(OrdinalError):
        canonical_enum(parse_cnf("w+1"), 0)


def test_parse_examples():
    assert parse_cnf("w^2*3+w*2+5").terms == ((2, 3), (1, 2), (0, 5))
    assert parse_cnf("w^2") == omega_power(2)
    assert parse_cnf("3+w") == OMEGA
    assert parse_cnf(" w + 1 ") == OMEGA + Ordinal.of(1)
    assert format_cnf(omega_power(2)) == "w^2*1"
    assert format_cnf(parse_cnf("w*1")) == "w"


@pytest.mark.parametrize("bad", ["", "w^", "x", "w**2", "-1", "w^2*0+1x"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(OrdinalError):
        parse_cnf(bad)


def test_parse_bound():
    with pytest.raises(OrdinalError):
        parse_cnf("w^3", DEFAULT_LAMBDA)
    assert parse_cnf("w^2*9", OrdinalBound(DEFAULT_LAMBDA)) < DEFAULT_LAMBDA


def test_bound_requires_large_limit():
    with pytest.raises(OrdinalError):
        OrdinalBound(parse_cnf("w*2"))
    with pytest.raises(OrdinalError):
        OrdinalBound(parse_cnf("w^2+1"))


def test_sets_round_trip():
    s = parse_set("{w+1, 3, w^2}")
    assert format_set(s) == "{3,w+1,w^2*1}"
    assert parse_set(format_set(s)) == s
    assert parse_set("{}") == frozenset()


def test_classify():
    assert classify(0) == (Kind.ZERO, None)
    assert classify(parse_cnf("w*2+3")) == (Kind.SUCCESSOR, parse_cnf("w*2+2"))
    assert classify(parse_cnf("w^2+w")) == (Kind.LIMIT, None)


def test_naturals_behave_like_ints():
    assert Ordinal.of(3) == Ordinal.of(3)
    assert hash(Ordinal.of(3)) == hash(3)
    assert int(Ordinal.of(7)) == 7
    assert list(range(10))[Ordinal.of(2)] == 2
    with pytest.raises(OrdinalError):
        int(OMEGA)


def test_random_ordinal_respects_bound():
    rng = random.Random(1)
    xs = [random_ordinal(rng, DEFAULT_LAMBDA) for _ in range(300)]
    assert all(x < DEFAULT_LAMBDA for x in xs)
    assert any(x.is_finite for x in xs) and any(x.is_limit for x in xs)

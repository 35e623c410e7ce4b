import math
from functools import reduce

import pytest
from hypothesis import given, strategies as st

from apermute.counting import build_count_table
from apermute.cycle_sets import (
    InvalidSetRule,
    SetRule,
    degree_is_representable,
    gcd_of,
    materialize,
    parse_rule,
    representable_degrees,
)


def test_materialize_explicit():
    A = materialize([1, 2], 10)
    assert A.members == (1, 2)
    assert A.is_complete
    assert A.max == 2


def test_materialize_all_is_truncation():
    A = materialize("all", 5)
    assert A.members == (1, 2, 3, 4, 5)
    assert not A.is_complete


def test_materialize_singleton():
    A = materialize("2", 10)
    assert A.members == (2,) and A.is_complete


def test_explicit_beyond_bound_is_incomplete():
    A = materialize("1,20", 10)
    assert A.members == (1,) and not A.is_complete
    assert A.extended(25).is_complete


@pytest.mark.parametrize("text,expected", [
    ("min:3", (3, 4, 5, 6)),
    ("mult:3", (3, 6)),
    ("not:1,4", (2, 3, 5, 6)),
    ("3, 1 ,1", (1, 3)),
])
def test_rule_syntax(text, expected):
    assert materialize(text, 6).members == expected


def test_empty_set_rejected():
    with pytest.raises(InvalidSetRule, match="empty cycle-length set"):
        materialize("min:7", 6)
    with pytest.raises(InvalidSetRule):
        materialize([], 3)


@pytest.mark.parametrize("bad", ["", "x", "mult:0", "not:", "1,-2", "min:a"])
def test_bad_rules(bad):
    with pytest.raises(InvalidSetRule):
        parse_rule(bad)


def test_canonical_is_normalized():
    assert parse_rule("2,1,2").canonical == "1,2"
    assert parse_rule("not:3,1").canonical == "not:1,3"


def test_predicate_rule():
    A = materialize(SetRule.from_predicate(lambda k: k % 2 == 1, "odd"), 7)
    assert A.members == (1, 3, 5, 7)
    assert A.canonical == "pred:odd"


def test_without():
    A = materialize("all", 6).without([1, 2])
    assert A.members == (3, 4, 5, 6)
    assert 2 not in A and 9 in A
    assert materialize("1,2", 5).without([1, 2]).members == ()


@pytest.mark.parametrize("members,g", [((2, 4), 2), ((2, 3), 1), ((6, 10, 15), 1)])
def test_gcd(members, g):
    assert gcd_of(materialize(members, 20)) == g


@pytest.mark.parametrize("members,n,expected", [((2, 3), 1, False), ((2, 3), 7, True), ((2,), 5, False)])
def test_representable(members, n, expected):
    assert degree_is_representable(materialize(members, 10), n) is expected


def test_representable_matches_counts(rule):
    A = materialize(rule, 30)
    reach = representable_degrees(A, 30)
    table = build_count_table(A, 30)
    assert reach == [table[n] > 0 for n in range(31)]


@pytest.mark.parametrize("members", [(2, 3), (4, 6), (3, 5, 7), (6, 10, 15), (4, 9)])
def test_gcd_characterizes_large_degrees(members):
    A = materialize(members, 200)
    g = gcd_of(A)
    reach = representable_degrees(A, 200)
    # Frobenius-type threshold, found by scanning
    frob = max(n for n in range(201) if n % g == 0 and not reach[n])
    assert frob < 150
    assert all(reach[n] == (n % g == 0) for n in range(frob + 1, 201))


@given(st.lists(st.integers(1, 12), min_size=1, max_size=4), st.integers(0, 40))
def test_representable_is_semigroup_membership(members, n):
    A = materialize(members, 40)
    ms = sorted(set(members))
    # independent check: coin-change style set recursion
    reach = {0}
    for _ in range(n):
        reach |= {x + m for x in reach for m in ms if x + m <= n}
    assert degree_is_representable(A, n) == (n in reach)
    assert gcd_of(A) == reduce(math.gcd, ms)

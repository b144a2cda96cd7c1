from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mimodels.partitions import (
    ParseError,
    Partition,
    all_permutations,
    compose,
    covers,
    enumerate_partitions,
    format_partition,
    leq,
    meet_same_support,
    parse,
    rank,
    relabel,
    set_partitions,
)


def P(text, n=4):
    return parse(text, n)


# --- parsing ---------------------------------------------------------------


def test_parse_compact_and_bracket_forms():
    assert P("1|23", 3).as_sets() == ((1,), (2, 3))
    assert P("12|345|67", 7).as_sets() == ((1, 2), (3, 4, 5), (6, 7))
    assert P("{1,2}|{3}", 3) == P("12|3", 3)
    assert P(" 1 | 2 3 ", 3) == P("1|23", 3)


def test_parse_is_order_insensitive():
    assert P("23|1", 3) == P("1|23", 3)
    assert P("32|1", 3) == P("1|23", 3)


def test_empty_partition():
    assert P("", 3) == Partition(3, ())
    assert P("∅", 3) == Partition(3, ())
    assert format_partition(P("", 3)) == "∅"


@pytest.mark.parametrize("text,n,fragment", [
    ("1|1", 2, "1"),
    ("1||2", 2, ""),
    ("1|5", 4, "5"),
    ("0|1", 3, "0"),
    ("1|2a", 3, "2a"),
])
def test_parse_errors_name_the_block(text, n, fragment):
    with pytest.raises(ParseError) as exc:
        parse(text, n)
    assert fragment in str(exc.value)


def test_roundtrip_large_n_uses_braces():
    pi = Partition.from_blocks(11, [[1, 10], [11]])
    assert parse(format_partition(pi), 11) == pi


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, len(enumerate_partitions(n)) - 1))))
def test_format_parse_roundtrip(args):
    n, k = args
    pi = enumerate_partitions(n)[k]
    assert parse(format_partition(pi), n) == pi


# --- order -----------------------------------------------------------------


def test_order_examples():
    assert leq(P("12", 2), P("1|2", 2))
    assert leq(P("1|2", 3), P("13|2", 3))
    assert not leq(P("1|23", 3), P("12|3", 3))
    assert not leq(P("12|3", 3), P("1|23", 3))


def test_cover_examples():
    assert covers(P("1|23", 3), P("123", 3))
    assert covers(P("1|23", 3), P("1|2", 3))
    assert not covers(P("1|2|3", 3), P("1", 3))
    assert covers(P("1", 3), P("", 3))


def test_rank_examples():
    assert rank(P("", 3)) == 0
    assert rank(P("1|2|3", 3)) == 5
    assert rank(P("12|345|67", 7)) == 9
    assert rank(P("1", 3)) == 1


def test_meet_examples():
    assert meet_same_support(P("12|34"), P("13|24")) == P("1|2|3|4")
    assert meet_same_support(P("12|34"), P("12|34")) == P("12|34")
    assert meet_same_support(P("123|4"), P("12|34")) == P("12|3|4")
    with pytest.raises(ValueError):
        meet_same_support(P("12"), P("1|3"))


def test_enumeration_counts():
    assert [str(p) for p in enumerate_partitions(3, 2)] == ["1|2", "1|3", "2|3", "1|23", "12|3", "13|2", "1|2|3"]
    assert [str(p) for p in enumerate_partitions(2, 2)] == ["1|2"]
    assert len(enumerate_partitions(4, 2)) == 36
    # |PΠ_n| = Bell(n + 1): a partial partition of [n] is a partition of [n+1]
    assert [len(enumerate_partitions(n)) for n in range(1, 6)] == [2, 5, 15, 52, 203]


def test_enumeration_order_is_rank_then_lex():
    elems = enumerate_partitions(4)
    keys = [p.sort_key() for p in elems]
    assert keys == sorted(keys)
    assert len(set(elems)) == len(elems)


def _cover_closure(n):
    """Reflexive transitive closure of the cover relation, by DFS from each element."""
    elems = enumerate_partitions(n)
    up = {p: [q for q in elems if covers(q, p)] for p in elems}
    reach = {}
    for p in elems:
        seen = {p}
        stack = [p]
        while stack:
            x = stack.pop()
            for y in up[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        reach[p] = seen
    return elems, reach


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_leq_equals_cover_closure(n):
    elems, reach = _cover_closure(n)
    for a, b in product(elems, repeat=2):
        assert leq(a, b) == (b in reach[a]), (a, b)


def test_leq_is_partial_order_on_pi4():
    elems = enumerate_partitions(4)
    rel = {(a, b) for a in elems for b in elems if leq(a, b)}
    for a in elems:
        assert (a, a) in rel
    for a, b in rel:
        if a != b:
            assert (b, a) not in rel
    for a, b in rel:
        for c in elems:
            if (b, c) in rel:
                assert (a, c) in rel


def test_graded_by_rank():
    elems = enumerate_partitions(4)
    for a, b in product(elems, repeat=2):
        if covers(b, a):
            assert rank(b) == rank(a) + 1
    # every maximal chain from ∅ to a top element has length = rank
    tops = [p for p in elems if not any(covers(q, p) for q in elems)]
    assert all(rank(t) == 7 for t in tops)  # 4 elements + 4 blocks - 1


def test_one_block_elements_form_boolean_lattice():
    ones = [p for p in enumerate_partitions(4) if len(p.blocks) <= 1]
    assert len(ones) == 16
    for a, b in product(ones, repeat=2):
        assert leq(a, b) == (a.ground & ~b.ground == 0)


def test_not_a_lattice():
    a, b = P("1|2"), P("3|4")
    u1, u2 = P("13|24"), P("14|23")
    for u in (u1, u2):
        assert leq(a, u) and leq(b, u)
    common = [p for p in enumerate_partitions(4) if leq(a, p) and leq(b, p)]
    assert u1 in common and u2 in common
    # neither bound sits below the other and nothing common sits below both
    assert not leq(u1, u2) and not leq(u2, u1)
    assert not any(p not in (u1, u2) and leq(p, u1) and leq(p, u2) for p in common)


# --- relabeling ------------------------------------------------------------


def test_relabel_examples():
    assert relabel(P("1|23", 3), (2, 1, 3)) == P("13|2", 3)
    assert relabel(P("12|34"), (1, 2, 3, 4)) == P("12|34")
    orbit = {relabel(P("1|2", 3), s) for s in all_permutations(3)}
    assert orbit == {P("1|2", 3), P("1|3", 3), P("2|3", 3)}


def test_compose_acts_as_group_action():
    pi = P("1|24")
    for s in all_permutations(4):
        for t in all_permutations(4):
            assert relabel(relabel(pi, s), t) == relabel(pi, compose(t, s))


def test_relabel_preserves_structure():
    elems = enumerate_partitions(4)
    sigma = (3, 1, 4, 2)
    for a in elems:
        assert rank(relabel(a, sigma)) == rank(a)
        for b in elems:
            assert leq(relabel(a, sigma), relabel(b, sigma)) == leq(a, b)
            assert covers(relabel(b, sigma), relabel(a, sigma)) == covers(b, a)


@settings(max_examples=50)
@given(st.integers(1, 9))
def test_set_partitions_counts_bell(k):
    bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147]
    assert sum(1 for _ in set_partitions((1 << k) - 1)) == bell[k]

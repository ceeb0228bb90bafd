"""Multi-index, support-set, and downward-closure behavior."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensorsplit.indexing import (
    EMPTY_SUPPORT,
    ZERO_INDEX,
    IndexSet,
    IndexVector,
    SupportSet,
    componentwise_leq,
    downward_closure,
    is_monotone,
)

small_indices = st.dictionaries(
    st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=3),
    max_size=4,
).map(IndexVector)


class TestIndexVector:
    def test_zero_index_has_empty_support(self):
        assert ZERO_INDEX.support == EMPTY_SUPPORT
        assert ZERO_INDEX.num_active == 0
        assert ZERO_INDEX.total_level == 0

    def test_support_examples(self):
        assert list(IndexVector({1: 2, 3: 1}).support) == [1, 3]
        assert list(IndexVector({5: 7}).support) == [5]

    def test_zero_levels_not_stored(self):
        j = IndexVector({1: 0, 2: 3})
        assert j.entries == ((2, 3),)
        assert j.level(1) == 0 and j.level(2) == 3

    def test_counts(self):
        j = IndexVector({1: 2, 3: 1, 7: 4})
        assert j.num_active == 3
        assert j.total_level == 7

    def test_equality_is_by_map(self):
        assert IndexVector({1: 2}) == IndexVector({1: 2, 2: 0})
        assert IndexVector({1: 2}) != IndexVector({1: 1})
        assert hash(IndexVector({1: 2})) == hash(IndexVector({1: 2}))

    def test_validation(self):
        with pytest.raises(ValueError):
            IndexVector({0: 1})
        with pytest.raises(ValueError):
            IndexVector({1: -1})

    def test_json_round_trip(self):
        j = IndexVector({1: 2, 9: 5})
        assert IndexVector.from_json_obj(j.to_json_obj()) == j
        assert j.to_json_obj() == {"1": 2, "9": 5}

    def test_support_json(self):
        s = SupportSet.of(3, 1)
        assert s.to_json_obj() == [1, 3]
        assert SupportSet.from_json_obj([1, 3]) == s


class TestPartialOrder:
    def test_zero_is_minimum(self):
        assert componentwise_leq(ZERO_INDEX, IndexVector({1: 3}))

    def test_level_comparison(self):
        assert not componentwise_leq(IndexVector({1: 2}), IndexVector({1: 1}))
        assert componentwise_leq(IndexVector({1: 1}), IndexVector({1: 2}))

    def test_support_containment_required(self):
        assert not componentwise_leq(IndexVector({1: 1, 2: 1}), IndexVector({1: 2}))

    @given(small_indices)
    @settings(max_examples=100, deadline=None)
    def test_reflexive(self, i):
        assert i <= i

    @given(small_indices, small_indices)
    @settings(max_examples=200, deadline=None)
    def test_antisymmetric(self, i, j):
        if i <= j and j <= i:
            assert i == j

    @given(small_indices, small_indices, small_indices)
    @settings(max_examples=200, deadline=None)
    def test_transitive(self, i, j, k):
        if i <= j and j <= k:
            assert i <= k

    @given(small_indices)
    @settings(max_examples=100, deadline=None)
    def test_level_sum_dominates_support_size(self, j):
        assert j.total_level >= j.num_active
        if j.total_level == j.num_active:
            assert all(l == 1 for _, l in j.entries)


class TestDownwardClosure:
    def test_chain_below_single_index(self):
        s = IndexSet([IndexVector({1: 2})])
        closed = downward_closure(s)
        assert closed == IndexSet([ZERO_INDEX, IndexVector({1: 1}), IndexVector({1: 2})])

    def test_empty_set(self):
        assert downward_closure(IndexSet()) == IndexSet()

    def test_two_coordinate_box(self):
        j = IndexVector({1: 1, 2: 1})
        closed = downward_closure(IndexSet([j]))
        # oracle: brute-force enumeration of all i <= j
        expected = set()
        for l1, l2 in itertools.product(range(2), range(2)):
            expected.add(IndexVector({1: l1, 2: l2}))
        assert closed.members == expected

    @given(st.sets(small_indices, max_size=5))
    @settings(max_examples=100, deadline=None)
    def test_idempotent(self, members):
        s = IndexSet(members)
        once = downward_closure(s)
        assert downward_closure(once) == once

    @given(st.sets(small_indices, max_size=5))
    @settings(max_examples=100, deadline=None)
    def test_closure_is_superset_and_complete(self, members):
        s = IndexSet(members)
        closed = downward_closure(s)
        assert s.members <= closed.members
        for j in closed:
            for k, jk in j.entries:
                assert j.with_level(k, jk - 1) in closed


class TestMonotonicity:
    def test_zero_alone_is_monotone(self):
        assert is_monotone(IndexSet([ZERO_INDEX]))

    def test_missing_zero_breaks_monotonicity(self):
        assert not is_monotone(IndexSet([IndexVector({1: 1})]))

    def test_closure_output_is_monotone(self):
        s = IndexSet([IndexVector({1: 2, 2: 1}), IndexVector({3: 1})])
        assert is_monotone(downward_closure(s))

    def test_canonical_iteration_order(self):
        s = IndexSet([IndexVector({2: 1}), IndexVector({1: 1}), ZERO_INDEX,
                      IndexVector({1: 2})])
        keys = [j.canonical_key() for j in s]
        assert keys == sorted(keys)

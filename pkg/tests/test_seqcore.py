import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from src.seqcore.partitions import (
    IntervalPartition, GapSelection, enumerate_interval_partitions, enumerate_gap_selections,
    count_gap_selections,
)
from src.seqcore.vectors import CoeffVec, CountVec, decreasing_rearrangement
from src.utils.errors import CapExceededError, CapacityError, LabError


def test_interval_partition_counts():
    assert len(list(enumerate_interval_partitions(1))) == 1
    assert len(list(enumerate_interval_partitions(3))) == 4
    assert len(list(enumerate_interval_partitions(12))) == 2048


def test_interval_partitions_are_lexicographic():
    starts = [P.starts for P in enumerate_interval_partitions(3)]
    assert starts == [(1, 2, 3), (1, 2), (1, 3), (1,)]


def test_gap_selection_counts():
    assert [count_gap_selections(n) for n in range(1, 6)] == [1, 4, 12, 33, 88]
    for n in range(1, 7):
        selections = list(enumerate_gap_selections(n))
        assert len(selections) == count_gap_selections(n)
        assert len(set(selections)) == len(selections)


def test_enumeration_caps():
    with pytest.raises(CapExceededError):
        list(enumerate_interval_partitions(21))
    with pytest.raises(CapExceededError):
        list(enumerate_gap_selections(5, cap=4))
    with pytest.raises(LabError):
        list(enumerate_interval_partitions(0))


def test_invalid_partitions_and_selections():
    with pytest.raises(LabError):
        IntervalPartition((2, 3))
    with pytest.raises(LabError):
        IntervalPartition((1, 3, 3))
    with pytest.raises(LabError):
        GapSelection(((2, 3), (3, 4)))
    with pytest.raises(LabError):
        GapSelection(())


def test_partition_blocks():
    P = IntervalPartition.from_starts([1, 2, 4], 4)
    assert P.n == 4
    assert P.blocks() == [(1, 1), (2, 3), (4, 4)]
    assert P.as_gap_selection().pairs == ((1, 1), (2, 3), (4, 4))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=8))
def test_every_partition_is_a_gap_selection(n):
    selections = set(enumerate_gap_selections(n))
    for P in enumerate_interval_partitions(n):
        assert P.as_gap_selection() in selections


def test_coeff_vec_basics():
    v = CoeffVec.of([3, -4, 0])
    assert v.n == 3
    assert v[2] == -4
    assert v.support() == [1, 2]
    assert v.padded(5).to_list() == [3, -4, 0, 0, 0]
    assert v.plus(CoeffVec.unit(4, 4)).to_list() == [3, -4, 0, 1]
    assert decreasing_rearrangement(v).to_list() == [4, 3, 0]
    with pytest.raises(IndexError):
        v[0]
    with pytest.raises(LabError):
        v.padded(2)
    with pytest.raises(LabError):
        CoeffVec(())


def test_coeff_vec_rejects_non_finite():
    with pytest.raises(LabError):
        CoeffVec((mpf('inf'),))


def test_coeff_vec_cap():
    with pytest.raises(CapExceededError):
        CoeffVec.ones(100001)


def test_count_vec_expand_and_capacity():
    c = CountVec.of([(1, 2, 2)])
    assert c.length() == 2
    assert c.block_counts() == {2: 2}
    assert c.expand((1, 3)).to_list() == [0, 1, 1, 0]
    with pytest.raises(CapacityError):
        CountVec.of([(1, 4, 2)]).expand((1, 3))
    with pytest.raises(CapacityError):
        CountVec.of([(1, 1, 3)]).check_capacity((1, 3))
    with pytest.raises(LabError):
        CountVec.of([(1, -1, 1)])

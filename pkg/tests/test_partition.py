import pytest
import sympy
from hypothesis import given, settings, strategies as st

from elltor import DEFAULT, EMPTY, Partition, enumerate_partitions, enumerate_tuples
from elltor.partition import framing_factor, partitions_up_to


def partitions(max_size=8):
    return st.integers(0, max_size).flatmap(lambda n: st.sampled_from(enumerate_partitions(n)))


def test_parse_and_empty():
    assert Partition.parse("0") == EMPTY
    assert Partition.parse("2,1").parts == (2, 1)
    with pytest.raises(ValueError):
        Partition.parse("1,x")
    with pytest.raises(ValueError):
        Partition((1, 2))


@pytest.mark.parametrize("n", range(10))
def test_partition_counts(n):
    assert len(enumerate_partitions(n)) == sympy.partition(n)


def test_tuple_counts_rank_two():
    # Σ_k #{pairs of size k} x^k = Π (1-x^j)^{-2}: 1, 2, 5, 10, 20
    assert [len(enumerate_tuples(2, k)) for k in range(5)] == [1, 2, 5, 10, 20]


def test_single_box_statistics():
    lam = Partition((1,))
    assert lam.boxes() == [(1, 1)]
    assert lam.arm((1, 1)) == 0 and lam.leg((1, 1)) == 0
    assert lam.addable() == [(1, 2), (2, 1)]


@given(partitions())
def test_conjugate_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().size == lam.size


@given(partitions())
def test_arm_leg_sums(lam):
    assert sum(lam.leg(b) for b in lam.boxes()) == lam.n()
    assert sum(lam.arm(b) for b in lam.boxes()) == lam.n_conj()
    assert lam.conjugate().n() == lam.n_conj()


@given(partitions())
def test_hook_lengths_count_standard_tableaux(lam):
    hooks = 1
    for b in lam.boxes():
        hooks *= lam.arm(b) + lam.leg(b) + 1
    # hook length formula: f^λ = n!/Π hooks must be a positive integer
    assert sympy.factorial(lam.size) % hooks == 0


@given(partitions())
def test_corners(lam):
    assert len(lam.addable()) == len(lam.removable()) + 1
    for i in range(1, lam.length + 2):
        up = lam.add_box(i)
        if up is not None:
            assert up.size == lam.size + 1
            assert up.remove_box(i) == lam


@given(partitions(6))
def test_framing_factor_times_conjugate(lam):
    # f_λ f_λ' = (q/t)^{n(λ) + n(λ') + |λ|}
    expected = DEFAULT.power(1, -1) ** (lam.n() + lam.n_conj() + lam.size)
    assert framing_factor(lam, DEFAULT) * framing_factor(lam.conjugate(), DEFAULT) == expected


def test_partitions_up_to_sorted_by_size():
    sizes = [lam.size for lam in partitions_up_to(4)]
    assert sizes == sorted(sizes)

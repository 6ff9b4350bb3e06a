from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from elltor import nekrasov
from elltor.partition import EMPTY, Partition, partitions_up_to
from elltor.qseries import DEFAULT as P, Ring
from elltor.suites import (a_prime_relations, four_form_check, n_recurrence_check, pfe_check,
                           z_routes_check, z_symmetry_check)

SMALL = partitions_up_to(3)
IDS = [",".join(map(str, lam.parts)) or "0" for lam in SMALL]


def _naive_n5d(lam, mu, x):
    """Box product written from scratch with plain Fractions."""
    def arm(nu, i, j):
        return (nu[i] if i < len(nu) else 0) - j - 1

    def leg(nu, i, j):
        return sum(1 for r in nu if r > j) - i - 1

    q, t = P.q, P.t
    out = Fraction(1)
    for i, row in enumerate(lam):
        for j in range(row):
            out *= 1 - x * q ** (-arm(mu, i, j) - 1) * t ** (-leg(lam, i, j))
    for i, row in enumerate(mu):
        for j in range(row):
            out *= 1 - x * q ** arm(lam, i, j) * t ** (leg(mu, i, j) + 1)
    return out


partition_st = st.lists(st.integers(1, 3), max_size=3).map(
    lambda xs: Partition(tuple(sorted(xs, reverse=True))))


@settings(max_examples=40, deadline=None)
@given(partition_st, partition_st, st.fractions(-3, 3, max_denominator=5))
def test_box_form_matches_naive_product(lam, mu, x):
    val = nekrasov.nekrasov_5d(lam, mu, x, P)
    assert Fraction(str(val)) == _naive_n5d(lam.parts, mu.parts, x)


def test_empty_pair_and_single_box():
    ring = Ring.make(spectral={"x": 3})
    x = ring.var("x")
    assert nekrasov.nekrasov_5d(EMPTY, EMPTY, x, P).agree(ring.one())[0]
    assert nekrasov.nekrasov_5d(Partition((1,)), EMPTY, x, P).agree(1 - x)[0]


def test_row_bound_below_length_is_rejected():
    with pytest.raises(ValueError):
        nekrasov.nekrasov_5d(Partition((1, 1)), EMPTY, Fraction(1, 2), P, "rowB", rows=1)


@settings(max_examples=15, deadline=None)
@given(partition_st, partition_st)
def test_four_forms_agree(lam, mu):
    assert four_form_check(lam, mu, P, x_order=3, extra_rows=1)[0] == "pass"


@pytest.mark.parametrize("lam", partitions_up_to(5), ids=lambda l: str(l.parts))
def test_arm_leg_generating_identity(lam):
    lhs, rhs = nekrasov.macdonald_sides(lam, P)
    assert lhs == rhs
    for i in range(1, lam.length + 1):
        lhs, rhs = nekrasov.column_identity_sides(lam, i, P)
        assert lhs == rhs


@pytest.mark.parametrize("lam", SMALL, ids=IDS)
def test_c_factor_forms_and_e_coefficients(lam):
    for prime in (False, True):
        assert nekrasov.c_factor(lam, P, "box", prime) == nekrasov.c_factor(lam, P, "rows", prime)
    for m in (-3, -1, 1, 2):
        assert nekrasov.e_coefficient(lam, m, P) == nekrasov.e_coefficient(lam, m, P, "corners")
        for mu in partitions_up_to(2):
            assert nekrasov.ce_pairing_check(lam, mu, m, P)


@pytest.mark.parametrize("lam", SMALL, ids=IDS)
def test_elliptic_normalization_identities(lam):
    assert nekrasov.clapcplap_check(lam, P, Ring.make(nomes={"p": 3}))[0]
    assert a_prime_relations(lam, P, 3)[0] == "pass"
    assert n_recurrence_check(lam, P, 3)[0] == "pass"


@pytest.mark.parametrize("lam", SMALL, ids=IDS)
def test_affine_weight_routes_and_symmetry(lam):
    assert z_routes_check(lam, P, 3)[0] == "pass"
    assert z_symmetry_check(lam, P, 3)[0] == "pass"


@pytest.mark.parametrize("lam", SMALL, ids=IDS)
def test_elliptic_c_factor_reduces_to_classical(lam):
    ring = Ring.make(nomes={"p": 2})
    assert nekrasov.c_factor_elliptic(lam, P, ring).constant_term() == nekrasov.c_factor(lam, P)


def test_affine_weight_leading_term_is_classical_product():
    ring = Ring.make(nomes={"p": 2})
    q, t = P.q, P.t
    for lam in SMALL:
        expected = Fraction(1)
        for b in lam.boxes():
            a, l = lam.arm(b), lam.leg(b)
            expected /= (1 - q ** (a + 1) * t ** l) * (1 - q ** (-a) * t ** (-l - 1))
        assert Fraction(str(nekrasov.z_affine(lam, P, ring).constant_term())) == expected


@pytest.mark.parametrize("lam,mu", [(Partition((1,)), EMPTY), (Partition((2,)), Partition((1,))),
                                    (Partition((1, 1)), Partition((2,)))])
def test_theta_kernel_reduces_to_trigonometric(lam, mu):
    ring = Ring.make(nomes={"Q": 2}, spectral={"x": 5})
    x = ring.var("x")
    th = nekrasov.nekrasov_theta(lam, mu, x, "Q", P, ring)
    assert th.substitute_zero("Q").agree(nekrasov.nekrasov_5d(lam, mu, x, P))[0]


@pytest.mark.parametrize("m", [2, 3])
def test_theta_partial_fractions(m):
    assert pfe_check(m, P, 3, count=6, seed=m)[0] == "pass"


def test_theta_reflection_and_box_product_of_g():
    ring = Ring.make(nomes={"p": 2}, spectral={"x": 8})
    lhs, rhs = nekrasov.theta_reflection_sides(Partition((2,)), Partition((1,)), ring.var("x"), P)
    assert lhs.agree(rhs)[0]
    ring = Ring.make(nomes={"p": 2}, spectral={"z": 7})
    lhs, rhs = nekrasov.product_g_sides(Partition((2, 1)), ring.var("z"), P)
    assert lhs.agree(rhs)[0]


def test_block_normalization_is_deterministic():
    lam = Partition((2, 1))
    assert nekrasov.block_normalization(lam, 1, 1, 2, P) == nekrasov.block_normalization(
        lam, 1, 1, 2, P)

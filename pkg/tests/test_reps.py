from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from elltor import nekrasov, reps
from elltor.partition import EMPTY, Partition, partitions_up_to
from elltor.qseries import DEFAULT as P

partition_st = st.lists(st.integers(1, 4), max_size=3).map(
    lambda xs: Partition(tuple(sorted(xs, reverse=True))))


@settings(max_examples=40, deadline=None)
@given(partition_st, st.integers(1, 4), st.sampled_from([1, -1]))
def test_theta_word_arguments_match_kernel_arguments(lam, i, sign):
    nums, dens, scale = nekrasov.a_theta_args(lam, i, sign, P)
    assert reps.a_args(lam.parts, i, sign, P) == reps.ThetaWord.of(nums, dens, scale)


def test_theta_word_zero_pole_and_inverse():
    ring = reps.coefficient_ring(3)
    assert reps.ThetaWord.of([1, Fraction(1, 2)], []).evaluate(ring).is_zero()
    with pytest.raises(ZeroDivisionError):
        reps.ThetaWord.of([], [1]).evaluate(ring)
    w = reps.ThetaWord.of([Fraction(2, 3)], [Fraction(5, 7)], Fraction(3))
    assert (w * w.inverse()).evaluate(ring).agree(ring.one())[0]


def test_fock_vector_arithmetic():
    ring = reps.coefficient_ring(2)
    a = reps.FockVector.basis(Partition((1,)), ring)
    b = reps.FockVector.basis(EMPTY, ring).scale(Fraction(1, 2))
    ok, _ = ((a + b) - b).compare(a, {"p": 2})
    assert ok
    ok, where = a.compare(b, {"p": 2})
    assert not ok and where["ket"] is not None


@pytest.mark.parametrize("j", [-1, 0, 1])
def test_vector_representation_relation(j):
    assert reps.report_status(reps.verify_exm_relation("vector", j, 1, P, 2)) == "pass"


@pytest.mark.parametrize("lam", partitions_up_to(2), ids=lambda l: str(l.parts))
def test_fock_level_relation(lam):
    assert reps.report_status(reps.verify_exm_relation("fock01", lam, 1, P, 2)) == "pass"


@pytest.mark.parametrize("sign", [1, -1])
def test_quadratic_relation(sign):
    for lam in partitions_up_to(1):
        assert reps.report_status(reps.verify_quadratic_relation(lam, sign, P, 2)) == "pass"


@pytest.mark.parametrize("n_vars", [1, 2])
def test_delta_difference_lemma(n_vars):
    assert reps.report_status(reps.verify_limDiffTheta(n_vars, P, 2, count=4, seed=1)) == "pass"


def test_ruijsenaars_trigonometric_eigenvalues():
    x1, x2 = sympy.symbols("x1 x2")
    q, t = sympy.Rational(16, 81), sympy.Rational(81, 625)
    one = reps.ruijsenaars_apply("1", 2, P, 1)
    assert sympy.simplify(one.coeffs[0] - (1 - t) * (1 + t)) == 0
    lin = reps.ruijsenaars_apply("x1 + x2", 2, P, 1)
    assert sympy.simplify(lin.coeffs[0] - (1 - t) * (1 + q * t) * (x1 + x2)) == 0


def test_ruijsenaars_symbolic_matches_pointwise():
    pt = (Fraction(2, 7), Fraction(-3, 5))
    sym = reps.ruijsenaars_apply("x1**2 + x2", 2, P, 2)
    num = reps.ruijsenaars_at_point(lambda a, b: a * a + b, pt, P, 2)
    assert [Fraction(str(v)) for v in sym.subs(pt)] == [Fraction(str(v)) for v in num]


def test_ruijsenaars_preserves_symmetry():
    out = reps.ruijsenaars_apply("x1*x2 + x1 + x2", 2, P, 1)
    assert out.equals(out.swapped(0, 1))
    with pytest.raises(ValueError):
        reps.ruijsenaars_apply("1", 1, P, 1)


@pytest.mark.parametrize("lam", partitions_up_to(2), ids=lambda l: str(l.parts))
def test_tensor_dressing(lam):
    rows = max(lam.length, 1)
    assert reps.alpha_eigenvalue_check(lam, rows, P)
    assert reps.dressing_check(lam, rows + 1, P, 2)["ok"]


def test_report_status():
    assert reps.report_status([{"status": "pass"}, {"status": "skip"}]) == "pass"
    assert reps.report_status([{"status": "pass"}, {"status": "fail"}]) == "fail"

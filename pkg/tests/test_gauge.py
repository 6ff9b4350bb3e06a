import csv
import io
import json
from fractions import Fraction

import pytest

from elltor import gauge
from elltor.fock import ModeAlgebra
from elltor.partition import EMPTY, Partition
from elltor.qseries import DEFAULT as P, Ring


def _f(v):
    return Fraction(str(v))


def test_rank_one_charge_one_closed_form():
    # (1-pq)(1-p/t) / ((1-q)(1-1/t))
    q, t = P.q, P.t
    c0 = 1 / ((1 - q) * (1 - 1 / t))
    expected = [c0, -(q + 1 / t) * c0, q / t * c0]
    s = gauge.chi_y_u1(1, P, 2).coefficient(1)
    assert [_f(s.coeff(p=k)) for k in range(3)] == expected


def test_rank_one_charge_zero_is_one():
    s = gauge.chi_y_u1(2, P, 2)
    assert s.coefficient(0).agree(s.coefficient(0).ring.one())[0]
    assert s.max_charge == 2


def test_rank_one_routes_agree():
    a, b = gauge.chi_y_u1(3, P, 3), gauge.chi_y_u1(3, P, 3, route="ratio")
    assert all(x.agree(y)[0] for x, y in zip(a.coefficients, b.coefficients))


def test_elliptic_genus_reduces_at_zero_trace_nome():
    ell = gauge.elliptic_genus_u1(2, P, 2, 2)
    chi = gauge.chi_y_u1(2, P, 2)
    for k in range(3):
        for e in range(3):
            assert _f(ell.coefficient(k).coeff(p=e, Q=0)) == _f(chi.coefficient(k).coeff(p=e))


def test_serialization_round_trip():
    s = gauge.chi_y_u1(2, P, 2)
    doc = json.loads(s.to_json())
    rows = list(csv.reader(io.StringIO(s.to_csv())))
    assert rows[0] == ["charge", "exponents", "numerator", "denominator"]
    assert len(rows) - 1 == len(doc["rows"]) == len(s.to_rows())
    for (k, e, n, d), r in zip(s.to_rows(), rows[1:]):
        assert r == [str(k), " ".join(map(str, e)), str(n), str(d)]


def test_window_too_small_is_an_error():
    with pytest.raises(Exception, match="window"):
        gauge.chi_y_uM(2, 2, P, 2, x_order=2, pad=0)


def test_rank_must_be_positive():
    with pytest.raises(ValueError):
        gauge.chi_y_uM(0, 1, P, 2)


@pytest.mark.parametrize("lam,mu", [(Partition((1,)), EMPTY), (EMPTY, Partition((1,))),
                                    (Partition((1,)), Partition((1,)))])
def test_rank_two_cross_factor_from_blocks(lam, mu):
    assert gauge.tt_cross_check(lam, mu, P, 4, 3)["ok"]


def test_six_dimensional_block_pair():
    assert gauge.tt6d_cross_check(Partition((1,)), EMPTY, P, 2, 1, 1)["ok"]


@pytest.mark.parametrize("lam", [EMPTY, Partition((1,)), Partition((2,))])
def test_trace_ratio(lam):
    assert gauge.trace_cross_check(lam, P, 2, 2)["ok"]


def test_empty_trace_prefactors():
    assert gauge.empty_trace_check(P, 2, 2)["ok"]


def test_specialization_ladder_rank_two():
    assert gauge.specialization_ladder(2, 1, P)["ok"]


def test_swap_symmetry():
    assert gauge.swap_symmetry_check(2, P, 2)["ok"]


def test_counting_normalization_independence():
    assert gauge.vn_independence_check(2, P, 2)["ok"]


def test_vacuum_chain_requires_radial_order():
    ring = Ring.make(nomes={"p": 2}, spectral={"z": 4})
    alg = ModeAlgebra(P, ring)
    with pytest.raises(ValueError):
        gauge.vacuum_chain([("Phi", EMPTY, 1), ("Phi", EMPTY, 1)], alg)
    a, b = gauge.vacuum_chain([("Phi", Partition((1,)), 0), ("Psi", EMPTY, 1),
                               ("Phi", EMPTY, 2)], alg)
    assert a.agree(b)[0]


def test_correlators_two_routes():
    assert gauge.correlator_check("4pt", 1, 1, P, 2, 3)["ok"]
    assert gauge.correlator_check("2N2pt", 1, 1, P, 2, 3, nu=Partition((1,)))["ok"]
    with pytest.raises(ValueError):
        gauge.correlator_check("3pt", 1, 1, P)


def test_trace_correlator_cross_part():
    assert gauge.trace_correlator_check(Partition((1,)), P, p_order=2, q_order=2, z_order=3)["ok"]


def test_thread_count_and_ordered_map(monkeypatch):
    monkeypatch.setenv("ELLTOR_THREADS", "3")
    assert gauge.thread_count() == 3
    assert gauge._ordered_map(lambda v: v * v, list(range(10))) == [v * v for v in range(10)]
    monkeypatch.setenv("ELLTOR_THREADS", "many")
    with pytest.raises(ValueError):
        gauge.thread_count()


def test_parallel_report_matches_serial(monkeypatch):
    from elltor.suites import RunConfig, run_suites
    cfg = RunConfig(suites=["nekrasov"], max_size=1, p_order=2, x_order=3)
    monkeypatch.setenv("ELLTOR_THREADS", "1")
    serial = run_suites(cfg)
    monkeypatch.setenv("ELLTOR_THREADS", "4")
    assert run_suites(cfg) == serial

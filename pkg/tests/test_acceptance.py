"""The fourteen acceptance criteria at their full sizes.

Each test prints one ``criterion NN: PASS|FAIL`` line; the session summary
repeats them in order.  Run this file directly for the same lines without pytest.
"""

import time

import pytest

from elltor import fock, gauge, nekrasov, reps
from elltor.partition import partitions_up_to
from elltor.qseries import DEFAULT as P, Ring
from elltor.suites import a_prime_relations, four_form_check, z_routes_check, z_symmetry_check
from golden_cases import golden_path, load_cases, run_case


def _report(num: int, name: str, failures: list, elapsed: float, budget: float) -> None:
    ok = not failures and elapsed < budget
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {name}  "
          f"({elapsed:.1f} s of {budget:.0f} s; {len(failures)} failing cases)")
    assert not failures, failures[:3]
    assert elapsed < budget


def _timed(fn):
    t0 = time.perf_counter()
    failures = fn()
    return failures, time.perf_counter() - t0


def test_criterion_1_four_forms():
    parts = partitions_up_to(4)
    failures, dt = _timed(lambda: [(lam.parts, mu.parts) for lam in parts for mu in parts
                                   if four_form_check(lam, mu, P, 4, extra_rows=2)[0] != "pass"])
    assert len(parts) == 12  # all 144 pairs, including the 25 with |λ| = |μ| = 4
    _report(1, "four forms of the 5d kernel, |λ|,|μ| ≤ 4, 3 row bounds", failures, dt, 60)


def test_criterion_2_arm_leg_identities():
    def run():
        bad = []
        for lam in partitions_up_to(8):
            lhs, rhs = nekrasov.macdonald_sides(lam, P)
            if lhs != rhs:
                bad.append(("generating", lam.parts))
            for i in range(1, lam.length + 1):
                lhs, rhs = nekrasov.column_identity_sides(lam, i, P)
                if lhs != rhs:
                    bad.append(("row", lam.parts, i))
        return bad
    failures, dt = _timed(run)
    _report(2, "arm-leg generating identity and auxiliary row identity, |λ| ≤ 8", failures, dt, 10)


def test_criterion_3_e_coefficients():
    parts = partitions_up_to(4)
    ms = [m for m in range(-4, 5) if m]

    def run():
        bad = []
        for lam in parts:
            for m in ms:
                if nekrasov.e_coefficient(lam, m, P) != nekrasov.e_coefficient(lam, m, P, "corners"):
                    bad.append(("corners", lam.parts, m))
                for mu in parts:
                    if not nekrasov.ce_pairing_check(lam, mu, m, P):
                        bad.append(("pairing", lam.parts, mu.parts, m))
        return bad
    failures, dt = _timed(run)
    _report(3, "e-coefficient corner form and pairing, |λ|,|μ| ≤ 4, |m| ≤ 4", failures, dt, 30)


def test_criterion_4_elliptic_c_and_primed_a():
    ring = Ring.make(nomes={"p": 4})
    failures, dt = _timed(lambda: [lam.parts for lam in partitions_up_to(5)
                                   if not nekrasov.clapcplap_check(lam, P, ring)[0]
                                   or a_prime_relations(lam, P, 4)[0] != "pass"])
    _report(4, "elliptic c-ratio and primed A relations, |λ| ≤ 5, p-order 4", failures, dt, 60)


def test_criterion_5_affine_weight():
    failures, dt = _timed(lambda: [lam.parts for lam in partitions_up_to(5)
                                   if z_routes_check(lam, P, 4)[0] != "pass"
                                   or z_symmetry_check(lam, P, 4)[0] != "pass"])
    _report(5, "affine weight box = ratio form and inversion symmetry, |λ| ≤ 5", failures, dt, 60)


def _fails(records):
    return [r for r in records if r["status"] == "fail"]


def test_criterion_6_defining_relation():
    def run():
        bad = []
        for lam in partitions_up_to(3):
            bad += _fails(reps.verify_exm_relation("fock01", lam, 2, P, 3))
        for j in range(-2, 3):
            bad += _fails(reps.verify_exm_relation("vector", j, 2, P, 3))
        return bad
    failures, dt = _timed(run)
    _report(6, "[x+,x-] on level (0,1), |λ| ≤ 3, modes ≤ 2, p-order 3; vector j ∈ [-2,2]",
            failures, dt, 120)


def test_criterion_7_quadratic_relation():
    failures, dt = _timed(lambda: [r for lam in partitions_up_to(2) for sign in (1, -1)
                                   for r in _fails(reps.verify_quadratic_relation(lam, sign, P, 3))])
    _report(7, "quadratic current relation on level (0,1), |λ| ≤ 2, p-order 3", failures, dt, 60)


def test_criterion_8_delta_difference():
    failures, dt = _timed(lambda: [r for n in (1, 2) for order in range(4)
                                   for r in _fails(reps.verify_limDiffTheta(n, P, order, count=20))])
    _report(8, "theta delta-difference lemma, N ∈ {1,2}, p-order 0..3, 20 points", failures, dt, 30)


def test_criterion_9_ope_two_routes():
    two = partitions_up_to(2)
    failures, dt = _timed(lambda: [(pair, lam.parts, mu.parts) for pair in fock.OPE_PAIRS
                                   for lam in two for mu in two
                                   if not fock.ope_check(pair, lam, mu, P, 6, 4)["ok"]])
    _report(9, "OPE contraction vs closed form, |λ|,|μ| ≤ 2, (x,p) = (6,4)", failures, dt, 120)


def test_criterion_10_intertwining_and_residues():
    def run():
        bad = [(fam, lam.parts) for fam in fock.INTERTWINING_FAMILIES
               for lam in partitions_up_to(3) if not fock.intertwining_check(fam, lam, P, 6, 4)["ok"]]
        bad += [(rel, lam.parts) for rel in fock.RESIDUE_RELATIONS
                for lam in partitions_up_to(2) if not fock.residue_check(rel, lam, P)["ok"]]
        return bad
    failures, dt = _timed(run)
    _report(10, "intertwining relations |λ| ≤ 3 at (6,4); delta-term residues |λ| ≤ 2",
            failures, dt, 180)


def test_criterion_11_block_pair_cross_factor():
    pairs = [(lam, mu) for lam in partitions_up_to(3) for mu in partitions_up_to(3)
             if lam.size + mu.size <= 3]
    failures, dt = _timed(lambda: [(lam.parts, mu.parts) for lam, mu in pairs
                                   if not gauge.tt_cross_check(lam, mu, P, 6, 4)["ok"]
                                   or not fock.tt_check(lam, mu, P, 6, 4)["ok"]])
    _report(11, "rank-2 block pair vs cross factor, |λ|+|μ| ≤ 3, (x,p) = (6,4)", failures, dt, 180)


def test_criterion_12_trace_ratio():
    def run():
        bad = [lam.parts for lam in partitions_up_to(2)
               if not gauge.trace_cross_check(lam, P, 3, 3)["ok"]]
        if not gauge.empty_trace_check(P, 3, 3)["ok"]:
            bad.append("empty trace")
        return bad
    failures, dt = _timed(run)
    _report(12, "graded trace ratio |λ| ≤ 2 at (p,Q) = (3,3) and empty-trace prefactor",
            failures, dt, 120)


def test_criterion_13_specialization_ladder():
    failures, dt = _timed(lambda: [r for r, k in ((2, 2), (3, 1))
                                   if not gauge.specialization_ladder(r, k, P)["ok"]])
    _report(13, "Q → 0, M → 1 and p-order-0 reductions, ranks 2 and 3", failures, dt, 30)


def test_criterion_14_cli_golden():
    def run():
        bad = []
        for case in load_cases():
            first, second = run_case(case), run_case(case)
            if first != second:
                bad.append((case["name"], "not reproducible"))
            if first[0] != case["exit"]:
                bad.append((case["name"], "exit", first[0]))
            if first[1] != golden_path(case).read_bytes():
                bad.append((case["name"], "bytes differ"))
        return bad
    failures, dt = _timed(run)
    _report(14, "byte-exact CLI output and exit codes over the golden cases", failures, dt, 10)


if __name__ == "__main__":
    import sys
    tests = [v for k, v in sorted(globals().items(), key=lambda kv: int(kv[0].split("_")[2])
                                  if kv[0].startswith("test_criterion_") else 0)
             if k.startswith("test_criterion_")]
    bad = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            bad += 1
    sys.exit(1 if bad else 0)

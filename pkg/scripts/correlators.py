"""Compare vacuum and trace correlators by contraction and by closed-form kernels."""

import time

from elltor import gauge
from elltor.partition import EMPTY, Partition
from elltor.qseries import DEFAULT


def main() -> None:
    runs = [
        ("four-point, one insertion", lambda: gauge.correlator_check("4pt", 1, 2, DEFAULT, 3, 4)),
        ("four-point, two insertions", lambda: gauge.correlator_check("4pt", 2, 1, DEFAULT, 2, 3)),
        ("2N+2 point, ν = (1)", lambda: gauge.correlator_check(
            "2N2pt", 1, 1, DEFAULT, 2, 3, nu=Partition((1,)))),
        ("trace cross part, λ = (1)", lambda: gauge.trace_correlator_check(Partition((1,)), DEFAULT)),
        ("trace cross part, λ = (2), ν = (1)", lambda: gauge.trace_correlator_check(
            Partition((2,)), DEFAULT, nu=Partition((1,)), p_order=2, q_order=2, z_order=3)),
        ("trace cross part, λ = ∅", lambda: gauge.trace_correlator_check(EMPTY, DEFAULT)),
    ]
    for label, fn in runs:
        t0 = time.perf_counter()
        res = fn()
        print(f"{'ok  ' if res['ok'] else 'FAIL'} {label} ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()

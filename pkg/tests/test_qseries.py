from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from elltor.qseries import (DEFAULT, NonTruncatable, ParamError, ParamPoint, Ring, SeriesError,
                            elliptic_gamma, f_struct, f_struct_exp, finite_pochhammer, g_theta,
                            parse_quarter, pochhammer, pochhammer_inv, theta, theta_ratio)

P = DEFAULT


def test_param_point_powers():
    assert P.q == Fraction(16, 81)
    assert P.t == Fraction(81, 625)
    assert P.power(1, 1, denom=4) == Fraction(2, 3) * Fraction(3, 5)
    assert P.tq(2, denom=2) == P.t / P.q


def test_guard_rejects_resonant_point():
    with pytest.raises(ParamError):
        ParamPoint(Fraction(1, 2), Fraction(1, 2))


def test_parse_quarter_rejects_zero():
    with pytest.raises(ParamError):
        parse_quarter("0")
    assert parse_quarter("3/5") == Fraction(3, 5)


def test_geometric_inverse():
    ring = Ring.make(nomes={"p": 5})
    p = ring.var("p")
    inv = (1 - p).invert()
    assert all(inv.coeff(p=k) == 1 for k in range(6))


def test_region_inversion_picks_small_ratio():
    ring = Ring.make(spectral={"x": 4})
    x = ring.var("x")
    inv = (1 - x.invert().scale(3)).invert()
    # 1/(1 - 3/x) = -(x/3) Σ (x/3)^k
    assert inv.coeff(x=1) == Fraction(-1, 3)
    assert inv.coeff(x=2) == Fraction(-1, 9)


def test_coefficient_outside_window_raises():
    ring = Ring.make(nomes={"p": 2})
    with pytest.raises(SeriesError):
        ring.var("p").coeff(p=3)


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=1, max_value=4, max_denominator=5), coeffs, coeffs, coeffs)
def test_invert_and_log_exp_round_trip(c0, a, b, c):
    ring = Ring.make(nomes={"p": 3}, spectral={"x": 3})
    p, x = ring.var("p"), ring.var("x")
    s = c0 + p.scale(a) + x.scale(b) + (p * x).scale(c)
    assert (s * s.invert()).agree(ring.one())[0]
    u = 1 + p.scale(a) + x.scale(b)
    assert u.log().exp().agree(u)[0]


def test_jacobi_triple_product():
    # θ(z;p)(p;p)_∞ = Σ_n (-1)^n p^{n(n-1)/2} z^n
    ring = Ring.make(nomes={"p": 6}, spectral={"z": 4})
    p, z = ring.var("p"), ring.var("z")
    lhs = theta(z, p, ring) * pochhammer(p, [p], ring)
    rhs = ring.zero()
    for n in range(-6, 8):
        e = n * (n - 1) // 2
        if e <= 6:
            rhs = rhs + ring.mono((-1) ** n, p=e, z=n)
    assert lhs.agree(rhs)[0]


def test_euler_pentagonal():
    ring = Ring.make(nomes={"p": 12})
    p = ring.var("p")
    rhs = ring.zero()
    for k in range(-3, 4):
        e = k * (3 * k - 1) // 2
        if e <= 12:
            rhs = rhs + ring.mono((-1) ** k, p=e)
    assert pochhammer(p, [p], ring).agree(rhs)[0]
    assert (pochhammer(p, [p], ring) * pochhammer_inv(p, [p], ring)).agree(ring.one())[0]


def test_theta_quasi_periodicity_and_reflection():
    ring = Ring.make(nomes={"p": 4}, spectral={"z": 6})
    p, z = ring.var("p"), ring.var("z")
    th = theta(z, p, ring)
    assert theta(p * z, p, ring).agree((z.invert() * th).scale(-1))[0]
    assert theta(z.invert(), p, ring).agree((z.invert() * th).scale(-1))[0]


def test_theta_at_rational_argument_is_a_p_series():
    ring = Ring.make(nomes={"p": 3})
    p = ring.var("p")
    th = theta_ratio([Fraction(1, 3)], [], p, ring)
    assert th.constant_term() == Fraction(2, 3)


def test_finite_pochhammer():
    assert finite_pochhammer(Fraction(1, 2), Fraction(1, 3), 2) == Fraction(1, 2) * Fraction(5, 6)


def test_structure_functions():
    ring = Ring.make(nomes={"p": 3}, spectral={"z": 6})
    p, z = ring.var("p"), ring.var("z")
    assert (g_theta(z, p, P, ring) * g_theta(z.invert(), p, P, ring)).agree(ring.one())[0]
    assert f_struct(z, p, P, ring).agree(f_struct_exp(z, p, P, ring))[0]


def test_elliptic_gamma_quasi_periodicity():
    # Γ(pz; p, Q) = θ_Q(z) Γ(z; p, Q)
    ring = Ring.make(nomes={"p": 3, "Q": 3}, spectral={"z": 8})
    p, Q, z = ring.var("p"), ring.var("Q"), ring.var("z")
    lhs = elliptic_gamma(p * z, [p, Q], ring)
    rhs = theta(z, Q, ring) * elliptic_gamma(z, [p, Q], ring)
    assert lhs.agree(rhs)[0]


def test_pure_rational_infinite_product_is_rejected():
    ring = Ring.make(nomes={"p": 2})
    with pytest.raises(NonTruncatable):
        pochhammer(ring.const(Fraction(1, 2)), [ring.const(Fraction(1, 3))], ring)

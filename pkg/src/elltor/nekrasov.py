"""Nekrasov factors, Macdonald-type normalizations and representation coefficients.

Arguments called ``x`` (or ``X``, ``z``) are either exact rationals or
single-monomial series from :mod:`elltor.qseries`.  Products that are finite
work for both; infinite products need a formal handle.  Exponents of q and t
are integers throughout, so every constant is an exact rational at the
chosen :class:`ParamPoint`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from ._num import ONE, ZERO, to_q
from .partition import EMPTY, Partition
from .qseries.params import ParamPoint
from .qseries.series import NonTruncatable, Ring, Series, SeriesError
from .qseries.special import (elliptic_gamma, finite_pochhammer, pochhammer_ratio,
                              theta_ratio)

FORMS_5D = ("box", "rowA", "rowB", "rowC")


# --- small helpers ---------------------------------------------------------

def _scale(x, c):
    """c·x for a rational or monomial x."""
    if isinstance(x, Series):
        return x.scale(c)
    return to_q(x) * c


def _one_minus(x, c, ring: Ring | None):
    if isinstance(x, Series):
        return ring.one() - x.scale(c)
    return ONE - to_q(x) * c


def _product(values, ring: Ring | None):
    out = ring.one() if ring is not None else ONE
    for v in values:
        out = out * v
    return out


def _ring(*xs) -> Ring | None:
    for x in xs:
        if isinstance(x, Series):
            return x.ring
    return None


def _nome_mono(p, ring):
    return p if isinstance(p, Series) else ring.var(p)


class _Memo:
    """Insert-once map shared by kernel evaluations."""

    def __init__(self):
        self._d: dict = {}
        self._lock = threading.Lock()

    def get(self, key, build):
        try:
            return self._d[key]
        except KeyError:
            pass
        except TypeError:
            return build()
        val = build()
        with self._lock:
            return self._d.setdefault(key, val)

    def clear(self):
        with self._lock:
            self._d.clear()


_MEMO = _Memo()


def clear_cache() -> None:
    _MEMO.clear()


def _key(x):
    if isinstance(x, Series):
        m = x.as_monomial()
        return ("m", x.ring, m[0], m[1])
    return ("r", to_q(x))


# --- box data --------------------------------------------------------------

def box_weights(lam: Partition, mu: Partition) -> list[tuple[int, int]]:
    """(q-exponent, t-exponent) pairs of the 5d Nekrasov factor N_{λμ}.

    N_{λμ}(x) = Π_{□∈λ} (1 - x q^{-a_μ(□)-1} t^{-ℓ_λ(□)}) Π_{■∈μ} (1 - x q^{a_λ(■)} t^{ℓ_μ(■)+1}).
    """
    out = [(-mu.arm(b) - 1, -lam.leg(b)) for b in lam.boxes()]
    out += [(lam.arm(b), mu.leg(b) + 1) for b in mu.boxes()]
    return out


def _weights_rational(lam, mu, params):
    return [params.power(a, b) for a, b in box_weights(lam, mu)]


# --- 5d Nekrasov factor ----------------------------------------------------

def nekrasov_5d(lam: Partition, mu: Partition, x, params: ParamPoint, form: str = "box",
                rows: int | None = None):
    """N_{λμ}(x; q, t) in one of four equivalent forms.

    ``box`` and ``rowB`` are finite products and accept rational x; ``rowA``
    and ``rowC`` are ratios of infinite q-Pochhammer symbols and need x to be
    a formal monomial.  ``rows`` is the common row bound of the row forms
    (default max(ℓ(λ), ℓ(μ)); any larger bound gives the same value).
    """
    if form not in FORMS_5D:
        raise ValueError(f"unknown form {form!r}; expected one of {FORMS_5D}")
    ell = max(lam.length, mu.length) if rows is None else rows
    if ell < max(lam.length, mu.length):
        raise ValueError("row bound below the partition lengths")
    return _MEMO.get(("N5", lam, mu, _key(x), params, form, ell if form != "box" else 0),
                     lambda: _nekrasov_5d(lam, mu, x, params, form, ell))


def _nekrasov_5d(lam, mu, x, params, form, ell):
    ring = _ring(x)
    q = params.q
    if form == "box":
        return _product((_one_minus(x, w, ring) for w in _weights_rational(lam, mu, params)), ring)
    L, M = lam.row, mu.row
    P = params.power
    if form == "rowB":
        vals = []
        for i in range(1, ell + 1):
            for j in range(i, ell + 1):
                vals.append(finite_pochhammer(_scale(x, P(-M(i) + L(j + 1), i - j)), q,
                                              L(j) - L(j + 1), ring))
        for r in range(1, ell + 1):
            for s in range(r, ell + 1):
                vals.append(finite_pochhammer(_scale(x, P(L(r) - M(s), s - r + 1)), q,
                                              M(s) - M(s + 1), ring))
        return _product(vals, ring)
    if ring is None:
        raise NonTruncatable(f"form {form} needs a formal spectral argument")
    nums, dens = [], []
    if form == "rowA":
        for i in range(1, ell + 1):
            for j in range(i, ell + 1):
                nums.append(_scale(x, P(-M(i) + L(j + 1), i - j)))
                dens.append(_scale(x, P(-M(i) + L(j), i - j)))
        for r in range(1, ell + 1):
            for s in range(r, ell + 1):
                nums.append(_scale(x, P(L(r) - M(s), s - r + 1)))
                dens.append(_scale(x, P(L(r) - M(s + 1), s - r + 1)))
    else:  # rowC
        for i in range(1, ell + 1):
            for j in range(1, ell + 1):
                nums.append(_scale(x, P(L(i) - M(j), j - i + 1)))
                dens.append(_scale(x, P(L(i) - M(j), j - i)))
        for r in range(1, ell + 1):
            nums.append(_scale(x, P(-M(r), r - ell)))
            dens.append(_scale(x, P(L(r), ell - r + 1)))
    return pochhammer_ratio(nums, dens, [q], ring)


def nekrasov_elliptic(lam: Partition, mu: Partition, x, nome, params: ParamPoint,
                      ring: Ring | None = None) -> Series:
    """N_{λμ}(x; p) = Π_b (x w_b; p)_∞ / (p* x w_b; p)_∞ with p* = (q/t) p."""
    ring = ring or _ring(x, nome)
    p = _nome_mono(nome, ring)
    pstar = p.scale(params.power(1, -1))
    nums = [_scale(x, w) for w in _weights_rational(lam, mu, params)]
    dens = [n * pstar for n in nums]
    return pochhammer_ratio(nums, dens, [p], ring)


def nekrasov_elliptic_dual(lam, mu, x, nome, params, ring=None) -> Series:
    """The p ↔ p* counterpart: Π_b (x w_b; p*)_∞ / (p x w_b; p*)_∞."""
    ring = ring or _ring(x, nome)
    p = _nome_mono(nome, ring)
    pstar = p.scale(params.power(1, -1))
    nums = [_scale(x, w) for w in _weights_rational(lam, mu, params)]
    dens = [n * p for n in nums]
    return pochhammer_ratio(nums, dens, [pstar], ring)


def nekrasov_theta(lam: Partition, mu: Partition, x, nome, params: ParamPoint,
                   ring: Ring | None = None) -> Series:
    """N^θ_{λμ}(x; Q): the 5d box product with every (1 - y) replaced by θ_Q(y)."""
    ring = ring or _ring(x, nome)
    Q = _nome_mono(nome, ring)
    return _MEMO.get(("Nth", lam, mu, _key(x), _key(Q), params, ring),
                     lambda: theta_ratio([_scale(x, w) for w in _weights_rational(lam, mu, params)],
                                         [], Q, ring))


def nekrasov_gamma(lam: Partition, mu: Partition, x, nomes: Sequence, params: ParamPoint,
                   ring: Ring | None = None) -> Series:
    """N^Γ_{λμ}(x; p, Q): the box product with (1 - y) replaced by Γ(y; p, Q)."""
    ring = ring or _ring(x, *nomes)
    out = ring.one()
    for w in _weights_rational(lam, mu, params):
        out = out * elliptic_gamma(_scale(x, w), [_nome_mono(n, ring) for n in nomes], ring)
    return out


# --- U(1) instanton weight -------------------------------------------------

def z_affine(lam: Partition, params: ParamPoint, ring: Ring, nome="p", form: str = "box",
             flip: bool = False) -> Series:
    """Z_λ(t, q^{-1}, p): per box (1-p q^{a+1}t^ℓ)(1-p q^{-a}t^{-ℓ-1}) / ((1-q^{a+1}t^ℓ)(1-q^{-a}t^{-ℓ-1})).

    ``form="ratio"`` evaluates N_λλ(pq/t)/N_λλ(q/t).  ``flip=True`` evaluates
    the same expression with q → 1/q, t → 1/t; the nome is taken as given.
    """
    p = _nome_mono(nome, ring)
    if form == "ratio":
        if flip:
            raise ValueError("flip is only available for the box form")
        x = p.scale(params.power(1, -1))
        return nekrasov_5d(lam, lam, x, params).scale(
            ONE / nekrasov_5d(lam, lam, params.power(1, -1), params))
    s = -1 if flip else 1
    out = ring.one()
    for b in lam.boxes():
        a, l = lam.arm(b), lam.leg(b)
        w1 = params.power(s * (a + 1), s * l)
        w2 = params.power(-s * a, -s * (l + 1))
        num = (ring.one() - p.scale(w1)) * (ring.one() - p.scale(w2))
        out = out * num.scale(ONE / ((1 - w1) * (1 - w2)))
    return out


# --- Macdonald normalizations ----------------------------------------------

def c_factor(lam: Partition, params: ParamPoint, form: str = "box", prime: bool = False) -> mpq:
    """c_λ = Π (1 - q^a t^{ℓ+1}) and c'_λ = Π (1 - q^{a+1} t^ℓ).

    ``form="rows"`` uses the row-difference quotient, which reduces to
    finite q-Pochhammer symbols of length λ_j - λ_{j+1}.
    """
    P = params.power
    if form == "box":
        out = ONE
        for b in lam.boxes():
            a, l = lam.arm(b), lam.leg(b)
            out *= (1 - P(a + 1, l)) if prime else (1 - P(a, l + 1))
        return out
    if form != "rows":
        raise ValueError(f"unknown form {form!r}")
    out = ONE
    L = lam.row
    shift = 1 if prime else 0
    for i in range(1, lam.length + 1):
        for j in range(i, lam.length + 1):
            # (y;q)_∞/(yq^k;q)_∞ = (y;q)_k with y the start of the run
            tpow = j - i + (0 if prime else 1)
            out *= finite_pochhammer(P(L(i) - L(j) + shift, tpow), params.q, L(j) - L(j + 1))
    return out


def c_factor_elliptic(lam: Partition, params: ParamPoint, ring: Ring, nome="p",
                      prime: bool = False) -> Series:
    """c_λ(p) = Π θ_p(q^a t^{ℓ+1}) and c'_λ(p) = Π θ_p(q^{a+1} t^ℓ)."""
    P = params.power
    args = []
    for b in lam.boxes():
        a, l = lam.arm(b), lam.leg(b)
        args.append(P(a + 1, l) if prime else P(a, l + 1))
    return theta_ratio(args, [], _nome_mono(nome, ring), ring)


def n_factor(lam: Partition, params: ParamPoint, ring: Ring, nome="p", prime: bool = False,
             form: str = "box") -> Series:
    """N_λ(p) = Π (p q^{a+1} t^ℓ; p)/(p q^a t^{ℓ+1}; p); N'_λ(p) with the reflected weights.

    ``form="rows"`` uses the double-product over rows with bases (q, p).
    """
    p = _nome_mono(nome, ring)
    P = params.power
    nums, dens = [], []
    if form == "box":
        for b in lam.boxes():
            a, l = lam.arm(b), lam.leg(b)
            if prime:
                nums.append(p.scale(P(-a, -l - 1)))
                dens.append(p.scale(P(-a - 1, -l)))
            else:
                nums.append(p.scale(P(a + 1, l)))
                dens.append(p.scale(P(a, l + 1)))
        return pochhammer_ratio(nums, dens, [p], ring)
    if form != "rows" or prime:
        raise ValueError("the row form is implemented for N_λ(p) only")
    ell = lam.length
    u = _ladder_ratio(lam, params)
    for i in range(1, ell + 1):
        for j in range(i, ell + 1):
            nums.append(p.scale(params.q * u(i, j)))
            dens.append(p.scale(params.t * u(i, j)))
    for i in range(1, ell + 2):
        for j in range(i + 1, ell + 2):
            nums.append(p.scale(u(i, j)))
            dens.append(p.scale(params.power(1, -1) * u(i, j)))
    return pochhammer_ratio(nums, dens, [params.q, p], ring)


def _ladder_ratio(lam: Partition, params: ParamPoint):
    """u_i/u_j with u_i = q^{λ_i} t^{1-i} u."""
    def ratio(i, j):
        return params.power(lam.row(i) - lam.row(j), j - i)
    return ratio


def ladder_values(lam: Partition, params: ParamPoint, length: int) -> list[mpq]:
    """u_i/u = q^{λ_i} t^{1-i} for i = 1..length."""
    return [params.power(lam.row(i), 1 - i) for i in range(1, length + 1)]


def n_factor_ratio(lam: Partition, i: int, params: ParamPoint, ring: Ring, nome="p",
                   prime: bool = False, rows: int | None = None) -> Series:
    """N_λ/N_{λ+1_i} (or the primed version) from the row-recurrence product.

    ``rows`` is the row bound ℓ of the products (default max(ℓ(λ), i)).
    """
    p = _nome_mono(nome, ring)
    u = _ladder_ratio(lam, params)
    q, t = params.q, params.t
    ell = max(lam.length, i) if rows is None else rows
    nums, dens = [], []
    if not prime:
        for j in range(1, i):
            nums += [u(j, i) / t, t * u(j, i) / q]
            dens += [u(j, i) / q, u(j, i)]
        for j in range(i + 1, ell + 1):
            nums.append(q * u(i, j))
            dens.append(t * u(i, j))
        for j in range(i + 1, ell + 2):
            nums.append(u(i, j))
            dens.append(q * u(i, j) / t)
    else:
        for j in range(1, i):
            nums += [u(i, j), q * u(i, j)]
            dens += [q * u(i, j) / t, t * u(i, j)]
        for j in range(i + 1, ell + 1):
            nums.append(u(j, i) / t)
            dens.append(u(j, i) / q)
        for j in range(i + 1, ell + 2):
            nums.append(t * u(j, i) / q)
            dens.append(u(j, i))
    return pochhammer_ratio([p.scale(c) for c in nums], [p.scale(c) for c in dens], [p], ring)


def macdonald_sides(lam: Partition, params: ParamPoint) -> tuple[mpq, mpq]:
    """Both sides of the arm/leg generating identity.

    LHS (1-q) Σ_{□} q^{a(□)} t^{ℓ(□)+1}.
    RHS t Σ_{1≤i≤j≤ℓ} q^{λ_i-λ_j} t^{j-i} - Σ_{1≤i<j≤ℓ+1} q^{λ_i-λ_j} t^{j-i}.
    """
    P = params.power
    lhs = (1 - params.q) * sum((P(lam.arm(b), lam.leg(b) + 1) for b in lam.boxes()), ZERO)
    ell = lam.length
    L = lam.row
    rhs = params.t * sum((P(L(i) - L(j), j - i) for i in range(1, ell + 1)
                          for j in range(i, ell + 1)), ZERO)
    rhs -= sum((P(L(i) - L(j), j - i) for i in range(1, ell + 2)
                for j in range(i + 1, ell + 2)), ZERO)
    return lhs, rhs


def column_identity_sides(lam: Partition, i: int, params: ParamPoint) -> tuple[mpq, mpq]:
    """(1-q) Σ_{j≤λ_i} q^{-j} t^{λ'_j}  versus  Σ_{j=i}^{ℓ} q^{-λ_j} t^j (1 - q^{λ_j-λ_{j+1}})."""
    P = params.power
    lhs = (1 - params.q) * sum((P(-j, lam.col(j)) for j in range(1, lam.row(i) + 1)), ZERO)
    rhs = sum((P(-lam.row(j), j) * (1 - P(lam.row(j) - lam.row(j + 1), 0))
               for j in range(i, lam.length + 1)), ZERO)
    return lhs, rhs


# --- vertex coefficients ---------------------------------------------------

def e_coefficient(lam: Partition, m: int, params: ParamPoint, form: str = "rows") -> mpq:
    """E_{λ,m} = 1/(1-t^m) + Σ_j (q^{-mλ_j} - 1) t^{m(j-1)}.

    ``form="corners"`` uses the addable/removable-corner expression
    (Σ_A q^{m□} - (t/q)^m Σ_R q^{m■})/(1 - t^m), q^□ = t^{i-1} q^{1-j}.
    """
    if m == 0:
        raise ValueError("E is defined for m ≠ 0")
    P = params.power
    if form == "rows":
        out = ONE / (1 - P(0, m))
        for j in range(1, lam.length + 1):
            out += (P(-m * lam.row(j), 0) - 1) * P(0, m * (j - 1))
        return out
    if form != "corners":
        raise ValueError(f"unknown form {form!r}")
    add = sum((P(m * (1 - j), m * (i - 1)) for i, j in lam.addable()), ZERO)
    rem = sum((P(m * (1 - j), m * (i - 1)) for i, j in lam.removable()), ZERO)
    return (add - params.tq(m) * rem) / (1 - P(0, m))


def e_pairing_sides(lam: Partition, mu: Partition, m: int, params: ParamPoint) -> tuple[mpq, mpq]:
    """-(1-t^m)/(1-q^m) E_{λ,-m} E_{μ,m} against its box expansion."""
    P = params.power
    lhs = -(1 - P(0, m)) / (1 - P(m, 0)) * e_coefficient(lam, -m, params) * e_coefficient(mu, m, params)
    rhs = P(0, m) / ((1 - P(m, 0)) * (1 - P(0, m)))
    rhs += sum((P(m * lam.arm(b), m * (mu.leg(b) + 1)) for b in mu.boxes()), ZERO)
    rhs += sum((P(-m * (mu.arm(b) + 1), -m * lam.leg(b)) for b in lam.boxes()), ZERO)
    return lhs, rhs


# --- level (0,1) coefficients ------------------------------------------------

def _theta_ratio_rational(nums, dens, ring, nome):
    return theta_ratio(list(nums), list(dens), _nome_mono(nome, ring), ring)


def coeff_a(lam: Partition, i: int, sign: int, params: ParamPoint, ring: Ring, nome="p",
            prime: bool = False, rows: int | None = None) -> Series:
    """A^±_{λ,i}(p) and A^{±'}_{λ,i}(p) as theta-function ratios at u_i = q^{λ_i} t^{1-i} u.

    ``rows`` is the row bound ℓ of the products; the default max(ℓ(λ), i)
    keeps the relations valid when i opens a new row.  A^{-'} carries an
    overall t/q so that it equals both (t/q) A^+_{λ-1_i,i} and the c-ratio
    times A^-_{λ,i}.  The coefficient vanishes exactly when λ ± 1_i is not a
    partition.
    """
    ell = max(lam.length, i) if rows is None else rows
    return _MEMO.get(("A", lam, i, sign, params, ring, _key(_nome_mono(nome, ring)), prime, ell),
                     lambda: _coeff_a(lam, i, sign, params, ring, nome, prime, ell))


def a_theta_args(lam: Partition, i: int, sign: int, params: ParamPoint, prime: bool = False,
                 rows: int | None = None) -> tuple[list, list, mpq]:
    """Theta arguments (numerators, denominators) and rational scale of A^±_{λ,i}."""
    ell = max(lam.length, i) if rows is None else rows
    u = _ladder_ratio(lam, params)
    q, t = params.q, params.t
    nums, dens = [], []
    scale = ONE
    if sign > 0 and not prime:
        for j in range(1, i):
            nums += [t * u(i, j), q * u(i, j) / t]
            dens += [q * u(i, j), u(i, j)]
    elif sign < 0 and not prime:
        for j in range(i + 1, ell + 1):
            nums.append(q * u(j, i) / t)
            dens.append(u(j, i))
        for j in range(i + 1, ell + 2):
            nums.append(t * u(j, i))
            dens.append(q * u(j, i))
    elif sign > 0:
        for j in range(i + 1, ell + 1):
            nums.append(t * u(i, j))
            dens.append(q * u(i, j))
        for j in range(i + 1, ell + 2):
            nums.append(q * u(i, j) / t)
            dens.append(u(i, j))
    else:
        for j in range(1, i):
            nums += [t * u(j, i), q * u(j, i) / t]
            dens += [q * u(j, i), u(j, i)]
        scale = t / q
    return nums, dens, scale


def _coeff_a(lam, i, sign, params, ring, nome, prime, ell):
    nums, dens, scale = a_theta_args(lam, i, sign, params, prime, ell)
    return _theta_ratio_rational(nums, dens, ring, nome).scale(scale)


def _b_args(lam: Partition, params: ParamPoint, sign: int):
    """Theta arguments of B^±_λ as (numerator, denominator) multipliers of X."""
    P = params.power
    ell = lam.length
    L = lam.row
    nums, dens = [], []
    if sign > 0:
        # B^+(X), X = u/z
        for i in range(1, ell + 1):
            nums.append(P(L(i), -i))
            dens.append(P(L(i) - 1, 1 - i))
        for i in range(1, ell + 2):
            nums.append(P(L(i) - 1, 2 - i))
            dens.append(P(L(i), 1 - i))
    else:
        # B^-(Y), Y = z/u
        for i in range(1, ell + 1):
            nums.append(P(-L(i), i))
            dens.append(P(1 - L(i), i - 1))
        for i in range(1, ell + 2):
            nums.append(P(1 - L(i), i - 2))
            dens.append(P(-L(i), i - 1))
    return nums, dens


def coeff_b(lam: Partition, sign: int, X, params: ParamPoint, ring: Ring | None = None,
            nome="p") -> Series:
    """B^+_λ(X; nome) with X = u/z, or B^-_λ(Y; nome) with Y = z/u."""
    ring = ring or _ring(X, nome)
    nums, dens = _b_args(lam, params, sign)
    return _theta_ratio_rational([_scale(X, c) for c in nums], [_scale(X, c) for c in dens],
                                 ring, nome)


def b_theta_args(lam: Partition, sign: int, params: ParamPoint):
    """Public view of the theta arguments of B^±_λ (multipliers of the spectral variable)."""
    return _b_args(lam, params, sign)


def a_plus(params: ParamPoint, ring: Ring, nome="p") -> Series:
    """a^+(p) = (1-t)(pt/q;p)(p/t;p)/((p;p)(p/q;p))."""
    p = _nome_mono(nome, ring)
    q, t = params.q, params.t
    return pochhammer_ratio([p.scale(t / q), p.scale(1 / t)], [p, p.scale(1 / q)], [p], ring
                            ).scale(1 - t)


def a_minus(params: ParamPoint, ring: Ring, nome="p") -> Series:
    """a^-(p) = (1-1/t)(pq/t;p)(pt;p)/((p;p)(pq;p))."""
    p = _nome_mono(nome, ring)
    q, t = params.q, params.t
    return pochhammer_ratio([p.scale(q / t), p.scale(t)], [p, p.scale(q)], [p], ring
                            ).scale(1 - 1 / t)


def commutator_constant(params: ParamPoint) -> mpq:
    """(1-q)(1-1/t)/(1-q/t)."""
    q, t = params.q, params.t
    return (1 - q) * (1 - 1 / t) / (1 - q / t)


def a_product_closed(params: ParamPoint, ring: Ring, nome="p") -> Series:
    """c · θ(q/t) θ(t) / ((p;p)^2 θ(q)) with c the commutator constant."""
    p = _nome_mono(nome, ring)
    q, t = params.q, params.t
    th = theta_ratio([q / t, t], [q], p, ring)
    pp = pochhammer_ratio([], [p, p], [p], ring)
    return (th * pp).scale(commutator_constant(params))


# --- theta identities used by the representations --------------------------

def theta_pfe_sides(a: Sequence, b: Sequence, s, ring: Ring, nome="p") -> tuple[Series, Series]:
    """Partial fractions of θ(s/b_{m+1}) Π θ(s/b_j)/θ(s/a_j), b_1⋯b_{m+1} = a_1⋯a_m s."""
    a = [to_q(x) for x in a]
    b = [to_q(x) for x in b]
    s = to_q(s)
    m = len(a)
    if len(b) != m + 1:
        raise ValueError("need m+1 zeros for m poles")
    prod_b = ONE
    for x in b:
        prod_b *= x
    prod_a = s
    for x in a:
        prod_a *= x
    if prod_b != prod_a:
        raise ValueError("balancing condition b_1⋯b_{m+1} = a_1⋯a_m s fails")
    p = _nome_mono(nome, ring)
    lhs = theta_ratio([s / x for x in b], [s / x for x in a], p, ring)
    rhs = ring.zero()
    for k in range(m):
        nums = [a[k] / x for x in b]
        dens = [a[k] / s] + [a[k] / a[j] for j in range(m) if j != k]
        rhs = rhs - theta_ratio(nums, dens, p, ring)
    return lhs, rhs


def product_g_sides(lam: Partition, z: Series, params: ParamPoint, nome="p") -> tuple[Series, Series]:
    """Π_{(i,j)∈λ} g_θ(q^{j-1} t^{1-i} z; p) against θ(z)/θ((t/q) z) · B^+_λ(z; p).

    The identity is one of analytic functions, so the structure function
    enters through its theta-function form.
    """
    from .qseries.special import g_theta

    ring = z.ring
    p = _nome_mono(nome, ring)
    lhs = ring.one()
    for i, j in lam.boxes():
        lhs = lhs * g_theta(z.scale(params.power(j - 1, 1 - i)), p, params, ring)
    rhs = theta_ratio([z], [z.scale(params.power(-1, 1))], p, ring) * coeff_b(lam, 1, z, params,
                                                                             ring, p)
    return lhs, rhs


@dataclass(frozen=True)
class KernelValue:
    """A kernel evaluation with a description of how it was produced."""

    index: tuple
    value: object
    tag: str = ""


# --- normalization monomials ------------------------------------------------

def t_star_factor(lam: Partition, u, v, n: int, params: ParamPoint) -> mpq:
    """t*(λ,u,v,N) = (v/q)^{-|λ|} (-u)^{N|λ|} f_λ^N at rational u, v."""
    from .partition import framing_factor

    k = lam.size
    f = framing_factor(lam, params)
    return (to_q(v) / params.q) ** (-k) * (-to_q(u)) ** (n * k) * f ** n


def t_factor(lam: Partition, u, v, n: int, params: ParamPoint) -> mpq:
    """t(λ,u,v,N) = (-uv)^{|λ|} (-v)^{-(N+1)|λ|} f_λ^{-N-1} at rational u, v."""
    from .partition import framing_factor

    k = lam.size
    f = framing_factor(lam, params)
    return (-to_q(u) * to_q(v)) ** k * (-to_q(v)) ** (-(n + 1) * k) * f ** (-n - 1)


def block_normalization(lam: Partition, u, v, n: int, params: ParamPoint) -> tuple[mpq, int]:
    """t*(λ,u,v,N) · t(λ,v,u p^{-1},N) as (rational part, power of p).

    The p-power is N|λ| and the rational part is q^{|λ|}/f_λ, independent of
    u, v and N; this is the (v, N)-independence of the normalized T-blocks.
    """
    k = lam.size
    u, v = to_q(u), to_q(v)
    # t(λ, v, u p^{-1}, N) = (-v u p^{-1})^{k} (-u p^{-1})^{-(N+1)k} f^{-N-1}
    ts = t_star_factor(lam, u, v, n, params)
    rat = ts * t_factor(lam, v, u, n, params)
    return rat, n * k


# --- primed aliases and range-checked accessors ------------------------------

def c_prime_factor(lam: Partition, params: ParamPoint, form: str = "box") -> mpq:
    return c_factor(lam, params, form, prime=True)


def c_prime_factor_elliptic(lam: Partition, params: ParamPoint, ring: Ring, nome="p") -> Series:
    return c_factor_elliptic(lam, params, ring, nome, prime=True)


def n_prime_factor(lam: Partition, params: ParamPoint, ring: Ring, nome="p") -> Series:
    return n_factor(lam, params, ring, nome, prime=True)


def rep_coeff_A(lam: Partition, i: int, sign: int, params: ParamPoint, ring: Ring, nome="p",
                prime: bool = False) -> Series:
    limit = lam.length + 1 if sign > 0 else lam.length
    if not 1 <= i <= limit:
        raise IndexError(f"row index {i} outside 1..{limit}")
    return coeff_a(lam, i, sign, params, ring, nome, prime)


def rep_coeff_B(lam: Partition, sign: int, X, params: ParamPoint, ring: Ring | None = None,
                nome="p") -> Series:
    return coeff_b(lam, sign, X, params, ring, nome)


def clapcplap_check(lam: Partition, params: ParamPoint, ring: Ring, nome="p"):
    """(c'_λ/c_λ)(N_λ(p)/N'_λ(p)) against c'_λ(p)/c_λ(p); returns agree() output."""
    lhs = (n_factor(lam, params, ring, nome) * n_prime_factor(lam, params, ring, nome).invert()
           ).scale(c_prime_factor(lam, params) / c_factor(lam, params))
    rhs = c_prime_factor_elliptic(lam, params, ring, nome) * c_factor_elliptic(
        lam, params, ring, nome).invert()
    return lhs.agree(rhs)


def ce_pairing_check(lam: Partition, mu: Partition, m: int, params: ParamPoint) -> bool:
    lhs, rhs = e_pairing_sides(lam, mu, m, params)
    return lhs == rhs


def theta_reflection_sides(lam: Partition, mu: Partition, x: Series, params: ParamPoint,
                           nome="p") -> tuple[Series, Series]:
    """N^θ_{λμ}(x) against (x (t/q)^{1/2})^{|λ|+|μ|} (f_λ/f_μ) N^θ_{μλ}(q/(tx))."""
    from .partition import framing_factor

    ring = x.ring
    lhs = nekrasov_theta(lam, mu, x, nome, params, ring)
    k = lam.size + mu.size
    xinv = x.invert().scale(params.power(1, -1))
    c = params.tq(k, denom=2) * framing_factor(lam, params) / framing_factor(mu, params)
    rhs = (x ** k).scale(c) * nekrasov_theta(mu, lam, xinv, nome, params, ring)
    return lhs, rhs


def gamma_reflection_product(lam: Partition, mu: Partition, x: Series, nomes: Sequence,
                             params: ParamPoint) -> Series:
    """N^Γ_{λμ}(x; p, Q) · N^Γ_{μλ}(pQq/(tx); p, Q), which should be 1."""
    ring = x.ring
    prod = ring.one()
    for n in nomes:
        prod = prod * _nome_mono(n, ring)
    other = (prod * x.invert()).scale(params.power(1, -1))
    return nekrasov_gamma(lam, mu, x, nomes, params, ring) * nekrasov_gamma(mu, lam, other, nomes,
                                                                            params, ring)

"""Infinite products and structure functions, computed through logarithms.

Arguments and bases are either exact rationals or single-monomial series
(``ring.mono(...)``).  A monomial is *formal* when all its effective
exponents are nonnegative and its total degree is positive; only formal
monomials can serve as truncation handles.
"""

from __future__ import annotations

from typing import Sequence, Union

from gmpy2 import mpq

from .._num import ONE, ZERO, to_q
from .params import ParamPoint
from .series import NonTruncatable, Ring, Series, SeriesError

Arg = Union[Series, int, mpq, object]


def _as_mono(x, ring: Ring | None):
    """(coefficient, eff exponent or None) for a rational or monomial series."""
    if isinstance(x, Series):
        m = x.as_monomial()
        if m is None:
            raise SeriesError("expected a monomial argument")
        return m[0], m[1]
    return to_q(x), None


def _ring_of(*xs) -> Ring | None:
    for x in xs:
        if isinstance(x, Series):
            return x.ring
        if isinstance(x, (list, tuple)):
            r = _ring_of(*x)
            if r is not None:
                return r
    return None


def _mono_mul(a, b, n):
    ca, ea = a
    cb, eb = b
    if ea is None and eb is None:
        return ca * cb, None
    ea = ea or (0,) * n
    eb = eb or (0,) * n
    return ca * cb, tuple(x + y for x, y in zip(ea, eb))


def _is_formal(e) -> bool:
    return e is not None and sum(e) >= 1 and min(e) >= 0


def monomial(ring: Ring, c, eff) -> Series:
    terms = {eff: c} if c and all(a <= b for a, b in zip(eff, ring.bounds)) else {}
    return Series(ring, terms, ring.bounds, exact_monomial=(c, eff))


def _product_log_terms(a, formal, rational, ring: Ring):
    """Enumerate the factors (1 - a·b^n) over formal bases.

    Returns (explicit factors, log dict).  Factors whose argument lacks a
    positive formal degree are kept explicitly (only allowed when every base
    is formal); the rest are accumulated in logarithmic form.
    """
    n = len(ring.names)
    bounds = ring.bounds
    dmax = sum(bounds)
    zero = (0,) * n
    explicit = []
    logsum: dict = {}

    def visit(term, start):
        c, e = term
        e = e if e is not None else zero
        d = sum(e)
        if d > dmax:
            return
        if min(e) >= 0 and any(x > b for x, b in zip(e, bounds)):
            return
        if d <= 0 or min(e) < 0:
            if rational:
                raise NonTruncatable("argument has no formal handle and a rational base is present")
            explicit.append((c, e))
        else:
            _add_log(c, e, rational, logsum, bounds)
        for k in range(start, len(formal)):
            visit(_mono_mul((c, e), formal[k], n), k)

    visit(a, 0)
    return explicit, logsum


def _add_log(c, e, rational, logsum, bounds):
    # log(1 - c x^e) restricted by the rational bases: -Σ_m c^m x^{me}/(m Π(1-r^m))
    m = 1
    cm = c
    em = e
    while all(x <= b for x, b in zip(em, bounds)):
        coef = -cm / m
        for r in rational:
            rm = r ** m
            if rm == 1:
                raise SeriesError("rational base is a root of unity at this order")
            coef /= (1 - rm)
        logsum[em] = logsum.get(em, ZERO) + coef
        m += 1
        cm = cm * c
        em = tuple(x + y for x, y in zip(em, e))


def _split_bases(bases, ring):
    formal, rational = [], []
    for b in bases:
        c, e = _as_mono(b, ring)
        if e is None or all(x == 0 for x in e):
            rational.append(c)
        elif _is_formal(e):
            formal.append((c, e))
        else:
            raise NonTruncatable("a base must be rational or a monomial of positive formal degree")
    return formal, rational


def pochhammer_parts(arg, bases: Sequence, ring: Ring | None = None):
    ring = ring or _ring_of(arg, bases)
    if ring is None:
        raise NonTruncatable("infinite product with purely rational data")
    a = _as_mono(arg, ring)
    formal, rational = _split_bases(bases, ring)
    explicit, logsum = _product_log_terms(a, formal, rational, ring)
    return ring, explicit, logsum


def pochhammer(arg, bases: Sequence, ring: Ring | None = None) -> Series:
    """(arg; b_1, ..., b_r)_∞ as a truncated series."""
    ring, explicit, logsum = pochhammer_parts(arg, bases, ring)
    out = Series(ring, logsum, ring.bounds).exp()
    for c, e in explicit:
        out = out * (ring.one() - monomial(ring, c, e))
    return out


def pochhammer_inv(arg, bases: Sequence, ring: Ring | None = None) -> Series:
    """1/(arg; b_1, ..., b_r)_∞."""
    ring, explicit, logsum = pochhammer_parts(arg, bases, ring)
    out = Series(ring, {e: -c for e, c in logsum.items()}, ring.bounds).exp()
    for c, e in explicit:
        out = out * (ring.one() - monomial(ring, c, e)).invert()
    return out


def finite_pochhammer(arg, base, n: int, ring: Ring | None = None):
    """(arg; base)_n = Π_{k<n} (1 - arg base^k); negative n uses the inverse convention."""
    ring = ring or _ring_of(arg, base)
    if n < 0:
        raise SeriesError("negative length")
    if ring is None:
        val = ONE
        a = to_q(arg)
        b = to_q(base)
        for k in range(n):
            val *= 1 - a * b ** k
        return val
    out = ring.one()
    cur = arg if isinstance(arg, Series) else ring.const(arg)
    bb = base if isinstance(base, Series) else ring.const(base)
    for _ in range(n):
        out = out * (ring.one() - cur)
        cur = cur * bb
    return out


def _div(num, den, ring):
    """num / den where den is rational or a monomial."""
    if isinstance(den, Series):
        return (num if isinstance(num, Series) else ring.const(num)) * den.invert()
    if isinstance(num, Series):
        return num.scale(ONE / to_q(den))
    return to_q(num) / to_q(den)


def theta(arg, nome, ring: Ring | None = None) -> Series:
    """θ_nome(arg) = (arg; nome)_∞ (nome/arg; nome)_∞."""
    ring = ring or _ring_of(arg, nome)
    other = _div(nome, arg, ring)
    return pochhammer(arg, [nome], ring) * pochhammer(other, [nome], ring)


def theta_inv(arg, nome, ring: Ring | None = None) -> Series:
    ring = ring or _ring_of(arg, nome)
    other = _div(nome, arg, ring)
    return pochhammer_inv(arg, [nome], ring) * pochhammer_inv(other, [nome], ring)


def theta_ratio(nums: Sequence, dens: Sequence, nome, ring: Ring | None = None) -> Series:
    """Π θ(nums) / Π θ(dens), assembled in one logarithm where possible."""
    ring = ring or _ring_of(nums, dens, nome)
    logsum: dict = {}
    factors = []
    for sign, args in ((1, nums), (-1, dens)):
        for a in args:
            for piece in (a, _div(nome, a, ring)):
                _, explicit, lg = pochhammer_parts(piece, [nome], ring)
                for e, c in lg.items():
                    logsum[e] = logsum.get(e, ZERO) + sign * c
                for c, e in explicit:
                    factors.append((sign, c, e))
    out = Series(ring, logsum, ring.bounds).exp()
    nums_f = [ring.one() - monomial(ring, c, e) for s, c, e in factors if s > 0]
    dens_f = [ring.one() - monomial(ring, c, e) for s, c, e in factors if s < 0]
    for f in nums_f:
        out = out * f
    for f in dens_f:
        out = out * f.invert()
    return out


def elliptic_gamma(arg, nomes: Sequence, ring: Ring | None = None) -> Series:
    """Γ_r(arg; p_1..p_r) = (arg; p)^{(-1)^{r-1}} (p_1⋯p_r / arg; p)."""
    ring = ring or _ring_of(arg, nomes)
    r = len(nomes)
    prod = ring.one()
    for b in nomes:
        prod = prod * (b if isinstance(b, Series) else ring.const(b))
    other = _div(prod, arg, ring)
    first = pochhammer(arg, nomes, ring) if r % 2 == 1 else pochhammer_inv(arg, nomes, ring)
    return first * pochhammer(other, nomes, ring)


# --- structure functions ---------------------------------------------------

def _mono_power_terms(c, e, m, bounds):
    em = tuple(x * m for x in e)
    if any(x > b for x, b in zip(em, bounds)):
        return None
    return c ** m, em


def g_struct(z, s, params: ParamPoint, ring: Ring | None = None) -> Series:
    """g(z; s) = exp(Σ κ_m/m · s^m/(1 - s^m) · z^m); ``s=None`` drops the s-factor."""
    ring = ring or _ring_of(z, s)
    if ring is None:
        raise NonTruncatable("g needs a formal handle")
    n = len(ring.names)
    zero = (0,) * n
    cz, ez = _as_mono(z, ring)
    ez = ez or zero
    if s is None:
        cs, es, srat = None, None, None
    else:
        cs, es = _as_mono(s, ring)
        srat = es is None or all(x == 0 for x in es)
        es = es or zero
    logsum: dict = {}
    bounds = ring.bounds
    dmax = sum(bounds)
    m = 1
    while True:
        zm = _mono_power_terms(cz, ez, m, bounds) if min(ez) >= 0 else (cz ** m, tuple(x * m for x in ez))
        if zm is None:
            break
        base_c = params.kappa(m) / m * zm[0]
        if s is None or srat:
            if sum(zm[1]) > dmax:
                break
            if sum(zm[1]) < 1 or min(zm[1]) < 0:
                raise NonTruncatable("g argument has no formal handle")
            coef = base_c
            if s is not None:
                sm = cs ** m
                coef *= sm / (1 - sm)
            logsum[zm[1]] = logsum.get(zm[1], ZERO) + coef
        else:
            k = 1
            any_in = False
            while True:
                e = tuple(a + b * m * k for a, b in zip(zm[1], es))
                if sum(e) > dmax:
                    break
                if min(e) >= 0 and any(x > b for x, b in zip(e, bounds)):
                    break
                if sum(e) < 1 or min(e) < 0:
                    raise NonTruncatable("g argument has no formal handle")
                logsum[e] = logsum.get(e, ZERO) + base_c * cs ** (m * k)
                any_in = True
                k += 1
            if not any_in and sum(tuple(a + b * m for a, b in zip(zm[1], es))) > dmax:
                break
        m += 1
        if m > 4 * dmax + 8:
            break
    return Series(ring, logsum, ring.bounds).exp()


def f_struct(z, s, params: ParamPoint, ring: Ring | None = None) -> Series:
    """f(z;s) = (z/q;s)(tz;s)(qz/t;s) / ((qz;s)(z/t;s)(tz/q;s)), via Pochhammers."""
    ring = ring or _ring_of(z, s)
    q, t = params.q, params.t
    zc = z if isinstance(z, Series) else ring.const(z)
    num = [zc.scale(1 / q), zc.scale(t), zc.scale(q / t)]
    den = [zc.scale(q), zc.scale(1 / t), zc.scale(t / q)]
    out = ring.one()
    for a in num:
        out = out * pochhammer(a, [s], ring)
    for a in den:
        out = out * pochhammer_inv(a, [s], ring)
    return out


def f_struct_exp(z, s, params: ParamPoint, ring: Ring | None = None) -> Series:
    """f(z;s) through log f = -Σ κ_m z^m / (m (1 - s^m))."""
    ring = ring or _ring_of(z, s)
    n = len(ring.names)
    zero = (0,) * n
    cz, ez = _as_mono(z, ring)
    ez = ez or zero
    cs, es = _as_mono(s, ring)
    srat = es is None or all(x == 0 for x in es)
    es = es or zero
    bounds = ring.bounds
    logsum: dict = {}
    m = 1
    while True:
        em = tuple(x * m for x in ez)
        if any(x > b for x, b in zip(em, bounds)):
            break
        base_c = -params.kappa(m) / m * cz ** m
        if srat:
            logsum[em] = logsum.get(em, ZERO) + base_c / (1 - cs ** m)
        else:
            k = 0
            while True:
                e = tuple(a + b * m * k for a, b in zip(em, es))
                if any(x > b for x, b in zip(e, bounds)):
                    break
                logsum[e] = logsum.get(e, ZERO) + base_c * cs ** (m * k)
                k += 1
        m += 1
    return Series(ring, logsum, ring.bounds).exp()


def g_theta(z, p, params: ParamPoint, ring: Ring | None = None) -> Series:
    """g_θ(z;p) = θ(z/q)θ(qz/t)θ(tz) / (θ(qz)θ(tz/q)θ(z/t))."""
    ring = ring or _ring_of(z, p)
    q, t = params.q, params.t
    zc = z if isinstance(z, Series) else ring.const(z)
    nums = [zc.scale(1 / q), zc.scale(q / t), zc.scale(t)]
    dens = [zc.scale(q), zc.scale(t / q), zc.scale(1 / t)]
    return theta_ratio(nums, dens, p, ring)


def pochhammer_ratio(nums: Sequence, dens: Sequence, bases: Sequence,
                     ring: Ring | None = None) -> Series:
    """Π (num; bases)_∞ / Π (den; bases)_∞ assembled in a single logarithm."""
    ring = ring or _ring_of(nums, dens, bases)
    logsum: dict = {}
    factors = []
    for sign, args in ((1, nums), (-1, dens)):
        for a in args:
            _, explicit, lg = pochhammer_parts(a, bases, ring)
            for e, c in lg.items():
                logsum[e] = logsum.get(e, ZERO) + sign * c
            factors.extend((sign, c, e) for c, e in explicit)
    out = Series(ring, logsum, ring.bounds).exp()
    for s, c, e in factors:
        f = ring.one() - monomial(ring, c, e)
        out = out * (f if s > 0 else f.invert())
    return out


# --- regional expansions -----------------------------------------------------
#
# A factor F(c·V) with V a spectral monomial can be expanded around V = 0 or
# around V = ∞.  Both the linear factor and θ satisfy F(cV) = -cV · F'(1/(cV)):
#   1 - cV = -cV (1 - W/c),   θ_p(cV) = -cV θ_p(W/c),   W = 1/V.
# The helpers below return the expansion around ∞ as a monomial prefactor
# (coefficient, power of V) times a series in W.

def reflected_prefactor(nums: Sequence, dens: Sequence):
    """(coefficient, power of V) picked up when every factor is reflected."""
    coef = ONE
    for c in nums:
        coef *= -to_q(c)
    for c in dens:
        coef /= -to_q(c)
    return coef, len(nums) - len(dens)


def coefficient_at(series_v: Series | None, var: str, n: int, series_w: Series | None = None,
                   wvar: str | None = None, prefactor=None) -> Series:
    """Coefficient of V^n of a regional expansion, as a series in the remaining variables.

    With ``series_w`` the expansion is prefactor·V^k·S(W); the V^n coefficient is
    coef·[W^{k-n}] S.
    """
    if series_w is None:
        return _extract(series_v, var, n)
    coef, k = prefactor
    return _extract(series_w, wvar, k - n).scale(coef)


def _extract(s: Series, var: str, n: int) -> Series:
    """Coefficient of raw var^n, as a series in the ring without ``var``.

    Variables that ``var`` is tied to are assumed to carry nonnegative raw
    exponents, which holds for nomes; the window on them is cut accordingly.
    """
    ring = s.ring
    i = ring.index(var)
    keep = [j for j in range(len(ring.names)) if j != i]
    new_ring = Ring(tuple(ring.names[j] for j in keep), tuple(ring.orders[j] for j in keep),
                    tuple(ring.kinds[j] for j in keep),
                    tuple(tuple(w for w in ring.ties[j] if w != var) for j in keep))
    terms = {}
    for e, c in s.terms.items():
        raw = ring.to_raw(e)
        if raw[i] != n:
            continue
        terms[new_ring.to_eff(tuple(raw[j] for j in keep))] = c
    tmat = ring._t
    win = []
    for j in keep:
        w = s.window[j] - n * tmat[j][i]
        if ring.names[j] in ring.ties[i]:
            w = min(w, s.window[i] - n)
        win.append(w)
    if not ring.ties[i] and n > s.window[i]:
        win = [-1] * len(keep)
    return Series(new_ring, terms, tuple(win))

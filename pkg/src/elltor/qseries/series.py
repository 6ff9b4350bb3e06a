"""Truncated multivariate Laurent series with exact rational coefficients.

Grading
-------
Every variable carries a raw exponent.  A variable may be *tied* to other
variables; its effective exponent is its raw exponent plus the raw exponents
of the variables it is tied to.  Truncation and exactness live on effective
exponents.  Tying a spectral variable ``z`` to a nome ``p`` makes terms like
``p^n z^-n`` (which appear in every theta function) have effective
z-exponent 0, so theta products stay finite and multiply without loss.

The total degree ``D`` of an exponent vector is the sum of its effective
exponents.  Inversion factors out the unique term of minimal ``D``; this
single rule yields the region convention ``1/(1 - c/x) = -(x/c) Σ (x/c)^k``.

Exactness
---------
Each series records an exact window ``W`` (one upper bound per variable on
effective exponents).  Every stored term lies inside ``W`` and every true
coefficient inside ``W`` is stored (zeros omitted).  Products use
``W = min(W1 + m2, W2 + m1)`` per variable, with ``m`` the smallest exponent
present (or ``W + 1`` if the series has no terms), which is exactly the
loss caused by negative exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from gmpy2 import mpq

from .._num import ONE, ZERO, to_q

INF = 10 ** 9


class SeriesError(ValueError):
    pass


class NonTruncatable(SeriesError):
    """An infinite product or inverse has no formal handle to truncate on."""


@dataclass(frozen=True)
class Ring:
    names: tuple[str, ...]
    orders: tuple[int, ...]
    kinds: tuple[str, ...]
    ties: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise SeriesError(f"duplicate variable names {self.names}")
        idx = {n: i for i, n in enumerate(self.names)}
        for name, tv in zip(self.names, self.ties):
            for w in tv:
                if w not in idx or w == name:
                    raise SeriesError(f"bad tie {name} -> {w}")
        object.__setattr__(self, "_idx", idx)
        # eff = T raw, T = identity + ties
        n = len(self.names)
        tmat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, tv in enumerate(self.ties):
            for w in tv:
                tmat[i][idx[w]] += 1
        object.__setattr__(self, "_t", tuple(tuple(r) for r in tmat))
        object.__setattr__(self, "_tinv", _int_inverse(tmat))
        bounds = tuple(self.orders[i] + sum(self.orders[idx[w]] for w in self.ties[i])
                       for i in range(n))
        object.__setattr__(self, "bounds", bounds)

    @classmethod
    def make(cls, nomes: Mapping[str, int] | None = None,
             spectral: Mapping[str, int] | None = None,
             ties: Mapping[str, Iterable[str]] | None = None) -> "Ring":
        """Build a ring; spectral variables are tied to every nome by default."""
        nomes = dict(nomes or {})
        spectral = dict(spectral or {})
        names = tuple(nomes) + tuple(spectral)
        orders = tuple(nomes.values()) + tuple(spectral.values())
        kinds = ("nome",) * len(nomes) + ("spectral",) * len(spectral)
        ties = dict(ties or {})
        tie_list = []
        for name in names:
            if name in ties:
                tie_list.append(tuple(ties[name]))
            elif name in spectral:
                tie_list.append(tuple(nomes))
            else:
                tie_list.append(())
        return cls(names, orders, kinds, tuple(tie_list))

    def index(self, name: str) -> int:
        try:
            return self._idx[name]
        except KeyError:
            raise SeriesError(f"unknown variable {name!r} in ring {self.names}") from None

    def to_eff(self, raw: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, raw)) for row in self._t)

    def to_raw(self, eff: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, eff)) for row in self._tinv)

    def raw_vector(self, exps: Mapping[str, int]) -> tuple[int, ...]:
        raw = [0] * len(self.names)
        for k, v in exps.items():
            raw[self.index(k)] += int(v)
        return tuple(raw)

    # constructors -------------------------------------------------------
    def zero(self) -> "Series":
        return Series(self, {}, self.bounds)

    def const(self, c) -> "Series":
        c = to_q(c)
        zero = (0,) * len(self.names)
        return Series(self, {zero: c} if c else {}, self.bounds, exact_monomial=(c, zero))

    def one(self) -> "Series":
        return self.const(1)

    def mono(self, c=1, **exps: int) -> "Series":
        """The monomial c · Π v^{e_v} (raw exponents), exact everywhere."""
        c = to_q(c)
        eff = self.to_eff(self.raw_vector(exps))
        terms = {eff: c} if c and all(e <= b for e, b in zip(eff, self.bounds)) else {}
        return Series(self, terms, self.bounds, exact_monomial=(c, eff))

    def var(self, name: str) -> "Series":
        return self.mono(1, **{name: 1})

    def with_orders(self, **orders: int) -> "Ring":
        new = list(self.orders)
        for k, v in orders.items():
            new[self.index(k)] = v
        return Ring(self.names, tuple(new), self.kinds, self.ties)

    def describe(self) -> list[dict]:
        return [{"name": n, "kind": k, "order": o, "ties": list(tv)}
                for n, k, o, tv in zip(self.names, self.kinds, self.orders, self.ties)]


def _int_inverse(m: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    n = len(m)
    a = [[mpq(x) for x in row] + [mpq(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = []
    for row in a:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise SeriesError("tie matrix is not unimodular")
        out.append(tuple(int(v) for v in vals))
    return tuple(out)


def _degree(e: tuple[int, ...]) -> int:
    return sum(e)


class Series:
    """Immutable truncated series; see the module docstring for semantics."""

    __slots__ = ("ring", "terms", "window", "_mono")

    def __init__(self, ring: Ring, terms: dict, window: tuple[int, ...],
                 exact_monomial=None):
        self.ring = ring
        self.window = tuple(min(w, b) for w, b in zip(window, ring.bounds))
        w = self.window
        self.terms = {e: c for e, c in terms.items()
                      if c and all(a <= b for a, b in zip(e, w))}
        # a monomial keeps its full value so that out-of-box shifts stay exact
        self._mono = exact_monomial

    # --- basic accessors ----------------------------------------------------
    def __repr__(self) -> str:
        return f"Series({self.ring.names}, {len(self.terms)} terms, window={self.window})"

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, **exps: int) -> mpq:
        eff = self.ring.to_eff(self.ring.raw_vector(exps))
        if any(a > b for a, b in zip(eff, self.window)):
            raise SeriesError(f"coefficient {exps} lies outside the exact window")
        return self.terms.get(eff, ZERO)

    def coeff_raw(self, raw: tuple[int, ...]) -> mpq:
        eff = self.ring.to_eff(raw)
        if any(a > b for a, b in zip(eff, self.window)):
            raise SeriesError(f"coefficient {raw} lies outside the exact window")
        return self.terms.get(eff, ZERO)

    def raw_items(self):
        to_raw = self.ring.to_raw
        return [(to_raw(e), c) for e, c in self.terms.items()]

    def min_exponents(self) -> tuple[int, ...]:
        n = len(self.ring.names)
        if not self.terms:
            return tuple(w + 1 for w in self.window)
        return tuple(min(e[i] for e in self.terms) for i in range(n))

    def as_monomial(self):
        """(coefficient, eff exponent) if this series is a single exact monomial."""
        if self._mono is not None:
            return self._mono
        return None

    def constant_term(self) -> mpq:
        return self.terms.get((0,) * len(self.ring.names), ZERO)

    # --- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            if other.ring != self.ring:
                raise SeriesError(f"incompatible rings {self.ring.names} / {other.ring.names}")
            return other
        return self.ring.const(other)

    def __add__(self, other) -> "Series":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, ZERO) + c
        win = tuple(min(a, b) for a, b in zip(self.window, other.window))
        return Series(self.ring, terms, win)

    __radd__ = __add__

    def __neg__(self) -> "Series":
        mono = None if self._mono is None else (-self._mono[0], self._mono[1])
        return Series(self.ring, {e: -c for e, c in self.terms.items()}, self.window, mono)

    def __sub__(self, other) -> "Series":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Series":
        return self._coerce(other) - self

    def scale(self, c) -> "Series":
        c = to_q(c)
        mono = None if self._mono is None else (c * self._mono[0], self._mono[1])
        return Series(self.ring, {e: c * v for e, v in self.terms.items()}, self.window, mono)

    def __mul__(self, other) -> "Series":
        if not isinstance(other, Series):
            return self.scale(other)
        other = self._coerce(other)
        return mul(self, other)

    def __rmul__(self, other) -> "Series":
        return self.scale(other)

    def __truediv__(self, other) -> "Series":
        if not isinstance(other, Series):
            return self.scale(ONE / to_q(other))
        return self * other.invert()

    def __rtruediv__(self, other) -> "Series":
        return self.invert().scale(other)

    def __pow__(self, n: int) -> "Series":
        if n < 0:
            return self.invert() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, c, eff: tuple[int, ...]) -> "Series":
        """Multiply by the monomial c·(eff exponent vector)."""
        c = to_q(c)
        terms = {tuple(a + b for a, b in zip(e, eff)): c * v for e, v in self.terms.items()}
        win = tuple(w + s if w < INF else w for w, s in zip(self.window, eff))
        return Series(self.ring, terms, win)

    def invert(self) -> "Series":
        mono = self.as_monomial()
        if mono is not None:
            c, e = mono
            if not c:
                raise SeriesError("division by zero monomial")
            neg = tuple(-x for x in e)
            ring = self.ring
            terms = {neg: ONE / c} if all(a <= b for a, b in zip(neg, ring.bounds)) else {}
            return Series(ring, terms, ring.bounds, exact_monomial=(ONE / c, neg))
        if not self.terms:
            raise SeriesError("cannot invert a series with no known terms")
        dmin = min(_degree(e) for e in self.terms)
        lead = [e for e in self.terms if _degree(e) == dmin]
        if len(lead) != 1:
            raise NonTruncatable(f"no unique leading monomial (candidates {len(lead)})")
        e0 = lead[0]
        c0 = self.terms[e0]
        neg = tuple(-x for x in e0)
        # r = s/(c0 M) - 1 : all components must be nonnegative
        cap = tuple(b + x for b, x in zip(self.ring.bounds, e0))
        r_terms = {}
        for e, c in self.terms.items():
            if e == e0:
                continue
            d = tuple(a - b for a, b in zip(e, e0))
            if any(x < 0 for x in d):
                raise NonTruncatable("leading monomial does not dominate every term")
            r_terms[d] = c / c0
        win_r = tuple(min(w - x, cp) for w, x, cp in zip(self.window, e0, cap))
        geo = _geometric(r_terms, win_r)
        terms = {}
        inv_c0 = ONE / c0
        for e, c in geo.items():
            terms[tuple(a - b for a, b in zip(e, e0))] = c * inv_c0
        win = tuple(w - x for w, x in zip(win_r, e0))
        return Series(self.ring, terms, win)

    def exp(self) -> "Series":
        if self.constant_term():
            raise SeriesError("exp needs a vanishing constant term")
        for e in self.terms:
            if _degree(e) < 1 or any(x < 0 for x in e):
                raise NonTruncatable("exp argument has a term without positive formal degree")
        return Series(self.ring, _exp_terms(self.terms, self.window), self.window)

    def log(self) -> "Series":
        if self.constant_term() != 1:
            raise SeriesError("log needs constant term 1")
        zero = (0,) * len(self.ring.names)
        r = {e: c for e, c in self.terms.items() if e != zero}
        for e in r:
            if _degree(e) < 1 or any(x < 0 for x in e):
                raise NonTruncatable("log argument has a term without positive formal degree")
        return Series(self.ring, _log_terms(r, self.window), self.window)

    # --- comparison -------------------------------------------------------
    def agree(self, other: "Series") -> tuple[bool, dict | None]:
        """Compare on the intersection of exact windows.

        Returns (ok, first mismatch) where the mismatch reports raw exponents
        and both coefficients.
        """
        other = self._coerce(other)
        win = tuple(min(a, b) for a, b in zip(self.window, other.window))
        keys = {e for e in self.terms if all(a <= b for a, b in zip(e, win))}
        keys |= {e for e in other.terms if all(a <= b for a, b in zip(e, win))}
        for e in sorted(keys, key=lambda k: (_degree(self.ring.to_raw(k)), self.ring.to_raw(k))):
            a = self.terms.get(e, ZERO)
            b = other.terms.get(e, ZERO)
            if a != b:
                return False, {"exponent": dict(zip(self.ring.names, self.ring.to_raw(e))),
                               "lhs": str(a), "rhs": str(b)}
        return True, None

    def __eq__(self, other) -> bool:  # pragma: no cover - guard against misuse
        raise TypeError("use Series.agree for window-aware comparison")

    __hash__ = None

    def covers(self, orders: Mapping[str, int] | None = None) -> bool:
        """True if the raw box [.., order] in every variable is inside the window."""
        ring = self.ring
        orders = dict(zip(ring.names, ring.orders)) | dict(orders or {})
        for i, tv in enumerate(ring.ties):
            need = orders[ring.names[i]] + sum(orders[w] for w in tv)
            if need > self.window[i]:
                return False
        return True

    # --- restriction / embedding -----------------------------------------
    def drop(self, name: str) -> "Series":
        """Coefficient of name^0, as a series in the ring without ``name``."""
        ring = self.ring
        i = ring.index(name)
        keep = [j for j in range(len(ring.names)) if j != i]
        new_ring = Ring(tuple(ring.names[j] for j in keep), tuple(ring.orders[j] for j in keep),
                        tuple(ring.kinds[j] for j in keep),
                        tuple(tuple(w for w in ring.ties[j] if w != name) for j in keep))
        terms = {}
        for e, c in self.terms.items():
            raw = ring.to_raw(e)
            if raw[i] != 0:
                continue
            terms[new_ring.to_eff(tuple(raw[j] for j in keep))] = c
        return Series(new_ring, terms, tuple(self.window[j] for j in keep))

    def embed(self, ring: Ring) -> "Series":
        """View this series inside a ring with more variables."""
        src = self.ring
        for n in src.names:
            ring.index(n)
        terms = {}
        for e, c in self.terms.items():
            raw = dict(zip(src.names, src.to_raw(e)))
            terms[ring.to_eff(ring.raw_vector(raw))] = c
        win = []
        for n, b in zip(ring.names, ring.bounds):
            win.append(self.window[src.index(n)] if n in src._idx else b)
        return Series(ring, terms, tuple(win))

    def substitute_zero(self, name: str) -> "Series":
        """Set a variable to zero but stay in the same ring."""
        i = self.ring.index(name)
        terms = {e: c for e, c in self.terms.items() if self.ring.to_raw(e)[i] == 0}
        return Series(self.ring, terms, self.window)

    # --- serialization ----------------------------------------------------
    def raw_box_items(self):
        """Exact terms inside the symmetric raw box of the ring, graded-lex sorted."""
        ring = self.ring
        out = []
        for e, c in self.terms.items():
            raw = ring.to_raw(e)
            ok = True
            for x, o, k in zip(raw, ring.orders, ring.kinds):
                if x > o or (k == "spectral" and x < -o):
                    ok = False
                    break
            if ok:
                out.append((raw, c))
        out.sort(key=lambda rc: (sum(rc[0]), rc[0]))
        return out

    def to_json(self) -> dict:
        return {
            "variables": self.ring.describe(),
            "exact": self.covers(),
            "terms": [[list(raw), str(int(c.numerator)), str(int(c.denominator))]
                      for raw, c in self.raw_box_items()],
        }

    def pretty(self, limit: int = 12) -> str:
        items = self.raw_box_items()
        parts = []
        for raw, c in items[:limit]:
            mon = "*".join(f"{n}^{x}" if x != 1 else n
                           for n, x in zip(self.ring.names, raw) if x)
            parts.append(f"({c})" + (f"*{mon}" if mon else ""))
        tail = " + ..." if len(items) > limit else ""
        return " + ".join(parts) + tail if parts else "0"


# ---------------------------------------------------------------------------
# kernels on raw dictionaries (all exponents already known to be >= 0 where
# the caller relies on it)

def _within(e, w):
    for a, b in zip(e, w):
        if a > b:
            return False
    return True


def _dict_mul(a: dict, b: dict, win) -> dict:
    out: dict = {}
    if len(a) > len(b):
        a, b = b, a
    n = len(win)
    get = out.get
    if n == 1:
        w0 = win[0]
        for (e0,), c in a.items():
            lim = w0 - e0
            for (f0,), d in b.items():
                if f0 <= lim:
                    k = (e0 + f0,)
                    out[k] = get(k, ZERO) + c * d
        return out
    if n == 2:
        w0, w1 = win
        for (e0, e1), c in a.items():
            l0 = w0 - e0
            l1 = w1 - e1
            for (f0, f1), d in b.items():
                if f0 <= l0 and f1 <= l1:
                    k = (e0 + f0, e1 + f1)
                    out[k] = get(k, ZERO) + c * d
        return out
    for e, c in a.items():
        lim = tuple(w - x for w, x in zip(win, e))
        for f, d in b.items():
            if _within(f, lim):
                k = tuple(x + y for x, y in zip(e, f))
                out[k] = get(k, ZERO) + c * d
    return out


def mul(a: Series, b: Series) -> Series:
    ma, mb = a.as_monomial(), b.as_monomial()
    if ma is not None and mb is not None:
        c = ma[0] * mb[0]
        e = tuple(x + y for x, y in zip(ma[1], mb[1]))
        ring = a.ring
        terms = {e: c} if c and all(x <= y for x, y in zip(e, ring.bounds)) else {}
        return Series(ring, terms, ring.bounds, exact_monomial=(c, e))
    if ma is not None:
        return b.shift(*ma)
    if mb is not None:
        return a.shift(*mb)
    m1 = a.min_exponents()
    m2 = b.min_exponents()
    win = tuple(min(w1 + x2, w2 + x1, bd)
                for w1, w2, x1, x2, bd in zip(a.window, b.window, m1, m2, a.ring.bounds))
    return Series(a.ring, _dict_mul(a.terms, b.terms, win), win)


def _geometric(r: dict, win) -> dict:
    """Σ_k (-r)^k for r with nonnegative exponents of positive degree."""
    n = len(win)
    zero = (0,) * n
    acc = {zero: ONE}
    term = {zero: ONE}
    neg = {e: -c for e, c in r.items() if _within(e, win)}
    while True:
        term = {e: c for e, c in _dict_mul(term, neg, win).items() if c}
        if not term:
            break
        for e, c in term.items():
            acc[e] = acc.get(e, ZERO) + c
    return acc


def _graded(terms: dict) -> dict[int, dict]:
    out: dict[int, dict] = {}
    for e, c in terms.items():
        out.setdefault(_degree(e), {})[e] = c
    return out


def _exp_terms(terms: dict, win) -> dict:
    n = len(win)
    zero = (0,) * n
    pieces = _graded(terms)
    dmax = sum(win)
    e_pieces: dict[int, dict] = {0: {zero: ONE}}
    for deg in range(1, dmax + 1):
        acc: dict = {}
        for k, sk in pieces.items():
            if k > deg or (deg - k) not in e_pieces:
                continue
            prod = _dict_mul(sk, e_pieces[deg - k], win)
            for e, c in prod.items():
                acc[e] = acc.get(e, ZERO) + k * c
        inv = mpq(1, deg)
        piece = {e: c * inv for e, c in acc.items() if c}
        if piece:
            e_pieces[deg] = piece
    out: dict = {}
    for piece in e_pieces.values():
        out.update(piece)
    return out


def _log_terms(r: dict, win) -> dict:
    # s = 1 + r ; n s_n = Σ_{k=1}^{n} k L_k s_{n-k}
    s_pieces = _graded(r)
    dmax = sum(win)
    n = len(win)
    zero = (0,) * n
    s_pieces[0] = {zero: ONE}
    l_pieces: dict[int, dict] = {}
    for deg in range(1, dmax + 1):
        acc = {e: deg * c for e, c in s_pieces.get(deg, {}).items()}
        for k in range(1, deg):
            if k not in l_pieces or (deg - k) not in s_pieces:
                continue
            prod = _dict_mul(l_pieces[k], s_pieces[deg - k], win)
            for e, c in prod.items():
                acc[e] = acc.get(e, ZERO) - k * c
        inv = mpq(1, deg)
        piece = {e: c * inv for e, c in acc.items() if c}
        if piece:
            l_pieces[deg] = piece
    out: dict = {}
    for piece in l_pieces.values():
        out.update(piece)
    return out

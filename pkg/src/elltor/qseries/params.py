"""Exact parameter points (q, t) stored through their fourth roots."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

from .._num import to_q


class ParamError(ValueError):
    pass


@dataclass(frozen=True)
class ParamPoint:
    q_quarter: Fraction = Fraction(2, 3)
    t_quarter: Fraction = Fraction(3, 5)
    guard_range: int = 24
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        qq = Fraction(self.q_quarter)
        tq = Fraction(self.t_quarter)
        if qq == 0 or tq == 0:
            raise ParamError("quarter roots must be nonzero")
        if self.guard_range < 1:
            raise ParamError("guard_range must be positive")
        object.__setattr__(self, "q_quarter", qq)
        object.__setattr__(self, "t_quarter", tq)
        _check_guard(qq, tq, self.guard_range)

    @property
    def q(self) -> mpq:
        return self.power(1, 0)

    @property
    def t(self) -> mpq:
        return self.power(0, 1)

    def power(self, qe: int, te: int, denom: int = 1) -> mpq:
        """q^{qe/denom} t^{te/denom}; denom must divide 4."""
        if 4 % denom:
            raise ParamError(f"only quarter powers are rational here (denom={denom})")
        key = (qe * (4 // denom), te * (4 // denom))
        val = self._cache.get(key)
        if val is None:
            val = to_q(self.q_quarter) ** key[0] * to_q(self.t_quarter) ** key[1]
            self._cache[key] = val
        return val

    def tq(self, e: int, denom: int = 1) -> mpq:
        """(t/q)^{e/denom}."""
        return self.power(-e, e, denom)

    def kappa(self, m: int) -> mpq:
        """κ_m = (1 - q^m)(1 - t^{-m})(1 - (t/q)^m)."""
        return (1 - self.power(m, 0)) * (1 - self.power(0, -m)) * (1 - self.tq(m))

    def describe(self) -> dict:
        return {"q_quarter": str(self.q_quarter), "t_quarter": str(self.t_quarter),
                "guard_range": self.guard_range}


@lru_cache(maxsize=None)
def _check_guard(qq: Fraction, tq: Fraction, rng: int) -> None:
    q = qq ** 4
    t = tq ** 4
    for a in range(-rng, rng + 1):
        qa = q ** a
        for b in range(-rng, rng + 1):
            if (a, b) != (0, 0) and qa * t ** b == 1:
                raise ParamError(f"q^{a} t^{b} = 1 at this parameter point")


def parse_quarter(text: str) -> Fraction:
    try:
        val = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParamError(f"unparsable quarter root {text!r}") from exc
    if val == 0:
        raise ParamError("quarter roots must be nonzero")
    return val


DEFAULT = ParamPoint()

"""Young diagram combinatorics.

Boxes are 1-based ``(i, j)`` pairs (row, column).  Arm and leg lengths are
defined for any box, not only boxes of the diagram, because the Nekrasov
kernels mix the arm of one partition with the leg of another.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(x < 0 for x in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"2,1"``; ``"0"`` or the empty string give the empty partition."""
        text = text.strip()
        if text in ("", "0", "()", "∅"):
            return cls(())
        try:
            parts = tuple(int(x) for x in text.split(","))
        except ValueError as exc:
            raise ValueError(f"unparsable partition {text!r}") from exc
        return cls(parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "∅"

    def row(self, i: int) -> int:
        """λ_i with 1-based index; zero beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def col(self, j: int) -> int:
        """λ'_j with 1-based index."""
        return sum(1 for x in self.parts if x >= j) if j >= 1 else 0

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(self.col(j) for j in range(1, self.parts[0] + 1)))

    def boxes(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.parts, 1) for j in range(1, r + 1)]

    def arm(self, box: tuple[int, int]) -> int:
        i, j = box
        return self.row(i) - j

    def leg(self, box: tuple[int, int]) -> int:
        i, j = box
        return self.col(j) - i

    def addable(self) -> list[tuple[int, int]]:
        out = []
        for i in range(1, self.length + 2):
            j = self.row(i) + 1
            if i == 1 or self.row(i - 1) >= j:
                out.append((i, j))
        return out

    def removable(self) -> list[tuple[int, int]]:
        return [(i, self.row(i)) for i in range(1, self.length + 1)
                if self.row(i) > self.row(i + 1)]

    def n(self) -> int:
        """n(λ) = Σ (i-1) λ_i."""
        return sum(i * x for i, x in enumerate(self.parts))

    def n_conj(self) -> int:
        """n(λ') = Σ λ_i (λ_i - 1) / 2."""
        return sum(x * (x - 1) // 2 for x in self.parts)

    def add_box(self, i: int) -> "Partition | None":
        """λ + 1_i, or None when the result is not a partition."""
        parts = list(self.parts) + [0] * max(0, i - self.length)
        parts[i - 1] += 1
        if i > 1 and parts[i - 1] > parts[i - 2]:
            return None
        return Partition(tuple(parts))

    def remove_box(self, i: int) -> "Partition | None":
        """λ - 1_i, or None when the result is not a partition."""
        if self.row(i) == 0 or self.row(i) == self.row(i + 1):
            return None
        parts = list(self.parts)
        parts[i - 1] -= 1
        return Partition(tuple(parts))


EMPTY = Partition(())


def _descending(n: int, cap: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, cap), 0, -1):
        for rest in _descending(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n in lexicographically descending order."""
    if n < 0:
        return ()
    return tuple(Partition(p) for p in _descending(n, n))


def partitions_up_to(n: int) -> list[Partition]:
    return [lam for k in range(n + 1) for lam in enumerate_partitions(k)]


def enumerate_tuples(m: int, k: int) -> list[tuple[Partition, ...]]:
    """M-tuples of partitions with total size k.

    Ordered by the size vector (descending lexicographic, so the first slot
    fills first) and then by each slot's descending partition order.
    """
    out: list[tuple[Partition, ...]] = []

    def sizes(slots: int, total: int) -> Iterator[tuple[int, ...]]:
        if slots == 1:
            yield (total,)
            return
        for s in range(total, -1, -1):
            for rest in sizes(slots - 1, total - s):
                yield (s,) + rest

    def fill(sv: Sequence[int], acc: tuple[Partition, ...]):
        if not sv:
            out.append(acc)
            return
        for lam in enumerate_partitions(sv[0]):
            fill(sv[1:], acc + (lam,))

    if m <= 0:
        return [()] if k == 0 else []
    for sv in sizes(m, k):
        fill(sv, ())
    return out


def framing_exponents(lam: Partition) -> tuple[int, "tuple[int, int]", "tuple[int, int]"]:
    """Sign and (numerator, 2) exponents of q and t in the framing factor.

    f_λ = (-1)^{|λ|} q^{n(λ') + |λ|/2} t^{-n(λ) - |λ|/2}; exponents are
    returned as half-integers ``(2*e, 2)`` so callers stay exact.
    """
    k = lam.size
    sign = -1 if k % 2 else 1
    return sign, (2 * lam.n_conj() + k, 2), (-2 * lam.n() - k, 2)


def ladder(lam: Partition, length: int) -> list[tuple[int, int]]:
    """Exponent pairs (a, b) with u_i / u = q^a t^b for i = 1..length."""
    return [(lam.row(i), 1 - i) for i in range(1, length + 1)]


def framing_factor(lam: Partition, params) -> "object":
    """f_λ(q, t) as an exact rational at the given parameter point."""
    sign, (qe, _), (te, _) = framing_exponents(lam)
    return sign * params.power(qe, te, denom=2)

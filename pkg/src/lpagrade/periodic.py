"""Eventually periodic sets of natural numbers."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable


@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """``{l : l in exceptions}`` below ``threshold``; ``l % period in residues`` from there on.

    Instances are always canonical (minimal period, then minimal threshold), so
    two sets are equal exactly when their fields are equal.
    """

    exceptions: frozenset[int]
    threshold: int
    period: int
    residues: frozenset[int]

    def __post_init__(self) -> None:
        if self.period <= 0:
            raise ValueError("period must be positive")
        if self.threshold < 0:
            raise ValueError("threshold must be non-negative")
        exc = frozenset(self.exceptions)
        res = frozenset(self.residues)
        if any(x < 0 for x in exc):
            raise ValueError("exceptions must be natural numbers")
        if any(not 0 <= r < self.period for r in res):
            raise ValueError("residues must lie in 0..period-1")

        p, t0 = self.period, self.threshold
        periodic = lambda n: n % p in res  # noqa: E731
        member = lambda n: periodic(n) if n >= t0 else n in exc  # noqa: E731
        # the least period divides every period
        for d in sorted(d for d in range(1, p + 1) if p % d == 0):
            if all(periodic(n) == periodic(n + d) for n in range(t0, t0 + p)):
                break
        res = frozenset(n % d for n in range(t0, t0 + d) if periodic(n))
        while t0 > 0 and member(t0 - 1) == ((t0 - 1) % d in res):
            t0 -= 1
        object.__setattr__(self, "exceptions", frozenset(x for x in exc if x < t0))
        object.__setattr__(self, "threshold", t0)
        object.__setattr__(self, "period", d)
        object.__setattr__(self, "residues", res)

    # -- constructors ------------------------------------------------------

    @classmethod
    def empty(cls) -> EventuallyPeriodicSet:
        return cls(frozenset(), 0, 1, frozenset())

    @classmethod
    def finite(cls, members: Iterable[int]) -> EventuallyPeriodicSet:
        ms = frozenset(members)
        return cls(ms, max(ms, default=-1) + 1, 1, frozenset())

    @classmethod
    def interval(cls, lo: int, hi: int) -> EventuallyPeriodicSet:
        """``{lo, ..., hi}`` (empty when ``hi < lo``)."""
        return cls.finite(range(max(lo, 0), hi + 1))

    @classmethod
    def at_least(cls, lo: int) -> EventuallyPeriodicSet:
        return cls(frozenset(), max(lo, 0), 1, frozenset({0}))

    # -- queries -----------------------------------------------------------

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        if n >= self.threshold:
            return n % self.period in self.residues
        return n in self.exceptions

    def members(self, upto: int) -> list[int]:
        """All members ``<= upto`` in increasing order."""
        return [n for n in range(upto + 1) if n in self]

    @property
    def is_finite(self) -> bool:
        return not self.residues

    def max(self) -> int | None:
        """Largest member of a finite set (None for an empty set)."""
        if not self.is_finite:
            raise ValueError("infinite set has no maximum")
        return max(self.exceptions, default=None)

    def _combine(self, other: EventuallyPeriodicSet, op) -> EventuallyPeriodicSet:
        p = lcm(self.period, other.period)
        t0 = max(self.threshold, other.threshold)
        exc = frozenset(n for n in range(t0) if op(n in self, n in other))
        res = frozenset(r for r in range(p) if op((t0 + r) in self, (t0 + r) in other))
        res = frozenset((t0 + r) % p for r in res)
        return EventuallyPeriodicSet(exc, t0, p, res)

    def union(self, other: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
        return self._combine(other, lambda a, b: a or b)

    def intersection(self, other: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
        return self._combine(other, lambda a, b: a and b)

    __or__ = union
    __and__ = intersection

    def shift(self, d: int) -> EventuallyPeriodicSet:
        """``{n + d : n in self, n + d >= 0}``."""
        t0 = max(self.threshold + d, 0)
        exc = frozenset(n + d for n in self.exceptions if n + d >= 0)
        exc = frozenset(n for n in exc if n < t0)
        res = frozenset((r + d) % self.period for r in self.residues)
        return EventuallyPeriodicSet(exc, t0, self.period, res)

    def __str__(self) -> str:
        if self.is_finite:
            return "{" + ", ".join(map(str, sorted(self.exceptions))) + "}"
        head = ", ".join(map(str, sorted(self.exceptions)))
        tail = f"n >= {self.threshold} with n mod {self.period} in {sorted(self.residues)}"
        return "{" + (head + "; " if head else "") + tail + "}"


def ep_membership(s: EventuallyPeriodicSet, n: int) -> bool:
    return n in s

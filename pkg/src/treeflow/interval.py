"""Parity intervals and the merge product used by the tree dynamic program.

A parity interval ``<lo, hi>`` is the set ``{lo, lo + 2, ..., hi}``.  The
product ``A (x) B`` collects every value ``x1 + x2 - 2y`` with ``x1`` in
``A``, ``x2`` in ``B`` and ``0 <= y <= min(x1, x2)``: the flow leaving a
vertex when ``y`` units from each child side are paired across it.

The hot loops in :mod:`treeflow.solver` call the integer-level functions
(:func:`otimes_bounds`, :func:`split_bounds`) directly to avoid allocating
an object per edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


class DomainError(ValueError):
    """Raised when a value is not a member of the interval it is split over."""


@dataclass(frozen=True)
class ParityInterval:
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo < 0 or self.hi < self.lo or (self.hi - self.lo) % 2:
            raise ValueError(f"not a parity interval: <{self.lo}, {self.hi}>")

    @classmethod
    def point(cls, value: int) -> "ParityInterval":
        return cls(value, value)

    def __contains__(self, x: object) -> bool:
        return (
            isinstance(x, int)
            and self.lo <= x <= self.hi
            and (x - self.lo) % 2 == 0
        )

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1, 2))

    def __len__(self) -> int:
        return (self.hi - self.lo) // 2 + 1

    def __str__(self) -> str:
        return f"<{self.lo},{self.hi}>"

    def otimes(self, other: "ParityInterval") -> "ParityInterval":
        return otimes(self, other)


def otimes_bounds(a1: int, b1: int, a2: int, b2: int) -> tuple[int, int]:
    """Endpoints of ``<a1,b1> (x) <a2,b2>``."""
    hi = b1 + b2
    if b2 < a1:
        return a1 - b2, hi
    if b1 < a2:
        return a2 - b1, hi
    # ranges overlap: they share a member iff their parities agree
    return (a1 - a2) & 1, hi


def otimes(A: ParityInterval, B: ParityInterval) -> ParityInterval:
    lo, hi = otimes_bounds(A.lo, A.hi, B.lo, B.hi)
    return ParityInterval(lo, hi)


def split_bounds(a1: int, b1: int, a2: int, b2: int, x: int) -> tuple[int, int, int]:
    """Return ``(x1, x2, y)`` with ``x = x1 + x2 - 2y`` in O(1).

    The side with the larger upper end takes the "large" role and receives
    the largest value any witness can give it.  A dominating child always
    has the strictly larger upper end, so it gets the large role without
    being named; with equal upper ends both roles yield the same triple.
    """
    lo, hi = otimes_bounds(a1, b1, a2, b2)
    if x < lo or x > hi or (x - lo) & 1:
        raise DomainError(f"{x} not in <{a1},{b1}> (x) <{a2},{b2}> = <{lo},{hi}>")
    swap = b1 > b2
    if swap:
        a1, b1, a2, b2 = a2, b2, a1, b1
    # now side 1 is small (b1 <= b2)
    if x <= b2 - b1:
        x1, x2, y = b1, x + b1, b1
    else:
        x1, x2, y = b1, b2, (b1 + b2 - x) // 2
    if swap:
        return x2, x1, y
    return x1, x2, y


def split(A: ParityInterval, B: ParityInterval, x: int) -> tuple[int, int, int]:
    return split_bounds(A.lo, A.hi, B.lo, B.hi, x)

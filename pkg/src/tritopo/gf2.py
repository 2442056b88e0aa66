"""Sparse linear algebra over GF(2) with Python integers as bitset columns.

A column is an ``int`` whose bit ``i`` is set when row ``i`` holds a one.
Pivots are the lowest set bit of each reduced column, so elimination order
(and therefore every witness returned) is fully determined by the row and
column orderings chosen by the caller.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence


def lowbit(x: int) -> int:
    """Index of the lowest set bit of a nonzero integer."""
    return (x & -x).bit_length() - 1


def bits(x: int) -> list[int]:
    """Indices of the set bits of ``x`` in increasing order."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def to_bitset(indices: Iterable[int]) -> int:
    x = 0
    for i in indices:
        x ^= 1 << i
    return x


class Eliminator:
    """Incremental column reduction keeping track of column combinations.

    Each added column is reduced against the current pivots.  If it becomes
    zero it is a dependency; otherwise its lowest bit becomes a new pivot.
    ``combo`` records which original columns were summed to obtain each
    reduced column, which is what turns rank computations into witnesses.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, tuple[int, int]] = {}
        self.ncols = 0

    def reduce(self, col: int, combo: int = 0) -> tuple[int, int]:
        pivots = self.pivots
        while col:
            low = lowbit(col)
            hit = pivots.get(low)
            if hit is None:
                break
            col ^= hit[0]
            combo ^= hit[1]
        return col, combo

    def add(self, col: int) -> bool:
        """Add a column; return True when it increased the rank."""
        idx = self.ncols
        self.ncols += 1
        col, combo = self.reduce(col, 1 << idx)
        if col:
            self.pivots[lowbit(col)] = (col, combo)
            return True
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, target: int) -> int | None:
        """Combination of added columns summing to ``target``, or None."""
        rest, combo = self.reduce(target, 0)
        if rest:
            return None
        return combo


def rank(columns: Sequence[int]) -> int:
    e = Eliminator()
    for c in columns:
        e.add(c)
    return e.rank


def kernel_basis(columns: Sequence[int]) -> list[int]:
    """Basis of the null space, each vector a bitset over column indices."""
    e = Eliminator()
    basis = []
    for idx, col in enumerate(columns):
        rest, combo = e.reduce(col, 1 << idx)
        e.ncols += 1
        if rest:
            e.pivots[lowbit(rest)] = (rest, combo)
        else:
            basis.append(combo)
    return basis

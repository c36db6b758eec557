"""Graded Betti data of the minimal free resolution of a Jacobian algebra.

A table records, for a hypersurface of degree d in n+1 variables, the sorted
shift multisets d_k = (d_{k,1} <= ... <= d_{k,m_k}) for k = 1..n.  The first
two steps of the resolution are fixed (the ring itself and n+1 generators in
degree d-1), so the columns here carry all remaining information.

Basic well-formedness is enforced on construction; mathematically meaningful
constraints (such as m_1 >= n) live in the rule engine so that violating
tables can still be loaded and reported as obstructed.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BettiTable:
    n: int
    d: int
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        if self.d < 3:
            raise ValueError("need d >= 3")
        if len(self.columns) != self.n:
            raise ValueError(f"expected {self.n} columns, got {len(self.columns)}")
        for k, col in enumerate(self.columns, start=1):
            if not isinstance(col, tuple):
                raise ValueError(f"column {k} must be a tuple")
            for e in col:
                if not isinstance(e, int) or e < 0:
                    raise ValueError(f"column {k} entries must be non-negative integers")
            if any(a > b for a, b in zip(col, col[1:])):
                raise ValueError(f"column {k} must be sorted non-decreasingly")

    @classmethod
    def of(cls, n: int, d: int, columns) -> "BettiTable":
        """Build from a mapping {k: degrees} or a sequence of degree lists.

        Missing columns are empty; each column is sorted here, so callers
        may pass degrees in any order.
        """
        if isinstance(columns, dict):
            cols = [tuple(sorted(columns.get(k, ()))) for k in range(1, n + 1)]
        else:
            cols = [tuple(sorted(c)) for c in columns]
            cols += [()] * (n - len(cols))
        return cls(n, d, tuple(cols))

    def m(self, k: int) -> int:
        """Number of shifts in column k (1-based)."""
        return len(self.column(k))

    def column(self, k: int) -> tuple[int, ...]:
        if not 1 <= k <= self.n:
            raise ValueError(f"column index {k} out of range 1..{self.n}")
        return self.columns[k - 1]

    def max_nonempty(self):
        """Largest k with m_k > 0, or None when every column is empty."""
        nonempty = [k for k in range(1, self.n + 1) if self.m(k)]
        return max(nonempty) if nonempty else None

    def __str__(self):
        cols = ", ".join(
            f"d_{k}={list(self.column(k))}" for k in range(1, self.n + 1)
        )
        return f"BettiTable(n={self.n}, d={self.d}, {cols})"

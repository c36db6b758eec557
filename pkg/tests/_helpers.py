"""Independent oracles and generators shared by the test modules.

The rank oracle here is deliberately a different algorithm (dense Gaussian
elimination over Fractions) from anything in the package, so it can sit on
the other side of cross-checks.
"""

from __future__ import annotations

import random
from fractions import Fraction

from singulus.tables import BettiTable


def dense_rational_rank(rows) -> int:
    """Plain Gaussian elimination on a dense list-of-lists copy."""
    a = [[Fraction(v) for v in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][c]
        a[rank] = [v * inv for v in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][c]:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[rank])]
        rank += 1
    return rank


def repaired_table(rng: random.Random, n: int, d: int, t: int):
    """One attempt at a random table satisfying the alternating power-sum
    constraints for exponents 0..t-1.

    Random columns are drawn first; then the multiplicities of t pinned,
    distinct shift values are solved for exactly so that sigma_0 = n and
    sigma_j matches its expected value for 1 <= j < t.  Attempts whose
    exact solution is non-integral or negative return None.
    """
    if not 2 <= t <= n:
        raise ValueError("need 2 <= t <= n")
    columns = {}
    for k in range(1, n + 1):
        m = rng.randint(n, n + 3) if k == 1 else rng.randint(0, 4)
        columns[k] = [rng.randint(1, 3 * (d - 1)) for _ in range(m)]

    def fixed_sigma(j):
        total = 0
        for k in range(1, n + 1):
            s = sum(e**j for e in columns[k])
            total += s if k % 2 == 1 else -s
        return total

    base_v = rng.randint(1, 2 * d)
    slots = [(rng.randint(1, n), base_v + m) for m in range(t)]
    targets = [n] + [(-1) ** (j + 1) * (d - 1) ** j for j in range(1, t)]
    matrix = [
        [(1 if k % 2 == 1 else -1) * v**j for (k, v) in slots] for j in range(t)
    ]
    rhs = [targets[j] - fixed_sigma(j) for j in range(t)]
    # integer Cramer solve; consecutive pinned values keep the determinant small
    det = _int_det(matrix)
    counts = []
    for i in range(t):
        col_swapped = [row[:i] + [rhs[j]] + row[i + 1 :] for j, row in enumerate(matrix)]
        num = _int_det(col_swapped)
        c, rem = divmod(num, det)
        if rem or c < 0:
            return None
        counts.append(c)
    for (k, v), c in zip(slots, counts):
        columns[k].extend([v] * c)
    return BettiTable.of(n, d, columns)


def _int_det(matrix) -> int:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        if matrix[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
            term = matrix[0][j] * _int_det(minor)
            total += term if j % 2 == 0 else -term
    return total


def generate_repaired_tables(seed: int, count: int, t_choices=(2, 3, 4)):
    """Yield `count` repaired tables, cycling the target exponent t."""
    rng = random.Random(seed)
    produced = 0
    attempts = 0
    while produced < count:
        t = t_choices[produced % len(t_choices)]
        n = rng.randint(max(2, t), 5)
        d = rng.randint(3, 6)
        attempts += 1
        if attempts > 400 * count:
            raise RuntimeError("table generator acceptance rate collapsed")
        table = repaired_table(rng, n, d, t)
        if table is None:
            continue
        produced += 1
        yield t, table


# Frozen obstructed example tables (potential, not realizable).
def threefold_table_negative_degree() -> BettiTable:
    return BettiTable.of(
        4,
        3,
        {
            1: [2] * 9 + [3],
            2: [4] * 7 + [5] * 3,
            3: [6] * 2 + [7] * 3,
            4: [9],
        },
    )


def threefold_table_bound_violation() -> BettiTable:
    return BettiTable.of(
        4,
        3,
        {
            1: [2] * 10 + [10] * 17 + [14] * 17,
            2: [4] * 10 + [11] * 68,
            3: [6] * 5 + [12] * 102,
            4: [8] + [13] * 68,
        },
    )


def cusp_threefold_table() -> BettiTable:
    # hand tensor-product resolution of the triangle-plus-cube threefold
    return BettiTable.of(3, 3, {1: [1, 1, 2, 2, 2], 2: [3, 3]})

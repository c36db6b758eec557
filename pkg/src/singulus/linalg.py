"""Exact sparse linear algebra over word-size prime fields and the rationals.

Ranks over a prime field are fast lower bounds for the rational rank; the
calling code computes everything mod two independent primes and escalates to
fraction-free rational elimination on disagreement, so no silent rank loss
can survive.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import BadPrimeError


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    modulus: object  # prime int or the string "rational"
    pivot_cols: tuple[int, ...]

    def __post_init__(self):
        if self.rank != len(self.pivot_cols):
            raise ValueError("rank must equal the pivot-column count")


class SparseMatrix:
    """Immutable sparse matrix; entries is a dict (row, col) -> value.

    Untagged matrices hold exact rationals (or ints); a matrix tagged with a
    prime modulus holds ints in [0, p).  Zero entries are never stored.
    """

    __slots__ = ("rows", "cols", "entries", "modulus")

    def __init__(self, rows: int, cols: int, entries=(), modulus=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = rows
        self.cols = cols
        self.modulus = modulus
        data = {}
        items = entries.items() if isinstance(entries, dict) else (
            ((r, c), v) for r, c, v in entries
        )
        for (r, c), v in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) out of range")
            if (r, c) in data:
                raise ValueError(f"duplicate entry at ({r},{c})")
            if modulus is not None:
                v = int(v)
                if not 0 <= v < modulus:
                    raise ValueError("tagged entries must lie in [0, p)")
            if v:
                data[(r, c)] = v
        self.entries = data

    @classmethod
    def from_dense(cls, array, modulus=None) -> "SparseMatrix":
        rows = len(array)
        cols = len(array[0]) if rows else 0
        entries = [
            (r, c, v)
            for r, row in enumerate(array)
            for c, v in enumerate(row)
            if v
        ]
        return cls(rows, cols, entries, modulus=modulus)

    def nnz(self) -> int:
        return len(self.entries)

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols,
            self.rows,
            [(c, r, v) for (r, c), v in self.entries.items()],
            modulus=self.modulus,
        )

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def dump(self, fh):
        """Debug dump in coordinate text format: 'row col numerator/denominator'."""
        fh.write(f"{self.rows} {self.cols} {self.nnz()}\n")
        for (r, c) in sorted(self.entries):
            v = Fraction(self.entries[(r, c)])
            fh.write(f"{r} {c} {v.numerator}/{v.denominator}\n")

    def __repr__(self):
        tag = f", mod {self.modulus}" if self.modulus else ""
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz()}{tag})"


def reduce_mod(m: SparseMatrix, p: int) -> SparseMatrix:
    """Entrywise image in the field with p elements."""
    if m.modulus is not None:
        if m.modulus == p:
            return m
        raise ValueError("matrix already reduced mod a different prime")
    entries = []
    for (r, c), v in m.entries.items():
        v = Fraction(v)
        if v.denominator % p == 0:
            raise BadPrimeError(
                f"denominator of entry ({r},{c}) divisible by {p}"
            )
        x = v.numerator * pow(v.denominator, -1, p) % p
        if x:
            entries.append((r, c, x))
    return SparseMatrix(m.rows, m.cols, entries, modulus=p)


def rank_mod_p(m: SparseMatrix, p: int) -> RankCertificate:
    """Rank over F_p by sparse elimination.

    Columns are processed in increasing order, so the pivot-column set is
    canonical (column c is a pivot iff it lies outside the span of the
    columns before it).  Within a column the pivot row is the sparsest
    remaining row, lowest index first, to limit fill-in.
    """
    mr = m if m.modulus == p else reduce_mod(m, p)
    rows = mr.row_dicts()
    col_rows: dict[int, set[int]] = {}
    for (r, c) in mr.entries:
        col_rows.setdefault(c, set()).add(r)
    pivot_cols = []
    for col in range(mr.cols):
        cand = col_rows.get(col)
        if not cand:
            continue
        piv = min(cand, key=lambda r: (len(rows[r]), r))
        prow = rows[piv]
        inv = pow(prow[col], -1, p)
        if inv != 1:
            for c2 in prow:
                prow[c2] = prow[c2] * inv % p
        for r in [r for r in cand if r != piv]:
            row = rows[r]
            f = row.pop(col)
            col_rows[col].discard(r)
            for c2, v2 in prow.items():
                if c2 == col:
                    continue
                nv = (row.get(c2, 0) - f * v2) % p
                if nv:
                    if c2 not in row:
                        col_rows.setdefault(c2, set()).add(r)
                    row[c2] = nv
                elif c2 in row:
                    del row[c2]
                    col_rows[c2].discard(r)
        for c2 in prow:
            col_rows[c2].discard(piv)
        pivot_cols.append(col)
    return RankCertificate(len(pivot_cols), p, tuple(pivot_cols))


def kernel_dim(m: SparseMatrix, p: int) -> int:
    return m.cols - rank_mod_p(m, p).rank


def rank_rational(m: SparseMatrix) -> RankCertificate:
    """Exact rank over the rationals via fraction-free (Bareiss) elimination.

    Dense and slow; this is the oracle that settles prime-field disagreements.
    """
    if m.modulus is not None:
        raise ValueError("rational rank needs an unreduced matrix")
    dense = [[0] * m.cols for _ in range(m.rows)]
    row_dens = [1] * m.rows
    for (r, c), v in m.entries.items():
        v = Fraction(v)
        dense[r][c] = v
        row_dens[r] = lcm(row_dens[r], v.denominator)
    for r in range(m.rows):
        if row_dens[r] != 1:
            dense[r] = [int(v * row_dens[r]) for v in dense[r]]
        else:
            dense[r] = [int(v) for v in dense[r]]
    prev = 1
    r = 0
    pivot_cols = []
    for c in range(m.cols):
        if r == m.rows:
            break
        sel = next((i for i in range(r, m.rows) if dense[i][c]), None)
        if sel is None:
            continue
        if sel != r:
            dense[r], dense[sel] = dense[sel], dense[r]
        for i in range(r + 1, m.rows):
            if not any(dense[i][c:]):
                continue
            pc = dense[r][c]
            ic = dense[i][c]
            rowi = dense[i]
            rowr = dense[r]
            for j in range(c + 1, m.cols):
                rowi[j] = (pc * rowi[j] - ic * rowr[j]) // prev
            rowi[c] = 0
        prev = dense[r][c]
        pivot_cols.append(c)
        r += 1
    return RankCertificate(r, "rational", tuple(pivot_cols))


# -- working primes ----------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 with the fixed bases."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def deterministic_primes(seed: int, count: int = 2, lo: int = 1 << 30, hi: int = 1 << 31):
    """Distinct pseudorandom primes in [lo, hi), reproducible from the seed.

    The default range keeps products of two residues inside a 64-bit
    accumulator, per the double-word overflow rationale.
    """
    rng = random.Random(seed)
    primes: list[int] = []
    while len(primes) < count:
        cand = rng.randrange(lo | 1, hi, 2)
        if cand not in primes and is_probable_prime(cand):
            primes.append(cand)
    return primes


# -- field abstraction for generic echelon work ------------------------


class PrimeField:
    """Arithmetic callbacks for F_p used by the generic echelon routines."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        self.p = p

    def of(self, x):
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise BadPrimeError(f"denominator divisible by {self.p}")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def mul(self, a, b):
        return a * b % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    @property
    def modulus(self):
        return self.p


class RationalField:
    __slots__ = ()

    def of(self, x):
        return Fraction(x)

    def inv(self, a):
        return 1 / Fraction(a)

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    @property
    def modulus(self):
        return None


QQ = RationalField()


def rref(rows, field):
    """Reduced row echelon form of sparse rows (dicts col -> value).

    Returns a dict mapping pivot column to its fully reduced, normalized
    row.  The result depends only on the row space and the column order,
    so pivot columns and normal forms are canonical.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            if c in pivots:
                f = row.pop(c)
                for cc, vv in pivots[c].items():
                    if cc == c:
                        continue
                    nv = field.sub(row.get(cc, 0), field.mul(f, vv))
                    if nv:
                        row[cc] = nv
                    elif cc in row:
                        del row[cc]
                continue
            # clear any remaining entries at existing pivot columns above c,
            # so the stored row touches only its own pivot and free columns
            for cc in [cc for cc in row if cc != c and cc in pivots]:
                f = row.pop(cc)
                for c2, v2 in pivots[cc].items():
                    if c2 == cc:
                        continue
                    nv = field.sub(row.get(c2, 0), field.mul(f, v2))
                    if nv:
                        row[c2] = nv
                    elif c2 in row:
                        del row[c2]
            inv = field.inv(row[c])
            if inv != 1:
                row = {cc: field.mul(vv, inv) for cc, vv in row.items()}
            for pc, prow in pivots.items():
                if c in prow:
                    f = prow.pop(c)
                    for cc, vv in row.items():
                        if cc == c:
                            continue
                        nv = field.sub(prow.get(cc, 0), field.mul(f, vv))
                        if nv:
                            prow[cc] = nv
                        elif cc in prow:
                            del prow[cc]
            pivots[c] = row
            break
    return pivots


def matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Sparse product a @ b (used by self-checks and tests)."""
    if a.cols != b.rows:
        raise ValueError("shape mismatch")
    if a.modulus != b.modulus:
        raise ValueError("modulus mismatch")
    rows_b: dict[int, list] = {}
    for (r, c), v in b.entries.items():
        rows_b.setdefault(r, []).append((c, v))
    acc: dict[tuple[int, int], object] = {}
    for (r, k), v in a.entries.items():
        for c, w in rows_b.get(k, ()):
            acc[(r, c)] = acc.get((r, c), 0) + v * w
    p = a.modulus
    entries = []
    for (r, c), v in acc.items():
        v = v % p if p else v
        if v:
            entries.append((r, c, v))
    return SparseMatrix(a.rows, b.cols, entries, modulus=p)

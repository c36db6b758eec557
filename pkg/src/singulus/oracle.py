"""Ground-truth invariants computed from an explicit defining polynomial.

Two independent pipelines live here.  The Hilbert side computes the graded
dimensions of the quotient by the partial-derivative ideal degree by degree
and fits the eventual polynomial, which carries the dimension and degree of
the singular subscheme.  The Betti side computes graded Betti numbers as the
homology of the quotient tensored with the Koszul complex on the variables,
which needs nothing beyond exact kernel/rank computations on
multiplication-by-variable block matrices.

Everything is computed modulo two independent word-size primes; ranks over a
prime field can only drop, so agreement certifies the answer for practical
purposes and any disagreement escalates to exact rational arithmetic.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial

from .errors import (
    BadPrimeError,
    ConeError,
    IncompleteTableError,
    NonHomogeneousError,
    WindowTooSmallError,
)
from .linalg import (
    QQ,
    PrimeField,
    SparseMatrix,
    deterministic_primes,
    is_probable_prime,
    rank_mod_p,
    rank_rational,
    reduce_mod,
    rref,
)
from .polynomials import Polynomial, dim_degree_piece, monomial_basis
from .rules import (
    evaluate_polynomial,
    full_report,
    hilbert_function_from_table,
    hilbert_polynomial_from_table,
)
from .tables import BettiTable


@dataclass(frozen=True)
class HilbertData:
    """Hilbert function of the Jacobian algebra with its fitted polynomial.

    ``delta`` is the degree of the eventual polynomial, or None when the
    function is eventually zero (smooth hypersurface, empty singular locus).
    ``degree_sigma`` is the leading coefficient times delta! and equals the
    degree of the singular subscheme; ``tjurina`` is the constant value when
    delta == 0.
    """

    n: int
    d: int
    values: dict[int, int]
    poly: tuple[Fraction, ...]  # low coefficient first; () is the zero polynomial
    k0: int
    delta: int | None
    degree_sigma: int | None
    tjurina: int | None

    @property
    def window(self) -> int:
        return max(self.values)


def default_primes(f: Polynomial, count: int = 2) -> list[int]:
    """Working primes derived deterministically from the input digest."""
    return deterministic_primes(_seed_of(f), count)


def _seed_of(f: Polynomial) -> int:
    digest = hashlib.sha256(f"{f.n}:{f}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _validate(f: Polynomial):
    if f.is_zero():
        raise ValueError("the zero polynomial has no Jacobian algebra here")
    if not f.is_homogeneous():
        raise NonHomogeneousError("f must be homogeneous")
    if f.n < 2:
        raise ValueError("need at least three variables (n >= 2)")
    if f.degree < 3:
        raise ValueError("need degree d >= 3")
    return f.n, f.degree


@lru_cache(maxsize=None)
def _basis(n: int, k: int):
    return tuple(monomial_basis(n, k))


def _prime_plan(f: Polynomial, primes):
    """(primes to use, whether more may be drawn on a bad-prime failure)."""
    if primes:
        plist = list(primes)
        for p in plist:
            if not is_probable_prime(p):
                raise ValueError(f"{p} is not prime")
        return plist, False
    return default_primes(f, 2), True


def _replacement_primes(f: Polynomial, exclude, count=1):
    stream = deterministic_primes(_seed_of(f), len(exclude) + count + 8)
    fresh = [p for p in stream if p not in exclude]
    return fresh[:count]


# -- Jacobian graded pieces ---------------------------------------------


def _jacobian_matrix(f: Polynomial, k: int) -> SparseMatrix:
    """Degree-k piece of the gradient map, rows = generators m*f_i over the
    degree-k monomial columns (decreasing order)."""
    n, d = f.n, f.degree
    monos = _basis(n, k)
    ncols = len(monos)
    col_of = {m: ncols - 1 - i for i, m in enumerate(monos)}
    entries = []
    row = 0
    if k - (d - 1) >= 0:
        partials = [f.partial(i) for i in range(n + 1)]
        for fi in partials:
            items = list(fi.terms.items())
            for m in _basis(n, k - d + 1):
                for mm, c in items:
                    entries.append((row, col_of[mm * m], c))
                row += 1
    return SparseMatrix(row, ncols, entries)


def milnor_dimension(f: Polynomial, k: int, primes=None) -> int:
    """dim of the degree-k piece of the Jacobian algebra S/J_f."""
    n, d = _validate(f)
    if k < 0:
        raise ValueError("degree must be non-negative")
    matrix = _jacobian_matrix(f, k)
    if matrix.rows == 0:
        return dim_degree_piece(n, k)
    plist, auto = _prime_plan(f, primes)
    ranks = []
    used = list(plist)
    for p in plist:
        while True:
            try:
                ranks.append(rank_mod_p(reduce_mod(matrix, p), p).rank)
                break
            except BadPrimeError:
                if not auto:
                    raise
                p = _replacement_primes(f, used)[0]
                used.append(p)
    rank = ranks[0] if len(set(ranks)) == 1 else rank_rational(matrix).rank
    return dim_degree_piece(n, k) - rank


# -- Hilbert function fit -----------------------------------------------


def hilbert_fit(f: Polynomial, window=None, primes=None) -> HilbertData:
    """Compute dim M(f)_k over 0..window and fit the eventual polynomial.

    The smallest difference order whose tail vanishes gives the degree; the
    polynomial is fitted by Newton forward differences on the last delta+2
    points and verified on at least two more, and k0 is the true
    stabilization degree found by scanning back down.

    The default window exceeds the isolated-singularity regularity bound by
    enough to leave two verification points even when stabilization happens
    at the bound itself.
    """
    n, d = _validate(f)
    w = window if window is not None else (n + 1) * (d - 2) + n + 2
    if w < d + 1:
        raise ValueError("window upper bound is too small to say anything")
    plist, _ = _prime_plan(f, primes)
    vals = [milnor_dimension(f, k, primes=plist) for k in range(w + 1)]
    values = dict(enumerate(vals))

    if vals[-1] == 0 and vals[-2] == 0:
        k0 = w
        while k0 > 0 and vals[k0 - 1] == 0:
            k0 -= 1
        return HilbertData(n, d, values, (), k0, None, None, None)

    for r in range(0, n):
        diffs = list(vals)
        for _ in range(r + 1):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if not diffs or diffs[-1] != 0:
            continue
        start = len(diffs)
        while start > 0 and diffs[start - 1] == 0:
            start -= 1
        if len(diffs) - start < 3 or (w + 1 - start) < r + 4:
            continue
        base = w - r - 1  # fit on the last r+2 points
        coeffs = _newton_fit(vals, base, r)
        if any(evaluate_polynomial(coeffs, j) != vals[j] for j in range(start, w + 1)):
            continue
        k0 = start
        while k0 > 0 and evaluate_polynomial(coeffs, k0 - 1) == vals[k0 - 1]:
            k0 -= 1
        delta = len(coeffs) - 1 if coeffs else None
        if delta is None:
            # all fitted values zero with a nonzero tail cannot happen
            raise AssertionError("empty fit for a nonzero tail")
        if delta > n - 2:
            raise ValueError(
                f"Hilbert polynomial has degree {delta} > n-2 = {n - 2}; "
                "the input is not a reduced hypersurface"
            )
        lead = coeffs[-1] * factorial(delta)
        if lead.denominator != 1 or lead <= 0:
            raise AssertionError(f"degree of the singular subscheme must be a positive integer, got {lead}")
        tjurina = int(coeffs[0]) if delta == 0 else None
        return HilbertData(
            n, d, values, tuple(coeffs), k0, delta, int(lead), tjurina
        )

    raise WindowTooSmallError(
        f"no stabilization detected up to degree {w}; tail {vals[-6:]}",
        tail=vals[-6:],
    )


def _newton_fit(vals, base, r) -> tuple[Fraction, ...]:
    """Degree <= r interpolation through (base+i, vals[base+i]), i=0..r+1,
    by forward differences, expanded into coefficients (low first)."""
    points = vals[base : base + r + 2]
    table = [list(map(Fraction, points))]
    while len(table[-1]) > 1:
        prev = table[-1]
        table.append([b - a for a, b in zip(prev, prev[1:])])
    coeffs = [Fraction(0)] * (r + 2)
    # running product prod_{j<i} (k - base - j), coefficients low first
    prod = [Fraction(1)]
    for i in range(r + 2):
        term = table[i][0] / factorial(i)
        for m, c in enumerate(prod):
            coeffs[m] += term * c
        nxt = [Fraction(0)] * (len(prod) + 1)
        shift = -(base + i)
        for m, c in enumerate(prod):
            nxt[m] += c * shift
            nxt[m + 1] += c
        prod = nxt
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


# -- graded Betti numbers via Koszul homology ----------------------------


class _Piece:
    """Monomial basis of one graded piece of the quotient plus the normal
    forms of the pivot monomials, over one field."""

    __slots__ = ("basis", "index", "normal")

    def __init__(self, basis, index, normal):
        self.basis = basis
        self.index = index
        self.normal = normal


def _quotient_piece(f, partials, k, field) -> _Piece:
    n, d = f.n, f.degree
    monos = _basis(n, k)
    ncols = len(monos)
    col_of = {m: ncols - 1 - i for i, m in enumerate(monos)}
    rows = []
    if k - (d - 1) >= 0:
        for fi in partials:
            items = [(mm, field.of(c)) for mm, c in fi.terms.items()]
            for m in _basis(n, k - d + 1):
                rows.append({col_of[mm * m]: c for mm, c in items})
    pivots = rref(rows, field)
    basis = []
    index = {}
    for ci in range(ncols - 1, -1, -1):  # descending column = increasing grevlex
        if ci not in pivots:
            mono = monos[ncols - 1 - ci]
            index[mono] = len(basis)
            basis.append(mono)
    normal = {}
    for ci, row in pivots.items():
        mono = monos[ncols - 1 - ci]
        normal[mono] = {
            index[monos[ncols - 1 - cc]]: field.neg(v)
            for cc, v in row.items()
            if cc != ci
        }
    return _Piece(basis, index, normal)


def _mult_matrix(pieces, i, k, field) -> SparseMatrix:
    """Multiplication by x_i from the degree-k piece to the next one."""
    src, dst = pieces[k], pieces[k + 1]
    entries = []
    one = field.of(1)
    for j, mu in enumerate(src.basis):
        nu = mu.times_var(i)
        pos = dst.index.get(nu)
        if pos is not None:
            entries.append((pos, j, one))
        else:
            for r, v in dst.normal[nu].items():
                entries.append((r, j, v))
    return SparseMatrix(len(dst.basis), len(src.basis), entries, modulus=field.modulus)


def _betti_over_field(f: Polynomial, q_max: int, field) -> dict:
    """Graded Betti numbers beta_{p,q} for p = 0..n+1, q = 0..q_max.

    K_p = Lambda^p(C^{n+1}) tensor M shifted so the differential
    d(e_S tensor m) = sum_j (-1)^j e_{S \\ s_j} tensor x_{s_j} m preserves
    the internal degree q; beta_{p,q} = dim K_{p,q} - rank d_{p,q}
    - rank d_{p+1,q}."""
    n = f.n
    partials = [f.partial(i) for i in range(n + 1)]
    pieces = [_quotient_piece(f, partials, k, field) for k in range(q_max + 1)]
    mult = {}
    for k in range(q_max):
        if pieces[k].basis:
            for i in range(n + 1):
                mult[(i, k)] = _mult_matrix(pieces, i, k, field)

    subset_cache = {p: list(combinations(range(n + 1), p)) for p in range(n + 2)}

    def rank_of(p, q):
        if p < 1 or p > n + 1:
            return 0
        k = q - p
        if k < 0 or not pieces[k].basis:
            return 0
        dom = len(pieces[k].basis)
        cod = len(pieces[k + 1].basis)
        if cod == 0:
            return 0
        subsets = subset_cache[p]
        t_index = {t: i for i, t in enumerate(subset_cache[p - 1])}
        entries = []
        for si, s_set in enumerate(subsets):
            for j, s in enumerate(s_set):
                ti = t_index[s_set[:j] + s_set[j + 1 :]]
                block = mult[(s, k)]
                if j % 2 == 0:
                    for (r, c), v in block.entries.items():
                        entries.append((ti * cod + r, si * dom + c, v))
                else:
                    for (r, c), v in block.entries.items():
                        entries.append((ti * cod + r, si * dom + c, field.neg(v)))
        matrix = SparseMatrix(
            len(t_index) * cod, len(subsets) * dom, entries, modulus=field.modulus
        )
        if field.modulus is None:
            return rank_rational(matrix).rank
        return rank_mod_p(matrix, field.modulus).rank

    betas = {}
    rank_cache = {}

    def rank_cached(p, q):
        if (p, q) not in rank_cache:
            rank_cache[(p, q)] = rank_of(p, q)
        return rank_cache[(p, q)]

    for q in range(q_max + 1):
        for p in range(0, min(q, n + 1) + 1):
            dim_k = comb(n + 1, p) * len(pieces[q - p].basis)
            if dim_k == 0:
                continue
            b = dim_k - rank_cached(p, q) - rank_cached(p + 1, q)
            if b:
                betas[(p, q)] = b
    return betas


def cone_check(f: Polynomial):
    """Refuse polynomials whose partials are linearly dependent.

    The fixed resolution shape puts all n+1 partials as independent
    generators; a dependent family (a cone, up to coordinates) has a
    strictly smaller minimal first step, which this pipeline does not
    reconcile."""
    n, d = f.n, f.degree
    monos = _basis(n, d - 1)
    col_of = {m: i for i, m in enumerate(monos)}
    entries = []
    for i in range(n + 1):
        for mm, c in f.partial(i).terms.items():
            entries.append((i, col_of[mm], c))
    matrix = SparseMatrix(n + 1, len(monos), entries)
    rank = rank_rational(matrix).rank
    if rank < n + 1:
        raise ConeError(
            f"the {n + 1} partial derivatives span only a {rank}-dimensional "
            "space; f is a cone (or has a vanishing partial)"
        )


def graded_betti(f: Polynomial, max_degree=None, primes=None) -> BettiTable:
    """Graded Betti table of the Jacobian algebra of f.

    Homological position p = k+1 with internal degree q lands in column k
    with shift q - (d-1).  Nonzero homology at the degree bound in any
    position that could still continue raises an incomplete-table error
    instead of silently truncating; the top position n+1 is allowed to sit
    exactly on the bound, where the smooth table ends.
    """
    n, d = _validate(f)
    q_max = max_degree if max_degree is not None else (n + 1) * (d - 1)
    if q_max < d:
        raise ValueError("max_degree must be at least d")
    cone_check(f)

    plist, auto = _prime_plan(f, primes)
    results = []
    used = list(plist)
    for p in plist:
        while True:
            try:
                results.append(_betti_over_field(f, q_max, PrimeField(p)))
                break
            except BadPrimeError:
                if not auto:
                    raise
                p = _replacement_primes(f, used)[0]
                used.append(p)
    if all(r == results[0] for r in results[1:]):
        betas = results[0]
    else:
        betas = _betti_over_field(f, q_max, QQ)

    if betas.get((0, 0)) != 1 or any(p == 0 and q != 0 for p, q in betas):
        raise AssertionError("position 0 must be exactly the ground field in degree 0")
    beta1 = {q: b for (p, q), b in betas.items() if p == 1}
    if beta1 != {d - 1: n + 1}:
        raise AssertionError(
            f"position 1 must be {n + 1} generators in degree {d - 1}, got {beta1}"
        )

    boundary = {p: betas[(p, q_max)] for p in range(0, n + 1) if (p, q_max) in betas}
    if boundary:
        raise IncompleteTableError(
            f"nonzero Betti numbers at the degree bound {q_max} in positions "
            f"{sorted(boundary)}; raise max_degree and retry",
            boundary=boundary,
        )

    columns = {k: [] for k in range(1, n + 1)}
    for (p, q), b in sorted(betas.items()):
        if p < 2:
            continue
        shift = q - (d - 1)
        if shift < 0:
            raise AssertionError("shift below the generator degree in a minimal resolution")
        columns[p - 1].extend([shift] * b)
    table = BettiTable.of(n, d, columns)
    if table.m(1) < n:
        raise IncompleteTableError(
            f"only {table.m(1)} first syzygies found below the degree bound "
            f"{q_max}, but at least {n} must exist; raise max_degree and retry"
        )
    return table


# -- cross validation ----------------------------------------------------


@dataclass
class CrossCheckReport:
    hilbert: HilbertData | None
    table: BettiTable | None
    rule_report: object
    deviations: list[str]

    @property
    def consistent(self) -> bool:
        return not self.deviations


def cross_check(f: Polynomial, window=None, max_degree=None, primes=None) -> CrossCheckReport:
    """Run both pipelines and compare every quantity they share.

    Deviations are collected, not raised: a pipeline error (cone, window,
    incomplete bound) becomes a deviation entry, and value disagreements
    name the degree or invariant where the two sides differ.
    """
    deviations: list[str] = []
    hilbert = None
    table = None
    rule_report = None

    try:
        hilbert = hilbert_fit(f, window=window, primes=primes)
    except (WindowTooSmallError, ValueError, NonHomogeneousError) as exc:
        deviations.append(f"hilbert_fit failed: {exc}")

    try:
        table = graded_betti(f, max_degree=max_degree, primes=primes)
    except (ConeError, IncompleteTableError, ValueError) as exc:
        deviations.append(f"graded_betti failed: {exc}")

    if table is not None:
        rule_report = full_report(table)
        if rule_report.obstructions:
            deviations.append(
                "rule engine found obstructions on an oracle table: "
                + ", ".join(rule_report.obstructions)
            )

    if hilbert is not None and table is not None and rule_report is not None:
        smooth_h = hilbert.delta is None
        smooth_b = rule_report.verdict.kind == "smooth"
        if smooth_h != smooth_b:
            deviations.append(
                f"smoothness disagrees: hilbert says {'smooth' if smooth_h else 'singular'}, "
                f"table says {'smooth' if smooth_b else 'singular'}"
            )
        elif not smooth_h:
            if hilbert.delta != rule_report.delta:
                deviations.append(
                    f"dimension disagrees: hilbert delta={hilbert.delta}, "
                    f"table delta={rule_report.delta}"
                )
            elif hilbert.degree_sigma != rule_report.deg_sigma:
                deviations.append(
                    f"degree disagrees: hilbert {hilbert.degree_sigma}, "
                    f"table {rule_report.deg_sigma}"
                )
            if hilbert.delta == 0 and hilbert.tjurina != rule_report.tau:
                deviations.append(
                    f"Tjurina number disagrees: hilbert {hilbert.tjurina}, "
                    f"table {rule_report.tau}"
                )
        for k, v in sorted(hilbert.values.items()):
            predicted = hilbert_function_from_table(table, k)
            if predicted != v:
                deviations.append(
                    f"Hilbert function disagrees at degree {k}: "
                    f"computed {v}, table predicts {predicted}"
                )
        table_poly = tuple(hilbert_polynomial_from_table(table))
        if table_poly != tuple(hilbert.poly):
            deviations.append(
                f"Hilbert polynomial disagrees: fitted {list(hilbert.poly)}, "
                f"table gives {list(table_poly)}"
            )

    return CrossCheckReport(hilbert, table, rule_report, deviations)

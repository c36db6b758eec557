from fractions import Fraction

import pytest

from singulus.errors import (
    ConeError,
    IncompleteTableError,
    NonHomogeneousError,
    WindowTooSmallError,
)
from singulus.linalg import PrimeField, matmul
from singulus.oracle import (
    _betti_over_field,
    _jacobian_matrix,
    _mult_matrix,
    _quotient_piece,
    cross_check,
    default_primes,
    graded_betti,
    hilbert_fit,
    milnor_dimension,
)
from singulus.polynomials import monomial_basis, parse
from singulus.rules import (
    evaluate_polynomial,
    hilbert_function_from_table,
    koszul_smooth_table,
)
from _helpers import cusp_threefold_table, dense_rational_rank

CUSP_POLY = parse("x0*x1*x2 + x3^3", 3)
FERMAT = {(n, d): parse("+".join(f"x{i}^{d}" for i in range(n + 1)), n) for n, d in
          [(2, 3), (2, 4), (3, 3)]}


def brute_milnor_dimension(f, k):
    """Independent computation: dense rational rank of the literal span."""
    n, d = f.n, f.degree
    monos = monomial_basis(n, k)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    if k - d + 1 >= 0:
        for i in range(n + 1):
            fi = f.partial(i)
            for m in monomial_basis(n, k - d + 1):
                row = [Fraction(0)] * len(monos)
                for mm, c in fi.terms.items():
                    row[index[mm * m]] = c
                rows.append(row)
    return len(monos) - dense_rational_rank(rows)


def test_milnor_dimension_reference_values():
    assert milnor_dimension(CUSP_POLY, 2) == 6
    assert milnor_dimension(parse("x0^3+x1^3+x2^3", 2), 3) == 1
    assert milnor_dimension(CUSP_POLY, 10) == 6


def test_milnor_dimension_matches_brute_force():
    for f in [CUSP_POLY, FERMAT[(2, 3)], parse("x0*x1*x2 + x0^3 + x1^3", 2)]:
        for k in range(8):
            assert milnor_dimension(f, k) == brute_milnor_dimension(f, k)


def test_milnor_dimension_rejects_bad_input():
    with pytest.raises(NonHomogeneousError):
        milnor_dimension(parse("x0^3 + x1", 2), 2)
    with pytest.raises(ValueError):
        milnor_dimension(parse("x0^2+x1^2+x2^2", 2), 2)


def test_hilbert_fit_cusp_threefold():
    hd = hilbert_fit(CUSP_POLY)
    assert (hd.delta, hd.tjurina, hd.degree_sigma) == (0, 6, 6)
    assert hd.poly == (Fraction(6),)
    assert hd.k0 == 2
    assert [hd.values[k] for k in range(4)] == [1, 4, 6, 6]


def test_hilbert_fit_positive_dimensional_cone():
    hd = hilbert_fit(parse("x0*x1*x2", 3))
    assert hd.delta == 1
    assert hd.poly == (Fraction(1), Fraction(3))  # P(k) = 3k + 1
    assert hd.degree_sigma == 3
    assert hd.tjurina is None


def test_hilbert_fit_nodal_curve():
    hd = hilbert_fit(parse("x0*x1*x2 + x0^3 + x1^3", 2))
    assert (hd.delta, hd.tjurina) == (0, 1)


def test_hilbert_fit_smooth_marker():
    hd = hilbert_fit(FERMAT[(2, 3)])
    assert hd.delta is None
    assert hd.poly == ()
    assert hd.degree_sigma is None
    assert hd.values[hd.k0] == 0 and hd.values[hd.k0 - 1] != 0


def test_hilbert_fit_polynomial_matches_values_beyond_k0():
    for f in [CUSP_POLY, parse("x0*x1*x2", 3)]:
        hd = hilbert_fit(f)
        for k, v in hd.values.items():
            if k >= hd.k0:
                assert evaluate_polynomial(list(hd.poly), k) == v


def test_hilbert_fit_window_too_small():
    with pytest.raises(WindowTooSmallError):
        hilbert_fit(CUSP_POLY, window=4)


def test_hilbert_fit_flags_non_reduced_input():
    with pytest.raises(ValueError, match="not a reduced"):
        hilbert_fit(parse("x0^2*x1^2*x2^2", 2), window=16)


def test_graded_betti_cusp_threefold():
    table = graded_betti(CUSP_POLY)
    assert table == cusp_threefold_table()


def test_graded_betti_fermat_matches_koszul():
    for (n, d), f in FERMAT.items():
        assert graded_betti(f) == koszul_smooth_table(n, d)


def test_graded_betti_rejects_cones():
    with pytest.raises(ConeError):
        graded_betti(parse("x0*x1*x2", 3))


def test_graded_betti_incomplete_at_tight_bound():
    with pytest.raises(IncompleteTableError) as err:
        graded_betti(CUSP_POLY, max_degree=3)
    assert 2 in err.value.boundary


def test_graded_betti_deterministic_across_prime_choices():
    t1 = graded_betti(CUSP_POLY, primes=[1073741831, 1073741833])
    t2 = graded_betti(CUSP_POLY, primes=[2147483629, 2147483647])
    t3 = graded_betti(CUSP_POLY)
    assert t1 == t2 == t3


def test_graded_betti_rejects_non_prime_override():
    with pytest.raises(ValueError, match="not prime"):
        graded_betti(CUSP_POLY, primes=[1073741831, 1073741832])


def test_default_primes_are_input_derived_and_stable():
    a = default_primes(CUSP_POLY)
    assert a == default_primes(CUSP_POLY)
    assert a != default_primes(FERMAT[(2, 3)])


def test_resolution_predicts_hilbert_function_in_every_degree():
    for f in [CUSP_POLY, FERMAT[(2, 3)], FERMAT[(3, 3)],
              parse("x0*x1*x2 + x0^3 + x1^3", 2)]:
        table = graded_betti(f)
        for k in range(0, (f.n + 1) * (f.degree - 2) + f.n + 3):
            assert hilbert_function_from_table(table, k) == milnor_dimension(f, k)


def test_multiplication_matrices_commute():
    # x_i x_j = x_j x_i on the quotient catches bad normal forms
    f = parse("x0*x1*x2 + x0^3 + x1^3", 2)
    field = PrimeField(1073741831)
    partials = [f.partial(i) for i in range(f.n + 1)]
    pieces = [_quotient_piece(f, partials, k, field) for k in range(5)]
    for k in range(3):
        for i in range(f.n + 1):
            for j in range(i + 1, f.n + 1):
                xi_k = _mult_matrix(pieces, i, k, field)
                xj_k = _mult_matrix(pieces, j, k, field)
                xi_k1 = _mult_matrix(pieces, i, k + 1, field)
                xj_k1 = _mult_matrix(pieces, j, k + 1, field)
                assert matmul(xj_k1, xi_k).entries == matmul(xi_k1, xj_k).entries


def test_betti_low_positions():
    f = CUSP_POLY
    betas = _betti_over_field(f, 8, PrimeField(1073741831))
    assert betas[(0, 0)] == 1
    assert betas[(1, f.degree - 1)] == f.n + 1
    assert not any(p == 1 and q != f.degree - 1 for p, q in betas)


def test_jacobian_matrix_shape():
    m = _jacobian_matrix(CUSP_POLY, 3)
    assert m.cols == len(monomial_basis(3, 3))
    assert m.rows == 4 * len(monomial_basis(3, 1))


def test_cross_check_consistent_cases():
    report = cross_check(CUSP_POLY)
    assert report.consistent
    assert report.hilbert.tjurina == 6
    assert report.rule_report.tau == 6

    smooth = cross_check(parse("x0^3+x1^3+x2^3+x3^3", 3))
    assert smooth.consistent
    assert smooth.rule_report.verdict.kind == "smooth"
    assert smooth.hilbert.delta is None


def test_cross_check_surfaces_incomplete_bound_as_deviation():
    report = cross_check(CUSP_POLY, max_degree=3)
    assert not report.consistent
    assert any("graded_betti failed" in dev for dev in report.deviations)
    assert report.hilbert is not None  # the other side still ran


def test_cross_check_cone_has_hilbert_side_only():
    report = cross_check(parse("x0*x1*x2", 3))
    assert report.table is None
    assert report.hilbert.delta == 1
    assert any("cone" in dev.lower() for dev in report.deviations)

import io
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singulus.errors import BadPrimeError
from singulus.linalg import (
    QQ,
    PrimeField,
    SparseMatrix,
    deterministic_primes,
    is_probable_prime,
    kernel_dim,
    matmul,
    rank_mod_p,
    rank_rational,
    reduce_mod,
    rref,
)
from _helpers import dense_rational_rank

M61 = 2**61 - 1


def test_reduce_mod_inverts_denominator():
    m = SparseMatrix(1, 1, [(0, 0, Fraction(1, 2))])
    r = reduce_mod(m, 7)
    assert r.entries == {(0, 0): 4}
    assert r.modulus == 7


def test_reduce_mod_drops_zero_entries():
    m = SparseMatrix(1, 1, [(0, 0, 3)])
    r = reduce_mod(m, 3)
    assert r.entries == {}
    assert (r.rows, r.cols) == (1, 1)


def test_reduce_mod_bad_prime():
    m = SparseMatrix(1, 1, [(0, 0, Fraction(1, 3))])
    with pytest.raises(BadPrimeError):
        reduce_mod(m, 3)


def test_rank_identity():
    eye = SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    for p in (2, 5, 101):
        assert rank_mod_p(eye, p).rank == 3


def test_rank_characteristic_dependence():
    m = SparseMatrix.from_dense([[1, 1], [1, -1]])
    assert rank_mod_p(m, 2).rank == 1
    assert rank_mod_p(m, 5).rank == 2
    assert rank_rational(m).rank == 2


def test_rank_vandermonde_mod_101():
    nodes = [1, 2, 3, 4]
    vm = SparseMatrix.from_dense([[x**j for j in range(4)] for x in nodes])
    cert = rank_mod_p(vm, 101)
    assert cert.rank == 4
    assert cert.pivot_cols == (0, 1, 2, 3)
    assert cert.modulus == 101


def test_kernel_dim_examples():
    assert kernel_dim(SparseMatrix(2, 5), 7) == 5
    eye = SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert kernel_dim(eye, 7) == 0
    assert kernel_dim(SparseMatrix.from_dense([[1, 2, 3]]), 7) == 2


def test_rank_rational_outer_product():
    u = [1, -2, 3, 5, 7]
    v = [2, 0, -1, 4, 9]
    m = SparseMatrix.from_dense([[a * b for b in v] for a in u])
    assert rank_rational(m).rank == 1


def test_rank_rational_matches_large_prime_on_random_matrices():
    rng = random.Random(411)
    for _ in range(100):
        dense = [[rng.randint(-30, 30) for _ in range(6)] for _ in range(6)]
        m = SparseMatrix.from_dense(dense)
        assert rank_rational(m).rank == rank_mod_p(m, M61).rank


def test_rank_certificate_consistency():
    m = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    cert = rank_rational(m)
    assert cert.rank == len(cert.pivot_cols) == 2
    assert cert.modulus == "rational"


sparse_matrices = st.builds(
    lambda rows, cols, cells: SparseMatrix(
        rows,
        cols,
        {
            (r % rows, c % cols): v
            for (r, c, v) in cells
        },
    ),
    st.integers(min_value=1, max_value=6),
    st.integers(min_value=1, max_value=6),
    st.dictionaries(
        st.tuples(st.integers(0, 5), st.integers(0, 5)),
        st.integers(min_value=-20, max_value=20).filter(bool),
        max_size=12,
    ).map(lambda d: [(r, c, v) for (r, c), v in d.items()]),
)


@given(sparse_matrices)
def test_modular_rank_bounds_rational_rank(m):
    rq = rank_rational(m).rank
    for p in (2, 7, 1009):
        assert rank_mod_p(m, p).rank <= rq
    assert rank_mod_p(m, M61).rank == rq


@given(sparse_matrices)
def test_kernel_plus_rank_is_cols(m):
    for p in (5, 97):
        assert kernel_dim(m, p) + rank_mod_p(m, p).rank == m.cols


@settings(max_examples=40)
@given(sparse_matrices, st.randoms(use_true_random=False))
def test_rank_invariant_under_permutation(m, rng):
    rows = list(range(m.rows))
    cols = list(range(m.cols))
    rng.shuffle(rows)
    rng.shuffle(cols)
    permuted = SparseMatrix(
        m.rows,
        m.cols,
        [(rows[r], cols[c], v) for (r, c), v in m.entries.items()],
    )
    assert rank_rational(permuted).rank == rank_rational(m).rank
    assert rank_mod_p(permuted, 101).rank == rank_mod_p(m, 101).rank


@given(sparse_matrices)
def test_rank_agrees_with_dense_oracle(m):
    assert rank_rational(m).rank == dense_rational_rank(m.to_dense())


def test_rref_normal_forms_touch_only_free_columns():
    rows = [
        {0: Fraction(1), 1: Fraction(2), 3: Fraction(1)},
        {1: Fraction(1), 2: Fraction(1)},
        {0: Fraction(2), 2: Fraction(5), 3: Fraction(2)},
    ]
    pivots = rref(rows, QQ)
    free = {0, 1, 2, 3} - set(pivots)
    for c, row in pivots.items():
        assert set(row) - {c} <= free


def test_rref_mod_p_rank_matches_elimination():
    rng = random.Random(5)
    for _ in range(25):
        dense = [[rng.randint(-9, 9) for _ in range(5)] for _ in range(4)]
        m = SparseMatrix.from_dense(dense)
        field = PrimeField(97)
        rows = [
            {c: field.of(v) for c, v in enumerate(row) if v % 97} for row in dense
        ]
        assert len(rref(rows, field)) == rank_mod_p(m, 97).rank


def test_matmul():
    a = SparseMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseMatrix.from_dense([[1, 0], [3, 1]])
    assert matmul(a, b).to_dense() == [[7, 2], [3, 1]]


def test_matrix_validation():
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [(0, 0, 1), (0, 0, 2)])
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [(2, 0, 1)])
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [(0, 0, 5)], modulus=3)


def test_coordinate_dump_format():
    m = SparseMatrix(2, 2, [(0, 1, Fraction(3, 4)), (1, 0, 2)])
    buf = io.StringIO()
    m.dump(buf)
    assert buf.getvalue() == "2 2 2\n0 1 3/4\n1 0 2/1\n"


def test_deterministic_primes():
    a = deterministic_primes(12345, 2)
    b = deterministic_primes(12345, 2)
    assert a == b and a[0] != a[1]
    for p in a:
        assert 2**30 <= p < 2**31 and is_probable_prime(p)


def test_is_probable_prime_known_values():
    assert is_probable_prime(M61)
    assert not is_probable_prime(561)  # Carmichael
    assert not is_probable_prime(1)
    assert is_probable_prime(2)

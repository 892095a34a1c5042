import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starpi.freealg import perm_sign
from starpi.linalg import (DEFAULT_PRIME, QQ, SECOND_PRIME, GF, AmbientMismatch, Matrix, RegimeError,
                           RowAccumulator, default_primes, left_kernel, nullspace, rank, rank_two_primes, row_space,
                           subspace_contains, subspace_equal, subspace_intersect, subspace_sum)


def det_leibniz(rows, mod=None):
    n = len(rows)
    total = 0
    for p in itertools.permutations(range(n)):
        term = perm_sign(p)
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total % mod if mod else total


def rank_by_minors(mat, mod=None):
    m, n = len(mat), len(mat[0]) if mat else 0
    for k in range(min(m, n), 0, -1):
        for r in itertools.combinations(range(m), k):
            for c in itertools.combinations(range(n), k):
                if det_leibniz([[mat[i][j] for j in c] for i in r], mod):
                    return k
    return 0


small_mats = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=80, deadline=None)
@given(small_mats)
def test_rank_matches_minor_oracle(rows):
    assert rank(Matrix.from_rows(rows, QQ, len(rows[0]))) == rank_by_minors(rows)
    assert rank(Matrix.from_rows(rows, GF(7), len(rows[0]))) == rank_by_minors(rows, 7)


@settings(max_examples=60, deadline=None)
@given(small_mats)
def test_rank_nullity(rows):
    for f in (QQ, GF(5)):
        m = Matrix.from_rows(rows, f, len(rows[0]))
        assert rank(m) + nullspace(m).dim == len(rows[0])
        assert rank(m) + left_kernel(m).dim == len(rows)


@settings(max_examples=60, deadline=None)
@given(small_mats)
def test_kernel_vectors_annihilate(rows):
    a = np.array(rows, dtype=object)
    ker = nullspace(Matrix.from_rows(rows, QQ, len(rows[0])))
    for v in ker.basis:
        assert not np.any(a.dot(np.array(v, dtype=object)))
    lk = left_kernel(Matrix.from_rows(rows, QQ, len(rows[0])))
    for v in lk.basis:
        assert not np.any(np.array(v, dtype=object).dot(a))


@settings(max_examples=60, deadline=None)
@given(small_mats, small_mats)
def test_dimension_formula(r1, r2):
    n = min(len(r1[0]), len(r2[0]))
    a = row_space(Matrix.from_rows([r[:n] for r in r1], QQ, n))
    b = row_space(Matrix.from_rows([r[:n] for r in r2], QQ, n))
    s, i = subspace_sum(a, b), subspace_intersect(a, b)
    assert s.dim + i.dim == a.dim + b.dim
    assert subspace_contains(s, a) and subspace_contains(s, b)
    assert subspace_contains(a, i) and subspace_contains(b, i)


def test_rational_entries_and_pivots():
    m = Matrix.from_rows([[Fraction(1, 2), 1], [1, 2]], QQ, 2)
    assert rank(m) == 1
    s = row_space(m)
    assert s.pivots == (0,)
    assert list(s.basis[0]) == [1, 2]


def test_subspace_equal_and_contains():
    a = row_space(Matrix.from_rows([[1, 0, 1], [0, 1, 1]], QQ, 3))
    b = row_space(Matrix.from_rows([[1, 1, 2], [1, -1, 0]], QQ, 3))
    c = row_space(Matrix.from_rows([[1, 0, 0]], QQ, 3))
    assert subspace_equal(a, b)
    assert not subspace_contains(a, c)
    assert subspace_contains(subspace_sum(a, c), c)


def test_mixed_regimes_rejected():
    a = row_space(Matrix.from_rows([[1, 0]], QQ, 2))
    b = row_space(Matrix.from_rows([[1, 0]], GF(5), 2))
    with pytest.raises(RegimeError):
        subspace_sum(a, b)
    c = row_space(Matrix.from_rows([[1, 0, 0]], QQ, 3))
    with pytest.raises(AmbientMismatch):
        subspace_intersect(a, c)


def test_prime_validation():
    for bad in (4, 2, 2**31 + 11, 1):
        with pytest.raises(ValueError):
            GF(bad)
    assert GF(DEFAULT_PRIME).p == 2**31 - 1


def test_prime_env(monkeypatch):
    monkeypatch.setenv("STARPI_PRIME", "101")
    assert GF().p == 101
    assert default_primes() == (101, SECOND_PRIME)
    monkeypatch.setenv("STARPI_PRIME", str(SECOND_PRIME))
    assert default_primes() == (SECOND_PRIME, DEFAULT_PRIME)


def test_large_prime_no_overflow():
    p = DEFAULT_PRIME
    rows = [[p - 1, p - 2, 3], [p - 3, 5, p - 1], [7, p - 1, p - 5]]
    expected = rank_by_minors(rows, p)
    assert rank(Matrix.from_rows(rows, GF(p), 3)) == expected


def test_rank_two_primes_flags_disagreement():
    # det = 7, so the rank drops modulo 7 only
    m = np.array([[7, 0], [0, 1]])
    ranks, agree = rank_two_primes(m, (7, 11))
    assert ranks == [1, 2] and not agree
    ranks, agree = rank_two_primes(m)
    assert ranks == [2, 2] and agree


def test_row_accumulator_matches_batch():
    rng = np.random.default_rng(3)
    rows = rng.integers(-2, 3, size=(50, 9))
    acc = RowAccumulator(9, GF(13), batch=7)
    for r in rows:
        acc.add(r)
    assert acc.rank == rank(Matrix.from_rows(rows, GF(13), 9))
    assert subspace_equal(acc.subspace(), row_space(Matrix.from_rows(rows, GF(13), 9)))

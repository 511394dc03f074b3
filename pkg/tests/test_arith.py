import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charmoment.arith import (
    MAX_INT,
    is_prime,
    is_square,
    jacobi,
    jacobi_array,
    kernel_table,
    primes_in,
    two_adic_split,
)
from charmoment.errors import CapacityError, DomainError, EmptyRangeError, InvalidModulusError
from conftest import is_prime_trial, jacobi_by_factoring, kernel_by_division


@pytest.mark.parametrize("a,m,expected", [(2, 7, 1), (6, 3, 0), (5, 1, 1), (0, 1, 1), (3, 11, 1), (3, 19, -1)])
def test_jacobi_examples(a, m, expected):
    assert jacobi(a, m) == expected


@pytest.mark.parametrize("m", [0, -3, 4, 10])
def test_jacobi_rejects_bad_modulus(m):
    with pytest.raises(InvalidModulusError):
        jacobi(1, m)
    with pytest.raises(InvalidModulusError):
        jacobi_array([1], [m])


def test_jacobi_matches_euler_reconstruction_small():
    for m in range(3, 302, 2):
        for a in range(m):
            assert jacobi(a, m) == jacobi_by_factoring(a, m)


def test_jacobi_array_matches_scalar():
    rng = np.random.default_rng(7)
    a = rng.integers(-(10**12), 10**12, size=5000)
    m = rng.integers(1, 10**12, size=5000) | 1
    got = jacobi_array(a, m)
    assert got.dtype == np.int8
    assert [int(x) for x in got] == [jacobi(int(x), int(y)) for x, y in zip(a, m)]


def test_jacobi_array_broadcasts():
    out = jacobi_array(np.arange(1, 7)[:, None], np.array([7, 9, 11])[None, :])
    assert out.shape == (6, 3)
    assert out[1, 0] == 1 and out[2, 1] == 0


@given(st.integers(-(10**30), 10**30), st.integers(1, 10**20).map(lambda x: 2 * x + 1), st.integers(1, 10**20).map(lambda x: 2 * x + 1))
def test_jacobi_multiplicative_in_modulus(a, m, n):
    assert jacobi(a, m * n) == jacobi(a, m) * jacobi(a, n)


@given(st.integers(-(10**20), 10**20), st.integers(-(10**20), 10**20), st.integers(0, 10**20).map(lambda x: 2 * x + 1))
def test_jacobi_multiplicative_in_numerator(a, b, m):
    assert jacobi(a * b, m) == jacobi(a, m) * jacobi(b, m)


def test_reciprocity_closure():
    for a in range(1, 502, 2):
        for m in range(1, 502, 2):
            if math.gcd(a, m) == 1:
                sign = -1 if ((a - 1) // 2) * ((m - 1) // 2) % 2 else 1
                assert jacobi(a, m) * jacobi(m, a) == sign


@given(st.integers(-(10**12), 10**12), st.integers(1, 10**9).map(lambda x: 2 * x + 1))
def test_jacobi_zero_iff_shared_factor(a, m):
    assert (jacobi(a, m) == 0) == (math.gcd(a, m) > 1)


def test_primes_in_examples():
    assert list(primes_in(10, 20)) == [11, 13, 17, 19]
    assert list(primes_in(2, 2)) == [2]
    assert len(primes_in(1, 100)) == 25


def test_primes_in_errors():
    with pytest.raises(EmptyRangeError):
        primes_in(20, 10)
    with pytest.raises(CapacityError):
        primes_in(2, MAX_INT + 1)


@pytest.mark.parametrize("lo,hi,segment", [(2, 3000, 128), (1000, 5000, 97), (99_000, 101_000, 1 << 18), (3, 3, 8)])
def test_primes_in_matches_trial_division(lo, hi, segment):
    got = list(primes_in(lo, hi, segment=segment))
    assert got == [n for n in range(lo, hi + 1) if is_prime_trial(n)]
    assert all(x < y for x, y in zip(got, got[1:]))


def test_primes_in_near_large_bound():
    pr = primes_in(10**12, 10**12 + 1000)
    assert all(is_prime(p) for p in pr)
    assert len(pr) == sum(is_prime(n) for n in range(10**12, 10**12 + 1001))


def test_is_prime_deterministic_cases():
    assert [n for n in range(50) if is_prime(n)] == [n for n in range(50) if is_prime_trial(n)]
    # strong pseudoprimes to several small bases
    assert not is_prime(3215031751)
    assert not is_prime(3825123056546413051)
    assert is_prime(2**61 - 1)


@pytest.mark.parametrize("n,expected", [(12, (2, 3)), (7, (0, 7)), (8, (3, 1)), (1, (0, 1))])
def test_two_adic_split_examples(n, expected):
    assert two_adic_split(n) == expected


def test_two_adic_split_domain():
    with pytest.raises(DomainError):
        two_adic_split(0)


@given(st.integers(1, 2**200))
def test_two_adic_split_recomposes(n):
    i, m = two_adic_split(n)
    assert m % 2 == 1 and (m << i) == n


@pytest.mark.parametrize("n,expected", [(0, True), (49, True), (50, False), (-4, False), (10**40, True)])
def test_is_square(n, expected):
    assert is_square(n) is expected


def test_kernel_table_examples():
    kt = kernel_table(48, 4)
    assert list(kt.kernels) == [1, 2, 51, 13]
    assert list(kt.valuations) == [0, 1, 0, 2]
    assert kernel_table(0, 1).kernel(1) == 1
    kt = kernel_table(8, 1)
    assert kt.kernel(9) == 1 and bool(kt.square_flags[0])


def test_kernel_table_errors():
    with pytest.raises(DomainError):
        kernel_table(-1, 3)
    with pytest.raises(DomainError):
        kernel_table(0, 0)
    with pytest.raises(CapacityError):
        kernel_table(MAX_INT, 1)


@pytest.mark.parametrize("u", [0, 1, 17, 1000, 65_536, 999_000, 10**6])
@pytest.mark.parametrize("h", [1, 2, 31, 200, 1000])
def test_kernel_table_matches_trial_division(u, h):
    kt = kernel_table(u, h)
    for j, n in enumerate(range(u + 1, u + h + 1)):
        assert kt.kernels[j] == kernel_by_division(n)
        assert kt.valuations[j] == two_adic_split(n)[0]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**12), st.integers(1, 64))
def test_kernel_invariants(u, h):
    kt = kernel_table(u, h)
    for n, k in zip(range(u + 1, u + h + 1), kt.kernels):
        k = int(k)
        assert n % k == 0
        assert is_square(n // k)
        assert (k == 1) == is_square(n)
        assert all(k % (p * p) for p in range(2, 60))

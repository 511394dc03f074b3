"""Exact integer kernel: Jacobi symbols, prime sieving, 2-adic splitting and
squarefree kernels over intervals.

Scalar routines work on Python integers of any size. The ``*_array``
routines and the sieves run on ``int64`` numpy arrays and therefore cap
arguments at ``MAX_INT = 2**62``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import CapacityError, DomainError, EmptyRangeError, InvalidModulusError

MAX_INT = 2**62

# Deterministic for every n < 3.3e24, which covers the 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) by the binary algorithm.

    Args:
        a: Any integer; reduced modulo ``m`` first.
        m: Positive odd modulus. For prime ``m`` this is the Legendre symbol.

    Returns:
        -1, 0 or +1. ``jacobi(a, 1) == 1`` for every ``a``.

    Raises:
        InvalidModulusError: ``m`` is even or nonpositive.
    """
    if m <= 0 or not m & 1:
        raise InvalidModulusError(f"Jacobi modulus must be odd and positive, got {m}")
    a %= m
    t = 1
    while a:
        k = (a & -a).bit_length() - 1
        a >>= k
        if k & 1 and m & 7 in (3, 5):
            t = -t
        if a & 3 == 3 and m & 3 == 3:
            t = -t
        a, m = m % a, a
    return t if m == 1 else 0


def jacobi_array(a, m) -> np.ndarray:
    """Vectorised Jacobi symbol over broadcast ``int64`` arrays.

    Same algorithm as :func:`jacobi`; finished lanes are compacted away each
    round so the cost tracks the slowest remaining lanes only.

    Returns:
        ``int8`` array with the broadcast shape of ``a`` and ``m``.
    """
    a = np.asarray(a, dtype=np.int64)
    m = np.asarray(m, dtype=np.int64)
    a, m = np.broadcast_arrays(a, m)
    shape = a.shape
    if m.size and (np.any(m <= 0) or np.any((m & 1) == 0)):
        raise InvalidModulusError("Jacobi modulus must be odd and positive")
    m = m.ravel().copy()
    a = a.ravel() % m
    out = np.zeros(a.size, dtype=np.int8)
    t = np.ones(a.size, dtype=np.int8)
    idx = np.arange(a.size)
    while idx.size:
        done = a == 0
        if done.any():
            out[idx[done]] = np.where(m[done] == 1, t[done], 0)
            keep = ~done
            a, m, t, idx = a[keep], m[keep], t[keep], idx[keep]
            if not idx.size:
                break
        k = np.bitwise_count((a & -a) - 1).astype(np.int64)
        a = a >> k
        r8 = m & 7
        flip = ((k & 1) == 1) & ((r8 == 3) | (r8 == 5))
        flip ^= ((a & 3) == 3) & ((m & 3) == 3)
        t[flip] *= -1
        a, m = m % a, a
    return out.reshape(shape)


def is_square(n: int) -> bool:
    """True iff ``n`` is a perfect square (negative numbers are not)."""
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact below 2**64."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while not d & 1:
        d >>= 1
        r += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def two_adic_split(n: int) -> tuple[int, int]:
    """Write ``n = 2**i * m`` with ``m`` odd; returns ``(i, m)``."""
    if n < 1:
        raise DomainError(f"two_adic_split needs n >= 1, got {n}")
    i = (n & -n).bit_length() - 1
    return i, n >> i


def small_primes(n: int) -> np.ndarray:
    """All primes ``<= n`` by a plain Eratosthenes sieve."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True, eq=False)
class PrimeRange:
    """The primes in the closed range ``[lo, hi]``, ascending."""

    lo: int
    hi: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return (int(p) for p in self.primes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrimeRange):
            return NotImplemented
        return (self.lo, self.hi) == (other.lo, other.hi) and np.array_equal(
            self.primes, other.primes
        )

    def restrict(self, lo: int) -> PrimeRange:
        """Drop primes below ``lo``."""
        lo = max(lo, self.lo)
        return PrimeRange(lo, self.hi, self.primes[self.primes >= lo])


def primes_in(lo: int, hi: int, segment: int = 1 << 18) -> PrimeRange:
    """Segmented sieve of Eratosthenes over ``[lo, hi]``.

    Memory is ``O(sqrt(hi) + segment)``.

    Raises:
        EmptyRangeError: ``hi < lo``.
        CapacityError: ``hi > 2**62``.
    """
    if hi < lo:
        raise EmptyRangeError(f"empty prime range [{lo}, {hi}]")
    if hi > MAX_INT:
        raise CapacityError(f"primes_in supports hi <= 2**62, got {hi}")
    lo = max(lo, 2)
    if hi < lo:
        return PrimeRange(lo, hi, np.zeros(0, dtype=np.int64))
    base = small_primes(isqrt(hi))
    chunks = []
    for start in range(lo, hi + 1, segment):
        stop = min(start + segment, hi + 1)
        flags = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            flags[first - start :: p] = False
        if start < 2:
            flags[: 2 - start] = False
        chunks.append(np.flatnonzero(flags).astype(np.int64) + start)
    primes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    primes.flags.writeable = False
    return PrimeRange(lo, hi, primes)


def dyadic_primes(Q: int) -> PrimeRange:
    """Odd primes in ``[Q, 2Q]``; 2 is excluded because (n/2) is undefined."""
    return primes_in(max(3, Q), max(3, 2 * Q))


@dataclass(frozen=True, eq=False)
class KernelTable:
    """Squarefree kernels and 2-adic orders of every ``n`` in ``(u, u+h]``.

    Entry ``j`` of ``kernels`` is the kernel of ``u + 1 + j`` (the product of
    the primes dividing it to an odd power); ``valuations[j]`` is its 2-adic
    order.
    """

    u: int
    h: int
    kernels: np.ndarray
    valuations: np.ndarray

    @property
    def numbers(self) -> np.ndarray:
        return np.arange(self.u + 1, self.u + self.h + 1, dtype=np.int64)

    @property
    def square_flags(self) -> np.ndarray:
        return self.kernels == 1

    def kernel(self, n: int) -> int:
        if not self.u < n <= self.u + self.h:
            raise DomainError(f"{n} is outside ({self.u}, {self.u + self.h}]")
        return int(self.kernels[n - self.u - 1])


def kernel_table(u: int, h: int) -> KernelTable:
    """Sieve ``(u, u+h]`` for squarefree kernels.

    Every prime ``p <= sqrt(u+h)`` is divided out of its multiples in full,
    recording exponent parity; what remains of each ``n`` is then 1 or a single
    prime, which finishes the kernel. No element is factored on its own.

    Raises:
        DomainError: ``u < 0`` or ``h < 1``.
        CapacityError: ``u + h > 2**62``.
    """
    if u < 0 or h < 1:
        raise DomainError(f"kernel_table needs u >= 0 and h >= 1, got u={u}, h={h}")
    if u + h > MAX_INT:
        raise CapacityError(f"kernel_table supports u + h <= 2**62, got {u + h}")
    rest = np.arange(u + 1, u + h + 1, dtype=np.int64)
    kern = np.ones(h, dtype=np.int64)

    # p = 2 separately so the full valuation is kept.
    val = np.bitwise_count((rest & -rest) - 1).astype(np.int64)
    rest >>= val
    kern[(val & 1) == 1] = 2

    for p in small_primes(isqrt(u + h))[1:]:
        p = int(p)
        first = (-(u + 1)) % p
        if first >= h:
            continue
        idx = np.arange(first, h, p)
        sub = rest[idx]
        odd = np.zeros(idx.size, dtype=bool)
        hit = np.ones(idx.size, dtype=bool)
        while hit.any():
            sub[hit] //= p
            odd[hit] ^= True
            hit = hit & (sub % p == 0)
        rest[idx] = sub
        kern[idx[odd]] *= p
    kern *= rest
    kern.flags.writeable = False
    val.flags.writeable = False
    return KernelTable(u, h, kern, val)

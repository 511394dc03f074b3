"""Counting ordered tuples from ``(u, u+h]`` whose product is a perfect square.

Three independent routes compute ``R_t(h, u)``:

* :func:`r_count_brute` enumerates every tuple and square-tests the product;
* :func:`r2_structured` (``t = 2``) writes ``m = k a**2``, ``n = k b**2`` and
  counts, for each squarefree ``k <= h``, the ``a`` with ``k a**2`` in range;
* :func:`r_count_kernel` groups half-tuples by the squarefree kernel of their
  product, so that ``R_t = sum_c N(c)**2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .arith import MAX_INT, is_square, kernel_table
from .errors import CapacityError, DomainError

BRUTE_BUDGET = 10**8
KERNEL_T4_MAX_H = 1 << 13


def r_count_brute(u: int, h: int, t: int) -> int:
    """Exhaustive count of ``t``-tuples with square product.

    Raises:
        CapacityError: ``h**t`` exceeds the enumeration budget of ``10**8``.
    """
    if t < 1 or h < 1 or u < 0:
        raise DomainError(f"need t >= 1, h >= 1, u >= 0; got t={t}, h={h}, u={u}")
    if h**t > BRUTE_BUDGET:
        raise CapacityError(f"h**t = {h**t} exceeds the brute-force budget {BRUTE_BUDGET}")
    values = range(u + 1, u + h + 1)
    count = 0
    for head in itertools.product(values, repeat=t - 1):
        prefix = math.prod(head)
        for n in values:
            if is_square(prefix * n):
                count += 1
    return count


def _squarefree_flags(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[0] = False
    for p in range(2, isqrt(n) + 1):
        flags[p * p :: p * p] = False
    return flags


def r2_structured(u: int, h: int) -> int:
    """``R_2(h, u)`` from the ``m = k a^2, n = k b^2`` parametrisation.

    The ``h`` diagonal pairs are counted directly. An off-diagonal pair shares
    a squarefree ``k`` dividing ``|m - n| < h``, and for each such ``k`` the
    admissible ``a`` fill the range ``(sqrt(u/k), sqrt((u+h)/k)]``.
    """
    if u < 0 or h < 1:
        raise DomainError(f"need u >= 0 and h >= 1, got u={u}, h={h}")
    if u + h > MAX_INT:
        raise CapacityError(f"u + h must be <= 2**62, got {u + h}")
    sqfree = _squarefree_flags(h)
    total = h
    for k in range(1, h + 1):
        if sqfree[k]:
            c = isqrt((u + h) // k) - isqrt(u // k)
            total += c * (c - 1)
    return total


@dataclass
class KernelClassCount:
    """Histogram of half-tuples by the squarefree kernel of their product.

    ``classes[c]`` is the number of ordered ``t/2``-tuples whose product has
    kernel ``c``; keys ascend.
    """

    u: int
    h: int
    t: int
    classes: dict[int, int] = field(repr=False)

    @property
    def mass(self) -> int:
        return sum(self.classes.values())

    @property
    def r_count(self) -> int:
        return sum(c * c for c in self.classes.values())


def _merge_counts(keys: list[np.ndarray], counts: list[np.ndarray]) -> dict[int, int]:
    k = np.concatenate(keys)
    c = np.concatenate(counts)
    order = np.argsort(k, kind="stable")
    k, c = k[order], c[order]
    starts = np.flatnonzero(np.r_[True, k[1:] != k[:-1]])
    sums = np.add.reduceat(c, starts)
    return {int(a): int(b) for a, b in zip(k[starts], sums)}


def kernel_class_count(u: int, h: int, t: int) -> KernelClassCount:
    """Kernel histogram of ``t/2``-tuples for ``t`` in {2, 4}.

    For pairs the kernel of ``n1 * n2`` is ``(k1/g) * (k2/g)`` with
    ``g = gcd(k1, k2)``, since the square parts cancel.
    """
    if t not in (2, 4):
        raise DomainError(f"kernel method supports t in {{2, 4}}, got {t}")
    table = kernel_table(u, h)
    kern = table.kernels
    if t == 2:
        keys, counts = np.unique(kern, return_counts=True)
        classes = {int(a): int(b) for a, b in zip(keys, counts)}
        return KernelClassCount(u, h, t, classes)
    if h > KERNEL_T4_MAX_H:
        raise CapacityError(f"t=4 kernel method supports h <= {KERNEL_T4_MAX_H}, got {h}")
    if (u + h) ** 2 >= MAX_INT:
        # Products no longer fit in int64; fall back to Python integers.
        kl = [int(k) for k in kern]
        hist: dict[int, int] = {}
        for a in kl:
            for b in kl:
                g = math.gcd(a, b)
                c = (a // g) * (b // g)
                hist[c] = hist.get(c, 0) + 1
        return KernelClassCount(u, h, t, dict(sorted(hist.items())))
    rows = max(1, (1 << 21) // h)
    keys, counts = [], []
    for lo in range(0, h, rows):
        a = kern[lo : lo + rows, None]
        g = np.gcd(a, kern[None, :])
        prod = (a // g) * (kern[None, :] // g)
        k, c = np.unique(prod, return_counts=True)
        keys.append(k)
        counts.append(c)
    return KernelClassCount(u, h, t, _merge_counts(keys, counts))


def r_count_kernel(u: int, h: int, t: int) -> int:
    """``R_t`` for ``t`` in {2, 4} as ``sum_c N(c)**2`` over kernel classes."""
    if t % 2 or t not in (2, 4):
        raise DomainError(f"kernel method supports t in {{2, 4}}, got {t}")
    return kernel_class_count(u, h, t).r_count


@dataclass(frozen=True)
class ConjectureRow:
    u: int
    h: int
    t: int
    count: int
    exponent: float
    ratio: float

    @property
    def diagonal_ok(self) -> bool:
        """The trivial lower bound from tuples that pair off equal entries."""
        if self.t == 2:
            return self.count >= self.h
        if self.t == 4:
            return self.count >= 3 * self.h**2 - 2 * self.h
        return True


def conjecture_scan(us, hs, t: int) -> list[ConjectureRow]:
    """``R_t``, ``log R_t / log h`` and ``R_t / h^(t/2)`` on the grid ``us x hs``.

    For ``t = 2`` the ratio column is ``R_2 / (h ln(h + 2))`` instead, the
    shape of the pair-count bound.
    """
    rows = []
    for u in us:
        for h in hs:
            count = r_count_kernel(u, h, t)
            exponent = math.log(count) / math.log(h) if h > 1 else float("nan")
            if t == 2:
                ratio = count / (h * math.log(h + 2))
            else:
                ratio = count / h ** (t // 2)
            rows.append(ConjectureRow(u, h, t, count, exponent, ratio))
    return rows


def conjecture_csv(rows: list[ConjectureRow]) -> str:
    lines = ["u,h,t,count,exponent,ratio"]
    for r in rows:
        lines.append(f"{r.u},{r.h},{r.t},{r.count},{r.exponent!r},{r.ratio!r}")
    return "\n".join(lines) + "\n"

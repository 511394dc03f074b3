"""Weighted Legendre/Jacobi symbol sums over shifted intervals and their
moments over primes in a dyadic window.

Weights come in two modes. ``exact-int`` weights are integers in {-1, 0, 1}
and every sum and moment is an exact Python integer. ``complex`` weights are
``complex128`` with modulus at most one; per-prime sums are accumulated row by
row in a fixed order and the moment is reduced with ``math.fsum``, so results
do not depend on how work was split across threads.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path

import numpy as np

from .arith import PrimeRange, jacobi, jacobi_array
from .errors import CapacityError, DomainError, InvalidModulusError, UnsupportedModeError
from .parallel import chunk_bounds, ordered_map

CLASS_FILTERS = ("all", "odd", "plus1mod4", "minus1mod4")
PRESETS = ("unit", "rademacher", "unimodular", "file")

# Symbol-matrix entries evaluated per chunk; fixed so chunking never depends
# on the thread count.
_CHUNK_LANES = 1 << 20


def class_mask(numbers: np.ndarray, class_filter: str) -> np.ndarray:
    """Boolean mask of the entries of ``numbers`` selected by ``class_filter``."""
    if class_filter == "all":
        return np.ones(len(numbers), dtype=bool)
    if class_filter == "odd":
        return (numbers & 1) == 1
    if class_filter == "plus1mod4":
        return (numbers & 3) == 1
    if class_filter == "minus1mod4":
        return (numbers & 3) == 3
    raise DomainError(f"unknown class filter {class_filter!r}; expected one of {CLASS_FILTERS}")


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Coefficients ``alpha_n`` for ``n`` in ``(u, u+h]``; ``values[j]`` is ``alpha_{u+1+j}``."""

    u: int
    h: int
    values: np.ndarray = field(repr=False)
    preset: str = "custom"
    seed: int | None = None

    def __post_init__(self):
        if self.u < 0 or self.h < 1:
            raise DomainError(f"weights need u >= 0 and h >= 1, got u={self.u}, h={self.h}")
        vals = np.asarray(self.values)
        if vals.shape != (self.h,):
            raise DomainError(f"expected {self.h} weights, got shape {vals.shape}")
        if np.iscomplexobj(vals) or np.issubdtype(vals.dtype, np.floating):
            vals = vals.astype(np.complex128)
            if np.any(np.abs(vals) > 1 + 1e-12):
                raise DomainError("weights must satisfy |alpha_n| <= 1")
        else:
            vals = vals.astype(np.int64)
            if np.any(np.abs(vals) > 1):
                raise DomainError("integer weights must lie in {-1, 0, 1}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def mode(self) -> str:
        return "complex" if np.iscomplexobj(self.values) else "exact-int"

    @property
    def numbers(self) -> np.ndarray:
        return np.arange(self.u + 1, self.u + self.h + 1, dtype=np.int64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightSequence):
            return NotImplemented
        return (
            (self.u, self.h, self.mode) == (other.u, other.h, other.mode)
            and np.array_equal(self.values, other.values)
        )

    def __getitem__(self, n: int):
        """``alpha_n`` for ``n`` in ``(u, u+h]``."""
        if not self.u < n <= self.u + self.h:
            raise DomainError(f"{n} is outside ({self.u}, {self.u + self.h}]")
        v = self.values[n - self.u - 1]
        return int(v) if self.mode == "exact-int" else complex(v)

    def restricted(self, class_filter: str) -> WeightSequence:
        """Copy with weights outside ``class_filter`` set to zero."""
        vals = np.where(class_mask(self.numbers, class_filter), self.values, 0)
        return WeightSequence(self.u, self.h, vals.astype(self.values.dtype), self.preset, self.seed)

    def padded(self) -> WeightSequence:
        """The same weights on ``(0, u+h]``, zero at ``n <= u``."""
        vals = np.zeros(self.u + self.h, dtype=self.values.dtype)
        vals[self.u :] = self.values
        return WeightSequence(0, self.u + self.h, vals, self.preset, self.seed)

    @classmethod
    def unit(cls, u: int, h: int) -> WeightSequence:
        return cls(u, h, np.ones(h, dtype=np.int64), "unit")

    @classmethod
    def zeros(cls, u: int, h: int) -> WeightSequence:
        return cls(u, h, np.zeros(h, dtype=np.int64), "file")

    @classmethod
    def rademacher(cls, u: int, h: int, seed: int = 0) -> WeightSequence:
        """Independent random signs, reproducible from ``(seed, u, h)``."""
        rng = np.random.default_rng([seed, u, h])
        return cls(u, h, 2 * rng.integers(0, 2, size=h, dtype=np.int64) - 1, "rademacher", seed)

    @classmethod
    def unimodular(cls, u: int, h: int, seed: int = 0) -> WeightSequence:
        """Random points on the unit circle, reproducible from ``(seed, u, h)``."""
        rng = np.random.default_rng([seed, u, h, 1])
        return cls(u, h, np.exp(2j * np.pi * rng.random(h)), "unimodular", seed)

    @classmethod
    def from_csv(cls, path: str | Path, u: int, h: int) -> WeightSequence:
        """Read ``n,re,im`` rows; absent ``n`` get weight 0.

        The result is exact-int when every weight is an integer with zero
        imaginary part, complex otherwise. A non-numeric first row is taken as
        a header.
        """
        vals = np.zeros(h, dtype=np.complex128)
        with open(path, newline="") as fh:
            for k, row in enumerate(csv.reader(fh)):
                if not row or not "".join(row).strip():
                    continue
                try:
                    n, re, im = int(row[0]), float(row[1]), float(row[2]) if len(row) > 2 else 0.0
                except ValueError:
                    if k == 0:
                        continue
                    raise DomainError(f"bad weight row {row!r} in {path}") from None
                if not u < n <= u + h:
                    raise DomainError(f"weight index {n} outside ({u}, {u + h}]")
                vals[n - u - 1] = complex(re, im)
        if np.all(vals.imag == 0) and np.all(vals.real == np.round(vals.real)):
            return cls(u, h, vals.real.astype(np.int64), "file")
        return cls(u, h, vals, "file")

    @classmethod
    def from_preset(cls, preset: str, u: int, h: int, seed: int = 0, path: str | Path | None = None) -> WeightSequence:
        if preset == "unit":
            return cls.unit(u, h)
        if preset == "rademacher":
            return cls.rademacher(u, h, seed)
        if preset == "unimodular":
            return cls.unimodular(u, h, seed)
        if preset == "file":
            if path is None:
                return cls.zeros(u, h)
            return cls.from_csv(path, u, h)
        raise DomainError(f"unknown weight preset {preset!r}; expected one of {PRESETS}")


def _check_modulus(q: int) -> None:
    if q < 3 or q % 2 == 0:
        raise InvalidModulusError(f"character sum modulus must be odd and >= 3, got {q}")


def char_sum(q: int, w: WeightSequence, class_filter: str = "all"):
    """``sum alpha_n (n/q)`` over ``n`` in ``(u, u+h]`` passing ``class_filter``.

    Returns an ``int`` for exact-int weights and a ``complex`` otherwise.
    """
    _check_modulus(q)
    S = _sums_over_moduli(np.array([q], dtype=np.int64), w, class_filter)[0]
    return int(S) if w.mode == "exact-int" else complex(S)


def _sums_over_moduli(moduli: np.ndarray, w: WeightSequence, class_filter: str, threads: int | None = 1) -> np.ndarray:
    numbers = w.numbers
    keep = class_mask(numbers, class_filter) & (w.values != 0)
    ns = numbers[keep]
    alpha = w.values[keep]
    dtype = np.int64 if w.mode == "exact-int" else np.complex128
    if not len(moduli):
        return np.zeros(0, dtype=dtype)
    if not len(ns):
        return np.zeros(len(moduli), dtype=dtype)
    step = max(1, _CHUNK_LANES // len(ns))

    def run(bounds):
        lo, hi = bounds
        J = jacobi_array(ns[:, None], moduli[None, lo:hi])
        acc = np.zeros(hi - lo, dtype=dtype)
        for a, row in zip(alpha, J):
            acc += a * row
        return acc

    parts = ordered_map(run, chunk_bounds(len(moduli), step), threads)
    return np.concatenate(parts)


@dataclass
class MomentResult:
    """A moment ``sum_p |S_p|^(2s)`` with its per-prime breakdown."""

    value: int | float
    s: int
    class_filter: str
    primes: np.ndarray = field(repr=False)
    sums: np.ndarray = field(repr=False)
    abs2s: np.ndarray = field(repr=False)
    empty: bool = False

    def breakdown_csv(self) -> str:
        lines = ["p,S_re,S_im,abs2s"]
        for p, S, a in zip(self.primes, self.sums, self.abs2s):
            S = complex(S)
            if isinstance(a, (int, np.integer)):
                lines.append(f"{int(p)},{int(S.real)},{int(S.imag)},{int(a)}")
            else:
                lines.append(f"{int(p)},{S.real!r},{S.imag!r},{float(a)!r}")
        return "\n".join(lines) + "\n"


def moment(pr: PrimeRange, w: WeightSequence, s: int = 1, class_filter: str = "all", threads: int | None = None) -> MomentResult:
    """``M_2s = sum_{p in pr} |S_p|^(2s)`` with ``S_p`` the class-filtered sum.

    The prime 2 is skipped. An empty range gives zero and a warning.
    """
    if s < 1:
        raise DomainError(f"moment order s must be >= 1, got {s}")
    primes = pr.primes[pr.primes >= 3]
    sums = _sums_over_moduli(primes, w, class_filter, threads)
    if w.mode == "exact-int":
        sq = sums * sums
        h_eff = int(np.count_nonzero(w.values))
        if 2 * s * math.log2(max(h_eff, 1)) + math.log2(len(primes) + 1) < 62:
            abs2s = sq**s
            value = int(abs2s.sum())
        else:
            abs2s = np.array([int(x) ** s for x in sq], dtype=object)
            value = sum(abs2s)
    else:
        abs2s = (sums.real**2 + sums.imag**2) ** s
        value = math.fsum(abs2s)
    empty = len(primes) == 0
    if empty:
        warnings.warn(f"no odd primes in [{pr.lo}, {pr.hi}]; moment is 0", stacklevel=2)
    return MomentResult(value, s, class_filter, primes, sums, abs2s, empty)


def moment_pair_expand(pr: PrimeRange, w: WeightSequence) -> int:
    """``M_2`` by expanding ``|S_p|^2 = sum_{m,n} alpha_m alpha_n (mn/p)``.

    Independent of :func:`moment`: the pair order is swapped with the prime
    sum and every symbol comes from Euler's criterion.
    """
    if w.mode != "exact-int":
        raise UnsupportedModeError("moment_pair_expand needs exact-int weights")
    if w.h > 1 << 12:
        raise CapacityError(f"moment_pair_expand supports h <= 4096, got {w.h}")
    terms = [(int(n), int(a)) for n, a in zip(w.numbers, w.values) if a]
    primes = [int(p) for p in pr.primes if p >= 3]
    total = 0
    for i, (m, am) in enumerate(terms):
        for n, an in terms[i:]:
            coeff = am * an * (1 if m == n else 2)
            mn = m * n
            inner = 0
            for p in primes:
                e = pow(mn % p, (p - 1) // 2, p)
                inner += -1 if e == p - 1 else e
            total += coeff * inner
    return total


@dataclass(frozen=True)
class DyadicPart:
    """Level ``i`` of the 2-adic split: ``beta`` at odd ``n`` equals ``alpha_{2^i n}``."""

    i: int
    beta: WeightSequence

    @property
    def covered(self) -> int:
        """How many odd ``n`` fall in this level's index set."""
        return int(np.count_nonzero(self.beta.numbers & 1))


def dyadic_level(h: int) -> int:
    """Largest ``l`` with ``2**l <= sqrt(h)``."""
    if h < 1:
        raise DomainError(f"h must be >= 1, got {h}")
    return isqrt(h).bit_length() - 1


def dyadic_decompose(w: WeightSequence) -> tuple[list[DyadicPart], WeightSequence]:
    """Split ``w`` by 2-adic order of the index.

    Level ``i <= l`` carries the odd ``n`` with ``2**i * n`` in ``(u, u+h]``;
    the remainder keeps the indices of 2-adic order above ``l``. For every odd
    ``q >= 3`` the split satisfies

        char_sum(q, w) == sum_i (2/q)**i * char_sum(q, beta_i, "odd")
                          + char_sum(q, remainder)
    """
    ell = dyadic_level(w.h)
    parts = []
    for i in range(ell + 1):
        lo, hi = w.u >> i, (w.u + w.h) >> i
        ns = np.arange(lo + 1, hi + 1, dtype=np.int64)
        vals = np.zeros(hi - lo, dtype=w.values.dtype)
        odd = (ns & 1) == 1
        vals[odd] = w.values[(ns[odd] << i) - w.u - 1]
        parts.append(DyadicPart(i, WeightSequence(lo, hi - lo, vals, f"dyadic-{i}", w.seed)))
    nums = w.numbers
    v2 = np.bitwise_count((nums & -nums) - 1)
    rem_vals = np.where(v2 > ell, w.values, 0).astype(w.values.dtype)
    remainder = WeightSequence(w.u, w.h, rem_vals, "dyadic-remainder", w.seed)
    return parts, remainder


def decomposition_sides(q: int, w: WeightSequence):
    """Both sides of the dyadic identity at modulus ``q``: ``(direct, recomposed)``."""
    _check_modulus(q)
    parts, remainder = dyadic_decompose(w)
    two = jacobi(2, q)
    rhs = char_sum(q, remainder)
    for part in parts:
        rhs += two**part.i * char_sum(q, part.beta, "odd")
    return char_sum(q, w), rhs

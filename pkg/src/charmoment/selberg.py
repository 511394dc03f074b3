"""Optimal Selberg upper-bound sieve weights in exact rational arithmetic.

For a sieving level ``z`` the coefficients are

    Lambda_d = mu(d) * d/phi(d) * G_d(z/d) / G(z),     d <= z squarefree,

with ``G_d(x) = sum 1/phi(m)`` over squarefree ``m <= x`` coprime to ``d`` and
``G = G_1``. The upper-bound weights are
``lambda_plus[n] = sum_{lcm(r, s) = n} Lambda_r Lambda_s``, so that

    sum_{e | q} lambda_plus[e] = (sum_{d | q} Lambda_d) ** 2,

which is ``>= 0`` always and ``== 1`` when ``q`` has no prime factor ``<= z``.

Internally every ``Lambda_d`` is held as an integer numerator over one common
denominator ``D``; ``lambda_plus`` then lives over ``D**2``. All identities are
checked on those integers, so nothing is ever rounded.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .arith import small_primes
from .errors import DomainError


def _mu_phi(n: int) -> tuple[list[int], list[int]]:
    mu = [1] * (n + 1)
    phi = list(range(n + 1))
    for p in small_primes(n):
        p = int(p)
        for k in range(p, n + 1, p):
            mu[k] = -mu[k]
            phi[k] -= phi[k] // p
        for k in range(p * p, n + 1, p * p):
            mu[k] = 0
    mu[0] = 0
    return mu, phi


def big_g(z: int) -> Fraction:
    """Normaliser ``G(z) = sum_{q <= z} mu(q)**2 / phi(q)``."""
    if z < 1:
        return Fraction(0)
    mu, phi = _mu_phi(z)
    return sum((Fraction(1, phi[q]) for q in range(1, z + 1) if mu[q]), Fraction(0))


def quadratic_form(Lambda: dict[int, Fraction]) -> Fraction:
    """``sum_{d1, d2} Lambda_d1 Lambda_d2 / lcm(d1, d2)`` for any coefficient map."""
    grouped: dict[int, Fraction] = {}
    items = [(d, c) for d, c in Lambda.items() if c]
    for d1, c1 in items:
        for d2, c2 in items:
            n = math.lcm(d1, d2)
            grouped[n] = grouped.get(n, 0) + c1 * c2
    return sum((c / n for n, c in grouped.items()), Fraction(0))


def _frac_str(x: Fraction) -> str:
    # Integers print bare ("1"), everything else as "num/den".
    return str(x)


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class SieveSystem:
    """Selberg weights at level ``z``.

    Attributes:
        z: Sieving level; the sifting primes are the primes ``<= z``.
        G: The normaliser ``G(z)``.
        Lambda: ``d -> Lambda_d`` for squarefree ``d <= z``, ascending ``d``.
        lambda_plus: ``n -> lambda_plus[n]``, nonzero entries only, ascending.
    """

    z: int
    G: Fraction
    Lambda: dict[int, Fraction] = field(repr=False)
    lambda_plus: dict[int, Fraction] = field(repr=False)

    @cached_property
    def denominator(self) -> int:
        """Common denominator ``D`` of all ``Lambda_d``."""
        return math.lcm(*(c.denominator for c in self.Lambda.values()))

    @cached_property
    def lambda_numerators(self) -> dict[int, int]:
        D = self.denominator
        return {d: c.numerator * (D // c.denominator) for d, c in self.Lambda.items()}

    @cached_property
    def lambda_plus_numerators(self) -> dict[int, int]:
        """Numerators of ``lambda_plus`` over ``D**2``."""
        D2 = self.denominator**2
        return {n: c.numerator * (D2 // c.denominator) for n, c in self.lambda_plus.items()}

    def divisor_sum(self, q: int) -> Fraction:
        """``sum_{e | q} lambda_plus[e]``."""
        total = sum(c for e, c in self.lambda_plus_numerators.items() if q % e == 0)
        return Fraction(total, self.denominator**2)

    def lambda_sum(self, q: int) -> Fraction:
        """``sum_{d | q, d <= z} Lambda_d``."""
        total = sum(c for d, c in self.lambda_numerators.items() if q % d == 0)
        return Fraction(total, self.denominator)

    def weight_numerators(self, qs: np.ndarray) -> list[int]:
        """``D**2 * (sum_{d | q} Lambda_d)**2`` for each ``q`` in ``qs``, as ints."""
        qs = np.asarray(qs, dtype=np.int64)
        acc = [0] * len(qs)
        for d, c in self.lambda_numerators.items():
            for j in np.flatnonzero(qs % d == 0):
                acc[j] += c
        return [a * a for a in acc]

    def quadratic_form(self) -> Fraction:
        return quadratic_form(self.Lambda)

    def to_json(self) -> str:
        return json.dumps(
            {
                "z": self.z,
                "G": _frac_str(self.G),
                "Lambda": [[d, _frac_str(c)] for d, c in self.Lambda.items()],
                "lambda_plus": [[n, _frac_str(c)] for n, c in self.lambda_plus.items()],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> SieveSystem:
        obj = json.loads(text)
        return cls(
            z=obj["z"],
            G=_parse_frac(obj["G"]),
            Lambda={int(d): _parse_frac(c) for d, c in obj["Lambda"]},
            lambda_plus={int(n): _parse_frac(c) for n, c in obj["lambda_plus"]},
        )


def selberg_lambdas(z: int) -> SieveSystem:
    """Build the optimal Selberg system at level ``z``.

    Raises:
        DomainError: ``z < 2``.
    """
    if z < 2:
        raise DomainError(f"Selberg level must be >= 2, got {z}")
    mu, phi = _mu_phi(z)
    sqfree = [d for d in range(1, z + 1) if mu[d]]
    G = sum((Fraction(1, phi[q]) for q in sqfree), Fraction(0))

    Lambda: dict[int, Fraction] = {}
    for d in sqfree:
        x = z // d
        Gd = sum(
            (Fraction(1, phi[m]) for m in sqfree if m <= x and math.gcd(m, d) == 1),
            Fraction(0),
        )
        Lambda[d] = mu[d] * Fraction(d, phi[d]) * Gd / G

    D = math.lcm(*(c.denominator for c in Lambda.values()))
    num = [(d, c.numerator * (D // c.denominator)) for d, c in Lambda.items()]
    acc: dict[int, int] = {}
    for r, a in num:
        for s, b in num:
            n = r * s // math.gcd(r, s)
            acc[n] = acc.get(n, 0) + a * b
    D2 = D * D
    lambda_plus = {n: Fraction(acc[n], D2) for n in sorted(acc) if acc[n]}
    return SieveSystem(z=z, G=G, Lambda=Lambda, lambda_plus=lambda_plus)


def sieve_upper_count(system: SieveSystem, Z: int) -> Fraction:
    """``sum_{q in [Z, 2Z]} sum_{e | q} lambda_plus[e]``, both ends closed.

    Evaluated as ``sum_e lambda_plus[e] * #{q in [Z, 2Z] : e | q}``.
    """
    lo, hi = max(Z, 1), 2 * Z
    if hi < lo:
        return Fraction(0)
    total = sum(c * (hi // e - (lo - 1) // e) for e, c in system.lambda_plus_numerators.items())
    return Fraction(total, system.denominator**2)


def coprime_count(z: int, Z: int) -> int:
    """Number of ``q in [Z, 2Z]`` with no prime factor ``<= z``, by direct sieve."""
    lo, hi = max(Z, 1), 2 * Z
    if hi < lo:
        return 0
    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in small_primes(z):
        p = int(p)
        flags[(-lo) % p :: p] = False
    return int(flags.sum())


@dataclass
class SieveReport:
    """Outcome of :func:`verify_sieve`: named checks plus monitoring ratios."""

    z: int
    qmax: int
    checks: dict[str, bool]
    l1_norm: Fraction
    rho1: float
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def verify_sieve(system: SieveSystem, qmax: int) -> SieveReport:
    """Check the Selberg identities exhaustively for ``q <= qmax``.

    Failures are recorded in the report, never raised.
    """
    z = system.z
    D = system.denominator
    lam = system.lambda_numerators
    lp = system.lambda_plus_numerators
    checks: dict[str, bool] = {}
    failures: list[str] = []

    checks["lambda_1_is_one"] = system.Lambda.get(1) == 1
    checks["lambda_bounded"] = all(abs(c) <= 1 for c in system.Lambda.values())
    checks["optimality"] = system.quadratic_form() == 1 / system.G
    checks["support_below_z2"] = all(n < z * z for n in system.lambda_plus)

    lhs = [0] * (qmax + 1)
    for e, c in lp.items():
        for q in range(e, qmax + 1, e):
            lhs[q] += c
    lin = [0] * (qmax + 1)
    for d, c in lam.items():
        for q in range(d, qmax + 1, d):
            lin[q] += c
    rough = np.ones(qmax + 1, dtype=bool)
    for p in small_primes(z):
        rough[int(p) :: int(p)] = False

    square_ok = nonneg_ok = unit_ok = True
    D2 = D * D
    for q in range(1, qmax + 1):
        if lhs[q] != lin[q] * lin[q]:
            square_ok = False
            failures.append(f"square identity fails at q={q}")
        if lhs[q] < 0:
            nonneg_ok = False
            failures.append(f"negative divisor sum at q={q}")
        if rough[q] and lhs[q] != D2:
            unit_ok = False
            failures.append(f"divisor sum != 1 at rough q={q}")
    checks["square_identity"] = square_ok
    checks["nonnegative"] = nonneg_ok
    checks["unit_on_coprime"] = unit_ok

    for name, passed in checks.items():
        if not passed and not any(name in f for f in failures):
            failures.append(name)

    l1 = sum((abs(c) for c in system.lambda_plus.values()), Fraction(0))
    rho1 = float(l1) / (z * z / math.log(z) ** 2)
    return SieveReport(z=z, qmax=qmax, checks=checks, l1_norm=l1, rho1=rho1, failures=failures)

"""
Selberg upper-bound weights
===========================

Exact rational sieve weights at a small level, the identities they satisfy,
and the resulting upper bound for the primes in a dyadic window.
"""

import math

from charmoment import primes_in, selberg_lambdas, sieve_upper_count, verify_sieve

# Level z = 3: two sieving primes, weights are simple fractions.
s3 = selberg_lambdas(3)
print("G(3) =", s3.G)
print("Lambda:", {d: str(c) for d, c in s3.Lambda.items()})
print("lambda_plus:", {n: str(c) for n, c in s3.lambda_plus.items()})

# The quadratic form at the optimum is exactly 1/G.
print("Q(Lambda) =", s3.quadratic_form(), " 1/G =", 1 / s3.G)

# sum_{e | q} lambda_plus_e is a square and equals 1 on q free of primes <= z.
for q in (30, 35, 49, 1001):
    print(f"  q = {q:>5}: divisor sum = {s3.divisor_sum(q)}")

# Larger level: check every identity up to 10^4 in one call.
s20 = selberg_lambdas(20)
report = verify_sieve(s20, 10**4)
print("z = 20 checks:", report.checks)

# The upper count sum_{Z <= q <= 2Z} sum_{e | q} lambda_plus_e beats pi.
for Z in (10**4, 10**5):
    upper = sieve_upper_count(s20, Z)
    pi = len(primes_in(Z, 2 * Z))
    print(f"Z = {Z}: upper = {float(upper):.1f}, primes = {pi}, upper / (Z / ln Z) = {float(upper) / (Z / math.log(Z)):.3f}")

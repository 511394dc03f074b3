"""
Jacobi symbols and prime windows
================================

The building blocks: a vectorised Jacobi symbol, a segmented prime sieve
over a dyadic window, and a table of squarefree kernels on a short interval.
"""

import numpy as np

from charmoment import jacobi, jacobi_array, kernel_table, primes_in

# (2/7) = 1 since 3^2 = 9 = 2 mod 7
print("(2/7) =", jacobi(2, 7))

# A full row of symbols for one modulus. Non-square moduli sum to zero.
m = 105
row = jacobi_array(np.arange(m), m)
print(f"first symbols mod {m}:", row[:12])
print(f"sum over a full period mod {m}:", int(row.sum()))

# The square modulus 9 gives the principal character instead.
print("sum over a full period mod 9:", int(jacobi_array(np.arange(9), 9).sum()))

# Primes in a dyadic window [Q, 2Q].
Q = 10**5
pr = primes_in(Q, 2 * Q)
print(f"{len(pr)} primes in [{Q}, {2 * Q}], first few: {pr.primes[:5].tolist()}")

# Squarefree kernels of u+1 .. u+h. Equal kernels mean the product is a square.
kt = kernel_table(10**6, 12)
for n, k in zip(kt.numbers, kt.kernels):
    print(f"  n = {n}  kernel = {k}")

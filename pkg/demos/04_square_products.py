"""
Tuples with square product
==========================

Counting ordered tuples from (u, u+h] whose product is a perfect square, by
brute force, by the k a^2 parametrisation, and by kernel histograms.
"""

import math

from charmoment import kernel_class_count, r2_structured, r_count_brute, r_count_kernel
from charmoment.squareprod import conjecture_csv, conjecture_scan

# Small cases by all available methods.
for u, h in ((4, 4), (0, 4), (100, 10)):
    print(f"R_2(h={h}, u={u}):", r_count_brute(u, h, 2), r2_structured(u, h), r_count_kernel(u, h, 2))
print("R_4(h=2, u=4):", r_count_brute(4, 2, 4), r_count_kernel(4, 2, 4))

# The kernel histogram behind R_4: pairs grouped by the kernel of their product.
kc = kernel_class_count(10**6, 8, 4)
print("pair classes:", len(kc.classes), " mass:", kc.mass, " R_4:", kc.r_count)

# Pair counts stay close to h ln h across shifts.
for u in (10**3, 10**6, 10**9):
    row = [r2_structured(u, 2**k) / (2**k * math.log(2**k + 2)) for k in range(1, 10)]
    print(f"u = {u:>10}:", " ".join(f"{x:.3f}" for x in row))

# Quadruples: far from zero only on the diagonal, so the exponent drifts to 2.
print(conjecture_csv(conjecture_scan([10**6], [64, 128, 256, 512], 4)))

"""
Moments of short character sums
===============================

Sums of Legendre symbols over a short shifted interval, their moments over
the primes of a dyadic window, and the pair-expansion oracle that recomputes
the second moment in a different order.
"""

import numpy as np

from charmoment import WeightSequence, char_sum, dyadic_decompose, moment, moment_pair_expand, primes_in
from charmoment.charsum import decomposition_sides

# S_p = sum_{u < n <= u+h} (n/p) with unit weights.
w = WeightSequence.unit(2, 2)
pr = primes_in(10, 20)
res = moment(pr, w, s=1)
print("primes:", list(res.primes), " sums:", list(res.sums), " M_2 =", res.value)
print("pair expansion agrees:", moment_pair_expand(pr, w) == res.value)
print(res.breakdown_csv())

# Random signs and random phases.
Q, u, h = 10**4, 5000, 64
pr = primes_in(Q, 2 * Q)
for w in (WeightSequence.unit(u, h), WeightSequence.rademacher(u, h, seed=1), WeightSequence.unimodular(u, h, seed=1)):
    m2 = moment(pr, w, 1).value
    print(f"{w.preset:>11}: M_2 / (h pi) = {float(m2) / (h * len(pr)):.3f}")

# Restricting to n = 1 or 3 mod 4 splits the odd part exactly.
w = WeightSequence.rademacher(u, h, seed=2)
q = 10007
parts = [char_sum(q, w, f) for f in ("odd", "plus1mod4", "minus1mod4")]
print("odd = plus + minus:", parts)

# Group n by 2-adic order; each level is an odd-index sum twisted by (2/q)^i.
parts, rest = dyadic_decompose(w)
print(f"{len(parts)} levels cover {[p.covered for p in parts]} indices, remainder {int(np.count_nonzero(rest.values))}")
print("identity at q = 10007:", decomposition_sides(q, w))

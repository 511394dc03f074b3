"""
Character sum scans and bound ratios
====================================

Empirical size of incomplete character sums over windows and initial
segments, then moments at Q up to 10^5 against the two terms of the bound.
"""

from charmoment import ExperimentConfig, burgess_scan, grh_scan, theorem_report

rows = [r for r in burgess_scan(1001, 1201, [16, 64, 256]) if not r.square]
worst = max(rows, key=lambda r: r.stat)
print(f"window scan: {len(rows)} moduli, largest |sum|/sqrt(V) = {worst.stat:.3f} at m = {worst.m}, V = {worst.length}")
print("all full periods vanish:", all(r.self_check_ok for r in rows))

rows = [r for r in grh_scan(range(3, 2001, 2), [16, 64, 256, 1024]) if not r.square]
worst = max(rows, key=lambda r: r.stat)
print(f"initial segments: largest |sum|/sqrt(T) = {worst.stat:.3f} at m = {worst.m}, T = {worst.length}")

configs = [ExperimentConfig(Q=Q, u=Q // 2, h=h) for Q in (10**4, 10**5) for h in (16, 64, 256)]
report = theorem_report(configs)
print(f"{'Q':>7} {'h':>4} {'M_2':>10} {'pi':>6} {'M/(h pi ln h)':>14} {'M/(h^2 Q^7/8)':>14}")
for r in report.rows:
    print(f"{r.Q:>7} {r.h:>4} {r.M:>10} {r.pi:>6} {r.ratios[0]:>14.3f} {r.ratios[1]:>14.5f}")

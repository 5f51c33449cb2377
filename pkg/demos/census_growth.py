"""How many coprime pairs (a, b) with max <= N are settled for every k > 1?

Prints the per-class counts next to N^2 / (log N)^2 as N grows.  Pairs are
counted unordered.
"""
import math

from ternexp.search import CoverageClass, census

print(f"{'N':>5} {'pairs':>7} {'F(N)':>6} {'N^2/log^2':>10}  " + " ".join(f"{c.value:>12}" for c in CoverageClass))
for N in (10, 20, 50, 100, 200):
    r = census(N)
    bound = N**2 / math.log(N) ** 2
    counts = " ".join(f"{r.counts[c]:>12}" for c in CoverageClass)
    print(f"{N:>5} {r.total_pairs:>7} {r.F:>6} {bound:>10.1f}  {counts}")

# Nearly all the coverage comes from pairs of prime powers, whose count grows
# like (N / log N)^2.

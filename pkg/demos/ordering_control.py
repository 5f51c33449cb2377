"""What exceptional solutions look like with k > 1 once min(a, b) = 2 is
allowed.

The dichotomy x > z > y or y > z > x is only guaranteed when min(a, b) > 2.
With a 2 in play, small boxes turn up both strict orderings and the
non-strict z = y shape.  (2, 3, 3) has 6^3 + 9 = 15^2, an x > z > y solution,
and the reduction through rad(k) | b is visible in its witness.
"""
import math
from collections import Counter

from ternexp.search import (
    EquationInstance,
    ExponentTriple,
    OrderingClass,
    guard,
    ordering_of,
    reduction_witness,
    solve_instance,
)

shapes = Counter()
for a in range(2, 25):
    for b in range(2, 25):
        if a == b or math.gcd(a, b) != 1:
            continue
        for k in range(2, 13):
            inst = EquationInstance(a, b, k)
            for t in solve_instance(inst, 8):
                if not t.exceptional:
                    continue
                o = ordering_of(t)
                shapes[(min(a, b) > 2, o)] += 1
                if o is not OrderingClass.OTHER:
                    print(f"(a,b,k)=({a},{b},{k})  (x,y,z)=({t.x},{t.y},{t.z})  {o.value}"
                          f"  guard: {guard(inst).overall.value}")

print()
for (big, o), count in sorted(shapes.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
    print(f"min(a,b) {'> 2' if big else '= 2'}  {o.value:>6}: {count}")

print()
print(reduction_witness(EquationInstance(2, 3, 3), ExponentTriple(3, 1, 2)))

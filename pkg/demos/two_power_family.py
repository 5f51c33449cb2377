"""The ell = 2 family of X^ell - 1 = 2^m p^n.

For X^2 - 1 = 2^m p with m >= 6 the two factors X - zeta and X + zeta split
as 2^(m-1) and 2p.  Subtracting gives p = 2^(m-2) + zeta.  This script lists
the family members found by direct factorization and checks both signs.
"""
from ternexp.classify import TwoPowerFamily, classify_2p, enum_2p

res = enum_2p(2**14 + 1, 2)
for s in res.solutions:
    o = classify_2p(s)
    if not isinstance(o, TwoPowerFamily):
        continue
    plus = s.p == 2 ** (s.m - 2) + o.zeta
    minus = s.p == 2 ** (s.m - 2) - o.zeta
    print(f"X={s.X:>6} m={s.m:>2} p={s.p:>5} zeta={o.zeta:+d}  p=2^(m-2)+zeta: {plus}  p=2^(m-2)-zeta: {minus}")

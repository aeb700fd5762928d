"""Search for exact rational coordinates for the three-robot cyclic-wrap
scene with |S_i T_i| = 7 and bent length |S_i T_{i+1}| + |T_{i+1} T_i| = 10.

Family of rational (7, a, b) triangles with a + b = 10 and rational area:
parametrised by m: b = 3/2 + 28 q^2/(4 q^2 + 51 p^2), height over the 7-side
y = 51*2*p*q/(...)/14 rational. We need three of them whose b-sides form a
Heronian triangle (rational area) for the target triangle embedding.
"""
from fractions import Fraction
from itertools import combinations_with_replacement
from math import isqrt


def b_of(p, q):
    return Fraction(3, 2) + Fraction(28 * q * q, 4 * q * q + 51 * p * p)


def is_rat_square(x: Fraction):
    if x < 0:
        return None
    rn = isqrt(x.numerator)
    rd = isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def heron16(a, b, c):
    return (2*a*a*b*b + 2*b*b*c*c + 2*c*c*a*a - a**4 - b**4 - c**4)


cands = []
seen = set()
for p in range(1, 13):
    for q in range(1, 13):
        b = b_of(p, q)
        if b in seen:
            continue
        seen.add(b)
        cands.append(b)
cands.sort()
print(f"{len(cands)} candidate b values, range {float(min(cands)):.3f}..{float(max(cands)):.3f}")

hits = []
for trio in combinations_with_replacement(cands, 3):
    b1, b2, b3 = trio
    if b1 + b2 <= b3 or b1 + b3 <= b2 or b2 + b3 <= b1:
        continue
    h16 = heron16(b1, b2, b3)
    r = is_rat_square(h16)
    if r is not None and r > 0:
        hits.append((trio, r))
        if len(hits) >= 40:
            break
print(f"{len(hits)} Heronian triples found")
for trio, r in hits[:15]:
    print([str(x) for x in trio], "area16sqrt:", r, "area:", float(r/4))

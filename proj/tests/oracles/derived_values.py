#!/usr/bin/env python3
"""Independent evaluation of the closed-form numbers asserted in the unit tests.

Uses exact rationals or mpmath where possible; prints values to paste into tests.
"""
from fractions import Fraction
import itertools
import math

import mpmath

mpmath.mp.dps = 40


def condition_threshold(Delta, delta, eps, b, d):
    return 1 / ((mpmath.e * Delta) ** (1 + delta) * mpmath.mpf(b) ** (eps * d))


def explicit_K(b, delta, d, parts, Delta):
    inner = mpmath.mpf(parts) ** d * mpmath.mpf(2) ** (b**d + 1) * b
    gap = 1 - (mpmath.e * Delta) ** (-delta)
    return d * inner**parts * mpmath.factorial(parts) / gap**parts


def threshold_m(K, parts, Delta, delta):
    m = 1
    while K * (m + 1) ** parts / (mpmath.e * Delta) ** (delta * m) >= 1:
        m += 1
    return m


def path_stable_radius(n, y, R, eps):
    dist = [abs(x - y) for x in range(n)]
    for r in range(3, 3 * R + 1):
        big = sum(1 for x in dist if x <= r)
        small = sum(1 for x in dist if x <= r - 3)
        if big <= (1 + eps) * small:
            return r
    return None


def labelled_trees(delta, size):
    # prefix-closed word sets over {0..delta-1} with `size` words, grown breadth first
    frontier = {frozenset([()])}
    for _ in range(size - 1):
        nxt = set()
        for tree in frontier:
            for word in tree:
                for a in range(delta):
                    w = word + (a,)
                    if w not in tree:
                        nxt.add(tree | {w})
        frontier = nxt
    return len(frontier)


print("threshold(margin .0625 case) =", mpmath.nstr(condition_threshold(6, 0.1, 0.05, 2, 5), 17))
K = explicit_K(2, 1, 1, 1, 1)
print("K(b=2,delta=1,d=1,|pi|=1,Delta=1) =", mpmath.nstr(K, 17), " 16/(1-1/e) =", mpmath.nstr(16 / (1 - 1 / mpmath.e), 17))
print("threshold_m for that K =", threshold_m(K, 1, 1, 1))
print("threshold_m for K=0.5 (unclamped would be 0) =", threshold_m(mpmath.mpf(0.5), 1, 1, 1))
print("log K(b=2, delta=0.1, d=5, |pi|=3, Delta=13) =", mpmath.nstr(mpmath.log(explicit_K(2, 0.1, 5, 3, 13)), 17))
print("path stable radius (n=20, y=0, R=2, eps=1) =", path_stable_radius(20, 0, 2, 1))
for delta in (1, 2, 3, 4):
    print("P_i for delta", delta, [labelled_trees(delta, i) for i in range(1, 7)])

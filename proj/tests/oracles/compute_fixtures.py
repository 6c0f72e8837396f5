#!/usr/bin/env python3
"""Brute-force reference values frozen into the C++ test suites.

Every routine here is deliberately naive (direct loops, pow()-based inverses,
exact Fractions) and shares no code path with the library.
"""
from fractions import Fraction
from itertools import product
from math import gcd, cos, sin, pi, log, sqrt


def units(q):
    return [n for n in range(1, q) if gcd(n, q) == 1]


def inv(n, q):
    return pow(n, -1, q)


def count_N(q, a, b, ranges=None):
    k = len(a) - 1
    ranges = ranges or [(0, q)] * (k + 1)
    cnt = 0
    us = units(q)
    for ns in product(us, repeat=k):
        if any(ns[i] % a[i] != b[i] % a[i] or not (ranges[i][0] <= ns[i] < ranges[i][1]) for i in range(k)):
            continue
        p = 1
        for x in ns:
            p = p * x % q
        y = inv(p, q)
        if y % a[k] == b[k] % a[k] and ranges[k][0] <= y < ranges[k][1]:
            cnt += 1
    return cnt


def ball_count(q, a, b, center, radius):
    # strict inequality, exact integer test on n/q
    k = len(a) - 1
    cnt = 0
    for ns in product(units(q), repeat=k):
        if any(ns[i] % a[i] != b[i] % a[i] for i in range(k)):
            continue
        p = 1
        for x in ns:
            p = p * x % q
        if inv(p, q) % a[k] != b[k] % a[k]:
            continue
        d2 = sum((Fraction(n, q) - c) ** 2 for n, c in zip(ns, center))
        if d2 < radius * radius:
            cnt += 1
    return cnt


def box_discrepancy_bruteforce(points):
    """Sup over boxes via every endpoint pair and both open/closed limits."""
    s = len(points[0])
    n = len(points)
    best = Fraction(0)
    cands = [sorted({Fraction(0), Fraction(1)} | {p[j] for p in points}) for j in range(s)]
    per_axis = []
    for j in range(s):
        opts = []
        for lo in cands[j]:
            for hi in cands[j]:
                if hi < lo:
                    continue
                for lo_closed in (True, False):
                    for hi_closed in (True, False):
                        opts.append((lo, hi, lo_closed, hi_closed))
        per_axis.append(opts)
    for combo in product(*per_axis):
        vol = Fraction(1)
        for (lo, hi, _, _) in combo:
            vol *= hi - lo
        c = 0
        for p in points:
            ok = True
            for j, (lo, hi, lc, hc) in enumerate(combo):
                x = p[j]
                if (x < lo) or (x == lo and not lc) or (x > hi) or (x == hi and not hc):
                    ok = False
                    break
            if ok:
                c += 1
        best = max(best, abs(Fraction(c, n) - vol))
    return best


def char_values(q, g):
    """Characters of a prime modulus q with primitive root g; returns list of value maps."""
    dl = {}
    x = 1
    for t in range(q - 1):
        dl[x] = t
        x = x * g % q
    chars = []
    for e in range(q - 1):
        chars.append({n: complex(cos(2 * pi * e * dl[n] / (q - 1)), sin(2 * pi * e * dl[n] / (q - 1))) for n in dl})
    return chars


def prog_sum(vals, q, K, L, a, b):
    s = 0j
    for n in range(K + 1, K + L + 1):
        if (n - b) % a == 0:
            s += vals.get(n % q, 0)
    return s


def main():
    print("enumerate_N k=2 q=101 a=(2,3,5) b=(1,2,3):", count_N(101, [2, 3, 5], [1, 2, 3]))
    half = (0, 51)  # [0, 101/2) -> n <= 50
    print("count_M_box k=2 q=101 a=(2,3,5) b=(1,1,1) [0,1/2)^3:",
          count_N(101, [2, 3, 5], [1, 1, 1], [half, half, half]))
    print("count_region ball r=1/4 at (1/2,1/2) q=101 a=(1,1,1):",
          ball_count(101, [1, 1, 1], [0, 0, 0], (Fraction(1, 2), Fraction(1, 2)), Fraction(1, 4)))

    A5 = [(Fraction(n, 5), Fraction(inv(n, 5), 5)) for n in units(5)]
    print("box discrepancy A(q=5):", box_discrepancy_bruteforce(A5))
    A7 = [(Fraction(n, 7), Fraction(inv(n, 7), 7)) for n in units(7)]
    print("box discrepancy A(q=7):", box_discrepancy_bruteforce(A7))
    B = [(Fraction(n, 11),) for n in units(11) if n % 3 == 1]
    print("box discrepancy 1D {n/11: n=1 mod 3}:", box_discrepancy_bruteforce(B))

    q = 1009
    H = max(abs(n - inv(n, q)) for n in units(q))
    print("H(1009):", H)
    print("H(7):", max(abs(n - inv(n, 7)) for n in units(7)))

    K, L, a, b, q = 3, 20, 7, 2, 30
    exact = sum(1 for n in range(K + 1, K + L + 1) if (n - b) % a == 0 and gcd(n, q) == 1)
    print("principal count q=30 K=3 L=20 a=7 b=2:", exact, "main", Fraction(8 * L, a * q))

    p = 101
    chars = char_values(p, 2)
    for (K, L, a, b) in [(0, 50, 1, 0), (0, 100, 3, 1)]:
        val = sum(abs(prog_sum(c, p, K, L, a, b)) ** 4 for c in chars[1:])
        ratio = val / (p * (L / a + 1) ** 2 * log(p) ** 2)
        print(f"fourth moment p=101 K={K} L={L} a={a} b={b}: value={val!r} ratio={ratio!r}")
    mx = max(abs(prog_sum(c, p, 0, 50, 1, 0)) for c in chars[1:])
    print("max nonprincipal q=101 U=0 V=50:", repr(mx), "pv_ratio", repr(mx / (sqrt(p) * log(p))))


if __name__ == "__main__":
    main()

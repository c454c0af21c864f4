#!/usr/bin/env python3
"""Writes fixtures/bessel_oracle.csv from the defining power series of J_m and Y_m.

The sums are evaluated in arbitrary precision (mpmath) so the cancellation that
makes the series useless in double precision at large x does not matter here.
"""
import argparse

import mpmath as mp

ORDERS = [0, 1, 2, 3, 4, 5, 7, 10, 13, 16, 20, 24, 28, 32, 36, 40, 45, 50, 55, 60]
N_X = 25


def series_j(m, x):
    half = x / 2
    total = mp.mpf(0)
    k = 0
    while True:
        term = (-1) ** k * half ** (2 * k + m) / (mp.factorial(k) * mp.factorial(k + m))
        total += term
        if k > x and abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5) * abs(total):
            return total
        k += 1


def series_y(m, x):
    half = x / 2
    finite = mp.mpf(0)
    for k in range(m):
        finite += mp.factorial(m - k - 1) / mp.factorial(k) * half ** (2 * k - m)
    tail = mp.mpf(0)
    k = 0
    while True:
        term = ((mp.digamma(k + 1) + mp.digamma(m + k + 1)) * (-1) ** k
                * half ** (2 * k + m) / (mp.factorial(k) * mp.factorial(k + m)))
        tail += term
        if k > x and abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5) * (abs(tail) + 1):
            break
        k += 1
    return (2 / mp.pi) * series_j(m, x) * mp.log(half) - finite / mp.pi - tail / mp.pi


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="fixtures/bessel_oracle.csv")
    args = parser.parse_args()
    mp.mp.dps = 120
    xs = [mp.mpf(10) ** (mp.mpf(-3) + 5 * mp.mpf(i) / (N_X - 1)) for i in range(N_X)]
    with open(args.out, "w") as out:
        out.write("m,x,J,Y\n")
        for m in ORDERS:
            for x in xs:
                # Round x to a double first so the oracle is evaluated at the
                # exact argument the C++ side will parse.
                xd = mp.mpf(float(x))
                j = series_j(m, xd)
                y = series_y(m, xd)
                out.write(f"{m},{float(xd)!r},{mp.nstr(j, 20, min_fixed=1, max_fixed=0)},"
                          f"{mp.nstr(y, 20, min_fixed=1, max_fixed=0)}\n")


if __name__ == "__main__":
    main()

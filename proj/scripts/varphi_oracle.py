#!/usr/bin/env python3
"""Arbitrary-precision reference values for the rectenna transfer function.

Evaluates

    varphi(p) = [(1/a) W0(a e^a I0(B sqrt(2 p))) - 1]^2 * Is^2 * RL

with 60 significant digits and prints the values frozen into
tests/unit/test_eh_model.cpp and tests/acceptance/acceptance.cpp.
"""
import mpmath as mp

mp.mp.dps = 60

A = mp.mpf("1.29")
B = mp.mpf("1.55e3")
IS = mp.mpf("5e-6")
RL = mp.mpf("1e4")


def varphi(p):
    p = mp.mpf(p)
    x = B * mp.sqrt(2 * p)
    u = A * mp.e**A * mp.besseli(0, x)
    w = mp.lambertw(u).real
    return (w / A - 1) ** 2 * IS**2 * RL


if __name__ == "__main__":
    for label, p in [("25e-6", "25e-6"), ("12.5e-6", "12.5e-6"), ("1e-6", "1e-6")]:
        print(f"varphi({label}) = {mp.nstr(varphi(p), 25)}")
    for x in ["1", "2", "5", "30", "100"]:
        print(f"I0({x}) = {mp.nstr(mp.besseli(0, mp.mpf(x)), 25)}  "
              f"I1({x}) = {mp.nstr(mp.besseli(1, mp.mpf(x)), 25)}")

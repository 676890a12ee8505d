#!/usr/bin/env python3
"""High-precision oracle for the golden constants baked into the test suite.

Run from the repo root:

    python3 scripts/golden_values.py > tests/golden_values.hpp

Everything is evaluated with mpmath at 50 significant digits and printed
with 18 digits (enough to round-trip an IEEE double). The C++ tests compare
against these values instead of hand-typed literals.

The strip-map reference values are computed through routes that are
deliberately different from the C++ implementation: the Mobius map is
obtained from a linear solve rather than the closed form, and |Psi'| comes
from mpmath's numerical differentiation of the composed map.
"""

import mpmath as mp

mp.mp.dps = 50


def mobius(u1, s, u2):
    # z -> k (z - m) / (z - u2) with Pi(u1) = -1, Pi(u1+s) = 1.
    # Solve the linear system in (k, p) where p = k*m:
    #   k*u1    - p = -(u1 - u2)
    #   k*(u1+s)- p =  (u1 + s - u2)
    A = mp.matrix([[u1, -1], [u1 + s, -1]])
    b = mp.matrix([-(u1 - u2), (u1 + s - u2)])
    sol = mp.lu_solve(A, b)
    k, p = sol[0], sol[1]
    m = p / k
    return lambda z: k * (z - m) / (z - u2)


def strip_map(u1, s, u2):
    pi_map = mobius(u1, s, u2)
    return lambda z: (-mp.mpc(0, 1) / mp.pi) * mp.asin(pi_map(z)) + mp.mpc(0, 0.5)


def h_fn(x):
    return mp.hyp2f1(mp.mpf(-1) / 2, mp.mpf(-1) / 3, mp.mpf(7) / 6, mp.e ** (-2 * mp.pi * x))


def g_fn(x, y):
    sh = mp.sinh(mp.pi * x)
    sn = mp.sin(mp.pi * y)
    return mp.e ** (mp.pi * x / 3) * h_fn(x) * sh ** (mp.mpf(-1) / 3) * (
        (sh ** 2 * sn ** 2) / (sh ** 2 + sn ** 2)) ** (mp.mpf(11) / 96)


def main():
    vals = []

    gamma13 = mp.gamma(mp.mpf(1) / 3)
    vals.append(("kGamma1over3", gamma13))
    vals.append(("kGamma7over6", mp.gamma(mp.mpf(7) / 6)))

    k_f = 2 ** 7 * mp.pi ** 5 / (3 ** mp.mpf(1.5) * gamma13 ** 9)
    vals.append(("kKF", k_f))

    h0 = h_fn(0)
    vals.append(("kH0", h0))

    k2 = mp.mpf(18) / (5 * mp.pi)
    k1 = 18 * mp.pi ** (mp.mpf(5) / 48) / (5 * mp.pi * 2 ** (mp.mpf(5) / 48)) / h0
    vals.append(("kK1", k1))
    vals.append(("kK2", k2))

    vals.append(("kCardyNorm", mp.gamma(mp.mpf(2) / 3) /
                 (mp.gamma(mp.mpf(1) / 3) * mp.gamma(mp.mpf(4) / 3))))

    lam = mp.mpf("0.3")
    cardy = mp.gamma(mp.mpf(2) / 3) / (mp.gamma(mp.mpf(1) / 3) * mp.gamma(mp.mpf(4) / 3)) \
        * lam ** (mp.mpf(1) / 3) * mp.hyp2f1(mp.mpf(1) / 3, mp.mpf(2) / 3, mp.mpf(4) / 3, lam)
    vals.append(("kCardyAtLambda0p3", cardy))

    vals.append(("kHyp2f1At0p37",
                 mp.hyp2f1(mp.mpf(-1) / 2, mp.mpf(-1) / 3, mp.mpf(7) / 6, mp.mpf("0.37"))))

    # psi reference at (u1, s, u2, w) = (0, 1, 2, 2 + 0.4i)
    u1, s, u2 = mp.mpf(0), mp.mpf(1), mp.mpf(2)
    w = mp.mpc(2, "0.4")
    psi_map = strip_map(u1, s, u2)
    x = mp.re(psi_map(w))
    y = mp.im(psi_map(w))
    psi = mp.e ** (mp.pi * x / 3) * h_fn(x) / h0
    vals.append(("kPsiRefX", x))
    vals.append(("kPsiRefY", y))
    vals.append(("kPsiRef", psi))

    # conditional one-point prediction at the same marks, s3 = 0.2,
    # with |Psi'(w)| from numerical differentiation
    s3 = mp.mpf("0.2")
    dpsi = mp.diff(psi_map, w)
    bi = s3 ** (mp.mpf(5) / 48) * k1 * abs(dpsi) ** (mp.mpf(5) / 48) * g_fn(x, y)
    vals.append(("kBiRef", bi))

    # half-plane point prediction at (u1, s, w, s3) = (0, 1, 1 + 0.8i, 0.2)
    wl = mp.mpc(1, "0.8")
    omega = abs(mp.arg((u1 - wl) / (u1 + s - wl))) / mp.pi
    phi_d = 1 / (2 * mp.im(wl))
    lem = s3 ** (mp.mpf(5) / 48) * k2 * phi_d ** (mp.mpf(5) / 48) * mp.sin(mp.pi * omega / 2) ** (mp.mpf(1) / 3)
    vals.append(("kLemmaRefOmega", omega))
    vals.append(("kLemmaRef", lem))

    # harmonic measure reference at (u1, s, w) = (-0.3, 1.7, 0.4 + 1.1i)
    wh = mp.mpc("0.4", "1.1")
    uh, sh_ = mp.mpf("-0.3"), mp.mpf("1.7")
    vals.append(("kHarmonicRef", abs(mp.arg((uh - wh) / (uh + sh_ - wh))) / mp.pi))

    # G reference on the strip at (x, y) = (0.7, 0.4)
    vals.append(("kGRef", g_fn(mp.mpf("0.7"), mp.mpf("0.4"))))

    print("// Generated by scripts/golden_values.py (mpmath, 50 dps). Do not edit.")
    print("#pragma once")
    print()
    print("namespace golden {")
    for name, v in vals:
        print("inline constexpr double %s = %s;" % (name, mp.nstr(v, 18)))
    print("}  // namespace golden")


if __name__ == "__main__":
    main()

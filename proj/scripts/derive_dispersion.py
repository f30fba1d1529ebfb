#!/usr/bin/env python3
"""Growth rate of a small cosine mode about u = 0.

Derives mu as the Euler-Lagrange expression of the 1D energy density
    1/2 (-u'' + f(u))^2 + eta (1/2 u'^2 + F(u)),
    F(r) = 1/2 (1+r) ln(1+r) + 1/2 (1-r) ln(1-r) - lambda/2 r^2,
substitutes u = eps cos(k x), keeps the O(eps) part of u_t = mu'' and
compares against -k^2 (k^2 + 1 - lambda)(k^2 + 1 - lambda + eta).
"""
import argparse
import sys

import sympy as sp


def derive():
    x, k, lam, eta, eps = sp.symbols("x k lambda eta epsilon", real=True)
    r = sp.Symbol("r", real=True)
    u = sp.Function("u")(x)
    F = sp.Rational(1, 2) * (1 + r) * sp.log(1 + r) + sp.Rational(1, 2) * (1 - r) * sp.log(1 - r) \
        - lam / 2 * r**2
    f = sp.diff(F, r)
    density = sp.Rational(1, 2) * (-u.diff(x, 2) + f.subs(r, u))**2 \
        + eta * (sp.Rational(1, 2) * u.diff(x)**2 + F.subs(r, u))
    (el,) = sp.euler_equations(density, u, x)
    mu = el.lhs
    mode = eps * sp.cos(k * x)
    flux = sp.diff(mu.subs(u, mode).doit(), x, 2)
    linear = sp.diff(flux, eps).subs(eps, 0)
    sigma = sp.simplify(linear / sp.cos(k * x))
    closed = -k**2 * (k**2 + 1 - lam) * (k**2 + 1 - lam + eta)
    return sigma, closed, sp.simplify(sp.expand(sigma - closed))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="exit nonzero on mismatch")
    args = ap.parse_args()
    sigma, closed, diff = derive()
    print("sigma(k) =", sp.factor(sigma))
    print("closed   =", sp.factor(closed))
    print("difference:", diff)
    if args.check and diff != 0:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

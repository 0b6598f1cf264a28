#!/usr/bin/env python3
"""Regenerates the frozen reference constants used by the test suite.

Evaluates the two-parameter Mittag-Leffler series, the gamma function and
the linear benchmark's closed-form solution at 40 significant digits with
mpmath. The printed values are copied (truncated to f64) into
crates/abc-ivp/tests/common/mod.rs.
"""

from mpmath import mp, mpf, gamma, sqrt, pi

mp.dps = 40


def mlf(a, b, z, terms=400):
    return sum(mpf(z) ** k / gamma(mpf(a) * k + mpf(b)) for k in range(terms))


def ab_gamma_form(a):
    a = mpf(a)
    return 1 - a + a / gamma(a)


def linear_exact(t, alpha, ab):
    """Solution of D^alpha y = t - y, y(0) = 0."""
    t, alpha, ab = mpf(t), mpf(alpha), mpf(ab)
    if t == 0:
        return mpf(0)
    c = alpha / (ab + 1 - alpha)
    z = -c * t**alpha
    return (
        (1 - alpha) * t * mlf(alpha, 2, z)
        + alpha * t ** (alpha + 1) * mlf(alpha, alpha + 2, z)
    ) / (ab + 1 - alpha)


def show(name, value):
    print(f"{name:28s} = {mp.nstr(value, 22)}")


show("sqrt(pi)", sqrt(pi))
show("E_{1/2}(-1/4)", mlf(0.5, 1, -0.25))
show("E_{0.7,1.3}(0.4)", mlf(0.7, 1.3, 0.4))
show("E_{0.55,2}(-0.4)", mlf(0.55, 2, -0.4))
show("linear t=1    a=0.95 AB=1", linear_exact(1, 0.95, 1))
show("linear t=0.25 a=0.95 AB=1", linear_exact(0.25, 0.95, 1))
show("linear t=0.5  a=0.75 AB=1", linear_exact(0.5, 0.75, 1))
show("linear t=0.5  a=0.55 ABg", linear_exact(0.5, 0.55, ab_gamma_form(0.55)))
show("gamma(12.3456)", gamma(mpf("12.3456")))
show("gamma(0.001)", gamma(mpf("0.001")))
show("gamma(49.5)", gamma(mpf("49.5")))

"""Reference values computed without the package's numerics.

For ``q = 0`` every subinterval has a closed-form propagator, and the
transmission conditions are solved as a plain linear system (not through the
Delta minors), so these oracles are independent of both the integrator and
the transfer-matrix formulas under test.
"""

import math

import numpy as np


def propagate_const(u, du, lam, rho, dx):
    """Exact state after ``dx`` for ``u'' = -lam u / rho**2``."""
    if lam > 0.0:
        k = math.sqrt(lam) / rho
        c, s = math.cos(k * dx), math.sin(k * dx)
        return u * c + du * s / k, -u * k * s + du * c
    if lam < 0.0:
        k = math.sqrt(-lam) / rho
        c, s = math.cosh(k * dx), math.sinh(k * dx)
        return u * c + du * s / k, u * k * s + du * c
    return u + du * dx, du


def solve_right_limits(t, left):
    """``(u(xi+), u'(xi+))`` from the two transmission conditions by direct solve."""
    um, dum = left
    mat = np.array([[t["ap0"], t["ap1"]], [t["bp0"], t["bp1"]]], dtype=float)
    rhs = -np.array([t["am1"] * dum + t["am0"] * um, t["bm1"] * dum + t["bm0"] * um])
    up, dup = np.linalg.solve(mat, rhs)
    return float(up), float(dup)


def solve_left_limits(t, right):
    up, dup = right
    mat = np.array([[t["am0"], t["am1"]], [t["bm0"], t["bm1"]]], dtype=float)
    rhs = -np.array([t["ap1"] * dup + t["ap0"] * up, t["bp1"] * dup + t["bp0"] * up])
    um, dum = np.linalg.solve(mat, rhs)
    return float(um), float(dum)


def phi_exact(doc, lam, x, side="right"):
    """Exact left-started solution of a ``q = 0`` problem given as a config dict."""
    bp = [doc["a"], *doc["xi"], doc["b"]]
    a1, a2, a3, a4 = doc["alpha"]
    state = (a2 - lam * a4, a1 - lam * a3)
    for i, rho in enumerate(doc["rho"]):
        hi = bp[i + 1]
        if x < hi or (x == hi and (side == "left" or i == len(doc["rho"]) - 1)):
            return propagate_const(*state, lam, rho, x - bp[i])
        state = propagate_const(*state, lam, rho, hi - bp[i])
        state = solve_right_limits(doc["transmission"][i], state)
    raise ValueError("x outside [a, b]")


def chi_exact(doc, lam, x, side="left"):
    """Exact right-started solution of a ``q = 0`` problem."""
    bp = [doc["a"], *doc["xi"], doc["b"]]
    b1, b2, b3, b4 = doc["beta"]
    state = (b2 + lam * b4, b1 + lam * b3)
    for i in range(len(doc["rho"]) - 1, -1, -1):
        lo, rho = bp[i], doc["rho"][i]
        if x > lo or (x == lo and (side == "right" or i == 0)):
            return propagate_const(*state, lam, rho, x - bp[i + 1])
        state = propagate_const(*state, lam, rho, lo - bp[i + 1])
        state = solve_left_limits(doc["transmission"][i - 1], state)
    raise ValueError("x outside [a, b]")


def omega_exact(doc, lam):
    """Wronskian of the exact solutions at ``a``."""
    u, du = phi_exact(doc, lam, doc["a"])
    v, dv = chi_exact(doc, lam, doc["a"])
    return u * dv - du * v


def bisect(f, lo, hi, tol=1e-14):
    flo = f(lo)
    if flo * f(hi) > 0.0:
        raise ValueError("no sign change")
    while hi - lo > tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def two_rho_equation(s):
    """Zero set of the two-rho Dirichlet problem: ``2 sin t (2 - 3 sin**2 t)`` with ``t = s/4``."""
    t = s / 4.0
    return 2.0 * math.sin(t) * (2.0 - 3.0 * math.sin(t) ** 2)


def two_rho_roots(count, step=0.01):
    """First ``count`` positive roots by sign-change scan plus bisection."""
    roots, s = [], step
    f_prev = two_rho_equation(s)
    while len(roots) < count:
        s_next = s + step
        f_next = two_rho_equation(s_next)
        if f_prev * f_next < 0.0:
            roots.append(bisect(two_rho_equation, s, s_next))
        s, f_prev = s_next, f_next
    return roots


def dense_root_scan(f, lo, hi, n):
    """All sign changes of ``f`` on a uniform ``n``-point grid, each bisected."""
    xs = np.linspace(lo, hi, n)
    vals = [f(x) for x in xs]
    out = []
    for k in range(n - 1):
        if vals[k] * vals[k + 1] < 0.0:
            out.append(bisect(f, xs[k], xs[k + 1]))
    return out

"""Characteristic function ``omega(lam)`` and its large-``s`` leading terms.

``omega`` is the Wronskian ``phi chi' - phi' chi`` on the first subinterval.
On interval ``i + 1`` the Wronskian equals the one on interval ``i`` times
``Delta_34 / Delta_12`` of interface ``i`` (the determinant of the forward
transfer matrix), so all of them vanish together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import CaseTag, classify_case
from .fundamental import build_chi, build_phi, chi_initial, evaluate, phi_initial
from .integrator import DEFAULT_CONFIG, IntegratorConfig, StateVector, integrate
from .problem import as_validated, delta

__all__ = [
    "CharacteristicSample",
    "wronskian",
    "omega_i",
    "omega",
    "omega_value",
    "omega_normalized",
    "omega_boundary_form",
    "leading_term",
    "envelope_magnitude",
]


@dataclass(frozen=True)
class CharacteristicSample:
    lam: float
    omega: float
    omega_normalized: float
    interval_wronskians: tuple


def wronskian(f, g) -> float:
    return f[0] * g[1] - f[1] * g[0]


def _midpoint(problem, i):
    return 0.5 * (problem.breakpoints[i] + problem.breakpoints[i + 1])


def omega_i(problem, lam: float, i: int, cfg: IntegratorConfig = DEFAULT_CONFIG, *, phi=None, chi=None) -> float:
    """Wronskian of ``phi`` and ``chi`` at the midpoint of interval ``i`` (0-based).

    Pass prebuilt ``phi``/``chi`` to avoid rebuilding them.
    """
    problem = as_validated(problem)
    if not 0 <= i < problem.n_intervals:
        raise IndexError(f"interval index {i} out of range for {problem.n_intervals} intervals")
    phi = phi if phi is not None else build_phi(problem, lam, cfg)
    chi = chi if chi is not None else build_chi(problem, lam, cfg)
    x = _midpoint(problem, i)
    return wronskian(evaluate(phi, problem, x), evaluate(chi, problem, x))


def omega(problem, lam: float, cfg: IntegratorConfig = DEFAULT_CONFIG) -> CharacteristicSample:
    """Full sample: ``omega``, its normalised value and all interval Wronskians."""
    problem = as_validated(problem)
    phi = build_phi(problem, lam, cfg)
    chi = build_chi(problem, lam, cfg)
    ws = tuple(omega_i(problem, lam, i, cfg, phi=phi, chi=chi) for i in range(problem.n_intervals))
    value = ws[0]
    return CharacteristicSample(
        lam=float(lam),
        omega=value,
        omega_normalized=value / max(1.0, envelope_magnitude(problem, lam)),
        interval_wronskians=ws,
    )


def omega_value(problem, lam: float, cfg: IntegratorConfig = DEFAULT_CONFIG) -> float:
    """``omega(lam)`` with a single sweep over ``[a, b]``.

    ``phi`` runs from ``a`` to the midpoint of the first interval and ``chi``
    from ``b`` back to the same point; same value as :func:`omega`.
    """
    problem = as_validated(problem)
    bp = problem.breakpoints
    mid = _midpoint(problem, 0)
    phi_mid = integrate(problem, 0, lam, bp[0], mid, phi_initial(problem, lam), cfg)
    state = chi_initial(problem, lam)
    for i in range(problem.r, 0, -1):
        left = integrate(problem, i, lam, bp[i + 1], bp[i], state, cfg)
        state = StateVector(*problem.backward[i - 1].apply(left))
    chi_mid = integrate(problem, 0, lam, bp[1], mid, state, cfg)
    return wronskian(phi_mid, chi_mid)


def omega_normalized(problem, lam: float, cfg: IntegratorConfig = DEFAULT_CONFIG) -> float:
    problem = as_validated(problem)
    return omega_value(problem, lam, cfg) / max(1.0, envelope_magnitude(problem, lam))


def omega_boundary_form(problem, lam: float, phi=None, cfg: IntegratorConfig = DEFAULT_CONFIG) -> float:
    """``omega`` recomputed from ``phi`` at ``b`` and the right boundary data.

    ``prod(Delta_12 / Delta_34) * ((b1 + lam b3) phi(b) - (b2 + lam b4) phi'(b))``.
    """
    problem = as_validated(problem)
    phi = phi if phi is not None else build_phi(problem, lam, cfg)
    u, du = phi.at_b()
    chi_u, chi_du = chi_initial(problem, lam)
    ratio = 1.0
    for t in problem.trans:
        ratio *= delta(t, 1, 2) / delta(t, 3, 4)
    return ratio * (chi_du * u - chi_u * du)


def _sine_product(problem, s, js, rho_index=None):
    """``prod_j (1/rho) sin(s l_j / rho_j)`` over 1-based ``js``."""
    out = 1.0
    for j in js:
        rho_j = problem.rho[j - 1]
        rho_div = problem.rho[(rho_index(j) if rho_index else j) - 1]
        out *= math.sin(s * problem.lengths[j - 1] / rho_j) / rho_div
    return out


def _rho_product(problem, js, rho_index=None):
    out = 1.0
    for j in js:
        out /= problem.rho[(rho_index(j) if rho_index else j) - 1]
    return out


def _delta_ratio(problem):
    if problem.r == 0:
        return 1.0
    t = problem.trans[0]
    return delta(t, 1, 2) / delta(t, 3, 4)


def leading_term(problem, s: float) -> float:
    """Leading large-``s`` term of ``omega(s**2)`` for the problem's case.

    Interval lengths enter as ``l_j = xi_j - xi_{j-1} > 0``. With ``r = 0``
    in case IV both endpoint factors refer to the same interval and the term
    reduces to ``-a3 b3 rho_1 s**3 sin(s (b - a) / rho_1)``.
    """
    problem = as_validated(problem)
    r = problem.r
    a3, a4 = problem.alpha[2], problem.alpha[3]
    b3, b4 = problem.beta[2], problem.beta[3]
    ell, rho = problem.lengths, problem.rho
    case = classify_case(problem)
    if case is CaseTag.I:
        return -a4 * b4 * s ** (r + 5) * _sine_product(problem, s, range(1, r + 2))
    if case is CaseTag.II:
        return -a4 * b3 * s ** (r + 4) * math.cos(s * ell[r] / rho[r]) * _sine_product(problem, s, range(1, r + 1))
    if case is CaseTag.III:
        return (
            -a3 * b4 * s ** (r + 4) * _delta_ratio(problem)
            * math.cos(s * ell[0] / rho[0])
            * _sine_product(problem, s, range(2, r + 2))
        )
    if r == 0:
        return -a3 * b3 * rho[0] * s**3 * math.sin(s * ell[0] / rho[0])
    return (
        -a3 * b3 * s ** (r + 3) * _delta_ratio(problem)
        * math.cos(s * ell[0] / rho[0])
        * math.cos(s * ell[r] / rho[r])
        * _sine_product(problem, s, range(2, r + 1), rho_index=lambda j: j - 1)
    )


def envelope_magnitude(problem, lam: float) -> float:
    """``|leading_term|`` with every sine and cosine factor replaced by one.

    Smooth and sign-free, so dividing by it never moves a sign change.
    Uses ``s = sqrt(|lam|)``.
    """
    problem = as_validated(problem)
    s = math.sqrt(abs(lam))
    r = problem.r
    a3, a4 = problem.alpha[2], problem.alpha[3]
    b3, b4 = problem.beta[2], problem.beta[3]
    case = classify_case(problem)
    if case is CaseTag.I:
        mag = a4 * b4 * s ** (r + 5) * _rho_product(problem, range(1, r + 2))
    elif case is CaseTag.II:
        mag = a4 * b3 * s ** (r + 4) * _rho_product(problem, range(1, r + 1))
    elif case is CaseTag.III:
        mag = a3 * b4 * s ** (r + 4) * _delta_ratio(problem) * _rho_product(problem, range(2, r + 2))
    elif r == 0:
        mag = a3 * b3 * problem.rho[0] * s**3
    else:
        mag = (
            a3 * b3 * s ** (r + 3) * _delta_ratio(problem)
            * _rho_product(problem, range(2, r + 1), rho_index=lambda j: j - 1)
        )
    return abs(mag)


def sample_grid(problem, lams, cfg: IntegratorConfig = DEFAULT_CONFIG):
    """``(omega, omega_normalized)`` arrays over a grid of ``lam`` values."""
    problem = as_validated(problem)
    lams = np.asarray(lams, dtype=float)
    raw = np.array([omega_value(problem, lam, cfg) for lam in lams])
    env = np.array([max(1.0, envelope_magnitude(problem, lam)) for lam in lams])
    return raw, raw / env

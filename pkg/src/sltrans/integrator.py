"""Adaptive propagation of ``(u, u')`` across one subinterval.

On interval ``i`` the equation is ``u'' = (q(x) - lam) u / rho_i**2``. The
state is advanced with the Dormand-Prince 5(4) embedded pair (FSAL, local
extrapolation). The kernel is compiled with numba; everything above it is
plain Python.

The absolute tolerance is measured in units of ``max(|u0|, |u0'|)`` so that
the step sequence is invariant under scaling of the initial state: the
propagator is then linear to rounding error, which the Wronskian
bookkeeping relies on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import PhaseAccuracyWarning, StepLimitExceeded, StepUnderflow
from .problem import as_validated

__all__ = ["StateVector", "IntegratorConfig", "DEFAULT_CONFIG", "rhs", "integrate", "integrate_many"]

PHASE_WARNING_LIMIT = 50.0 * math.pi


class StateVector(NamedTuple):
    u: float
    du: float


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000
    min_step: float = 1e-14

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.min_step < 0:
            raise ValueError("min_step must be non-negative")


DEFAULT_CONFIG = IntegratorConfig()

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_OK, _STEP_LIMIT, _UNDERFLOW = 0, 1, 2


@njit(cache=True)
def _q(coeffs, t):
    val = 0.0
    for k in range(coeffs.shape[0] - 1, -1, -1):
        val = val * t + coeffs[k]
    return val


@njit(cache=True)
def _propagate(x0, x1, u, du, lam, inv_rho2, coeffs, xref, rtol, atol, max_steps, h_max, min_step):
    """Returns ``(u, du, status, steps)``; ``status`` 0 ok, 1 step limit, 2 underflow."""
    span = x1 - x0
    if span == 0.0:
        return u, du, _OK, 0
    scale = max(abs(u), abs(du))
    if scale == 0.0:
        return 0.0, 0.0, _OK, 0
    atol_s = atol * scale
    direction = 1.0 if span > 0.0 else -1.0

    x = x0
    g0 = (_q(coeffs, x - xref) - lam) * inv_rho2
    k1u = du
    k1d = g0 * u

    # initial step from the local frequency of the constant-coefficient equation
    freq = math.sqrt(abs(g0))
    freq = max(freq, 1.0 / abs(span))
    h = min(h_max, 0.5 * rtol ** 0.2 / freq, abs(span))
    h *= direction

    steps = 0
    last_rejected = False
    while True:
        if steps >= max_steps:
            return u, du, _STEP_LIMIT, steps
        remaining = x1 - x
        final = False
        if abs(h) >= abs(remaining):
            h = remaining
            final = True
        elif abs(h) < min_step:
            return u, du, _UNDERFLOW, steps

        g2 = (_q(coeffs, x + _C2 * h - xref) - lam) * inv_rho2
        yu = u + h * (_A21 * k1u)
        yd = du + h * (_A21 * k1d)
        k2u = yd
        k2d = g2 * yu

        g3 = (_q(coeffs, x + _C3 * h - xref) - lam) * inv_rho2
        yu = u + h * (_A31 * k1u + _A32 * k2u)
        yd = du + h * (_A31 * k1d + _A32 * k2d)
        k3u = yd
        k3d = g3 * yu

        g4 = (_q(coeffs, x + _C4 * h - xref) - lam) * inv_rho2
        yu = u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u)
        yd = du + h * (_A41 * k1d + _A42 * k2d + _A43 * k3d)
        k4u = yd
        k4d = g4 * yu

        g5 = (_q(coeffs, x + _C5 * h - xref) - lam) * inv_rho2
        yu = u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u)
        yd = du + h * (_A51 * k1d + _A52 * k2d + _A53 * k3d + _A54 * k4d)
        k5u = yd
        k5d = g5 * yu

        x_new = x1 if final else x + h
        g6 = (_q(coeffs, x_new - xref) - lam) * inv_rho2
        yu = u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u + _A65 * k5u)
        yd = du + h * (_A61 * k1d + _A62 * k2d + _A63 * k3d + _A64 * k4d + _A65 * k5d)
        k6u = yd
        k6d = g6 * yu

        un = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B5 * k5u + _B6 * k6u)
        dun = du + h * (_B1 * k1d + _B3 * k3d + _B4 * k4d + _B5 * k5d + _B6 * k6d)
        k7u = dun
        k7d = g6 * un

        eu = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u + _E7 * k7u)
        ed = h * (_E1 * k1d + _E3 * k3d + _E4 * k4d + _E5 * k5d + _E6 * k6d + _E7 * k7d)
        su = atol_s + rtol * max(abs(u), abs(un))
        sd = atol_s + rtol * max(abs(du), abs(dun))
        err = math.sqrt(0.5 * ((eu / su) ** 2 + (ed / sd) ** 2))
        steps += 1

        if err <= 1.0:
            x = x_new
            u = un
            du = dun
            k1u = k7u
            k1d = k7d
            if final:
                return u, du, _OK, steps
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
            if last_rejected:
                fac = min(fac, 1.0)
            h = direction * min(h_max, abs(h) * fac)
            last_rejected = False
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
            h = h * fac
            last_rejected = True


@njit(cache=True)
def _propagate_through(xs, u, du, lam, inv_rho2, coeffs, xref, rtol, atol, max_steps, h_max, min_step):
    """March through the ordered points ``xs``; row ``k`` holds the state at ``xs[k]``."""
    out = np.empty((xs.shape[0], 2))
    out[0, 0] = u
    out[0, 1] = du
    for k in range(1, xs.shape[0]):
        u, du, status, _ = _propagate(
            xs[k - 1], xs[k], u, du, lam, inv_rho2, coeffs, xref, rtol, atol, max_steps, h_max, min_step
        )
        if status != _OK:
            out[k:, :] = np.nan
            return out, status
        out[k, 0] = u
        out[k, 1] = du
    return out, _OK


def rhs(problem, interval_index: int, x: float, lam: float, s) -> StateVector:
    """Right-hand side ``(u', u'')`` of the first-order system."""
    problem = as_validated(problem)
    u, du = s
    g = (problem.q_at(interval_index, x) - lam) / problem.rho[interval_index] ** 2
    return StateVector(du, g * u)


def _raise_for(status, interval_index, lam, x_from, x_to):
    where = f"interval {interval_index + 1}, lambda={lam!r}, x {x_from!r} -> {x_to!r}"
    if status == _STEP_LIMIT:
        raise StepLimitExceeded(f"step limit reached on {where}")
    raise StepUnderflow(f"step size fell below min_step on {where}")


def _check_phase(problem, interval_index, lam, x_from, x_to):
    rate = math.sqrt(abs(lam)) / problem.rho[interval_index]
    if rate * abs(x_to - x_from) > PHASE_WARNING_LIMIT:
        warnings.warn(
            f"interval {interval_index + 1}: phase s*l/rho exceeds 50*pi at lambda={lam:.6g}; "
            "phase accuracy degrades",
            PhaseAccuracyWarning,
            stacklevel=3,
        )


def integrate(
    problem,
    interval_index: int,
    lam: float,
    x_from: float,
    x_to: float,
    s0,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> StateVector:
    """Solution state at ``x_to`` of the solution with state ``s0`` at ``x_from``.

    Both points must lie in the closure of interval ``interval_index``;
    integration may run in either direction.

    Raises
    ------
    StepLimitExceeded, StepUnderflow
    """
    problem = as_validated(problem)
    lo = problem.breakpoints[interval_index]
    hi = problem.breakpoints[interval_index + 1]
    if not (lo <= x_from <= hi and lo <= x_to <= hi):
        raise ValueError(f"points {x_from!r}, {x_to!r} are not inside interval {interval_index + 1}")
    _check_phase(problem, interval_index, lam, x_from, x_to)
    u, du, status, _ = _propagate(
        float(x_from),
        float(x_to),
        float(s0[0]),
        float(s0[1]),
        float(lam),
        1.0 / problem.rho[interval_index] ** 2,
        problem.q_coeffs[interval_index],
        lo,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_steps,
        (hi - lo) / 8.0,
        cfg.min_step,
    )
    if status != _OK:
        _raise_for(status, interval_index, lam, x_from, x_to)
    return StateVector(u, du)


def integrate_many(problem, interval_index, lam, xs, s0, cfg: IntegratorConfig = DEFAULT_CONFIG):
    """States at every point of the monotone array ``xs`` (``xs[0]`` carries ``s0``).

    Returns an ``(len(xs), 2)`` array of ``(u, u')`` rows.
    """
    problem = as_validated(problem)
    lo = problem.breakpoints[interval_index]
    hi = problem.breakpoints[interval_index + 1]
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if xs.size == 0:
        return np.empty((0, 2))
    if xs.min() < lo or xs.max() > hi:
        raise ValueError(f"sample points leave interval {interval_index + 1}")
    _check_phase(problem, interval_index, lam, xs[0], xs[-1])
    out, status = _propagate_through(
        xs,
        float(s0[0]),
        float(s0[1]),
        float(lam),
        1.0 / problem.rho[interval_index] ** 2,
        problem.q_coeffs[interval_index],
        lo,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_steps,
        (hi - lo) / 8.0,
        cfg.min_step,
    )
    if status != _OK:
        _raise_for(status, interval_index, lam, xs[0], xs[-1])
    return out

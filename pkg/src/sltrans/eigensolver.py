"""Real eigenvalues as sign changes of the characteristic function.

Non-positive ``lam`` is scanned on a uniform ``lam`` grid, positive ``lam``
on a uniform grid in ``s = sqrt(lam)`` (the roots are asymptotically
equispaced in ``s``). Positive grid points sit at ``k / grid_per_unit`` so a
longer scan reproduces every sample of a shorter one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .characteristic import envelope_magnitude, omega_value
from .errors import GridTooCoarse, MaxIterations, NoSignChange
from .integrator import DEFAULT_CONFIG, IntegratorConfig
from .problem import as_validated

__all__ = [
    "Eigenvalue",
    "default_grid_per_unit",
    "default_lambda_min",
    "scan_brackets",
    "refine",
    "find_eigenvalues",
]

REFINE_RTOL = 1e-12
SIMPLICITY_FACTOR = 1e3
MAX_CLUSTER_LEVELS = 3


@dataclass(frozen=True)
class Eigenvalue:
    lam: float
    s: float | None
    bracket: tuple
    residual: float
    simple: bool
    index: int = 0


def default_grid_per_unit(problem) -> int:
    """Samples per unit of ``s``: 40 per half-period of the fastest oscillation.

    ``omega`` oscillates in ``s`` no faster than ``sin(s * sum_j l_j / rho_j)``.
    """
    problem = as_validated(problem)
    return max(8, math.ceil(40.0 * problem.total_phase_rate() / math.pi))


def default_lambda_min(problem) -> float:
    """Lower end of the negative-``lam`` window.

    ``-10 (1 + m)`` with ``m`` the larger of ``max|q| / min rho**2`` and the
    ``lam``-scales ``|a1/a3|, |a2/a4|, |b1/b3|, |b2/b4|`` of the boundary data.
    """
    problem = as_validated(problem)
    scale = problem.q_bound() / min(problem.rho) ** 2
    a1, a2, a3, a4 = problem.alpha
    b1, b2, b3, b4 = problem.beta
    for num, den in ((a1, a3), (a2, a4), (b1, b3), (b2, b4)):
        if den != 0.0:
            scale = max(scale, abs(num / den))
    return -10.0 * (1.0 + scale)


def _objective(problem, cfg):
    def f(lam):
        return omega_value(problem, lam, cfg) / max(1.0, envelope_magnitude(problem, lam))

    return f


def _fill(lo, hi, parts):
    """``parts - 1`` interior points of ``[lo, hi]``, uniform in ``s`` for ``lo >= 0``."""
    if lo >= 0.0:
        s = np.linspace(math.sqrt(lo), math.sqrt(hi), parts + 1)[1:-1]
        return list(s * s)
    return list(np.linspace(lo, hi, parts + 1)[1:-1])


def _brackets(lams, vals):
    out = []
    for k, v in enumerate(vals):
        if v == 0.0:
            out.append((k, k))
        elif k + 1 < len(vals) and v * vals[k + 1] < 0.0:
            out.append((k, k + 1))
    return out


def _clusters(brs):
    """Index ranges of consecutive brackets less than two cells apart."""
    out = []
    for (lo0, hi0), (lo1, hi1) in zip(brs, brs[1:]):
        if lo1 - hi0 < 2:
            out.append((lo0, hi1))
    return out


def _initial_grid(problem, s_min, s_max, grid_per_unit, lambda_min):
    lams = []
    if s_min == 0.0:
        n_neg = max(16, math.ceil(grid_per_unit * math.sqrt(-lambda_min))) if lambda_min < 0.0 else 0
        lams.extend(np.linspace(lambda_min, 0.0, n_neg + 1) if n_neg else [0.0])
    k0 = math.ceil(s_min * grid_per_unit - 1e-9)
    k0 = max(k0, 1 if s_min == 0.0 else k0)
    k1 = math.ceil(s_max * grid_per_unit - 1e-9)
    ks = np.arange(k0, k1 + 1, dtype=float) / grid_per_unit
    lams.extend(ks * ks)
    return [float(v) for v in lams]


def scan_brackets(
    problem,
    s_max: float,
    grid_per_unit: int | None = None,
    lambda_min: float | None = None,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    *,
    s_min: float = 0.0,
):
    """Sign-change intervals of the normalised characteristic function.

    Scans ``[lambda_min, 0]`` and ``s`` in ``(0, s_max]``; with ``s_min > 0``
    only ``s`` in ``[s_min, s_max]``. Brackets that land within two grid cells
    of each other are resampled four times finer around them, up to three
    times.

    Returns
    -------
    list of (lam_lo, lam_hi)
        Ascending. A grid point where the function is exactly zero yields a
        degenerate bracket ``(lam, lam)``.

    Raises
    ------
    GridTooCoarse
        Brackets still crowd each other after the last local refinement.
    """
    problem = as_validated(problem)
    if not s_max > 0.0:
        raise ValueError("s_max must be positive")
    g = grid_per_unit or default_grid_per_unit(problem)
    lam_min = default_lambda_min(problem) if lambda_min is None else float(lambda_min)
    if lam_min > 0.0:
        raise ValueError("lambda_min must be <= 0")
    f = _objective(problem, cfg)

    lams = _initial_grid(problem, s_min, s_max, g, lam_min)
    vals = [f(lam) for lam in lams]

    for level in range(MAX_CLUSTER_LEVELS + 1):
        brs = _brackets(lams, vals)
        crowded = _clusters(brs)
        if not crowded:
            break
        if level == MAX_CLUSTER_LEVELS:
            lo, hi = crowded[0]
            raise GridTooCoarse(
                f"roots near lambda in [{lams[lo]:.12g}, {lams[hi]:.12g}] stay within two cells "
                f"after {MAX_CLUSTER_LEVELS} local refinements; raise grid_per_unit"
            )
        marked = set()
        for lo, hi in crowded:
            marked.update(range(max(0, lo - 2), min(len(lams) - 1, hi + 2)))
        new_lams, new_vals = [], []
        for k in range(len(lams)):
            new_lams.append(lams[k])
            new_vals.append(vals[k])
            if k in marked:
                for lam in _fill(lams[k], lams[k + 1], 4):
                    new_lams.append(lam)
                    new_vals.append(f(lam))
        lams, vals = new_lams, new_vals

    return [(lams[lo], lams[hi]) for lo, hi in _brackets(lams, vals)]


def refine(problem, bracket, cfg: IntegratorConfig = DEFAULT_CONFIG, index: int = 0) -> Eigenvalue:
    """Brent refinement of one bracket plus the simplicity certificate.

    The root is located to a relative tolerance of 1e-12 in ``lam`` (tighter
    than the 1e-10 requirement). It is certified simple when
    ``|omega'(lam)| * width > 1e3 * |omega(lam)|`` with a central-difference
    derivative of the normalised function and ``width`` the bracket width.

    Raises
    ------
    NoSignChange
        The normalised function has the same sign at both ends.
    MaxIterations
        Brent did not converge.
    """
    problem = as_validated(problem)
    f = _objective(problem, cfg)
    lo, hi = sorted(float(v) for v in bracket)
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        root = lo
    elif f_hi == 0.0:
        root = hi
    elif f_lo * f_hi > 0.0:
        raise NoSignChange(f"no sign change on [{lo!r}, {hi!r}]")
    else:
        root, info = brentq(f, lo, hi, xtol=1e-14, rtol=REFINE_RTOL, maxiter=200, full_output=True, disp=False)
        if not info.converged:
            raise MaxIterations(f"Brent did not converge on [{lo!r}, {hi!r}]: {info.flag}")
    value = f(root)
    h = max(1e-7 * max(1.0, abs(root)), 1e-3 * (hi - lo))
    slope = (f(root + h) - f(root - h)) / (2.0 * h)
    width = hi - lo if hi > lo else 2.0 * h
    simple = abs(slope) * width > SIMPLICITY_FACTOR * abs(value)
    return Eigenvalue(
        lam=root,
        s=math.sqrt(root) if root >= 0.0 else None,
        bracket=(lo, hi),
        residual=abs(value),
        simple=bool(simple),
        index=index,
    )


def find_eigenvalues(
    problem,
    count: int,
    grid_per_unit: int | None = None,
    lambda_min: float | None = None,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    s_max: float | None = None,
):
    """The ``count`` smallest eigenvalues, indexed 1..count in increasing order.

    The scan starts at ``s_max`` (or an estimate from the total phase
    ``sum l_j / rho_j``) and grows by half its length until enough sign
    changes are found.
    """
    problem = as_validated(problem)
    if count < 1:
        raise ValueError("count must be at least 1")
    g = grid_per_unit or default_grid_per_unit(problem)
    lam_min = default_lambda_min(problem) if lambda_min is None else float(lambda_min)
    if s_max is None:
        s_max = (count + problem.r + 3) * math.pi / problem.total_phase_rate()

    brackets = scan_brackets(problem, s_max, g, lam_min, cfg)
    while len(brackets) < count:
        s_prev, s_max = s_max, 1.5 * s_max
        more = scan_brackets(problem, s_max, g, lam_min, cfg, s_min=_last_grid_s(s_prev, g))
        if brackets and more and more[0][0] <= brackets[-1][1]:
            # the first new cell repeats the old last sample
            more = [br for br in more if br[0] >= brackets[-1][1] and br != brackets[-1]]
        brackets.extend(more)
    return [refine(problem, br, cfg, index=k + 1) for k, br in enumerate(brackets[:count])]


def _last_grid_s(s_max, g):
    return math.ceil(s_max * g - 1e-9) / g

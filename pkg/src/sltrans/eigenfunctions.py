"""Sampled eigenfunctions and boundary / transmission residuals.

The eigenfunction at ``lam_n`` is ``phi(., lam_n)``. The one exception is a
``lam`` at which the left condition degenerates to ``0 = 0`` (possible when
``a1 a4 = a2 a3``): there ``phi`` vanishes identically and ``chi`` is used.
Samples are scaled to unit sup-norm with the sign fixed so the first sample
on the first interval that is not negligibly small is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fundamental import build_chi, build_phi, chi_initial, phi_initial
from .integrator import DEFAULT_CONFIG, IntegratorConfig, integrate_many
from .problem import as_validated, transmission_residuals

__all__ = [
    "eigen_solution",
    "Segment",
    "EigenfunctionSamples",
    "eigenfunction",
    "ResidualReport",
    "residuals",
]

SIGN_THRESHOLD = 1e-8
DEGENERATE_START = 1e-8


def _start_size(state, c1, c2, c3, c4, lam):
    scale = abs(c1) + abs(c2) + abs(lam) * (abs(c3) + abs(c4))
    return max(abs(state[0]), abs(state[1])) / scale


def eigen_solution(problem, lam: float, cfg: IntegratorConfig = DEFAULT_CONFIG):
    """``phi(., lam)``, or ``chi(., lam)`` when ``phi``'s starting vector nearly vanishes.

    ``phi`` starts from ``(a2 - lam a4, a1 - lam a3)``, which is zero only
    where the left condition is empty; there ``chi`` carries the
    eigenfunction instead.
    """
    problem = as_validated(problem)
    left = _start_size(phi_initial(problem, lam), *problem.alpha, lam)
    right = _start_size(chi_initial(problem, lam), *problem.beta, lam)
    if left < DEGENERATE_START and right > left:
        return build_chi(problem, lam, cfg)
    return build_phi(problem, lam, cfg)


def _sample(problem, sol, counts, cfg):
    """``(i, xs, states)`` per interval; end rows are the stored one-sided limits."""
    bp = problem.breakpoints
    raw = []
    for i in range(problem.n_intervals):
        xs = np.linspace(bp[i], bp[i + 1], counts[i])
        left, right = sol.ends[i]
        states = integrate_many(problem, i, sol.lam, xs, left, cfg)
        states[0] = left
        states[-1] = right
        raw.append((i, xs, states))
    return raw


def _scale_counts(problem, lam):
    """Sample counts giving at least eight points per half-period on every interval."""
    s = np.sqrt(abs(lam) + problem.q_bound())
    return [
        max(33, int(np.ceil(8.0 * s * length / (rho * np.pi))) + 1)
        for length, rho in zip(problem.lengths, problem.rho)
    ]


@dataclass(frozen=True)
class Segment:
    """Samples on one subinterval; the end rows are the one-sided limits there."""

    index: int
    x: np.ndarray
    u: np.ndarray
    du: np.ndarray


@dataclass(frozen=True)
class EigenfunctionSamples:
    eigen: object
    segments: tuple
    norm_used: str = "sup_norm"
    scale: float = 1.0

    def rows(self):
        """``(subinterval, side, x, u, du)`` tuples, subinterval 1-based.

        The first sample of every segment is a ``right_limit`` and the last a
        ``left_limit`` (so ``a`` is a right limit and ``b`` a left limit);
        everything in between is ``interior``.
        """
        for seg in self.segments:
            n = len(seg.x)
            for k in range(n):
                side = "right_limit" if k == 0 else "left_limit" if k == n - 1 else "interior"
                yield seg.index + 1, side, float(seg.x[k]), float(seg.u[k]), float(seg.du[k])


def eigenfunction(
    problem,
    eigen,
    points_per_subinterval: int = 101,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> EigenfunctionSamples:
    """Sample the eigenfunction at ``eigen.lam`` on uniform points per interval.

    Interval end samples are the stored one-sided limits, so at an interior
    point both limits appear (one in each neighbouring segment).
    """
    problem = as_validated(problem)
    if points_per_subinterval < 2:
        raise ValueError("points_per_subinterval must be at least 2")
    lam = eigen.lam
    sol = eigen_solution(problem, lam, cfg)
    raw = _sample(problem, sol, [points_per_subinterval] * problem.n_intervals, cfg)

    sup = max(float(np.max(np.abs(st[:, 0]))) for _, _, st in raw)
    if sup == 0.0:
        sup = 1.0
    first_u = raw[0][2][:, 0]
    big = np.nonzero(np.abs(first_u) > SIGN_THRESHOLD * sup)[0]
    sign = -1.0 if big.size and first_u[big[0]] < 0.0 else 1.0
    scale = sign / sup
    segments = tuple(Segment(i, xs, st[:, 0] * scale, st[:, 1] * scale) for i, xs, st in raw)
    return EigenfunctionSamples(eigen, segments, "sup_norm", scale)


@dataclass(frozen=True)
class ResidualReport:
    """Normalised residuals of the boundary and transmission conditions.

    Every term ``c * u`` or ``c * u'`` of a condition is measured against
    ``|c| * U`` or ``|c| * U'``, where ``U`` and ``U'`` are the largest
    ``|u|`` and ``|u'|`` of the eigenfunction, sampled at eight points or
    more per half-period. A residual is the condition's value divided by the
    sum of those sizes.
    """

    bc_a: float
    bc_b: float
    trans: tuple

    def max_trans(self) -> float:
        return max((max(pair) for pair in self.trans), default=0.0)


def _ratio(value, size):
    return abs(value) / size if size > 0.0 else abs(value)


def residuals(problem, eigen, cfg: IntegratorConfig = DEFAULT_CONFIG) -> ResidualReport:
    """Residuals of the eigenfunction in both boundary and all transmission conditions.

    ``eigen`` may be an :class:`Eigenvalue` or a plain ``lam``. For
    ``phi``, ``bc_a`` and the transmission residuals vanish by construction
    and ``bc_b`` is the actual eigenvalue certificate (for ``chi`` the roles
    of ``bc_a`` and ``bc_b`` swap).
    """
    problem = as_validated(problem)
    lam = float(getattr(eigen, "lam", eigen))
    sol = eigen_solution(problem, lam, cfg)
    raw = _sample(problem, sol, _scale_counts(problem, lam), cfg)
    u_size = max(float(np.max(np.abs(st[:, 0]))) for _, _, st in raw)
    du_size = max(float(np.max(np.abs(st[:, 1]))) for _, _, st in raw)
    a1, a2, a3, a4 = problem.alpha
    b1, b2, b3, b4 = problem.beta

    cu, cd = a1 - lam * a3, a2 - lam * a4
    u, du = sol.at_a()
    bc_a = _ratio(cu * u - cd * du, abs(cu) * u_size + abs(cd) * du_size)

    cu, cd = b1 + lam * b3, b2 + lam * b4
    u, du = sol.at_b()
    bc_b = _ratio(cu * u - cd * du, abs(cu) * u_size + abs(cd) * du_size)

    trans = []
    for i, t in enumerate(problem.trans):
        first, second = transmission_residuals(t, sol.ends[i][1], sol.ends[i + 1][0])
        size_a = (abs(t.am0) + abs(t.ap0)) * u_size + (abs(t.am1) + abs(t.ap1)) * du_size
        size_b = (abs(t.bm0) + abs(t.bp0)) * u_size + (abs(t.bm1) + abs(t.bp1)) * du_size
        trans.append((_ratio(first, size_a), _ratio(second, size_b)))
    return ResidualReport(bc_a, bc_b, tuple(trans))

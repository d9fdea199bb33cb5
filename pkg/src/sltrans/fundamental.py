"""Piecewise fundamental solutions ``phi`` (left-started) and ``chi`` (right-started).

``phi`` starts at ``a`` from ``(a2 - lam a4, a1 - lam a3)`` so it satisfies the
left boundary condition for every ``lam``; ``chi`` starts at ``b`` from
``(b2 + lam b4, b1 + lam b3)``. Both are carried across interior points by the
transfer matrices, so every transmission condition holds by construction.
Only the end states of each subinterval are stored; values in between are
recomputed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfDomain
from .integrator import DEFAULT_CONFIG, IntegratorConfig, StateVector, integrate
from .problem import as_validated

__all__ = [
    "LEFT_TO_RIGHT",
    "RIGHT_TO_LEFT",
    "PiecewiseSolution",
    "phi_initial",
    "chi_initial",
    "build_phi",
    "build_chi",
    "evaluate",
]

LEFT_TO_RIGHT = "left_to_right"
RIGHT_TO_LEFT = "right_to_left"


@dataclass(frozen=True)
class PiecewiseSolution:
    """End states of one fundamental solution on every subinterval.

    ``ends[i]`` is ``(state at the left end, state at the right end)`` of
    interval ``i``; at interior points these are the one-sided limits.
    """

    direction: str
    lam: float
    ends: tuple
    cfg: IntegratorConfig = DEFAULT_CONFIG

    @property
    def interface_states(self):
        """Flat sequence of the ``2(r+1)`` stored states, left to right."""
        return tuple(s for pair in self.ends for s in pair)

    def at_a(self) -> StateVector:
        return self.ends[0][0]

    def at_b(self) -> StateVector:
        return self.ends[-1][1]


def phi_initial(problem, lam) -> StateVector:
    a1, a2, a3, a4 = problem.alpha
    return StateVector(a2 - lam * a4, a1 - lam * a3)


def chi_initial(problem, lam) -> StateVector:
    b1, b2, b3, b4 = problem.beta
    return StateVector(b2 + lam * b4, b1 + lam * b3)


def build_phi(problem, lam: float, cfg: IntegratorConfig = DEFAULT_CONFIG) -> PiecewiseSolution:
    problem = as_validated(problem)
    bp = problem.breakpoints
    state = phi_initial(problem, lam)
    ends = []
    for i in range(problem.n_intervals):
        right = integrate(problem, i, lam, bp[i], bp[i + 1], state, cfg)
        ends.append((state, right))
        if i < problem.r:
            state = StateVector(*problem.forward[i].apply(right))
    return PiecewiseSolution(LEFT_TO_RIGHT, float(lam), tuple(ends), cfg)


def build_chi(problem, lam: float, cfg: IntegratorConfig = DEFAULT_CONFIG) -> PiecewiseSolution:
    problem = as_validated(problem)
    bp = problem.breakpoints
    state = chi_initial(problem, lam)
    ends = [None] * problem.n_intervals
    for i in range(problem.r, -1, -1):
        left = integrate(problem, i, lam, bp[i + 1], bp[i], state, cfg)
        ends[i] = (left, state)
        if i > 0:
            state = StateVector(*problem.backward[i - 1].apply(left))
    return PiecewiseSolution(RIGHT_TO_LEFT, float(lam), tuple(ends), cfg)


def evaluate(solution: PiecewiseSolution, problem, x: float, side: str | None = None) -> StateVector:
    """State of ``solution`` at ``x``.

    Re-integrates from whichever stored end of the containing interval is
    nearer; ties go to the end the solution was started from. At an interior
    point ``side`` selects the left (``"left"``) or right (``"right"``) limit.

    Raises
    ------
    OutOfDomain
        ``x`` outside ``[a, b]``, or at an interior point without ``side``.
    """
    problem = as_validated(problem)
    if side not in (None, "left", "right"):
        raise OutOfDomain(f"side must be 'left' or 'right', got {side!r}")
    i = problem.interval_of(x, side)
    lo, hi = problem.breakpoints[i], problem.breakpoints[i + 1]
    left, right = solution.ends[i]
    if x == lo:
        return left
    if x == hi:
        return right
    d_left, d_right = x - lo, hi - x
    from_left = d_left < d_right or (d_left == d_right and solution.direction == LEFT_TO_RIGHT)
    if from_left:
        return integrate(problem, i, solution.lam, lo, x, left, solution.cfg)
    return integrate(problem, i, solution.lam, hi, x, right, solution.cfg)

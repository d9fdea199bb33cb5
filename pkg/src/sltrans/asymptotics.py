"""Asymptotic eigenvalue branches and their matching to computed spectra.

Which of ``alpha_4`` and ``beta_4`` vanish decides the case, and the case
decides the shape of the ``r + 1`` branches ``s_n^(j)``. Branch labels ``j``
are 1-based like the subintervals they come from; ``l_j`` is the (positive)
length of subinterval ``j``.

Case I's ``(n/2 - 1)`` multiplier (and the ``(n - 1)/2`` multiplier of the
interior branches in cases II and III) is evaluated as written for every
``n``; half the values then sit between zeros and stay unmatched, which the
nearest-neighbour matching tolerates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchOutOfRange, CaseUnsupported, OutOfDomain
from .problem import as_validated

__all__ = [
    "CaseTag",
    "classify_case",
    "AsymptoticBranch",
    "branches",
    "asymptotic_s",
    "MatchedPair",
    "BranchMatch",
    "match_branches",
    "asymptotic_phi",
]


class CaseTag(enum.Enum):
    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    IV = "IV"


def classify_case(problem) -> CaseTag:
    problem = as_validated(problem)
    a4, b4 = problem.alpha[3], problem.beta[3]
    if a4 != 0.0:
        return CaseTag.I if b4 != 0.0 else CaseTag.II
    return CaseTag.III if b4 != 0.0 else CaseTag.IV


_MULTIPLIERS = {
    "n/2-1": lambda n: n / 2.0 - 1.0,
    "n+1/2": lambda n: n + 0.5,
    "(n-1)/2": lambda n: (n - 1.0) / 2.0,
    "n/2": lambda n: n / 2.0,
    "n": lambda n: float(n),
}


@dataclass(frozen=True)
class AsymptoticBranch:
    """One sequence ``s_n = multiplier(n) * rho_j * pi / l_j``."""

    j: int
    case: CaseTag
    rho: float
    length: float
    form: str

    def __call__(self, n):
        if np.ndim(n) == 0 and n < 1:
            raise BranchOutOfRange(f"n must be >= 1, got {n}")
        return _MULTIPLIERS[self.form](n) * self.rho * math.pi / self.length

    @property
    def spacing(self) -> float:
        """Distance between consecutive values of the sequence."""
        return abs(self(2) - self(1))

    def monotone_from(self) -> int:
        """First ``n`` from which the values are positive and increasing."""
        n = 1
        while self(n) <= 0.0:
            n += 1
        return n


def _branch_form(case: CaseTag, j: int, r: int) -> str:
    if case is CaseTag.I:
        return "n/2-1"
    if case is CaseTag.II:
        return "n+1/2" if j == r + 1 else "(n-1)/2"
    if case is CaseTag.III:
        return "n+1/2" if j == 1 else "(n-1)/2"
    if r == 0:
        return "n"
    return "n+1/2" if j in (1, r + 1) else "n/2"


def branches(problem, case: CaseTag | None = None) -> list:
    problem = as_validated(problem)
    case = case or classify_case(problem)
    r = problem.r
    return [
        AsymptoticBranch(j, case, problem.rho[j - 1], problem.lengths[j - 1], _branch_form(case, j, r))
        for j in range(1, r + 2)
    ]


def asymptotic_s(problem, case: CaseTag, j: int, n: int) -> float:
    """Leading term of ``s_n^(j)`` for ``case``.

    Raises
    ------
    BranchOutOfRange
        ``j`` outside ``1..r+1`` or ``n < 1``.
    """
    problem = as_validated(problem)
    r = problem.r
    if not 1 <= j <= r + 1:
        raise BranchOutOfRange(f"branch j={j} outside 1..{r + 1}")
    if n < 1:
        raise BranchOutOfRange(f"n must be >= 1, got {n}")
    form = _branch_form(case, j, r)
    return _MULTIPLIERS[form](n) * problem.rho[j - 1] * math.pi / problem.lengths[j - 1]


@dataclass(frozen=True)
class MatchedPair:
    eigen: object
    branch: int
    n: int
    s_asymptotic: float
    error: float

    @property
    def error_times_n(self):
        return self.error * self.n


@dataclass(frozen=True)
class BranchMatch:
    pairs: tuple
    unmatched_numeric: tuple
    unmatched_asymptotic: tuple = field(default=())

    def for_branch(self, j):
        return [p for p in self.pairs if p.branch == j]

    def max_error_times_n(self):
        """``{branch: max(e_n * n)}`` over matched pairs."""
        out = {}
        for p in self.pairs:
            out[p.branch] = max(out.get(p.branch, 0.0), p.error_times_n)
        return out


def match_branches(numeric, problem, n_max: int | None = None) -> BranchMatch:
    """Greedy nearest-neighbour assignment of computed ``s`` to branch values.

    Every admissible (numeric, asymptotic) pair closer than half the
    branch's spacing is ranked by distance; pairs are claimed in that order
    so each side is used at most once. Eigenvalues with ``lam < 0`` have no
    ``s`` and are reported unmatched.

    Parameters
    ----------
    numeric : sequence of Eigenvalue
    n_max : int, optional
        Largest branch index generated. Defaults to whatever covers the
        largest computed ``s`` plus one spacing.
    """
    problem = as_validated(problem)
    numeric = list(numeric)
    with_s = [e for e in numeric if e.s is not None]
    s_top = max((e.s for e in with_s), default=0.0)

    table = []  # (branch, n, value)
    for br in branches(problem):
        if n_max is not None:
            top = n_max
        else:
            if not with_s:
                continue
            top = 1
            while br(top) <= s_top + br.spacing:
                top += 1
        for n in range(1, top + 1):
            value = br(n)
            if value > 0.0:
                table.append((br, n, value))

    candidates = []
    for ei, e in enumerate(with_s):
        for ti, (br, n, value) in enumerate(table):
            dist = abs(e.s - value)
            if dist < 0.5 * br.spacing:
                candidates.append((dist, ei, ti))
    candidates.sort()

    used_e, used_t, pairs = set(), set(), []
    for dist, ei, ti in candidates:
        if ei in used_e or ti in used_t:
            continue
        used_e.add(ei)
        used_t.add(ti)
        br, n, value = table[ti]
        pairs.append(MatchedPair(with_s[ei], br.j, n, value, dist))
    pairs.sort(key=lambda p: p.eigen.lam)

    matched_ids = {id(with_s[ei]) for ei in used_e}
    unmatched_numeric = tuple(e for e in numeric if id(e) not in matched_ids)
    unmatched_asym = tuple(
        (br.j, n, value) for ti, (br, n, value) in enumerate(table) if ti not in used_t
    )
    return BranchMatch(tuple(pairs), unmatched_numeric, unmatched_asym)


def asymptotic_phi(problem, n: int, x: float, k: int) -> float:
    """Leading term of ``phi`` on branch ``k`` at ``s = s_n^(k)`` (case I only).

    On the first interval this is ``-a4 s**2 cos(s (x - a) / rho_1)``; across
    interface ``j`` the amplitude picks up ``-(s / rho_j) m12_j sin(s l_j / rho_j)``
    where ``m12_j`` is the ``u' -> u`` entry of that forward transfer matrix.

    Raises
    ------
    CaseUnsupported
        The problem is not in case I.
    OutOfDomain
        ``x`` outside ``[a, b]`` or exactly at an interior point.
    """
    problem = as_validated(problem)
    if classify_case(problem) is not CaseTag.I:
        raise CaseUnsupported("eigenfunction asymptotics are implemented for case I only")
    bp = problem.breakpoints
    if x in bp[1:-1]:
        raise OutOfDomain(f"x={x!r} is an interior point; the leading term is one-sided there")
    i = problem.interval_of(x)
    s = asymptotic_s(problem, CaseTag.I, k, n)
    a4 = problem.alpha[3]
    amp = -a4 * s * s
    for j in range(i):
        rho_j = problem.rho[j]
        amp *= -(s / rho_j) * problem.forward[j].m12 * math.sin(s * problem.lengths[j] / rho_j)
    return amp * math.cos(s * (x - bp[i]) / problem.rho[i])

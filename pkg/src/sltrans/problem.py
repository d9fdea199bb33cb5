"""Problem data, validation and the interface transfer maps.

A problem is the equation ``-rho_i**2 u'' + q(x) u = lam u`` on the
subintervals ``Omega_i = (xi_{i-1}, xi_i)`` of ``[a, b]`` together with

* left condition  ``a1 u(a) - a2 u'(a) - lam (a3 u(a) - a4 u'(a)) = 0``,
* right condition ``b1 u(b) - b2 u'(b) + lam (b3 u(b) - b4 u'(b)) = 0``,
* two transmission conditions at every interior point ``xi_i``::

      am1 u'(xi-) + am0 u(xi-) + ap1 u'(xi+) + ap0 u(xi+) = 0
      bm1 u'(xi-) + bm0 u(xi-) + bp1 u'(xi+) + bp0 u(xi+) = 0

The minors ``Delta_jk`` are taken over the coefficient matrix whose columns
are ordered ``(ap1, ap0, am1, am0)`` over ``(bp1, bp0, bm1, bm0)``.

Subintervals and interfaces are indexed from zero in this package:
interval ``i`` is ``(breakpoints[i], breakpoints[i + 1])`` and interface
``i`` sits between intervals ``i`` and ``i + 1``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateTransmission,
    IndexOutOfRange,
    NonMonotonePoints,
    NonPositiveDelta,
    NonPositiveRho,
    OutOfDomain,
    ParseError,
    ProblemShapeError,
    ValidationWarning,
    VacuousBoundaryCondition,
)

__all__ = [
    "TransmissionCoefficients",
    "TransferMatrix",
    "ProblemSpec",
    "ValidatedProblem",
    "IDENTITY_TRANSMISSION",
    "delta",
    "delta_table",
    "forward_transfer",
    "backward_transfer",
    "transmission_residuals",
    "validate",
    "as_validated",
    "load_problem",
    "problem_from_dict",
    "problem_to_dict",
]

_TRANSMISSION_KEYS = ("ap1", "ap0", "am1", "am0", "bp1", "bp0", "bm1", "bm0")
_DELTA_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


@dataclass(frozen=True)
class TransmissionCoefficients:
    """Coefficients of the two transmission conditions at one interface."""

    ap1: float
    ap0: float
    am1: float
    am0: float
    bp1: float
    bp0: float
    bm1: float
    bm0: float

    def columns(self):
        """The four columns (top, bottom) of the coefficient matrix."""
        return (
            (self.ap1, self.bp1),
            (self.ap0, self.bp0),
            (self.am1, self.bm1),
            (self.am0, self.bm0),
        )

    def max_abs(self):
        return max(abs(v) for v in self.as_tuple())

    def as_tuple(self):
        return tuple(getattr(self, k) for k in _TRANSMISSION_KEYS)

    @classmethod
    def from_mapping(cls, data):
        missing = [k for k in _TRANSMISSION_KEYS if k not in data]
        if missing:
            raise ParseError(f"transmission record is missing keys {missing}")
        return cls(**{k: float(data[k]) for k in _TRANSMISSION_KEYS})


# u(xi+) = u(xi-), u'(xi+) = u'(xi-)
IDENTITY_TRANSMISSION = TransmissionCoefficients(
    ap1=0.0, ap0=1.0, am1=0.0, am0=-1.0, bp1=-1.0, bp0=0.0, bm1=1.0, bm0=0.0
)


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 real matrix acting on a ``(u, u')`` pair."""

    m11: float
    m12: float
    m21: float
    m22: float

    def apply(self, state):
        u, du = state
        return (self.m11 * u + self.m12 * du, self.m21 * u + self.m22 * du)

    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def as_array(self):
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def __matmul__(self, other):
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )


def delta(t: TransmissionCoefficients, j: int, k: int) -> float:
    """Determinant of columns ``j`` and ``k`` (1-based, ``j < k``)."""
    if not (1 <= j < k <= 4):
        raise IndexOutOfRange(f"need 1 <= j < k <= 4, got j={j}, k={k}")
    cols = t.columns()
    (x1, y1), (x2, y2) = cols[j - 1], cols[k - 1]
    return x1 * y2 - x2 * y1


def delta_table(t: TransmissionCoefficients) -> dict:
    """All six minors keyed by ``(j, k)``."""
    return {(j, k): delta(t, j, k) for j, k in _DELTA_PAIRS}


def forward_transfer(t: TransmissionCoefficients) -> TransferMatrix:
    """Map ``(u(xi-), u'(xi-))`` to ``(u(xi+), u'(xi+))``.

    This is Cramer's rule for the two transmission conditions solved for the
    right-hand limits; its determinant is ``Delta_34 / Delta_12``.
    """
    d12 = delta(t, 1, 2)
    if d12 == 0.0:
        raise DegenerateTransmission("Delta_12 = 0: right-hand limits are not determined")
    return TransferMatrix(
        -delta(t, 1, 4) / d12,
        -delta(t, 1, 3) / d12,
        delta(t, 2, 4) / d12,
        delta(t, 2, 3) / d12,
    )


def backward_transfer(t: TransmissionCoefficients) -> TransferMatrix:
    """Map ``(u(xi+), u'(xi+))`` to ``(u(xi-), u'(xi-))``."""
    d34 = delta(t, 3, 4)
    if d34 == 0.0:
        raise DegenerateTransmission("Delta_34 = 0: left-hand limits are not determined")
    return TransferMatrix(
        delta(t, 2, 3) / d34,
        delta(t, 1, 3) / d34,
        -delta(t, 2, 4) / d34,
        -delta(t, 1, 4) / d34,
    )


def transmission_residuals(t: TransmissionCoefficients, left, right):
    """Raw values of both transmission conditions for one-sided limits.

    ``left`` is ``(u(xi-), u'(xi-))`` and ``right`` is ``(u(xi+), u'(xi+))``.
    """
    um, dum = left
    up, dup = right
    first = t.am1 * dum + t.am0 * um + t.ap1 * dup + t.ap0 * up
    second = t.bm1 * dum + t.bm0 * um + t.bp1 * dup + t.bp0 * up
    return first, second


@dataclass(frozen=True)
class ProblemSpec:
    """Raw problem description; see the module docstring for the equations.

    ``q[i]`` holds polynomial coefficients of the potential on interval ``i``
    in powers of ``x - breakpoints[i]``, constant term first.
    """

    a: float
    b: float
    xi: tuple = ()
    rho: tuple = (1.0,)
    q: tuple = ((0.0,),)
    alpha: tuple = (1.0, 0.0, 0.0, 0.0)
    beta: tuple = (1.0, 0.0, 0.0, 0.0)
    trans: tuple = ()

    def __post_init__(self):
        # normalise nested sequences so the spec is hashable and immutable
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))
        object.__setattr__(self, "rho", tuple(float(v) for v in self.rho))
        object.__setattr__(self, "q", tuple(tuple(float(c) for c in p) for p in self.q))
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))
        object.__setattr__(self, "trans", tuple(self.trans))

    @property
    def r(self) -> int:
        return len(self.xi)


@dataclass(frozen=True, eq=False)
class ValidatedProblem:
    """A problem that passed :func:`validate`, with derived quantities cached.

    Immutable; safe to share between threads and processes.
    """

    spec: ProblemSpec
    strict: bool
    breakpoints: tuple
    lengths: tuple
    forward: tuple
    backward: tuple
    q_coeffs: tuple
    warnings: tuple = field(default=())

    @property
    def r(self):
        return self.spec.r

    @property
    def a(self):
        return self.spec.a

    @property
    def b(self):
        return self.spec.b

    @property
    def xi(self):
        return self.spec.xi

    @property
    def rho(self):
        return self.spec.rho

    @property
    def alpha(self):
        return self.spec.alpha

    @property
    def beta(self):
        return self.spec.beta

    @property
    def trans(self):
        return self.spec.trans

    @property
    def n_intervals(self):
        return self.spec.r + 1

    def q_at(self, i: int, x: float) -> float:
        """Potential on interval ``i`` evaluated at ``x``."""
        t = x - self.breakpoints[i]
        val = 0.0
        for c in reversed(self.spec.q[i]):
            val = val * t + c
        return val

    def q_bound(self) -> float:
        """Upper bound of ``|q|`` over the closure of every interval."""
        bound = 0.0
        for i, coeffs in enumerate(self.spec.q):
            ell = self.lengths[i]
            bound = max(bound, sum(abs(c) * ell**p for p, c in enumerate(coeffs)))
        return bound

    def total_phase_rate(self) -> float:
        """``sum_j l_j / rho_j``; the largest frequency of the characteristic function in ``s``."""
        return sum(ell / rho for ell, rho in zip(self.lengths, self.spec.rho))

    def interval_of(self, x: float, side: str | None = None) -> int:
        """Index of the interval containing ``x``.

        At an interior breakpoint ``side`` must be ``"left"`` (limit from the
        left, i.e. the interval ending there) or ``"right"``.
        """
        bp = self.breakpoints
        if not (bp[0] <= x <= bp[-1]):
            raise OutOfDomain(f"x={x!r} lies outside [{bp[0]}, {bp[-1]}]")
        for k in range(1, len(bp) - 1):
            if x == bp[k]:
                if side == "left":
                    return k - 1
                if side == "right":
                    return k
                raise OutOfDomain(
                    f"x={x!r} is the interface xi_{k}; pass side='left' or side='right'"
                )
        return int(np.searchsorted(bp, x, side="right") - 1) if x < bp[-1] else len(bp) - 2


def _validation_issues(spec: ProblemSpec, strict: bool):
    errors: list[tuple[type, str]] = []
    soft: list[str] = []
    r = spec.r

    if len(spec.rho) != r + 1:
        errors.append((ProblemShapeError, f"rho has {len(spec.rho)} entries, expected {r + 1}"))
    if len(spec.q) != r + 1:
        errors.append((ProblemShapeError, f"q has {len(spec.q)} pieces, expected {r + 1}"))
    if any(len(p) == 0 for p in spec.q):
        errors.append((ProblemShapeError, "every q piece needs at least one coefficient"))
    if len(spec.alpha) != 4 or len(spec.beta) != 4:
        errors.append((ProblemShapeError, "alpha and beta need exactly four entries each"))
    if len(spec.trans) != r:
        errors.append((ProblemShapeError, f"{len(spec.trans)} transmission records for {r} interior points"))

    values = [spec.a, spec.b, *spec.xi, *spec.rho, *spec.alpha, *spec.beta]
    values += [c for p in spec.q for c in p]
    values += [c for t in spec.trans for c in t.as_tuple()]
    if not all(math.isfinite(v) for v in values):
        errors.append((ProblemShapeError, "all coefficients must be finite"))

    points = (spec.a, *spec.xi, spec.b)
    for k in range(len(points) - 1):
        if not points[k] < points[k + 1]:
            name = "a" if k == 0 else f"xi_{k}"
            nxt = "b" if k + 1 == len(points) - 1 else f"xi_{k + 1}"
            errors.append(
                (NonMonotonePoints, f"need {name} < {nxt}, got {points[k]!r} >= {points[k + 1]!r}")
            )

    for i, rho in enumerate(spec.rho):
        if not rho > 0.0:
            errors.append((NonPositiveRho, f"rho_{i + 1} = {rho!r} must be positive"))

    if len(spec.alpha) == 4 and not any(spec.alpha):
        errors.append((VacuousBoundaryCondition, "alpha = (0, 0, 0, 0) leaves the left condition empty"))
    if len(spec.beta) == 4 and not any(spec.beta):
        errors.append((VacuousBoundaryCondition, "beta = (0, 0, 0, 0) leaves the right condition empty"))
    for name, coeffs in (("alpha", spec.alpha), ("beta", spec.beta)):
        if len(coeffs) != 4:
            continue
        c1, c2, c3, c4 = coeffs
        if c1 * c4 - c2 * c3 == 0.0 and (c3 or c4):
            soft.append(
                f"{name}_1 {name}_4 - {name}_2 {name}_3 = 0: the {name} condition is empty for one lambda, "
                "which is then an eigenvalue"
            )

    for i, t in enumerate(spec.trans):
        table = delta_table(t)
        for key in ((1, 2), (3, 4)):
            if table[key] == 0.0:
                errors.append(
                    (DegenerateTransmission, f"interface {i + 1}: Delta_{key[0]}{key[1]} = 0")
                )
        for (j, k), value in table.items():
            if value > 0.0 or ((j, k) in ((1, 2), (3, 4)) and value == 0.0):
                continue
            msg = f"interface {i + 1}: Delta_{j}{k} = {value:.6g} is not positive"
            if strict:
                errors.append((NonPositiveDelta, msg))
            else:
                soft.append(msg)
    return errors, soft


def validate(spec: ProblemSpec, strict: bool = False) -> ValidatedProblem:
    """Check every invariant of ``spec`` and return the validated wrapper.

    Parameters
    ----------
    spec : ProblemSpec
    strict : bool
        Require every ``Delta_jk > 0``. In lenient mode non-positive minors
        other than ``Delta_12`` and ``Delta_34`` only produce a
        :class:`ValidationWarning`; the solver needs just those two nonzero.

    Raises
    ------
    ValidationError
        The subclass matches the first issue found; ``.issues`` lists all.
    """
    errors, soft = _validation_issues(spec, strict)
    if errors:
        kind = errors[0][0]
        raise kind("; ".join(msg for _, msg in errors), issues=[msg for _, msg in errors])
    for msg in soft:
        warnings.warn(msg, ValidationWarning, stacklevel=2)

    breakpoints = (spec.a, *spec.xi, spec.b)
    lengths = tuple(breakpoints[i + 1] - breakpoints[i] for i in range(spec.r + 1))
    return ValidatedProblem(
        spec=spec,
        strict=strict,
        breakpoints=breakpoints,
        lengths=lengths,
        forward=tuple(forward_transfer(t) for t in spec.trans),
        backward=tuple(backward_transfer(t) for t in spec.trans),
        q_coeffs=tuple(np.asarray(p, dtype=np.float64) for p in spec.q),
        warnings=tuple(soft),
    )


def as_validated(problem) -> ValidatedProblem:
    if isinstance(problem, ValidatedProblem):
        return problem
    if isinstance(problem, ProblemSpec):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ValidationWarning)
            return validate(problem)
    raise TypeError(f"expected ProblemSpec or ValidatedProblem, got {type(problem).__name__}")


def _float_list(data, key, length=None):
    try:
        values = data[key]
    except KeyError:
        raise ParseError(f"missing key {key!r}") from None
    if not isinstance(values, list):
        raise ParseError(f"{key!r} must be an array")
    try:
        out = [float(v) for v in values]
    except (TypeError, ValueError):
        raise ParseError(f"{key!r} must contain numbers only") from None
    if length is not None and len(out) != length:
        raise ParseError(f"{key!r} must have {length} entries, got {len(out)}")
    return out


def problem_from_dict(data: dict) -> ProblemSpec:
    """Build a :class:`ProblemSpec` from the configuration mapping."""
    if not isinstance(data, dict):
        raise ParseError("problem document must be an object")
    try:
        a, b = float(data["a"]), float(data["b"])
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError):
        raise ParseError("'a' and 'b' must be numbers") from None
    xi = _float_list(data, "xi") if "xi" in data else []
    rho = _float_list(data, "rho")
    raw_q = data.get("q")
    if not isinstance(raw_q, list) or not all(isinstance(p, list) for p in raw_q):
        raise ParseError("'q' must be an array of coefficient arrays")
    try:
        q = [[float(c) for c in p] for p in raw_q]
    except (TypeError, ValueError):
        raise ParseError("'q' must contain numbers only") from None
    raw_t = data.get("transmission", [])
    if not isinstance(raw_t, list):
        raise ParseError("'transmission' must be an array")
    trans = []
    for i, rec in enumerate(raw_t):
        if not isinstance(rec, dict):
            raise ParseError(f"transmission[{i}] must be an object")
        try:
            trans.append(TransmissionCoefficients.from_mapping(rec))
        except (TypeError, ValueError):
            raise ParseError(f"transmission[{i}] must contain numbers only") from None
    return ProblemSpec(
        a=a,
        b=b,
        xi=xi,
        rho=rho,
        q=q,
        alpha=_float_list(data, "alpha", 4),
        beta=_float_list(data, "beta", 4),
        trans=trans,
    )


def problem_to_dict(spec: ProblemSpec) -> dict:
    return {
        "a": spec.a,
        "b": spec.b,
        "xi": list(spec.xi),
        "rho": list(spec.rho),
        "q": [list(p) for p in spec.q],
        "alpha": list(spec.alpha),
        "beta": list(spec.beta),
        "transmission": [
            {k: getattr(t, k) for k in _TRANSMISSION_KEYS} for t in spec.trans
        ],
    }


def load_problem(path) -> ProblemSpec:
    """Read a JSON problem file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return problem_from_dict(data)

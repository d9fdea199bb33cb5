"""Problem builders shared by the test modules."""

import json
import warnings
from pathlib import Path

import numpy as np

from sltrans.problem import TransmissionCoefficients, delta, problem_from_dict, validate

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

IDENTITY = dict(ap1=0.0, ap0=1.0, am1=0.0, am0=-1.0, bp1=-1.0, bp0=0.0, bm1=1.0, bm0=0.0)
POSITIVE = dict(ap1=1.0, ap0=1.0, am1=0.0, am0=-1.0, bp1=0.0, bp0=1.0, bm1=1.0, bm0=1.0)


def fixture_doc(name):
    return json.loads((FIXTURES / f"{name}.json").read_text())


def fixture_problem(name, strict=False):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return validate(problem_from_dict(fixture_doc(name)), strict=strict)


def lenient(spec):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return validate(spec)


def make_doc(xi=(), rho=None, q=None, alpha=(1, 0, 0, 0), beta=(1, 0, 0, 0), trans=None, a=0.0, b=1.0):
    r = len(xi)
    return dict(
        a=a,
        b=b,
        xi=list(xi),
        rho=list(rho or [1.0] * (r + 1)),
        q=[list(p) for p in (q or [[0.0]] * (r + 1))],
        alpha=list(alpha),
        beta=list(beta),
        transmission=[dict(t) for t in (trans if trans is not None else [IDENTITY] * r)],
    )


def make_problem(**kw):
    return lenient(problem_from_dict(make_doc(**kw)))


def random_transmission(rng, min_delta=0.1):
    while True:
        vals = rng.uniform(-2.0, 2.0, 8)
        t = TransmissionCoefficients(*vals)
        if abs(delta(t, 1, 2)) >= min_delta and abs(delta(t, 3, 4)) >= min_delta:
            return t


def random_doc(rng, q_zero=False, max_r=3):
    """Random valid problem document on ``[0, 1]``."""
    r = int(rng.integers(0, max_r + 1))
    xi = np.sort(rng.uniform(0.1, 0.9, r))
    while r and np.min(np.diff(np.concatenate([[0.0], xi, [1.0]]))) < 0.05:
        xi = np.sort(rng.uniform(0.1, 0.9, r))
    rho = rng.uniform(0.5, 2.0, r + 1)
    if q_zero:
        q = [[0.0]] * (r + 1)
    else:
        q = [list(rng.uniform(-2.0, 2.0, int(rng.integers(1, 4)))) for _ in range(r + 1)]
    alpha = rng.uniform(-2.0, 2.0, 4)
    beta = rng.uniform(-2.0, 2.0, 4)
    trans = [random_transmission(rng) for _ in range(r)]
    return make_doc(
        xi=list(xi),
        rho=list(rho),
        q=q,
        alpha=list(alpha),
        beta=list(beta),
        trans=[{k: getattr(t, k) for k in IDENTITY} for t in trans],
    )


def random_problem(rng, **kw):
    return lenient(problem_from_dict(random_doc(rng, **kw)))


def wronskian_spread(problem, lam, i, xs, phi, chi):
    """Spread of ``phi chi' - phi' chi`` over ``xs`` in interval ``i``.

    Measured against the size of the two products, which is the scale at
    which the difference is formed.
    """
    from sltrans.fundamental import evaluate

    values, scale = [], 0.0
    for x in xs:
        u, du = evaluate(phi, problem, float(x))
        v, dv = evaluate(chi, problem, float(x))
        values.append(u * dv - du * v)
        scale = max(scale, abs(u * dv) + abs(du * v))
    return (max(values) - min(values)) / scale if scale > 0.0 else 0.0


def interior_points(rng, problem, i, count):
    lo, hi = problem.breakpoints[i], problem.breakpoints[i + 1]
    return rng.uniform(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo), count)

import math

import numpy as np
import pytest

from helpers import (
    POSITIVE,
    fixture_doc,
    fixture_problem,
    interior_points,
    make_problem,
    random_problem,
    wronskian_spread,
)
from oracles import omega_exact
from sltrans.asymptotics import CaseTag, classify_case
from sltrans.characteristic import (
    envelope_magnitude,
    leading_term,
    omega,
    omega_boundary_form,
    omega_i,
    omega_normalized,
    omega_value,
    sample_grid,
    wronskian,
)
from sltrans.fundamental import build_chi, build_phi
from sltrans.integrator import IntegratorConfig
from sltrans.problem import delta


class TestClosedForms:
    def test_dirichlet_sine(self):
        p = make_problem()
        assert abs(omega_i(p, math.pi**2, 0)) < 1e-9
        assert omega_i(p, (math.pi / 2) ** 2, 0) == pytest.approx(2.0 / math.pi, abs=1e-9)

    def test_identity_interface_wronskians_equal(self):
        p = make_problem(xi=[0.5])
        sample = omega(p, 17.0)
        w1, w2 = sample.interval_wronskians
        assert w2 == pytest.approx(w1, rel=1e-10)
        assert sample.omega == w1

    def test_two_rho_proportional_to_trig_form(self):
        p = make_problem(xi=[0.5], rho=[1.0, 2.0])
        for s in (1.3, 2.9, 5.5, 10.1):
            trig = math.sin(0.5 * s) * math.cos(0.25 * s) + 2.0 * math.cos(0.5 * s) * math.sin(0.25 * s)
            # phi, chi are sin/s-type, so omega = trig / s
            assert omega_value(p, s * s) == pytest.approx(trig / s, abs=1e-9)

    @pytest.mark.parametrize("name", ["case_i", "case_iv", "two_rho", "classical_identity"])
    def test_against_exact_oracle(self, name):
        p, doc = fixture_problem(name), fixture_doc(name)
        for lam in (-5.0, 0.0, 3.3, 47.0, 810.0):
            ref = omega_exact(doc, lam)
            assert omega_value(p, lam) == pytest.approx(ref, rel=1e-7, abs=1e-9 * max(1.0, envelope_magnitude(p, lam)))


class TestConsistency:
    def test_fast_path_equals_full(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            p = random_problem(rng)
            lam = float(rng.uniform(-10.0, 200.0))
            full = omega(p, lam)
            assert omega_value(p, lam) == pytest.approx(full.omega, rel=1e-8, abs=1e-12)
            assert omega_normalized(p, lam) == pytest.approx(full.omega_normalized, rel=1e-8, abs=1e-12)

    def test_boundary_form_cross_check(self):
        rng = np.random.default_rng(32)
        for _ in range(50):
            p = random_problem(rng)
            lam = float(rng.uniform(-10.0, 200.0))
            phi, chi = build_phi(p, lam), build_chi(p, lam)
            w = omega_i(p, lam, 0, phi=phi, chi=chi)
            scale = max(abs(w), abs(envelope_magnitude(p, lam)), 1e-300)
            u, du = phi.at_b()
            v, dv = chi.at_b()
            ratio = np.prod([delta(t, 1, 2) / delta(t, 3, 4) for t in p.trans])
            scale = max(scale, abs(ratio) * (abs(u * dv) + abs(du * v)))
            assert abs(omega_boundary_form(p, lam, phi) - w) < 1e-8 * scale

    def test_tolerance_tiers_agree(self):
        rng = np.random.default_rng(33)
        loose = IntegratorConfig(rel_tol=1e-8, abs_tol=1e-10)
        for _ in range(30):
            p = random_problem(rng)
            lam = float(rng.uniform(-10.0, 200.0))
            phi, chi = build_phi(p, lam), build_chi(p, lam)
            u, du = phi.at_a()
            v, dv = chi.at_a()
            scale = abs(u * dv) + abs(du * v)
            assert abs(omega_value(p, lam, loose) - omega_value(p, lam)) < 1e-6 * scale

    def test_x_independence(self):
        rng = np.random.default_rng(34)
        for _ in range(20):
            p = random_problem(rng)
            lam = float(rng.uniform(-10.0, 200.0))
            phi, chi = build_phi(p, lam), build_chi(p, lam)
            for i in range(p.n_intervals):
                assert wronskian_spread(p, lam, i, interior_points(rng, p, i, 5), phi, chi) < 1e-8

    def test_ratio_recursion(self):
        rng = np.random.default_rng(35)
        for _ in range(20):
            p = random_problem(rng)
            lam = float(rng.uniform(-10.0, 200.0))
            ws = omega(p, lam).interval_wronskians
            for i, t in enumerate(p.trans):
                lhs, rhs = ws[i + 1] * delta(t, 1, 2), ws[i] * delta(t, 3, 4)
                assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), abs(rhs), 1e-300) + 1e-14

    def test_omega_i_index(self):
        with pytest.raises(IndexError):
            omega_i(make_problem(), 1.0, 1)

    def test_wronskian_helper(self):
        assert wronskian((1.0, 2.0), (3.0, 5.0)) == -1.0


class TestLeadingTerm:
    def test_case_i_single_interval(self):
        p = make_problem(alpha=(1, 0, 0, 1), beta=(1, 0, 0, 1))
        for s in (1.0, 2.5, 7.0):
            assert leading_term(p, s) == pytest.approx(-(s**5) * math.sin(s))
        assert leading_term(p, math.pi) == pytest.approx(0.0, abs=1e-10)

    def test_case_iv_cosine_zeros(self):
        p = make_problem(xi=[0.5], trans=[POSITIVE])
        assert classify_case(p) is CaseTag.IV
        for s in (math.pi, 3 * math.pi):
            assert abs(leading_term(p, s)) < 1e-9 * s**4

    def test_case_ii_cosine_zero(self):
        p = make_problem(xi=[0.5], rho=[1.0, 2.0], alpha=(1, 0, 0, 1), beta=(1, 0, 1, 0), trans=[POSITIVE])
        assert classify_case(p) is CaseTag.II
        s = 2.0 * math.pi  # cos(s * 0.5 / 2) = 0
        assert abs(leading_term(p, s)) < 1e-9 * s**5

    def test_r0_case_iv(self):
        p = make_problem(alpha=(1, 0, 2, 0), beta=(1, 0, 3, 0))
        assert leading_term(p, 2.0) == pytest.approx(-6.0 * 8.0 * math.sin(2.0))

    @pytest.mark.parametrize(
        "alpha, beta",
        [
            ((1, 0, 0, 1), (1, 0, 0, 1)),
            ((1, 0.5, 0, 1), (2, 0, 1, 0)),
            ((1, 0.5, 1, 0), (1, 0, 0, 0.5)),
            ((1, 0.5, 1, 0), (1, 0.3, 2, 0)),
        ],
        ids=["I", "II", "III", "IV"],
    )
    def test_ratio_approaches_constant(self, alpha, beta):
        # only the ratio's constancy is meaningful; its sign and size depend on
        # the transfer matrices, which the displayed products leave out
        p = make_problem(xi=[0.4], rho=[0.5, 0.7], alpha=alpha, beta=beta, trans=[POSITIVE])
        ratios = []
        for s in np.linspace(60.0, 70.0, 101):
            lt = leading_term(p, s)
            if abs(lt) > 0.5 * envelope_magnitude(p, s * s):
                ratios.append(omega_value(p, s * s) / lt)
        assert len(ratios) > 10
        assert np.ptp(ratios) < 0.1 * abs(np.median(ratios))

    def test_dirichlet_case_iv_term_vanishes(self):
        # a3 = b3 = 0 removes the displayed product entirely
        p = fixture_problem("case_iv")
        assert leading_term(p, 50.0) == 0.0
        assert envelope_magnitude(p, 2500.0) == 0.0

    def test_envelope_is_clamped_in_normalisation(self):
        p = make_problem()
        assert omega_normalized(p, 0.25) == pytest.approx(omega_value(p, 0.25))

    def test_sample_grid_shapes(self):
        raw, normalized = sample_grid(make_problem(), [1.0, 4.0, 9.0])
        assert raw.shape == normalized.shape == (3,)

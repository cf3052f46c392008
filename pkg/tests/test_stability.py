"""Jacobians, spectra, and the two-sided stability classification."""

import numpy as np
import pytest

from bivirusgame import (ModelParams, SimConfig, State, check_l1_l0_relation,
                         classify_line, classify_point, coexistence_lines,
                         eigenvalues, enumerate_isolated, integrate, jacobian,
                         l0_form_jacobian, vector_field)
from bivirusgame.scenarios import (coexistence_full_distancing,
                                   coexistence_no_distancing,
                                   partial_distancing_endemic,
                                   virus_extinction)
from bivirusgame.stability import _compare_line_jacobians

from conftest import interior_state, random_params

EXTINCTION = virus_extinction().params
ENDEMIC = partial_distancing_endemic().params
LINE0 = coexistence_no_distancing().params
LINE1 = coexistence_full_distancing().params


def finite_difference_jacobian(p, x, step=1e-6):
    """Central-difference oracle built on the public vector field."""
    base = x.as_array()
    out = np.empty((5, 5))
    for j in range(5):
        plus = base.copy()
        minus = base.copy()
        plus[j] += step
        minus[j] -= step
        fp = vector_field(p, State.from_iterable(plus)).as_array()
        fm = vector_field(p, State.from_iterable(minus)).as_array()
        out[:, j] = (fp - fm) / (2.0 * step)
    return out


class TestJacobian:
    def test_diagonal_at_disease_free_no_distancing(self):
        j = jacobian(EXTINCTION, State(0, 0, 0, 1, 1))
        expected = np.diag([0.8 * 0.1 - 0.2, 0.8 * 0.1 - 0.2, -0.4, -0.1, -0.1])
        np.testing.assert_allclose(j, expected, atol=1e-14)

    def test_diagonal_at_disease_free_full_distancing(self):
        j = jacobian(EXTINCTION, State(0, 0, 1, 1, 1))
        expected = np.diag([0.8 * 0.01 - 0.2, 0.8 * 0.01 - 0.2, 0.4, -0.1, -0.1])
        np.testing.assert_allclose(j, expected, atol=1e-14)

    def test_upper_triangular_at_unilateral_points(self):
        eqs = {e.kind: e for e in enumerate_isolated(ENDEMIC)}
        for kind in ("U10", "U11"):
            j = jacobian(ENDEMIC, eqs[kind].point)
            assert np.max(np.abs(np.tril(j, -1))) < 1e-14

    def test_displayed_entries_at_no_distancing_unilateral(self):
        p, q = ENDEMIC, ENDEMIC.q
        eqs = {e.kind: e for e in enumerate_isolated(p)}
        j = jacobian(p, eqs["U10"].point)
        y1 = 1.0 - p.delta1 / (q * p.beta1)
        assert j[0, 0] == pytest.approx(p.delta1 - p.beta1 * q)
        assert j[0, 1] == pytest.approx(p.delta1 - p.beta1 * q)
        assert j[0, 2] == pytest.approx(-p.delta1 * y1 * (1 - q))
        assert j[0, 3] == pytest.approx(-p.delta1 * y1 * (1 - q) / q)
        assert j[1, 1] == pytest.approx(p.beta2 * p.delta1 / p.beta1 - p.delta2)
        assert j[2, 2] == pytest.approx(2 * p.r1 * y1 - p.c_d)
        assert j[3, 3] == pytest.approx(-(p.c1 - p.c_d))
        assert j[4, 4] == pytest.approx(-(p.c2 - p.c_d))

    def test_displayed_entries_at_partial_distancing_point(self):
        p, q = ENDEMIC, ENDEMIC.q
        eqs = {e.kind: e for e in enumerate_isolated(p)}
        pt = eqs["U1S"].point
        j = jacobian(p, pt)
        y1 = p.c_d / (2 * p.r1)
        assert j[0, 0] == pytest.approx(-p.delta1 * y1 / (1 - y1))
        assert j[0, 2] == pytest.approx(-p.beta1 * y1 * (1 - y1) * (1 - q) * q)
        assert j[0, 3] == pytest.approx(-p.delta1 * y1 * (1 - q) / q)
        assert j[2, 0] == pytest.approx(pt.z_s * (1 - pt.z_s) * 2 * p.r1)
        assert j[2, 1] == pytest.approx(pt.z_s * (1 - pt.z_s) * 2 * p.r2)
        assert j[2, 2] == pytest.approx(0.0, abs=1e-15)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            p = random_params(rng)
            for _ in range(10):
                x = interior_state(rng)
                analytic = jacobian(p, x)
                fd = finite_difference_jacobian(p, x)
                np.testing.assert_allclose(
                    analytic, fd, rtol=1e-5,
                    atol=1e-5 * max(1.0, np.max(np.abs(analytic))))


class TestEigenvalues:
    def test_diagonal_matrix(self):
        m = np.diag([-0.12, -0.12, -0.4, -0.1, -0.1])
        np.testing.assert_allclose(eigenvalues(m).real,
                                   [-0.1, -0.1, -0.12, -0.12, -0.4])

    def test_triangular_spectrum_is_diagonal(self):
        eqs = {e.kind: e for e in enumerate_isolated(ENDEMIC)}
        j = jacobian(ENDEMIC, eqs["U10"].point)
        got = np.sort(eigenvalues(j).real)
        np.testing.assert_allclose(got, np.sort(np.diag(j)), atol=1e-12)

    def test_rank_one_block_inside_line_jacobian(self):
        # The infection block [a a; b b] contributes {0, a + b}.
        l0 = {l.kind: l for l in coexistence_lines(LINE0)}["L0"]
        x = l0.point_at(0.25)
        a = -LINE0.beta1 * x.y1 * LINE0.q
        b = -LINE0.beta2 * x.y2 * LINE0.q
        eig = eigenvalues(jacobian(LINE0, x))
        assert min(abs(v) for v in eig) < 1e-14
        assert any(abs(v - (a + b)) < 1e-12 for v in eig)

    def test_characteristic_polynomial_residual(self):
        rng = np.random.default_rng(47)
        for _ in range(50):
            m = rng.normal(size=(5, 5))
            coeffs = np.poly(m)
            scale = max(np.max(np.abs(m)), 1.0) ** 5
            for lam in eigenvalues(m):
                assert abs(np.polyval(coeffs, lam)) < 1e-8 * scale

    def test_nonfinite_matrix_rejected(self):
        m = np.zeros((5, 5))
        m[0, 0] = np.nan
        with pytest.raises(ValueError):
            eigenvalues(m)


class TestClassifyPoint:
    def test_disease_free_stable_case(self):
        eqs = {e.kind: e for e in enumerate_isolated(EXTINCTION)}
        rep = classify_point(EXTINCTION, eqs["DFE0"])
        np.testing.assert_allclose(
            sorted(v.real for v in rep.eigenvalues),
            sorted([-0.12, -0.12, -0.4, -0.1, -0.1]), atol=1e-14)
        assert rep.numeric_verdict == "stable"
        assert rep.closed_form_verdict == "stable"
        assert rep.agreement

    def test_full_distancing_disease_free_always_unstable(self):
        rng = np.random.default_rng(53)
        for _ in range(20):
            p = random_params(rng)
            eqs = {e.kind: e for e in enumerate_isolated(p)}
            rep = classify_point(p, eqs["DFE1"])
            assert rep.closed_form_verdict == "unstable"
            assert rep.numeric_verdict == "unstable"
            assert any(abs(v - p.c_d) < 1e-12 for v in rep.eigenvalues)

    def test_partial_distancing_stable_by_ratio_ordering(self):
        eqs = {e.kind: e for e in enumerate_isolated(ENDEMIC)}
        rep = classify_point(ENDEMIC, eqs["U1S"])
        assert rep.closed_form_verdict == "stable"  # 8.33 > 1.33
        assert rep.numeric_verdict == "stable"
        assert rep.agreement

    def test_nonexistent_point_rejected(self):
        eqs = {e.kind: e for e in enumerate_isolated(EXTINCTION)}
        with pytest.raises(ValueError):
            classify_point(EXTINCTION, eqs["U10"])

    def test_stated_cross_strain_clause_is_reported_not_trusted(self):
        # Both strains clear the bare q-threshold, yet strain 2 cannot
        # invade because its reproduction ratio is smaller: the point is
        # genuinely stable and the stated clause would misclassify it.
        p = ModelParams(beta1=1.0, beta2=1.0, delta1=0.05, delta2=0.08,
                        r1=0.1, r2=0.2, c1=0.5, c2=0.5, c_d=0.15, q=0.1)
        eqs = {e.kind: e for e in enumerate_isolated(p)}
        rep = classify_point(p, eqs["U10"])
        assert rep.numeric_verdict == "stable"
        stated = {c.label: c for c in rep.conditions if c.label.startswith("stated:")}
        assert stated["stated: delta2 < q*beta2"].holds
        assert rep.closed_form_verdict != "unstable"
        assert "ordering" in rep.notes

    def test_full_distancing_point_contradictory_cost_clause_noted(self):
        # Whenever the stability chain holds, the stated cost clause with
        # the lower power of q holds too; the note flags the clash.
        p = ModelParams(beta1=2.0, beta2=0.5, delta1=0.2, delta2=0.9,
                        r1=0.3, r2=0.5, c1=0.8, c2=0.8, c_d=0.2, q=0.8)
        eqs = {e.kind: e for e in enumerate_isolated(p)}
        rep = classify_point(p, eqs["U11"])
        assert rep.closed_form_verdict == "stable"
        assert rep.numeric_verdict == "stable"
        assert "contradict" in rep.notes

    def test_agreement_on_random_parameters(self):
        rng = np.random.default_rng(59)
        checked = 0
        for _ in range(40):
            p = random_params(rng)
            for e in enumerate_isolated(p):
                if not e.exists:
                    continue
                rep = classify_point(p, e)
                assert rep.agreement, (e.kind, p)
                checked += 1
        assert checked > 100


class TestClassifyLine:
    def test_no_distancing_line_stable_case(self):
        # level 7/12 sits below c_d/(2 r1) = 2 and c_d/(2 r2) = 10
        l0 = {l.kind: l for l in coexistence_lines(LINE0)}["L0"]
        rep = classify_line(LINE0, l0)
        assert rep.closed_form_verdict == "stable"
        assert rep.numeric_verdict == "stable"
        assert rep.zero_modes == 1
        margins = {c.label: c.margin for c in rep.conditions}
        assert margins["stable: 1 - 1/(q*R0) < c_d/(2*r1)"] == pytest.approx(2 - 7 / 12)
        assert margins["stable: 1 - 1/(q*R0) < c_d/(2*r2)"] == pytest.approx(10 - 7 / 12)

    def test_full_distancing_line_stable_case(self):
        l1 = {l.kind: l for l in coexistence_lines(LINE1)}["L1"]
        rep = classify_line(LINE1, l1)
        assert rep.closed_form_verdict == "stable"
        assert rep.numeric_verdict == "stable"
        # 1 - 1/(q^2 R0) = 23/48 > c_d/(2 r_i) = 0.125
        margins = {c.label: c.margin for c in rep.conditions}
        assert margins["stable: 1 - 1/(q^2*R0) > c_d/(2*r1)"] == pytest.approx(23 / 48 - 0.125)

    def test_lines_never_both_stable(self):
        rng = np.random.default_rng(61)
        for _ in range(50):
            p = random_params(rng, equal_r0=True)
            lines = {l.kind: l for l in coexistence_lines(p)}
            if not (lines["L0"].exists and lines["L1"].exists):
                continue
            verdicts = {k: classify_line(p, lines[k]).closed_form_verdict
                        for k in ("L0", "L1")}
            assert not (verdicts["L0"] == "stable" and verdicts["L1"] == "stable")

    def test_mixed_line_is_numeric_only(self):
        p = LINE0.replace(r1=0.4, r2=0.8, c_d=0.4, c1=3.0, c2=3.0)
        ls = {l.kind: l for l in coexistence_lines(p)}["LS"]
        rep = classify_line(p, ls)
        assert rep.closed_form_verdict == "inconclusive"
        assert "numeric-only" in rep.notes
        assert rep.numeric_verdict in ("stable", "unstable", "marginal")
        assert rep.agreement

    def test_null_direction_along_constant_distancing_lines(self):
        for p in (LINE0, LINE1):
            for line in coexistence_lines(p):
                if not line.exists or line.kind == "LS":
                    continue
                direction = np.array([1.0, -1.0, 0.0, 0.0, 0.0])
                for x in line.sample(7):
                    residual = jacobian(p, x) @ direction
                    assert np.max(np.abs(residual)) < 1e-10


class TestLineJacobianRelation:
    def test_simplified_form_matches_analytic_on_line(self):
        l0 = {l.kind: l for l in coexistence_lines(LINE0)}["L0"]
        for x in l0.sample(9):
            analytic = jacobian(LINE0, x)
            simplified = l0_form_jacobian(LINE0, x.y1, x.y2)
            np.testing.assert_allclose(analytic, simplified, rtol=1e-10,
                                       atol=1e-14)

    def test_relation_holds_on_spectral_blocks(self):
        check = check_l1_l0_relation(LINE0, samples=10)
        assert bool(check)
        assert check.max_spectral_rel_error < 1e-12

    def test_relation_fails_on_two_coupling_entries_by_factor_q(self):
        # The stated diagonal scaling over-multiplies the two z_s coupling
        # entries by q; everything else matches.
        check = check_l1_l0_relation(LINE0, samples=10)
        assert not check.holds_entrywise
        assert check.mismatched_entries == ((0, 2), (1, 2))
        level1 = 1.0 - 1.0 / (LINE0.q ** 2 * 3.0)
        y1 = 0.5 * level1
        actual = jacobian(LINE0, State(y1, level1 - y1, 1.0, 1.0, 1.0))
        predicted = np.diag([LINE0.q, LINE0.q, -1.0, 1.0, 1.0]) @ \
            l0_form_jacobian(LINE0, y1, level1 - y1)
        assert predicted[0, 2] / actual[0, 2] == pytest.approx(LINE0.q)

    def test_perturbed_matrix_fails_spectral_comparison(self):
        level1 = 1.0 - 1.0 / (LINE0.q ** 2 * 3.0)
        y1 = 0.5 * level1
        actual = jacobian(LINE0, State(y1, level1 - y1, 1.0, 1.0, 1.0))
        predicted = np.diag([LINE0.q, LINE0.q, -1.0, 1.0, 1.0]) @ \
            l0_form_jacobian(LINE0, y1, level1 - y1)
        predicted[0, 0] += 1e-3
        ok, _, _ = _compare_line_jacobians(actual, predicted, rtol=1e-12)
        assert not ok

    def test_requires_matching_ratios(self):
        with pytest.raises(ValueError):
            check_l1_l0_relation(ENDEMIC)


class TestDynamicalInstability:
    def test_full_distancing_disease_free_repels(self):
        # Nudge z_s off 1 by 1e-6: the gap must grow by 10x within the
        # linear-growth window (rate c_d).
        p = EXTINCTION
        eps = 1e-6
        window = np.log(10.0) / p.c_d * 1.2
        x0 = State(0.0, 0.0, 1.0 - eps, 1.0, 1.0)
        traj = integrate(p, x0, SimConfig(t_max=window, conv_eps=0.0,
                                          record_every=100))
        gap = 1.0 - traj.final_state.z_s
        assert gap >= 10.0 * eps

"""Closed-form fixed points: values, existence conditions, residuals."""

import numpy as np
import pytest

from bivirusgame import (DegenerateRiskRatioError, LineRangeError, State,
                         coexistence_lines, distance_to_line,
                         distance_to_point, enumerate_isolated, point_on_line,
                         reproduction_numbers, scan_fixed_points,
                         vector_field_norm)
from bivirusgame.scenarios import (coexistence_full_distancing,
                                   coexistence_no_distancing,
                                   partial_distancing_endemic,
                                   virus_extinction)

from conftest import nearest_enumerated_distance, random_params

EXTINCTION = virus_extinction().params
ENDEMIC = partial_distancing_endemic().params
LINE0 = coexistence_no_distancing().params
LINE1 = coexistence_full_distancing().params


class TestReproductionNumbers:
    def test_equal_ratios(self):
        rn = reproduction_numbers(LINE0)
        assert rn.rho1 == pytest.approx(3.0) and rn.rho2 == pytest.approx(3.0)
        assert rn.equal

    def test_unequal_ratios(self):
        rn = reproduction_numbers(ENDEMIC)
        assert rn.rho1 == pytest.approx(0.5 / 0.06)
        assert rn.rho2 == pytest.approx(0.4 / 0.3)
        assert not rn.equal

    def test_proportional_rates(self):
        p = EXTINCTION.replace(beta1=1.0, beta2=2.0, delta1=0.5, delta2=1.0)
        rn = reproduction_numbers(p)
        assert rn.equal and rn.rho1 == pytest.approx(2.0)


class TestEnumerateIsolated:
    def test_disease_free_points_always_exist(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            eqs = {e.kind: e for e in enumerate_isolated(random_params(rng))}
            assert eqs["DFE0"].exists and eqs["DFE0"].point == State(0, 0, 0, 1, 1)
            assert eqs["DFE1"].exists and eqs["DFE1"].point == State(0, 0, 1, 1, 1)

    def test_partial_distancing_point_closed_form(self):
        eqs = {e.kind: e for e in enumerate_isolated(ENDEMIC)}
        u1s = eqs["U1S"]
        assert u1s.exists
        assert u1s.point.y1 == pytest.approx(0.5, abs=1e-15)
        assert u1s.point.y2 == 0.0
        assert u1s.point.z_s == pytest.approx(2.0 / 3.0, abs=1e-12)
        # condition chain: q (1 - 0.5) = 0.2 < 0.3 < 0.5
        margins = {c.label: c.margin for c in u1s.existence_conditions}
        assert margins["q*(1 - c_d/(2*r1)) < delta1/(q*beta1)"] == pytest.approx(0.1)
        assert margins["delta1/(q*beta1) < 1 - c_d/(2*r1)"] == pytest.approx(0.2)

    def test_strong_isolation_kills_unilateral_points(self):
        eqs = {e.kind: e for e in enumerate_isolated(EXTINCTION)}
        u10 = eqs["U10"]
        assert not u10.exists and u10.point is None
        # delta/(q beta) = 2.5, margin 1 - 2.5 = -1.5
        assert u10.existence_conditions[0].margin == pytest.approx(-1.5)

    def test_no_distancing_point_level(self):
        p = ENDEMIC  # beta1=0.5, delta1=0.06, q=0.4
        eqs = {e.kind: e for e in enumerate_isolated(p)}
        assert eqs["U10"].exists
        assert eqs["U10"].point.y1 == pytest.approx(0.7)
        assert eqs["U10"].point.z_s == 0.0

    def test_full_distancing_point_uses_squared_reduction(self):
        eqs = {e.kind: e for e in enumerate_isolated(ENDEMIC)}
        assert eqs["U11"].exists
        assert eqs["U11"].point.y1 == pytest.approx(1.0 - 0.06 / (0.16 * 0.5))
        assert eqs["U11"].point.z_s == 1.0

    def test_exists_iff_all_conditions_hold(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            for e in enumerate_isolated(random_params(rng)):
                assert e.exists == all(c.holds for c in e.existence_conditions)

    def test_existing_points_have_zero_residual(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            p = random_params(rng)
            for e in enumerate_isolated(p):
                if e.exists:
                    assert vector_field_norm(p, e.point) < 1e-10


class TestCoexistenceLines:
    def test_no_distancing_line_level(self):
        lines = {l.kind: l for l in coexistence_lines(LINE0)}
        l0 = lines["L0"]
        assert l0.exists and l0.r0_equal
        assert l0.param_range[1] == pytest.approx(7.0 / 12.0, abs=1e-15)

    def test_full_distancing_line_level(self):
        lines = {l.kind: l for l in coexistence_lines(LINE1)}
        l1 = lines["L1"]
        assert l1.exists
        assert l1.param_range[1] == pytest.approx(23.0 / 48.0, abs=1e-15)

    def test_mixed_line_bounds(self):
        p = LINE0.replace(r1=0.4, r2=0.8, c_d=0.4, c1=3.0, c2=3.0)
        lines = {l.kind: l for l in coexistence_lines(p)}
        ls = lines["LS"]
        assert ls.exists
        lo, hi = ls.param_range
        assert lo == pytest.approx((1.0 - 0.25 - 1.0 / 1.92) / 0.5, abs=1e-12)
        assert hi == pytest.approx(0.5, abs=1e-15)

    def test_ratio_mismatch_blocks_all_lines(self):
        lines = coexistence_lines(ENDEMIC)
        assert all(not l.exists for l in lines)
        for l in lines:
            match = l.existence_conditions[0]
            assert "R0 match" in match.label and not match.holds

    def test_degenerate_risk_ratio_flagged(self):
        lines = {l.kind: l for l in coexistence_lines(LINE1)}  # r1 == r2
        ls = lines["LS"]
        assert ls.degenerate and not ls.exists
        with pytest.raises(DegenerateRiskRatioError):
            ls.point_at(0.1)

    def test_line_endpoints(self):
        l0 = {l.kind: l for l in coexistence_lines(LINE0)}["L0"]
        level = l0.param_range[1]
        a = point_on_line(l0, 0.0)
        assert (a.y1, a.y2, a.z_s, a.z1, a.z2) == (0.0, level, 0.0, 1.0, 1.0)
        b = point_on_line(l0, level)
        assert (b.y1, b.y2) == (level, 0.0)

    def test_out_of_range_parameter_rejected(self):
        l0 = {l.kind: l for l in coexistence_lines(LINE0)}["L0"]
        with pytest.raises(LineRangeError) as exc:
            point_on_line(l0, 0.7)
        assert exc.value.bounds[1] == pytest.approx(7.0 / 12.0)

    def test_mixed_line_point_and_residual(self):
        p = LINE0.replace(r1=0.4, r2=0.8, c_d=0.4, c1=3.0, c2=3.0)
        ls = {l.kind: l for l in coexistence_lines(p)}["LS"]
        x = ls.point_at(0.48)
        assert x.y2 == pytest.approx(0.25 - 0.5 * 0.48, abs=1e-15)
        assert 0.0 < x.z_s < 1.0
        assert vector_field_norm(p, x) < 1e-10

    def test_mixed_line_balances_payoff_risk(self):
        # every sampled point keeps 2 (r1 y1 + r2 y2) = c_d
        p = LINE0.replace(r1=0.4, r2=0.8, c_d=0.4, c1=3.0, c2=3.0)
        ls = {l.kind: l for l in coexistence_lines(p)}["LS"]
        for x in ls.sample(11):
            assert 2.0 * (p.r1 * x.y1 + p.r2 * x.y2) == pytest.approx(p.c_d, abs=1e-12)

    def test_sampled_line_points_have_zero_residual(self):
        rng = np.random.default_rng(37)
        count = 0
        for _ in range(30):
            p = random_params(rng, equal_r0=True)
            for line in coexistence_lines(p):
                if line.exists:
                    count += 1
                    for x in line.sample(11):
                        assert vector_field_norm(p, x) < 1e-10
        assert count > 10  # the draw ranges make lines reasonably common


class TestDistances:
    def test_point_distance_is_zero_at_the_point(self):
        eqs = {e.kind: e for e in enumerate_isolated(ENDEMIC)}
        assert distance_to_point(eqs["U1S"], eqs["U1S"].point) == 0.0

    def test_line_distance_vanishes_on_line(self):
        l0 = {l.kind: l for l in coexistence_lines(LINE0)}["L0"]
        x = l0.point_at(0.3)
        assert distance_to_line(l0, x) < 1e-12

    def test_line_distance_off_line(self):
        l0 = {l.kind: l for l in coexistence_lines(LINE0)}["L0"]
        x = State(0.3, 0.3, 0.2, 1.0, 1.0)
        d = distance_to_line(l0, x)
        assert d == pytest.approx(0.2, abs=1e-6)  # dominated by z_s offset


class TestScanOracle:
    def test_scan_matches_enumeration_on_sample_sets(self):
        # Small version of the exhaustiveness gate (the acceptance suite
        # runs 20 parameter sets): every root the dense scan finds lies on
        # the enumerated set.
        rng = np.random.default_rng(41)
        sets = [random_params(rng), random_params(rng, equal_r0=True), LINE0]
        for p in sets:
            roots = scan_fixed_points(p, grid=13, iters=60)
            assert len(roots) > 0
            d = nearest_enumerated_distance(p, roots)
            assert d.max() < 1e-6

    def test_scan_reaches_every_existing_point(self):
        for p in (EXTINCTION, ENDEMIC):
            roots = scan_fixed_points(p, grid=13, iters=60)
            for e in enumerate_isolated(p):
                if e.exists:
                    pt = np.array([e.point.y1, e.point.y2, e.point.z_s])
                    assert np.min(np.max(np.abs(roots - pt), axis=1)) < 1e-9

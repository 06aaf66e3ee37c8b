import math

import numpy as np
import pytest

from hyperslice.certificates import (
    CLAIM_THRESHOLDS,
    _claim_polys,
    certify_signs_rigorous,
    default_y_grid,
    quad_coeffs,
    quad_roots,
    sign_certificates,
)
from hyperslice.errors import InvalidInputError
from hyperslice.intervals import Interval, horner

from conftest import rng_for


class TestQuadCoeffs:
    def test_hand_value_d6(self):
        c = quad_coeffs(6, 0.5)
        assert c.c2 == pytest.approx(-0.71875, abs=1e-15)

    def test_direct_formula_agreement(self):
        rng = rng_for(3)
        for _ in range(60):
            d = int(rng.integers(3, 25))
            y = float(rng.uniform(1e-3, 1 - 1e-3))
            c = quad_coeffs(d, y)
            assert c.c2 == pytest.approx(
                2 - 2 * y ** (d - 1) - (d - 1) * (1 - y) * (1 + y ** (d - 2)),
                rel=1e-9, abs=1e-12,
            )
            assert c.c1 == pytest.approx(
                (d - 1) * (1 - y) ** 2 * (1 - y ** (d - 2)), rel=1e-9, abs=1e-12
            )
            assert c.c0 == pytest.approx(
                -2 * (1 - y) ** 2 * (1 - y ** (d - 1)), rel=1e-9, abs=1e-12
            )

    def test_limits_at_one(self):
        for d in (4, 6, 9):
            for s in (1e-3, 1e-5, 1e-7):
                c = quad_coeffs(d, 1.0 - s)
                assert abs(c.c2) < 1e-5
                assert abs(c.c1) < 1e-5
                assert abs(c.c0) < 1e-5

    def test_middle_coefficient_signs(self):
        rng = rng_for(5)
        for _ in range(40):
            d = int(rng.integers(3, 30))
            y = float(rng.uniform(1e-4, 1 - 1e-4))
            c = quad_coeffs(d, y)
            assert c.c1 > 0.0
            assert c.c0 < 0.0

    def test_domain_errors(self):
        with pytest.raises(InvalidInputError):
            quad_coeffs(6, 0.0)
        with pytest.raises(InvalidInputError):
            quad_coeffs(6, 1.0)
        with pytest.raises(InvalidInputError):
            quad_coeffs(1, 0.5)


class TestQuadRoots:
    def test_d5_known_roots(self):
        roots = quad_roots(quad_coeffs(5, 0.5))
        assert roots == pytest.approx([5 / 6, 1.5], abs=1e-12)

    def test_d5_roots_across_grid(self):
        for y in np.linspace(0.001, 0.999, 1000):
            roots = quad_roots(quad_coeffs(5, float(y)))
            expect = sorted([(y * y + 1) / (y + 1), y + 1])
            assert roots == pytest.approx(expect, abs=1e-10)

    def test_d6_no_root_beyond_one(self):
        roots = quad_roots(quad_coeffs(6, 0.5))
        assert all(r < 1.0 for r in roots)

    def test_real_roots_straddle_vertex(self):
        rng = rng_for(11)
        found = 0
        for _ in range(200):
            d = int(rng.integers(4, 12))
            y = float(rng.uniform(0.01, 0.99))
            c = quad_coeffs(d, y)
            roots = quad_roots(c)
            if len(roots) == 2 and c.c2 < 0:
                vertex = -c.c1 / (2 * c.c2)
                assert roots[0] <= vertex <= roots[1]
                assert vertex > 0
                found += 1
        assert found > 20

    def test_degenerate_error(self):
        from hyperslice.certificates import QuadCoeffs

        with pytest.raises(InvalidInputError):
            quad_roots(QuadCoeffs(5, 0.5, 0.0, 0.0, 0.0))


class TestSignCertificates:
    def test_d6_all_negative(self):
        rep = sign_certificates(6, default_y_grid())
        assert rep.max_lead_coeff < 0
        assert rep.max_slope_at_one < 0
        assert rep.max_value_at_one < 0
        assert rep.roots_excluded

    def test_d4_lead_coeff_only(self):
        rep = sign_certificates(4, default_y_grid())
        assert rep.max_lead_coeff < 0
        assert rep.max_slope_at_one > 0  # claimed only from d = 6 on
        assert not rep.roots_excluded

    def test_d3_degenerate_lead_coeff(self):
        # the x^2 coefficient vanishes identically in dimension 3
        rep = sign_certificates(3, default_y_grid(500))
        assert rep.max_lead_coeff == pytest.approx(0.0, abs=1e-15)
        assert not rep.roots_excluded

    def test_margins_shrink_toward_one(self):
        for name_idx, d in ((0, 6), (0, 15)):
            vals = [sign_certificates(d, [1 - s]).max_lead_coeff
                    for s in (1e-2, 1e-4, 1e-6)]
            assert all(v < 0 for v in vals)
            assert vals[0] < vals[1] < vals[2]

    def test_empty_grid_rejected(self):
        with pytest.raises(InvalidInputError):
            sign_certificates(6, [])
        with pytest.raises(InvalidInputError):
            sign_certificates(6, [0.0, 0.5])

    def test_grid_matches_pointwise_coeffs(self):
        # vectorized grid values agree with scalar coefficient combinations
        grid = np.linspace(0.05, 0.95, 19)
        rep = sign_certificates(8, grid)
        best = {"lead": -math.inf, "slope": -math.inf, "value": -math.inf}
        for y in grid:
            c = quad_coeffs(8, float(y))
            best["lead"] = max(best["lead"], c.c2)
            best["slope"] = max(best["slope"], 2 * c.c2 + c.c1)
            best["value"] = max(best["value"], c.c2 + c.c1 + c.c0)
        assert rep.max_lead_coeff == pytest.approx(best["lead"], rel=1e-9)
        assert rep.max_slope_at_one == pytest.approx(best["slope"], rel=1e-9)
        assert rep.max_value_at_one == pytest.approx(best["value"], rel=1e-9)


class TestRigorousCertification:
    @pytest.mark.parametrize("d", range(6, 13))
    def test_certifies_claimed_dimensions(self, d):
        assert all(certify_signs_rigorous(d).values())

    def test_d5_exceptional_branch_not_certified(self):
        out = certify_signs_rigorous(5)
        assert out["lead_coeff"]
        assert not out["slope_at_one"]
        assert not out["value_at_one"]

    def test_claim_thresholds_cover_examples(self):
        assert CLAIM_THRESHOLDS == {
            "lead_coeff": 4, "slope_at_one": 6, "value_at_one": 6
        }

    def test_interval_enclosures_contain_exact_values(self):
        rng = rng_for(13)
        poly = _claim_polys(9)["value_at_one"]
        icoeffs = [Interval.from_int(c) for c in poly]
        for _ in range(50):
            lo = float(rng.uniform(0, 0.9))
            hi = lo + float(rng.uniform(0, 0.1))
            box = Interval(lo, hi)
            enclosure = horner(icoeffs, box)
            for s in np.linspace(lo, hi, 7):
                exact = float(
                    sum(c * s**k for k, c in enumerate(poly))
                )
                assert enclosure.lo - 1e-12 <= exact <= enclosure.hi + 1e-12


class TestIntervals:
    def test_outward_rounding(self):
        x = Interval.exact(0.1) + Interval.exact(0.2)
        assert x.lo < 0.1 + 0.2 < x.hi or (x.lo <= 0.30000000000000004 <= x.hi)
        assert x.width > 0

    def test_multiplication_soundness(self):
        rng = rng_for(17)
        for _ in range(100):
            a = sorted(rng.uniform(-3, 3, size=2))
            b = sorted(rng.uniform(-3, 3, size=2))
            x = Interval(float(a[0]), float(a[1]))
            y = Interval(float(b[0]), float(b[1]))
            prod = x * y
            for u in np.linspace(x.lo, x.hi, 5):
                for v in np.linspace(y.lo, y.hi, 5):
                    assert prod.lo <= u * v <= prod.hi

    def test_invalid_interval(self):
        with pytest.raises(ValueError):
            Interval(2.0, 1.0)

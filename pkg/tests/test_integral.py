import math

import numpy as np
import pytest

from hyperslice.errors import ConvergenceError, NonintegrableTailError
from hyperslice.geometry import diagonal_section_spec, make_section_spec
from hyperslice.integral import (
    _tail_closed_form,
    adaptive_panel_integral,
    make_quadrature_config,
    section_volume_integral,
    sinc_product_integrand,
    tail_bound,
    tail_bound_sharp,
)
from hyperslice.vertexsum import section_volume_vertex_sum

from conftest import rng_for, random_unit_direction


class TestIntegrand:
    def test_value_at_zero(self):
        assert sinc_product_integrand([0.3, 0.7], 1.2, 0.0) == 1.0

    def test_sinc_zero(self):
        a = np.full(2, 1 / math.sqrt(2))
        u = math.pi * math.sqrt(2)
        assert sinc_product_integrand(a, 0.0, u) == pytest.approx(0.0, abs=1e-16)

    def test_envelope_bound(self):
        rng = rng_for(2)
        for _ in range(10):
            d = int(rng.integers(2, 8))
            a = random_unit_direction(rng, d)
            spec = make_section_spec(a, float(rng.uniform(0, 0.6)))
            cfg = make_quadrature_config(spec)
            omega = 2 * spec.radius
            u = np.concatenate([np.linspace(1e-3, 50, 4001), np.linspace(50, 5000, 997)])
            vals = np.abs(sinc_product_integrand(spec.direction, omega, u))
            envelope = np.minimum(1.0, 1.0 / (cfg.m2 * u * u))
            assert np.all(vals <= envelope * (1 + 1e-12) + 1e-15)

    def test_even_in_u(self):
        a = [0.5, 0.6, 0.3]
        u = np.linspace(0.1, 20, 57)
        assert np.array_equal(
            sinc_product_integrand(a, 0.7, u), sinc_product_integrand(a, 0.7, -u)
        )


class TestTailBounds:
    def test_closed_form_value(self):
        spec = make_section_spec([0.5, 0.5, math.sqrt(0.5)], 0.1)
        cfg = make_quadrature_config(spec)
        assert cfg.m2 == pytest.approx(0.25)
        assert tail_bound(cfg, 1e6) == pytest.approx(2 / (math.pi * 0.25 * 1e6), rel=1e-12)
        assert tail_bound(cfg, 1e6) == pytest.approx(2.546e-6, rel=1e-3)

    def test_monotone_and_vanishing(self):
        spec = make_section_spec([1, 1, 1, 1], 0.3)
        cfg = make_quadrature_config(spec)
        ns = np.logspace(1, 9, 30)
        vals = [tail_bound(cfg, float(n)) for n in ns]
        assert all(x > y for x, y in zip(vals, vals[1:]))
        assert vals[-1] < 1e-8
        sharp = [tail_bound_sharp(cfg, float(n)) for n in ns]
        assert all(x > y for x, y in zip(sharp, sharp[1:]))

    def test_discarded_tail_within_bound(self):
        # actually integrate the tail and compare against the bound
        spec = diagonal_section_spec(5, 1.0)
        cfg = make_quadrature_config(spec)
        omega = 2 * spec.radius
        for n0 in (50.0, 200.0):
            val, err = _tail_closed_form(np.sort(spec.direction), omega, n0)
            assert abs(2 / math.pi * val) <= tail_bound(cfg, n0)
            assert abs(2 / math.pi * val) <= tail_bound_sharp(cfg, n0)


class TestClosedFormTail:
    def test_matches_panel_integration(self):
        # the difference of two closed-form tails is a finite-window integral
        # that panel quadrature can check directly
        rng = rng_for(17)
        for _ in range(8):
            d = int(rng.integers(2, 7))
            a = np.sort(random_unit_direction(rng, d))
            omega = float(rng.uniform(0.0, 2.5))
            n0 = float(rng.uniform(30.0, 120.0))
            far = n0 + float(rng.uniform(200.0, 600.0))

            def f(u):
                return sinc_product_integrand(a, omega, u)

            near_val, _ = _tail_closed_form(a, omega, n0)
            far_val, _ = _tail_closed_form(a, omega, far)
            brute, _, _ = adaptive_panel_integral(
                f, n0, far, 1e-13, max_panels=400_000,
                max_width=math.pi / (float(a[-1]) + omega + 1e-9),
            )
            assert near_val - far_val == pytest.approx(brute, abs=2e-12)


class TestSectionVolumeIntegral:
    def test_square_diagonal_length(self):
        res = section_volume_integral(make_section_spec([1, 1], 0.0))
        assert res.value == pytest.approx(math.sqrt(2), abs=1e-9)

    def test_square_chord_length(self):
        res = section_volume_integral(make_section_spec([1, 1], 0.2))
        assert res.value == pytest.approx(math.sqrt(2) - 0.4, abs=1e-9)

    def test_matches_vertex_sum_on_diagonal_d5(self):
        spec = diagonal_section_spec(5, 1.0)
        res = section_volume_integral(spec)
        assert res.value == pytest.approx(
            section_volume_vertex_sum(spec).value, abs=1e-9
        )

    def test_cross_method_random_specs(self):
        rng = rng_for(23)
        for d in range(3, 9):
            for _ in range(4):
                a = random_unit_direction(rng, d)
                t = float(rng.uniform(0.0, 1.0)) * float(np.sum(a)) / 2
                spec = make_section_spec(a, t)
                vs = section_volume_vertex_sum(spec)
                cfg = make_quadrature_config(spec, abs_tol=1e-8)
                res = section_volume_integral(spec, cfg)
                assert abs(res.value - vs.value) <= cfg.abs_tol + vs.err

    def test_needs_two_positive_coordinates(self):
        with pytest.raises(NonintegrableTailError):
            section_volume_integral(make_section_spec([1, 0, 0], 0.2))

    def test_convergence_error_on_tiny_budget(self):
        spec = diagonal_section_spec(4, 0.2)
        cfg = make_quadrature_config(spec, abs_tol=1e-9, max_panels=4)
        with pytest.raises(ConvergenceError):
            section_volume_integral(spec, cfg)

    def test_err_field_is_honest(self):
        rng = rng_for(29)
        for _ in range(10):
            d = int(rng.integers(3, 7))
            a = random_unit_direction(rng, d)
            t = float(rng.uniform(0.0, 0.9)) * float(np.sum(a)) / 2
            spec = make_section_spec(a, t)
            vs = section_volume_vertex_sum(spec)
            res = section_volume_integral(spec)
            assert abs(res.value - vs.value) <= res.err + vs.err + 1e-12


class TestAdaptivePanels:
    def test_evenness_of_integration(self):
        a = [0.4, 0.5, 0.6]

        def f(u):
            return sinc_product_integrand(a, 0.8, u)

        left, _, _ = adaptive_panel_integral(f, -40.0, 0.0, 1e-10, max_width=0.5)
        right, _, _ = adaptive_panel_integral(f, 0.0, 40.0, 1e-10, max_width=0.5)
        assert left == pytest.approx(right, rel=1e-12, abs=1e-13)

    def test_refinement_does_not_increase_error(self):
        # above the rounding floor, halving the panel width shrinks the
        # G15-vs-G7 discrepancy on every panel
        a = [0.45, 0.55, 0.7]

        def f(u):
            return sinc_product_integrand(a, 1.1, u)

        errs = []
        for width in (2.0, 1.0, 0.5, 0.25):
            _, err, _ = adaptive_panel_integral(f, 0.0, 64.0, math.inf, max_width=width)
            errs.append(err)
        assert all(x >= y for x, y in zip(errs, errs[1:]))

    def test_known_integral(self):
        val, err, _ = adaptive_panel_integral(np.cos, 0.0, 1.0, 1e-12, max_width=0.3)
        assert val == pytest.approx(math.sin(1.0), abs=1e-13)

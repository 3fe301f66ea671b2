import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from adsheat.special import chebyshev_T, gauss_2f1_terminating, spectral_cosh_factor


class TestChebyshev:
    def test_low_degrees_explicit(self):
        for z in (-1.7, -0.3, 0.0, 0.9, 2.4):
            assert chebyshev_T(0, z) == 1.0
            assert chebyshev_T(1, z) == z
            assert chebyshev_T(2, z) == pytest.approx(2 * z * z - 1, rel=1e-15)
            assert chebyshev_T(3, z) == pytest.approx(4 * z**3 - 3 * z, rel=1e-14)
            assert chebyshev_T(4, z) == pytest.approx(
                8 * z**4 - 8 * z * z + 1, rel=1e-13
            )

    def test_cos_composition(self):
        for m in range(8):
            for phi in (0.1, 0.7, 2.0):
                assert chebyshev_T(m, math.cos(phi)) == pytest.approx(
                    math.cos(m * phi), abs=1e-12
                )

    def test_cosh_composition(self):
        for m in range(8):
            for u in (0.0, 0.5, 2.0):
                assert chebyshev_T(m, math.cosh(u)) == pytest.approx(
                    math.cosh(m * u), rel=1e-12
                )

    def test_array_input(self):
        z = np.linspace(-2.0, 2.0, 7)
        out = chebyshev_T(5, z)
        assert out.shape == z.shape
        for zi, oi in zip(z, out):
            assert oi == pytest.approx(chebyshev_T(5, float(zi)), rel=1e-14)

    def test_rejects_negative_degree(self):
        with pytest.raises(ValueError):
            chebyshev_T(-1, 0.5)


class TestTerminating2F1:
    def test_degree_zero_is_one(self):
        assert gauss_2f1_terminating(0, -3.7) == 1.0

    def test_degree_one(self):
        # 1 + (-m)(m)/(1/2) * x / 1 = 1 - 2x at m = 1
        assert gauss_2f1_terminating(1, 0.25) == pytest.approx(0.5, rel=1e-15)

    @given(
        st.integers(min_value=0, max_value=25),
        st.floats(min_value=0.0, max_value=5.0),
    )
    def test_cosh_identity(self, m, u):
        # the argument (1 - cosh u)/2 makes the terminating series collapse
        # to cosh(m u); the exact-rational accumulation keeps this true even
        # where the raw terms cancel by ~1e14
        value = gauss_2f1_terminating(m, (1.0 - math.cosh(u)) / 2.0)
        expected = math.cosh(m * u)
        assert value == pytest.approx(expected, rel=1e-12)

    @given(
        st.integers(min_value=0, max_value=20),
        st.floats(min_value=-3.0, max_value=3.0),
    )
    def test_matches_chebyshev(self, m, z):
        # T_m(z) = 2F1(-m, m; 1/2; (1-z)/2)
        assert gauss_2f1_terminating(m, (1.0 - z) / 2.0) == pytest.approx(
            chebyshev_T(m, z), rel=1e-11, abs=1e-11
        )

    def test_worst_cancellation_point(self):
        # m = 25, u = 5: raw terms reach ~1e14 times the result
        value = gauss_2f1_terminating(25, (1.0 - math.cosh(5.0)) / 2.0)
        assert value == pytest.approx(math.cosh(125.0), rel=1e-12)


class TestSpectralCoshFactor:
    def test_weight_zero_form(self):
        x, d = 1.4, 0.6
        expected = 1.0 / math.sqrt(math.sinh(x - d) * math.sinh(x + d))
        assert spectral_cosh_factor(x, d, 0.0) == pytest.approx(expected, rel=1e-14)

    def test_weight_half_form(self):
        x, d = 2.0, 1.0
        expected = (math.cosh(x) / math.cosh(d)) / math.sqrt(
            math.sinh(x - d) * math.sinh(x + d)
        )
        assert spectral_cosh_factor(x, d, 0.5) == pytest.approx(expected, rel=1e-14)

    def test_endpoint_singularity_rate(self):
        # N(x) ~ ((x - d) sinh(2d))^(-1/2) as x decreases to d
        d = 0.8
        for eps in (1e-6, 1e-8):
            x = d + eps
            expected = 1.0 / math.sqrt(eps * math.sinh(2 * d))
            assert spectral_cosh_factor(x, d, 0.0) == pytest.approx(
                expected, rel=1e-5
            )

    def test_sign_flip_of_weight_is_noop(self):
        # only |kappa| enters (T_{2|kappa|})
        assert spectral_cosh_factor(1.5, 0.5, 1.0) == spectral_cosh_factor(
            1.5, 0.5, -1.0
        )

    def test_array_matches_scalar(self):
        d = 0.5
        xs = np.linspace(0.7, 3.0, 9)
        out = spectral_cosh_factor(xs, d, 1.0)
        for xi, oi in zip(xs, out):
            assert oi == pytest.approx(spectral_cosh_factor(float(xi), d, 1.0), rel=1e-14)

    def test_requires_x_beyond_d(self):
        with pytest.raises(ValueError):
            spectral_cosh_factor(0.5, 0.5, 0.0)

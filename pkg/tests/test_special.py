import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracbessel import kernels
from fracbessel.special import (
    DomainError,
    bessel_bound_constant,
    bessel_j,
    bessel_j_scaled,
    gamma,
    gaussian_hankel_pair,
    gaussian_hankel_pair_quad,
    gaussian_moment,
    product_formula_lhs,
    product_formula_rhs,
    sin_power_integral,
)


class TestGamma:
    def test_real_against_math(self):
        x = np.linspace(0.05, 25.0, 97)
        got = np.array([gamma(v) for v in x])
        want = np.array([math.gamma(v) for v in x])
        np.testing.assert_allclose(got, want, rtol=2e-14)

    def test_reflection_region(self):
        for v in (-0.3, -1.7, -4.25, 0.2):
            assert gamma(v) == pytest.approx(math.gamma(v), rel=1e-13)

    def test_complex_against_mpmath(self, rng):
        pts = rng.uniform(-3.0, 6.0, 20) + 1j * rng.uniform(-4.0, 4.0, 20)
        for z in pts:
            want = complex(mpmath.gamma(mpmath.mpc(z.real, z.imag)))
            assert abs(gamma(complex(z)) - want) <= 1e-13 * abs(want)

    def test_real_input_gives_float(self):
        assert isinstance(gamma(2.5), float)

    @pytest.mark.parametrize("z", [0.0, -1.0, -3.0])
    def test_poles(self, z):
        with pytest.raises(DomainError):
            gamma(z)


class TestBessel:
    def test_against_mpmath(self):
        alphas = (-0.45, -0.2, 0.0, 0.25, 0.5, 1.0, 2.7, 6.0, 10.0)
        zs = np.concatenate([[1e-6, 0.01, 0.5], np.linspace(1.0, 60.0, 45)])
        worst = 0.0
        for a in alphas:
            got = bessel_j(a, zs)
            want = np.array([float(mpmath.besselj(a, z)) for z in zs])
            worst = max(worst, np.max(np.abs(got - want)))
        assert worst < 1e-13

    def test_scaled_origin_limit(self):
        for a in (-0.4, 0.0, 1.5):
            assert bessel_j_scaled(a, 0.0) == pytest.approx(1.0 / bessel_bound_constant(a), rel=1e-14)

    def test_scaled_small_argument_against_mpmath(self):
        z = np.array([1e-8, 1e-4, 0.3, 2.0])
        for a in (-0.3, 0.7, 4.0):
            want = [float(mpmath.besselj(a, v) / mpmath.mpf(v) ** a) for v in z]
            np.testing.assert_allclose(bessel_j_scaled(a, z), want, rtol=1e-13)

    def test_numba_and_numpy_twins_agree(self):
        z = np.linspace(0.0, 80.0, 801)
        for a in (-0.3, 0.0, 2.5):
            g = gamma(a + 1.0)
            np.testing.assert_allclose(kernels.jv_scaled_numba(a, z, g), kernels.jv_scaled_numpy(a, z, g),
                                       rtol=1e-13, atol=1e-15)

    def test_continuity_at_branch_switch(self):
        # the series branch carries ~exp(z) * eps of cancellation at the switch
        z = kernels.Z_SWITCH * np.array([1 - 1e-12, 1 + 1e-12])
        vals = bessel_j_scaled(1.3, z)
        assert abs(vals[0] - vals[1]) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_j(-1.0, 1.0)
        with pytest.raises(DomainError):
            bessel_j(0.5, -1.0)

    @settings(max_examples=60, deadline=None)
    @given(a=st.floats(-0.49, 10.0), z=st.floats(0.0, 200.0))
    def test_bound_property(self, a, z):
        assert bessel_bound_constant(a) * abs(bessel_j_scaled(a, z)) <= 1.0 + 1e-12

    def test_bound_lattice(self):
        alphas = np.linspace(-0.49, 10.0, 50)
        zs = np.linspace(0.0, 60.0, 200)
        worst = max(float(np.max(bessel_bound_constant(a) * np.abs(bessel_j_scaled(a, zs)))) for a in alphas)
        assert worst <= 1.0 + 1e-12
        assert worst == pytest.approx(1.0, abs=1e-12)  # attained at z = 0


class TestClosedForms:
    def test_gaussian_moment_against_quadrature(self):
        for m, a in ((0.0, 1.0), (0.3, 2.0), (-0.4, 0.5), (2.0, 1.5)):
            want = float(mpmath.quad(lambda x: mpmath.exp(-x * x / (2 * a)) * x ** (2 * m + 1), [0, mpmath.inf]))
            assert gaussian_moment(m, a) == pytest.approx(want, rel=1e-12)

    def test_sin_power_integral(self):
        for r in (-0.3, 0.0, 0.5, 2.25):
            want = float(mpmath.beta(r + 0.5, 0.5) / 2)
            assert sin_power_integral(r) == pytest.approx(want, rel=1e-13)

    def test_gaussian_hankel_pair_mpmath(self):
        for a, s, r in ((0.0, 1.0, 1.0), (1.5, 0.7, 2.0), (-0.3, 2.0, 0.4)):
            f = lambda y: mpmath.exp(-s * y * y / 2) * mpmath.besselj(a, r * y) * y ** (a + 1)
            want = float(mpmath.quad(f, mpmath.linspace(0, 40, 9)))
            assert gaussian_hankel_pair(a, s, r) == pytest.approx(want, rel=1e-12)

    def test_gaussian_hankel_quadrature_small_lattice(self):
        for a, s, r in ((0.5, 1.0, 2.0), (3.0, 2.5, 0.7)):
            assert gaussian_hankel_pair_quad(a, s, r) == pytest.approx(gaussian_hankel_pair(a, s, r), rel=1e-9)

    def test_gaussian_hankel_pair_domain(self):
        with pytest.raises(DomainError):
            gaussian_hankel_pair(-1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            gaussian_hankel_pair(0.5, 0.0, 1.0)

    def test_addition_integral(self):
        for a, y, z in ((0.0, 1.0, 2.0), (0.8, 0.3, 4.0), (2.5, 2.0, 2.0)):
            assert product_formula_lhs(a, y, z) == pytest.approx(product_formula_rhs(a, y, z), abs=1e-10)

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracbessel.bessel_ops import apply_S_fd, gaussian_family, interior_mask, neg_S_power_coeffs
from fracbessel.frac_powers import (
    FracOrder,
    WeightedPolynomial,
    balakrishnan_multiplier,
    balakrishnan_multiplier_quadrature,
    balakrishnan_prefactor,
    frac_power_balakrishnan,
    frac_power_delta,
    frac_power_spectral,
    liouville_pairing,
    liouville_pairing_delta,
    liouville_pairing_delta_direct,
    multiplier_cutoff_check,
)
from fracbessel.grids import MuVector, SampledFn, default_grid
from fracbessel.hankel import TransformPlan
from fracbessel.special import DomainError

ALPHAS = [0.3, 0.5, 1.5, 0.5 + 0.5j]


def balakrishnan_mpmath(alpha, m, rho):
    a = mpmath.mpmathify(alpha)
    pre = mpmath.gamma(m) / (mpmath.gamma(a) * mpmath.gamma(m - a))
    rho = mpmath.mpf(rho)
    # lam = e^s turns lam^(a-1) dlam into e^(a s) ds, smooth on the whole line
    val = mpmath.quad(lambda s: mpmath.exp(a * s) * (rho / (mpmath.exp(s) + rho)) ** m,
                      [-mpmath.inf, mpmath.log(rho), mpmath.inf])
    return complex(pre * val)


class TestOrder:
    def test_default_m(self):
        assert FracOrder(0.3).m == 1
        assert FracOrder(1.5).m == 2
        assert FracOrder(2.0).m == 3
        assert FracOrder(0.5 + 0.5j).m == 1

    @pytest.mark.parametrize("alpha,m", [(0.0, None), (-0.5, None), (1.5, 1), (0.5j, None)])
    def test_rejects(self, alpha, m):
        with pytest.raises(DomainError):
            FracOrder(alpha, m)


class TestBalakrishnan:
    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_multiplier_routes_against_mpmath(self, alpha):
        order = FracOrder(alpha)
        rho = np.array([1e-3, 0.5, 3.0, 40.0])
        want = np.array([balakrishnan_mpmath(alpha, order.m, r) for r in rho])
        np.testing.assert_allclose(balakrishnan_multiplier_quadrature(order, rho), want, rtol=1e-10)
        np.testing.assert_allclose(balakrishnan_multiplier(order, rho), want, rtol=1e-12)
        np.testing.assert_allclose(want, rho ** complex(alpha), rtol=1e-12)

    def test_higher_m(self):
        order = FracOrder(0.7, m=3)
        rho = np.logspace(-3, 2, 11)
        np.testing.assert_allclose(balakrishnan_multiplier_quadrature(order, rho), rho ** 0.7, rtol=1e-10)

    def test_prefactor(self):
        order = FracOrder(0.5)
        assert balakrishnan_prefactor(order) == pytest.approx(1.0 / np.pi)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_operator_routes(self, setups, alpha):
        s = setups("mu2d")
        f = gaussian_family(s["mu"], s["grid"], [1.0])
        sp = frac_power_spectral(alpha, f, s["tplan"])
        bq = frac_power_balakrishnan(alpha, f, s["tplan"], method="quadrature")
        assert sp.sup_distance(bq) < 1e-4
        assert sp.sup_distance(frac_power_balakrishnan(alpha, f, s["tplan"])) < 1e-12

    def test_unknown_method(self, setups):
        s = setups("mu0")
        with pytest.raises(DomainError):
            frac_power_balakrishnan(0.5, gaussian_family(s["mu"], s["grid"], [1.0]), s["tplan"], method="x")


def unit_phi(s, N=2):
    phi = gaussian_family(s["mu"], s["grid"], neg_S_power_coeffs(s["mu"], N))
    return phi * (1.0 / float(np.abs(phi.values).max()))


class TestSemigroup:
    @pytest.mark.parametrize("case", ["mu025", "mu2d"])
    @pytest.mark.parametrize("a,b", [(0.4, 0.6), (0.25, 0.5)])
    def test_composition(self, setups, case, a, b):
        s = setups(case)
        phi = unit_phi(s)
        comp = frac_power_spectral(a, frac_power_spectral(b, phi, s["tplan"]), s["tplan"])
        assert comp.sup_distance(frac_power_spectral(a + b, phi, s["tplan"])) < 1e-5

    def test_complex_orders_compose(self, setups):
        s = setups("mu025")
        phi = unit_phi(s)
        comp = frac_power_spectral(0.3 + 0.2j, frac_power_spectral(0.3 - 0.2j, phi, s["tplan"]), s["tplan"])
        assert comp.sup_distance(frac_power_spectral(0.6, phi, s["tplan"])) < 1e-5

    @pytest.mark.parametrize("case", ["mu0", "mu2d"])
    def test_order_one_is_minus_S(self, setups, case):
        s = setups(case)
        e = gaussian_family(s["mu"], s["grid"], [1.0])
        neg_S = gaussian_family(s["mu"], s["grid"], neg_S_power_coeffs(s["mu"], 1))
        one = frac_power_spectral(1.0, e, s["tplan"])
        assert one.sup_distance(neg_S) < 1e-9
        mask = interior_mask(s["grid"])
        assert np.abs(one.values + apply_S_fd(e, s["mu"]).values)[mask].max() < 1e-4

    @settings(max_examples=10, deadline=None)
    @given(a=st.floats(0.05, 1.5))
    def test_gaussian_family_transform(self, setups, a):
        s = setups("mu025")
        e = gaussian_family(s["mu"], s["grid"], [1.0])
        # the multiplier route never amplifies beyond rho^a on the grid
        out = frac_power_spectral(a, e, s["tplan"])
        assert np.all(np.isfinite(out.values))


class TestDelta:
    @pytest.mark.parametrize("alpha", [0.3, 0.7, 1.0 + 0.2j])
    def test_weight_algebra(self, setups, alpha):
        s = setups("mu2d")
        beta = s["mu"].array + 0.5
        e = gaussian_family(s["mu"], s["grid"], [1.0, 0.4])
        lhs = frac_power_delta(alpha, e.times_power(-beta), s["tplan"]).values
        rhs = frac_power_spectral(alpha, e, s["tplan"]).times_power(-beta).values
        assert np.abs(lhs - rhs).max() <= 1e-12


class TestWeightedPolynomial:
    def test_sample_and_modes(self):
        mu = MuVector((0.3,))
        g = default_grid(1, nodes=16)
        u = WeightedPolynomial(mu, (1.0, 2.0), "hirschman")
        np.testing.assert_allclose(u.sample(g).values, g.power(1.6) * (1 + 2 * g.norm2))
        assert u.to_zemanian().weight_mode == "zemanian"
        with pytest.raises(DomainError):
            u.to_zemanian().to_zemanian()

    def test_rejects(self):
        mu = MuVector((0.3,))
        with pytest.raises(DomainError):
            WeightedPolynomial(mu, (1.0,), "other")
        with pytest.raises(DomainError):
            WeightedPolynomial(mu, (1.0,) * 6)


class TestPairings:
    def test_bilinear_not_sesquilinear(self, setups):
        s = setups("mu025")
        phi = gaussian_family(s["mu"], s["grid"], [1.0])
        u = WeightedPolynomial(s["mu"], (1.0,))
        a = liouville_pairing(u, 0.5 + 0.3j, phi * 1j, s["tplan"])
        b = liouville_pairing(u, 0.5 + 0.3j, phi, s["tplan"])
        assert a == pytest.approx(1j * b, rel=1e-13)

    def test_delta_transfer(self, setups):
        s = setups("mu2d")
        g = s["grid"]
        phi = SampledFn(g, (1 + g.norm2) * np.exp(-0.5 * g.norm2))
        u = WeightedPolynomial(s["mu"], (0.0, 1.0), "hirschman")
        assert liouville_pairing_delta(u, 0.7, phi, s["tplan"]) == pytest.approx(
            liouville_pairing_delta_direct(u, 0.7, phi, s["tplan"]), rel=1e-12)

    def test_mode_checks(self, setups):
        s = setups("mu0")
        phi = gaussian_family(s["mu"], s["grid"], [1.0])
        with pytest.raises(DomainError):
            liouville_pairing(WeightedPolynomial(s["mu"], (1.0,), "hirschman"), 0.5, phi, s["tplan"])
        with pytest.raises(DomainError):
            liouville_pairing_delta(WeightedPolynomial(s["mu"], (1.0,)), 0.5, phi, s["tplan"])


class TestCutoff:
    def test_seminorms_finite(self):
        mu = MuVector((0.2,))
        g = default_grid(1, nodes=64, L=8.0)
        x = g.coords[0]
        bump = np.where(x > 1.0, (x - 1.0) ** 6 * np.exp(-x * x / 2), 0.0)
        out = multiplier_cutoff_check(0.5, SampledFn(g, bump), 1.0, mu)
        assert len(out) == 6
        assert all(np.isfinite(v) for v in out.values())

    def test_requires_vanishing(self):
        mu = MuVector((0.2,))
        g = default_grid(1, nodes=32)
        with pytest.raises(DomainError):
            multiplier_cutoff_check(0.5, SampledFn(g, np.ones(32)), 1.0, mu)
        with pytest.raises(DomainError):
            multiplier_cutoff_check(0.5, SampledFn(g, np.ones(32)), 0.0, mu)

import math

import mpmath
import numpy as np
import pytest

from fracbessel.bessel_ops import gaussian_family
from fracbessel.delsarte import (
    ConvPlan,
    approx_identity,
    approx_identity_convergence,
    approx_identity_pointwise,
    approx_identity_sr,
    conv_hash,
    conv_sharp,
    conv_sharp_spectral,
    delsarte_moment,
    frakD_normalization,
    jacobi_rule,
    kernel_D,
    kernel_frakD,
    product_formula_lhs,
    product_formula_rhs,
    translation_constant,
    triangle_area,
    young_bound_check,
)
from fracbessel.grids import MuVector, SampledFn, TensorGrid, gauss_axis, grid_s
from fracbessel.hankel import hankel_h, hankel_z
from fracbessel.special import DomainError, bessel_bound_constant


def gauss(grid, a=1.0):
    return SampledFn.from_factors(grid, [np.exp(-0.5 * a * ax.nodes ** 2) for ax in grid.axes])


def dense(f):
    return SampledFn(f.grid, f.values)


class TestKernels:
    def test_heron(self):
        assert triangle_area(3.0, 4.0, 5.0) == pytest.approx(6.0)
        assert triangle_area(1.0, 1.0, 3.0) == 0.0

    def test_support(self):
        for k in (kernel_D, kernel_frakD):
            assert k(0.3, 1.0, 2.0, 0.5) == 0.0
            assert k(0.3, 1.0, 2.0, 3.5) == 0.0
            assert k(0.3, 1.0, 2.0, 1.5) > 0.0

    def test_edge_blows_up_below_half(self):
        assert math.isinf(kernel_D(0.2, 1.0, 2.0, 1.0))
        assert kernel_D(0.8, 1.0, 2.0, 1.0) == 0.0

    def test_symmetric_in_arguments(self):
        vals = [kernel_D(0.6, *p) for p in ((1.0, 2.0, 1.7), (2.0, 1.7, 1.0), (1.7, 1.0, 2.0))]
        np.testing.assert_allclose(vals, vals[0], rtol=1e-14)

    def test_rejects_order(self):
        with pytest.raises(DomainError):
            kernel_D(-0.5, 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            jacobi_rule(-0.6)

    def test_jacobi_rule_mass(self):
        for a in (-0.4, 0.0, 1.5):
            t, w = jacobi_rule(a, 20)
            assert translation_constant(a) * w.sum() == pytest.approx(1.0, rel=1e-13)


class TestKernelIdentities:
    @pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.3, 1.7])
    def test_moment_against_mpmath(self, alpha):
        u, v = 1.3, 2.1
        a = mpmath.mpf(alpha)
        u, v = mpmath.mpf(u), mpmath.mpf(v)

        hi, lo = u + v, v - u

        def integrand(t, tc):
            # w = lo + (hi - lo) t; t and tc = 1 - t are passed separately so both end gaps stay exact
            w = lo + (hi - lo) * t
            area = mpmath.sqrt((hi - lo) ** 2 * tc * t * (hi + w) * (w + lo)) / 4
            D = (2 ** (a - 1) * (u * v * w) ** (0.5 - a) * area ** (2 * a - 1)
                 / (mpmath.gamma(a + 0.5) * mpmath.sqrt(mpmath.pi)))
            return (hi - lo) * D * w ** (a + 0.5)

        # t = s^m flattens the t^(a - 1/2) end singularity
        m = max(1, 2 / (2 * a + 1))
        top = mpmath.mpf(0.5) ** (1 / m)
        want = sum(mpmath.quad(lambda s: m * s ** (m - 1) * integrand(*pair(s ** m)), [0, top])
                   for pair in (lambda t: (t, 1 - t), lambda t: (1 - t, t)))
        got = delsarte_moment(alpha, 1.3, 2.1)
        assert got == pytest.approx(float(want), rel=1e-9)
        assert got == pytest.approx((1.3 * 2.1) ** (alpha + 0.5) / bessel_bound_constant(alpha), rel=1e-12)

    @pytest.mark.parametrize("alpha", [-0.4, 0.25, 2.0])
    def test_equal_sides(self, alpha):
        # u == v puts the lower support end at the origin
        assert delsarte_moment(alpha, 1.5, 1.5) == pytest.approx(1.5 ** (2 * alpha + 1) / bessel_bound_constant(alpha), rel=1e-10)
        assert frakD_normalization(alpha, 1.5, 1.5) == pytest.approx(1.0, rel=1e-10)

    def test_normalization_lattice(self, rng):
        for alpha in (-0.3, 0.5, 1.1):
            for u, v in rng.uniform(0.2, 5.0, size=(6, 2)):
                assert frakD_normalization(alpha, u, v) == pytest.approx(1.0, rel=1e-10)

    def test_product_formula(self, rng):
        for alpha in (-0.3, 0.0, 0.7):
            for u, v, t in rng.uniform(0.2, 4.0, size=(5, 3)):
                assert product_formula_lhs(alpha, u, v, t) == pytest.approx(product_formula_rhs(alpha, u, v, t), abs=1e-10)


@pytest.fixture(scope="module")
def small():
    mu = MuVector((0.3, 0.7))
    grid = TensorGrid((gauss_axis(40, 10.0), gauss_axis(40, 10.0)))
    return mu, grid, ConvPlan(mu, grid)


class TestConvolution:
    def test_translation_of_constant(self, setups):
        s = setups("mu025", conv=True)
        W = s["cplan"].W[0]
        x = s["grid"].axes[0].nodes
        tau1 = W.sum(axis=2)
        inside = np.add.outer(x, x) < x[-1]
        np.testing.assert_allclose(tau1[inside], 1.0, atol=1e-13)

    def test_hash_against_hirschman_law(self, setups):
        s = setups("mu2d", conv=True)
        g = gauss(s["grid"])
        h = gauss(s["grid"], 2.0)
        lhs = hankel_h(s["tplan"], conv_hash(g, h, s["cplan"])).values
        rhs = (hankel_h(s["tplan"], g) .values * hankel_h(s["tplan"], h).values)
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    @pytest.mark.parametrize("case", ["mu025", "mu2d"])
    def test_sharp_matches_spectral(self, setups, case):
        s = setups(case, conv=True)
        f = dense(gaussian_family(s["mu"], s["grid"], [1.0, 0.2]))
        g = gaussian_family(s["mu"], s["grid"], [1.0], a=2.0)
        a = conv_sharp(f, g, s["cplan"])
        b = conv_sharp_spectral(f, g, s["tplan"])
        assert a.sup_distance(b) < 1e-10

    def test_dense_and_separable_paths(self, small):
        mu, grid, plan = small
        f = gaussian_family(mu, grid, [1.0])
        g = gaussian_family(mu, grid, [1.0], a=3.0)
        ref = conv_hash(dense(f), dense(g), plan)
        for a, b in ((f, g), (dense(f), g), (f, dense(g))):
            assert conv_hash(a, b, plan).sup_distance(ref) < 1e-15

    def test_three_dimensional_contraction(self):
        mu = MuVector((0.1, 0.2, 0.4))
        grid = TensorGrid((gauss_axis(10, 5.0), gauss_axis(11, 5.0), gauss_axis(9, 5.0)))
        plan = ConvPlan(mu, grid)
        rng = np.random.default_rng(5)
        F = rng.normal(size=grid.shape)
        G = rng.normal(size=grid.shape)
        ref = np.einsum("abc,def,ghi,beh,cfi->adg", *plan.W, F, G)
        np.testing.assert_allclose(plan.translate_contract(F, G), ref, atol=1e-12 * np.abs(ref).max())

    def test_commutative(self, setups):
        s = setups("mu2d", conv=True)
        f = dense(gaussian_family(s["mu"], s["grid"], [1.0, 0.3]))
        g = dense(gaussian_family(s["mu"], s["grid"], [1.0], a=1.5))
        assert conv_sharp(f, g, s["cplan"]).sup_distance(conv_sharp(g, f, s["cplan"])) < 1e-10

    def test_reductions(self, setups):
        s = setups("mu025", conv=True)
        mu, grid = s["mu"], s["grid"]
        f = gauss(grid, 2.0)
        mass = grid.integrate(f.values * grid_s(mu, grid))
        one = SampledFn.from_factors(grid, [np.ones(len(grid.axes[0]))])
        win = grid.coords[0] <= 3.0
        np.testing.assert_allclose(conv_hash(f, one, s["cplan"]).values[win], mass, rtol=1e-13)
        fz = f.times_power(mu.array + 0.5)
        out = conv_sharp(fz, one.times_power(mu.array + 0.5), s["cplan"])
        np.testing.assert_allclose(out.values[win], (mass * grid.power(mu.array + 0.5))[win], rtol=1e-13)

    def test_translate_table_one_dimensional(self, small, setups):
        s = setups("mu0", conv=True)
        T = s["cplan"].translate(gauss(s["grid"]))
        assert T.shape == (128, 128)
        with pytest.raises(DomainError):
            small[2].translate(gauss(small[1]))

    def test_grid_mismatch(self, small, setups):
        s = setups("mu2d")
        with pytest.raises(DomainError):
            conv_hash(gauss(s["grid"]), gauss(s["grid"]), small[2])


class TestYoung:
    @pytest.mark.parametrize("p", [1, 2, "inf"])
    def test_bounds(self, setups, p):
        s = setups("mu2d", conv=True)
        fams = [gaussian_family(s["mu"], s["grid"], c, a) for c, a in (([1.0], 1.0), ([1.0, -0.4], 2.0), ([0.2, 0.0, 0.1], 0.7))]
        for f in fams:
            for g in fams:
                lhs, rhs = young_bound_check(f, g, p, s["cplan"])
                assert lhs <= rhs + 1e-6


class TestApproximateIdentity:
    def test_unit_mass(self, setups):
        s = setups("mu2d")
        for m in (1, 4, 16):
            phi = approx_identity(m, s["grid"], s["mu"])
            assert s["grid"].integrate(phi.values * grid_s(s["mu"], s["grid"])) == pytest.approx(1.0, rel=1e-10)
        with pytest.raises(DomainError):
            approx_identity(0, s["grid"], s["mu"])

    @pytest.mark.parametrize("case", ["mu025", "mu2d"])
    def test_closed_form(self, setups, case):
        s = setups(case, conv=True)
        mu, grid = s["mu"], s["grid"]
        f = gauss(grid)
        for m in (1, 4, 16, 64):
            got = conv_hash(approx_identity(m, grid, mu), f, s["cplan"]).values
            c = 1.0 + 1.0 / m
            np.testing.assert_allclose(got, c ** (-mu.kappa) * np.exp(-0.5 * grid.norm2 / c), atol=1e-10)

    def test_l1_error_decreases(self, setups):
        s = setups("mu025", conv=True)
        errs = approx_identity_convergence(gauss(s["grid"]), [1, 4, 16, 64], s["cplan"])
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert errs[-1] * 64 == pytest.approx(errs[-2] * 16, rel=0.1)  # O(1/m)

    def test_pointwise_decreases(self, setups):
        s = setups("mu025", conv=True)
        f = gaussian_family(s["mu"], s["grid"], [1.0])
        k = int(np.searchsorted(s["grid"].axes[0].nodes, 1.0))
        errs = approx_identity_pointwise(f, [1, 4, 16, 64], s["cplan"], (k,))
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_sr_family(self, setups):
        s = setups("mu025")
        phi = approx_identity_sr(4, s["grid"], s["mu"])
        r_phi = phi.values * s["grid"].power(-s["mu"].array - 0.5)
        assert s["grid"].integrate(r_phi * grid_s(s["mu"], s["grid"])) == pytest.approx(1.0, rel=1e-10)


class TestSmallCases:
    def test_mollifier_tail_and_sign(self):
        mu = MuVector((0.0,))
        grid = TensorGrid((gauss_axis(128, 12.0),))
        s = grid_s(mu, grid)
        outside = grid.coords[0] > 1.0
        tails = []
        for m in (1, 4, 16, 64):
            phi = approx_identity(m, grid, mu).values.real
            assert np.all(phi >= 0)
            tails.append(float(np.sum((phi * s * grid.cell_weights)[outside])))
        assert all(b < a for a, b in zip(tails, tails[1:]))
        assert tails[-1] < 1e-3

    def test_kernels_nonnegative(self, rng):
        for alpha in (-0.3, 0.4, 1.5):
            u, v = rng.uniform(0.2, 3.0, 2)
            w = np.linspace(abs(u - v), u + v, 50)[1:-1]
            assert np.all(kernel_D(alpha, u, v, w) >= 0)
            assert np.all(kernel_frakD(alpha, u, v, w) >= 0)

    def test_zero_in_zero_out(self, setups):
        s = setups("mu025", conv=True)
        z = SampledFn.zeros(s["grid"])
        f = gauss(s["grid"])
        assert np.all(conv_hash(f, z, s["cplan"]).values == 0)
        assert np.all(conv_sharp(dense(z), dense(f), s["cplan"]).values == 0)
        assert approx_identity_convergence(z, [1, 4], s["cplan"]) == [0.0, 0.0]
        assert young_bound_check(z, f, 1, s["cplan"]) == (0.0, 0.0)

    def test_jacobi_self_convergence(self):
        mu = MuVector((0.25,))
        grid = TensorGrid((gauss_axis(64, 10.0),))
        f = dense(gaussian_family(mu, grid, [1.0, 0.3]))
        g = gaussian_family(mu, grid, [1.0], a=2.0)
        a = conv_sharp(f, g, ConvPlan(mu, grid, 48))
        b = conv_sharp(f, g, ConvPlan(mu, grid, 96))
        assert a.sup_distance(b) < 1e-12

    @pytest.mark.xfail(strict=True, reason="the L1(s) error is ~0.73/m analytically; 1e-2 needs m > 73")
    def test_literal_one_percent_bound_at_m64(self):
        mu = MuVector((0.0,))
        grid = TensorGrid((gauss_axis(128, 12.0),))
        errs = approx_identity_convergence(gauss(grid), [1, 4, 16, 64], ConvPlan(mu, grid))
        assert errs[-1] <= 1e-2

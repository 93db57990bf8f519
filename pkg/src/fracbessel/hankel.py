"""The two n-dimensional Hankel transforms as dense per-axis quadratures.

``h_mu`` has kernel ``prod sqrt(x_i y_i) J_mu_i(x_i y_i)``; ``H_mu`` has kernel
``prod (x_i y_i)^-mu_i J_mu_i(x_i y_i) x_i^(2 mu_i + 1)``. Both are their own
inverse. Either transform is applied as one matrix per axis, swept along the
axes in turn.
"""
import numpy as np

from . import kernels
from .grids import SampledFn
from .special import DomainError, gamma


def _scaled_kernel(mu_i, out_nodes, in_nodes):
    # (t x)^-mu J_mu(t x), finite at the origin
    z = np.multiply.outer(out_nodes, in_nodes)
    return kernels.jv_scaled(mu_i, z, gamma(mu_i + 1.0))


class TransformPlan:
    """Cached kernel-times-weight matrices for a (mu, in_grid, out_grid) triple.

    ``Kz[i][t, x]`` and ``KH[i][t, x]`` hold the h- and H-kernels of axis ``i``
    multiplied by the input quadrature weights.
    """

    def __init__(self, mu, in_grid, out_grid=None):
        in_grid.check_mu(mu)
        out_grid = in_grid if out_grid is None else out_grid
        out_grid.check_mu(mu)
        self.mu = mu
        self.in_grid = in_grid
        self.out_grid = out_grid
        self.Kz = []
        self.KH = []
        for m, ax_in, ax_out in zip(mu.mu, in_grid.axes, out_grid.axes):
            base = _scaled_kernel(m, ax_out.nodes, ax_in.nodes)
            x, t = ax_in.nodes, ax_out.nodes
            kz = base * np.multiply.outer(t ** (m + 0.5), x ** (m + 0.5) * ax_in.weights)
            kh = base * (x ** (2.0 * m + 1.0) * ax_in.weights)[None, :]
            for k in (kz, kh):
                if not np.all(np.isfinite(k)):
                    raise DomainError("non-finite kernel entry")
                k.setflags(write=False)
            self.Kz.append(kz)
            self.KH.append(kh)

    def _apply(self, mats, f):
        if f.grid is not self.in_grid:
            raise DomainError("function is not sampled on the plan's input grid")
        if f.factors is not None:
            facs = [K @ fac for K, fac in zip(mats, f.factors)]
            return SampledFn.from_factors(self.out_grid, facs)
        vals = f.values
        for i, K in enumerate(mats):
            vals = np.moveaxis(np.tensordot(K, vals, axes=([1], [i])), 0, i)
        return SampledFn(self.out_grid, vals)

    def inverse(self):
        """Plan mapping ``out_grid`` back to ``in_grid``."""
        if self.out_grid is self.in_grid:
            return self
        return TransformPlan(self.mu, self.out_grid, self.in_grid)


def hankel_z(plan, f):
    return plan._apply(plan.Kz, f)


def hankel_h(plan, f):
    return plan._apply(plan.KH, f)


def check_inversion_z(f, plan):
    """Grid sup of ``|h h f - f|``."""
    back = hankel_z(plan.inverse(), hankel_z(plan, f))
    return f.sup_distance(back)


def check_inversion_h(f, plan):
    back = hankel_h(plan.inverse(), hankel_h(plan, f))
    return f.sup_distance(back)


def parseval_pairing_z(f, g, plan):
    """``int (h f) g - int f (h g)``; requires a square plan."""
    if plan.out_grid is not plan.in_grid:
        raise DomainError("the pairing needs identical input and output grids")
    grid = plan.in_grid
    lhs = grid.integrate(hankel_z(plan, f).values * g.values)
    rhs = grid.integrate(f.values * hankel_z(plan, g).values)
    return complex(lhs - rhs)

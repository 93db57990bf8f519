"""Hankel transforms, Bessel-operator resolvents and fractional powers on sampled grids."""
__version__ = "0.1.0"

from .special import DomainError, bessel_j, bessel_j_scaled, gamma
from .grids import (
    MuVector,
    SampledFn,
    TensorGrid,
    default_grid,
    gauss_axis,
    load_sampled,
    save_sampled,
)
from .hankel import TransformPlan, hankel_h, hankel_z
from .delsarte import ConvPlan, conv_hash, conv_sharp
from .bessel_ops import (
    apply_Delta,
    apply_S_fd,
    apply_S_spectral,
    resolvent_apply_conv,
    resolvent_apply_spectral,
    resolvent_kernel,
)
from .frac_powers import (
    FracOrder,
    WeightedPolynomial,
    frac_power_balakrishnan,
    frac_power_delta,
    frac_power_spectral,
    liouville_pairing,
)

__all__ = [
    "ConvPlan", "DomainError", "FracOrder", "MuVector", "SampledFn", "TensorGrid",
    "TransformPlan", "WeightedPolynomial", "apply_Delta", "apply_S_fd", "apply_S_spectral",
    "bessel_j", "bessel_j_scaled", "conv_hash", "conv_sharp", "default_grid",
    "frac_power_balakrishnan", "frac_power_delta", "frac_power_spectral", "gamma",
    "gauss_axis", "hankel_h", "hankel_z", "liouville_pairing", "load_sampled",
    "resolvent_apply_conv", "resolvent_apply_spectral", "resolvent_kernel", "save_sampled",
]

"""Semi-analytic spectral stability engine for small-amplitude periodic water waves.

The pipeline runs from the linear dispersion relation through an exact term
algebra, the third-order wave expansion, mode/adjoint systems, center-manifold
corrections, and the period-map expansion, to the two instability indices and
their threshold wave numbers, with every closed form cross-validated by an
independent numeric route.
"""

__version__ = "0.1.0"

from .dispersion import (  # noqa: F401
    WaveParams,
    critical_point,
    make_wave_params,
    resonance_sigma,
    roots_k,
    sigma_branches,
)
from .indices import (  # noqa: F401
    bf_coefficients,
    bubble_spectrum,
    find_kappa1,
    find_kappa2,
    ind1,
    ind2,
    ind2_coeffs,
    ind2_mu0_variant,
    nu_from_ind1,
    resonance3_stability_check,
)
from .monodromy import build_series, evans_value  # noqa: F401
from .stokes import build_stokes, eval_wave, stokes_residual  # noqa: F401

"""Ring coherent-state transforms on SE(2), Gabor phase-space analysis,
and a generative model of orientation preference maps."""

from .angular import (
    AngularSignal,
    angle_grid,
    bessel_j0,
    harmonic,
    inner_product,
    quadrature,
    rotate,
    spectral_derivative,
)
from .bargmann import (
    RingTheta,
    SE2Field,
    cr_residual,
    fourier_side,
    inverse_transform,
    isometry_defect,
    membership_test,
    transform,
)
from .cortex import (
    ActivityStack,
    OrientationMap,
    PhaseNoise,
    activities_from_orientation,
    activity_map,
    activity_map_direct,
    coherent_field,
    empirical_activity,
    orientation_from_activities,
    orientation_random_phase,
    random_wave_image,
    sample_phases,
    spectrum_ring_fraction,
    v_potential,
)
from .grid2d import (
    Field2D,
    GridSpec,
    RingSignal,
    bessel_smooth,
    fft2,
    h_omega_norm,
    ifft2,
    ring_extract,
    ring_solve,
    ring_synthesize,
)
from .heisenberg import (
    GaborAtom,
    PhaseSpaceSlice,
    bargmann_h2,
    cr_restriction_residual,
    diagram_defect,
    gabor_analyze,
    holomorphy_residual,
    teo_bridge_defect,
)
from .se2 import (
    FiducialState,
    GroupElement,
    algebra_x1,
    algebra_x2,
    compose,
    exp_flow,
    fiducial,
    inverse,
    represent,
    uncertainty_residual,
)

__version__ = "0.1.0"

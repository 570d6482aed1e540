"""Symplectic structure of the free photon field, infrared dressing profiles,
and lightcone-localization checks at desk scale."""

from .errors import (
    AxisSingularity,
    NonIntegrablePairing,
    PointSingularity,
    SoftconeError,
    SupportNotInForwardCone,
    ToleranceNotMet,
)
from .geometry import (
    ConeRegion,
    DoubleCone,
    Point4,
    causally_separated,
    contains,
    double_cone_in_cone,
)
from .pairing import (
    PairingResult,
    huyghens_defect,
    huyghens_report,
    lemma1_phase,
    limit_T_study,
    pair,
)
from .photon import (
    PhotonWaveFunction,
    check_integrable,
    helicity_components,
    inner_product,
    polarisation,
    symplectic,
    transverse_project,
    zero_wavefunction,
)
from .profiles import (
    DressingParams,
    angular_factor,
    difference_norm_squared,
    evaluate,
    pairwise_angular_factor,
    pairwise_divergence_slope,
    profile_wavefunction,
    shell_norm_squared,
    term_wavefunction,
    v_hat_T_direct,
)
from .quadrature import QuadratureSpec
from .testfields import (
    BumpProfile,
    OnShellTransform,
    SeparableTerm,
    TestFieldPair,
    fourier_transform_1d,
    make_bump,
    onshell_transform,
    photon_wavefunction,
)
from .wavecheck import (
    GridField,
    WaveSolution,
    bj_support_check,
    lemma_a2_radius_check,
    mass_outside_cone,
    sample_grid,
    symplectic_time_invariance,
    wave_evaluate,
    wave_time_derivative,
)
from .weyl import (
    CoherentAutomorphism,
    WeylElement,
    adjoint,
    apply_automorphism,
    compose_difference,
    multiply,
    phase_distance,
    state_phase,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

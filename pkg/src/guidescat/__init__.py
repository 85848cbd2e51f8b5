"""Quantum scattering of a central potential inside a cylindrical waveguide.

Free-space phase shifts delta_l are turned into effective 1D channel
amplitudes through a parity-blocked partial-wave T-matrix; the s-wave layer
gives the confinement-induced resonance and the confined bound state.
"""

from .analysis import (
    BoundStateResult,
    CIRReport,
    bound_state,
    bound_state_landmarks,
    excited_channel_f,
    find_cir,
    g1d,
    single_mode_f0,
)
from .guide import (
    ChannelSet,
    GuideKind,
    GuideSpec,
    RootMode,
    build_channels,
    channels_from_k0,
    channels_from_kn,
    cir_constant,
    gamma_factor,
)
from .interaction import (
    NON_INTERACTING,
    HardSphere,
    SquareWellPotential,
    Tabulated,
    ZeroRange,
    k_cot_delta,
    numerov_phase_shift,
    scattering_length,
)
from .solver import (
    AmplitudeSet,
    IncidentState,
    TMatrixSolution,
    alpha_coefficients,
    amplitudes,
    conservation_residual,
    coupling_P,
    evaluate_asymptotic_psi,
    solve,
    solve_T,
)

__version__ = "0.1.0"

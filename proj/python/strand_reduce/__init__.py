"""Reduced field equations of a molecular strand with rotors.

Fields are numpy arrays of shape (n_t, n_s, 3); rotation fields have shape
(n_t, n_s, 3, 3).
"""

from ._core import (
    Blowup,
    ConfigError,
    Grid,
    InvalidArgument,
    IoError,
    ModelParams,
    NearAngleApi,
    NotAntisymmetric,
    NotARotation,
    NotFlat,
    StrandError,
    TooFarFromGroup,
    UnknownPreset,
    anisotropic_params,
    check_derivatives,
    check_roundtrip,
    check_stages,
    check_variational,
    cli,
    exp_so3,
    fiber_derivatives,
    flatness_residual,
    hat,
    lagrangian_stage1,
    log_so3,
    reconstruct_rotation,
    reorthonormalize,
    simulate,
    simulate_config,
    stage1_residual_norms,
    vee,
)

__version__ = "0.1.0"

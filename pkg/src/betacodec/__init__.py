"""betacodec: beta-expansion and golden-ratio A/D encoders under realistic
imperfections (flaky quantizers, leaky delays), reconstruction, recovery of
the unknown expansion base from bitstreams, and invariant-set certification
of quantizer parameter ranges."""

from .decoder import ReconstructionReport, decode_with_estimate, error_bound, partial_sum
from .encoders import (
    PHI,
    PHI_INV,
    EncodeResult,
    LeakParams,
    beta_encode,
    beta_encode_leaky,
    effective_gamma,
    gre_encode,
    gre_encode_leaky,
    leak_for_gamma,
)
from .errors import (
    ConfigError,
    NoRootError,
    NoSignalError,
    ParameterError,
    StructureViolationError,
    UnboundedStateError,
)
from .invariant_geometry import (
    Eigensystem,
    InvarianceReport,
    InvariantRectangle,
    alpha_bounds,
    alpha_bounds_worst_case,
    check_invariance,
    eigensystem,
    input_cover_bound,
    input_cover_uniform_bound,
    map_T,
    mu_max,
    rectangle_params,
    simulate_orbits,
    uniform_alpha_range,
)
from .quantizers import (
    FlakyPolicy,
    PolicyKind,
    PolicyState,
    QuantizerSpec,
    q2_flaky,
    q_flaky,
    q_ideal,
)
from .recovery import (
    Guarantee,
    RecoveryResult,
    TernaryPolynomial,
    TransversalityContext,
    TransversalityReport,
    difference_stream,
    first_root,
    poly_eval,
    recover_gamma_from_pair,
    recover_gamma_from_zero,
    required_bits,
    transversality_oracle,
)
from .zero_structure import (
    FactoredZeroPoly,
    check_period3,
    derivative_bound_at_root,
    factor_zero_poly,
    rn_magnitude_bound,
)

__version__ = "0.1.0"

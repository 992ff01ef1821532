"""Algebraic space-time lattice codes: construction, analysis, simulation."""

from .algebra import (
    CyclicAlgebra,
    NumberField,
    QuaternionSpec,
    alamouti_algebra,
    golden_algebra,
    mido_algebra,
    mimo_relay_field,
    quad_field_oracle,
    quaternion_multiply,
    quaternion_norm,
    relay_algebra,
    relay_field,
)
from .codebook import (
    REGISTRY,
    CodeDescriptor,
    IteratedMapSpec,
    build,
    iterate,
    quaternionic_embed,
    relay_blockdiag,
)
from .decodability import (
    DecodabilityProfile,
    HurwitzRadonProfile,
    RMatrixProfile,
    bounds_check,
    classify,
    hurwitz_radon,
    r_matrix,
    sample_r_matrix,
)
from .lattice import (
    LatticeProfile,
    WeightBasis,
    generator_matrix,
    lattice_profile,
    min_rank_difference,
    min_rank_sampled,
    profile_from_generator,
    unvectorize,
    vectorize,
)
from .simulate import (
    Alphabet,
    ChannelConfig,
    DecodeResult,
    SimCampaign,
    calibrate_noise,
    default_config,
    draw_channel,
    ml_exhaustive,
    pam,
    run_campaign,
    sphere_decode,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "ChannelConfig",
    "CodeDescriptor",
    "CyclicAlgebra",
    "DecodabilityProfile",
    "DecodeResult",
    "HurwitzRadonProfile",
    "IteratedMapSpec",
    "LatticeProfile",
    "NumberField",
    "QuaternionSpec",
    "REGISTRY",
    "RMatrixProfile",
    "SimCampaign",
    "WeightBasis",
    "alamouti_algebra",
    "bounds_check",
    "build",
    "calibrate_noise",
    "classify",
    "default_config",
    "draw_channel",
    "generator_matrix",
    "golden_algebra",
    "hurwitz_radon",
    "iterate",
    "lattice_profile",
    "mido_algebra",
    "mimo_relay_field",
    "min_rank_difference",
    "min_rank_sampled",
    "ml_exhaustive",
    "pam",
    "profile_from_generator",
    "quad_field_oracle",
    "quaternion_multiply",
    "quaternion_norm",
    "quaternionic_embed",
    "r_matrix",
    "relay_algebra",
    "relay_blockdiag",
    "relay_field",
    "run_campaign",
    "sample_r_matrix",
    "sphere_decode",
    "unvectorize",
    "vectorize",
    "__version__",
]

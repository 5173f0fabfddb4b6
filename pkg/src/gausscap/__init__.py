"""Classical-capacity lower bounds for one-mode quantum Gaussian channels."""

from gausscap.capacity import (
    CapacityBound,
    EncodingParams,
    Regime,
    asymptote,
    bound,
    bound_a1,
    bound_a2,
    bound_b1,
    bound_b2,
    bound_c,
    bound_d,
    holevo_gaussian,
)
from gausscap.channel import (
    CanonicalForm,
    ChannelClass,
    GaussianChannel,
    apply,
    canonical_channel,
    canonical_reduce,
    classify,
    compose_unitaries,
    cp_check,
    invariants_of,
)
from gausscap.gaussian_core import (
    entropy_h,
    euler_decompose,
    rank_one_reduce,
    state_entropy,
    williamson_1mode,
)
from gausscap.oracle import OracleConfig, oracle_bound

__version__ = "0.1.0"

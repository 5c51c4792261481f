"""Rates, bounds and uncoded-transmission simulation for the binary-symmetric
parallel-relay network."""

from .channel_model import (
    EndToEndChannel,
    NetworkConfig,
    binary_entropy,
    bsc_capacity,
    effective_channel,
    load_config,
)
from .coded import (
    CapacityVerdict,
    HybridPartition,
    HybridSearch,
    RelaySubset,
    best_decoding_rate,
    best_hybrid_partition,
    capacity_verdict,
    decoding_rate_for_subset,
    hybrid_rate,
)
from .errors import BSPRError, EnumerationCapError, InvalidConfigError, NumericalError
from .forwarding import (
    ProductChannel,
    RateBoundPair,
    cutset_bound,
    forwarding_rate_closed_form,
    forwarding_rate_exact,
    mutual_information,
    relays_for_rate,
)
from .report import RateReport, build_report
from .uncoded import (
    DecoderSpec,
    SimReport,
    decode,
    exact_error_probability,
    hoeffding_bound,
    monte_carlo,
    required_relays,
    select_majority_subset,
)

__version__ = "0.1.0"

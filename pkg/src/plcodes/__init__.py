"""Pseudolinear codes for the binary adversarial wiretap channel.

A pseudolinear code encodes message u as G h(u): a non-linear hop to
column u of a design-distance-(k+1) parity-check matrix, then a linear map
through a random binary generator G.  The package bundles the construction
itself, an adversarial-channel simulator (read a fraction r of the bits,
flip up to a fraction p), and exact desk-scale verifiers for the
limited-independence machinery that makes random codes of this family
reliable: k-wise independent codewords, separating families,
confusability and consistency sets, forest-restricted independence, and
the matching concentration bounds.
"""

from .awtc import (
    ChannelParams,
    ExhaustiveWorstCase,
    FixedReads,
    MyopicGreedy,
    ObliviousRandom,
    UniformReads,
    estimate_error_probability,
    observe,
    transmit,
)
from .bch_parity import ParityCheck, build_parity_check, verify_design_distance
from .bitlinalg import (
    BitMatrix,
    BitVector,
    FiniteField,
    columns_independent,
    field_pow,
    hamming,
    mat_vec_mul,
    rank,
)
from .confusability import (
    AnalysisContext,
    binary_entropy,
    capacity,
    check_sufficient_condition,
    confusable_set,
    confusion_exponent,
    consistency_bins,
    consistency_set,
    event_H_holds,
    exponent_max_check,
    hamming_ball_entropy_bound,
    hamming_ball_volume,
    less_noisy,
    v_sum,
)
from .independence_lab import (
    BipartiteEdgeSet,
    JointDistribution,
    enumerate_forests,
    fundamental_cycle_count,
    is_forest,
    maximum_spanning_forest,
    test_kwise_independent,
    test_kwise_ioef,
    xor_family,
)
from .plcode import (
    PseudolinearCode,
    code_from_text,
    code_to_text,
    joint_codeword_distribution,
    load_code,
    sample_code,
    save_code,
)
from .separating_family import (
    SeparatingFamily,
    SeparationFailure,
    build_deterministic,
    build_random,
    failure_bound,
    verify,
)
from .tail_bounds import (
    ck_oracle,
    consistency_overflow_bound,
    empirical_tail,
    gen_binomial,
    ioef_tail_bound,
    kwise_tail_bound,
    moment_tail_bound,
    partition_by_cycles,
    reliability_failure_bound,
    reliability_threshold_k,
    v_concentration_bound,
)

__version__ = "0.1.0"

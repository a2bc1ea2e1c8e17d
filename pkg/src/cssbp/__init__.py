"""Belief-propagation syndrome decoding for CSS codes.

Four decoders share one flooding schedule and one tie-breaking order:
joint BP on the coupled binary graph (probability and LLR domains),
separate BP on the marginal priors, and sum-product over the four Pauli
labels. A brute-force oracle, a lockstep comparison harness and a seeded
Monte Carlo driver sit alongside.
"""

from .channel import (
    LABEL_X,
    LABEL_Z,
    FourStatePrior,
    PauliPrior,
    depolarizing_prior,
    marginals,
    parse_prior_spec,
    relabel_prior,
    sample_error,
    y_only_prior,
)
from .css_code import (
    CssCode,
    CssFormatError,
    PauliError,
    ResidualClass,
    Syndromes,
    ValidationReport,
    classify_residual,
    load_code,
    paper_code_24,
    parse_css_support_table,
    syndrome,
    validate_css,
)
from .decoders import (
    DECODERS,
    DecodeResult,
    DecoderConfig,
    DecoderFault,
    FourStateState,
    JointBpState,
    LlrJointState,
    SeparateBpState,
    decode,
    decode_batch,
    separate_decode,
)
from .equivalence import EquivalenceReport, run_paired
from .oracle import OracleLimitError, exact_marginals, weight_p2, weight_p4
from .sim import StatsReport, TrialConfig, run_trials

__version__ = "0.1.0"

__all__ = [
    "DECODERS",
    "LABEL_X",
    "LABEL_Z",
    "CssCode",
    "CssFormatError",
    "DecodeResult",
    "DecoderConfig",
    "DecoderFault",
    "EquivalenceReport",
    "FourStatePrior",
    "FourStateState",
    "JointBpState",
    "LlrJointState",
    "OracleLimitError",
    "PauliError",
    "PauliPrior",
    "ResidualClass",
    "SeparateBpState",
    "StatsReport",
    "Syndromes",
    "TrialConfig",
    "ValidationReport",
    "classify_residual",
    "decode",
    "decode_batch",
    "depolarizing_prior",
    "exact_marginals",
    "load_code",
    "marginals",
    "paper_code_24",
    "parse_css_support_table",
    "parse_prior_spec",
    "relabel_prior",
    "run_paired",
    "run_trials",
    "sample_error",
    "separate_decode",
    "syndrome",
    "validate_css",
    "weight_p2",
    "weight_p4",
    "y_only_prior",
]

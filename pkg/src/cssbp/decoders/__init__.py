"""Joint, LLR-domain joint, separate, and four-state BP decoders."""

from ._graph import DecoderFault
from .binary import (
    BinaryBpState,
    JointBpState,
    SeparateBpState,
    init_joint,
    joint_beliefs,
    joint_iterate,
)
from .config import DecoderConfig
from .decisions import (
    TIE_RTOL,
    hard_decision_four_state,
    hard_decision_joint,
    marginal_estimates,
)
from .driver import DECODERS, BatchResult, DecodeResult, decode, decode_batch, make_state, separate_decode
from .four_state import FourStateState, four_state_beliefs, four_state_iterate, init_four_state
from .llr import LlrJointState, llr_beliefs, llr_iterate

__all__ = [
    "DECODERS",
    "TIE_RTOL",
    "BatchResult",
    "BinaryBpState",
    "DecodeResult",
    "DecoderConfig",
    "DecoderFault",
    "FourStateState",
    "JointBpState",
    "LlrJointState",
    "SeparateBpState",
    "decode",
    "decode_batch",
    "four_state_beliefs",
    "four_state_iterate",
    "hard_decision_four_state",
    "hard_decision_joint",
    "init_four_state",
    "init_joint",
    "joint_beliefs",
    "joint_iterate",
    "llr_beliefs",
    "llr_iterate",
    "make_state",
    "marginal_estimates",
    "separate_decode",
]

"""Lockstep comparison of joint BP and four-state BP.

Both decoders are stepped for a fixed number of iterations with identical
flooding semantics. At every iteration (including the initial state) the
harness measures, in sup-norm:

* belief deviation ``|b4(phi(x, z)) - b2(x, z)|``;
* check-message deviation: the four-state check message, read as a table
  over ``(x, z)``, must be constant in the component the check ignores, and
  its marginal must equal the binary check message;
* variable-message deviation: the marginal of the four-state variable
  message onto the checked component must equal the binary message;
* hard-decision correspondence under the common tie-breaking order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import LABEL_X, LABEL_Z, PauliPrior
from .css_code import CssCode, Syndromes
from .decoders.binary import JointBpState
from .decoders.config import DecoderConfig
from .decoders.decisions import TIE_RTOL, argmax_first, joint_to_labels
from .decoders.four_state import FourStateState

__all__ = [
    "EquivalenceReport",
    "IterationDeviation",
    "check_message_identity",
    "constancy_defect",
    "hard_decision_correspondence",
    "marginalize_labels",
    "run_paired",
]


def _as_table(four: np.ndarray) -> np.ndarray:
    """(..., 4) label-order vectors -> (..., 2, 2) tables indexed [x, z]."""
    t = np.empty(four.shape[:-1] + (2, 2))
    t[..., LABEL_X, LABEL_Z] = four
    return t


def marginalize_labels(four: np.ndarray, component: str) -> np.ndarray:
    """Normalized marginal of label-order vectors onto ``z`` (X edges) or ``x`` (Z edges)."""
    t = _as_table(four)
    marg = t.sum(axis=-2) if component == "X" else t.sum(axis=-1)
    return marg / marg.sum(axis=-1, keepdims=True)


def constancy_defect(four: np.ndarray, component: str) -> np.ndarray:
    """How far a check message varies in the component its check does not read.

    Measured after normalizing the message to sum 1.
    """
    t = _as_table(four / four.sum(axis=-1, keepdims=True))
    if component == "X":  # X-type checks read z; compare x = 0 and x = 1
        d = np.abs(t[..., 0, :] - t[..., 1, :])
    else:
        d = np.abs(t[..., :, 0] - t[..., :, 1])
    return d.max(axis=-1)


def check_message_identity(four_msg, binary_msg, component: str) -> tuple[float, float]:
    """Return ``(deviation, constancy_defect)`` for one or many check messages."""
    four_msg = np.asarray(four_msg, dtype=np.float64)
    binary_msg = np.asarray(binary_msg, dtype=np.float64)
    binary_msg = binary_msg / binary_msg.sum(axis=-1, keepdims=True)
    dev = np.abs(marginalize_labels(four_msg, component) - binary_msg).max(initial=0.0)
    return float(dev), float(constancy_defect(four_msg, component).max(initial=0.0))


def hard_decision_correspondence(b4, b2, rtol: float = TIE_RTOL) -> bool | np.ndarray:
    """``argmax b4 == phi(argmax b2)`` under the common order; vectorized over qubits."""
    b4 = np.asarray(b4, dtype=np.float64)
    b2 = np.asarray(b2, dtype=np.float64)
    single = b4.ndim == 1
    b4 = np.atleast_2d(b4)
    b2 = b2.reshape(-1, 2, 2)
    agree = argmax_first(b4, rtol) == argmax_first(joint_to_labels(b2), rtol)
    return bool(agree[0]) if single else agree


@dataclass
class IterationDeviation:
    iteration: int
    belief: float
    check_message: float
    variable_message: float
    constancy: float
    decisions_agree: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class EquivalenceReport:
    iterations: int
    per_iteration: list[IterationDeviation] = field(default_factory=list)

    @property
    def max_belief_deviation(self) -> float:
        return max((d.belief for d in self.per_iteration), default=0.0)

    @property
    def max_check_message_deviation(self) -> float:
        return max((d.check_message for d in self.per_iteration), default=0.0)

    @property
    def max_variable_message_deviation(self) -> float:
        return max((d.variable_message for d in self.per_iteration), default=0.0)

    @property
    def max_constancy_defect(self) -> float:
        return max((d.constancy for d in self.per_iteration), default=0.0)

    @property
    def hard_decisions_agree(self) -> bool:
        return all(d.decisions_agree for d in self.per_iteration)

    def summary(self) -> dict:
        return {
            "iterations": self.iterations,
            "max_belief_deviation": self.max_belief_deviation,
            "max_check_message_deviation": self.max_check_message_deviation,
            "max_variable_message_deviation": self.max_variable_message_deviation,
            "max_constancy_defect": self.max_constancy_defect,
            "hard_decisions_agree": self.hard_decisions_agree,
        }


def _compare(joint: JointBpState, four: FourStateState) -> IterationDeviation:
    b2 = joint.beliefs()
    b4 = four.beliefs()
    belief = float(np.abs(joint_to_labels(b2) - b4).max(initial=0.0))
    cx, kx = check_message_identity(four.mx_hat, joint.nu_hat, "X")
    cz, kz = check_message_identity(four.mz_hat, joint.mu_hat, "Z")
    vx = np.abs(marginalize_labels(four.mx, "X") - joint.nu).max(initial=0.0)
    vz = np.abs(marginalize_labels(four.mz, "Z") - joint.mu).max(initial=0.0)
    agree = bool(np.all(hard_decision_correspondence(b4, b2)))
    return IterationDeviation(joint.iteration, belief, max(cx, cz), float(max(vx, vz)), max(kx, kz), agree)


def run_paired(code: CssCode, prior: PauliPrior, syndromes: Syndromes, iterations: int,
               binary_config: DecoderConfig | None = None,
               four_state_config: DecoderConfig | None = None,
               initial_messages: tuple[np.ndarray, np.ndarray] | None = None) -> EquivalenceReport:
    """Step both decoders in lockstep and record deviations at every iteration.

    ``initial_messages`` optionally seeds the four-state variable-to-check
    messages ``(mx, mz)``; the binary decoder then starts from their
    marginals. Otherwise both start from uniform check messages.
    """
    binary_config = (binary_config or DecoderConfig()).replace(early_stop=False)
    four_state_config = (four_state_config or DecoderConfig()).replace(early_stop=False)
    joint = JointBpState(code, prior, syndromes, binary_config)
    four = FourStateState(code, prior, syndromes, four_state_config, initial_messages=initial_messages)
    if initial_messages is not None:
        joint.nu = marginalize_labels(four.mx, "X")
        joint.mu = marginalize_labels(four.mz, "Z")
    report = EquivalenceReport(iterations)
    report.per_iteration.append(_compare(joint, four))
    for _ in range(iterations):
        joint.iterate()
        four.iterate()
        report.per_iteration.append(_compare(joint, four))
    return report

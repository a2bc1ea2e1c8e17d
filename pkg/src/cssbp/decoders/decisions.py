"""Hard decisions with the common tie-breaking order.

Local states are ordered (0,0) < (1,0) < (0,1) < (1,1), which is the label
order 0 < 1 < w < w^2; among maximal entries the first one wins. Entries
within ``TIE_RTOL`` (relative) of the maximum count as tied so that two
decoders computing the same belief through different arithmetic still break
an exact tie the same way.
"""

from __future__ import annotations

import numpy as np

from ..channel import LABEL_X, LABEL_Z
from ..css_code import PauliError

TIE_RTOL = 1e-12


def argmax_first(values: np.ndarray, rtol: float = TIE_RTOL) -> np.ndarray:
    """Row-wise argmax over the last axis; ties go to the lowest index."""
    v = np.asarray(values, dtype=np.float64)
    top = v.max(axis=-1, keepdims=True)
    return np.argmax(v >= top * (1.0 - rtol), axis=-1)


def joint_to_labels(beliefs: np.ndarray) -> np.ndarray:
    """(..., n, 2, 2) tables indexed [x, z] -> (..., n, 4) in label order."""
    return beliefs[..., LABEL_X, LABEL_Z]


def hard_decision_four_state(beliefs4: np.ndarray, rtol: float = TIE_RTOL) -> np.ndarray:
    """Label index per qubit (0 -> 0, 1 -> 1, 2 -> w, 3 -> w^2)."""
    return argmax_first(beliefs4, rtol)


def labels_to_error(labels: np.ndarray) -> PauliError:
    labels = np.asarray(labels, dtype=np.intp)
    return PauliError(LABEL_X[labels], LABEL_Z[labels])


def hard_decision_joint(beliefs: np.ndarray, rtol: float = TIE_RTOL) -> PauliError:
    return labels_to_error(argmax_first(joint_to_labels(beliefs), rtol))


def marginal_estimates(beliefs: np.ndarray, rtol: float = TIE_RTOL) -> PauliError:
    """Componentwise argmax of the belief marginals (x-bar, z-bar)."""
    bx = beliefs.sum(axis=-1)
    bz = beliefs.sum(axis=-2)
    return PauliError(argmax_first(bx, rtol), argmax_first(bz, rtol))

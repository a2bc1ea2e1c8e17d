"""Sum-product on the Pauli-label factor graph.

One variable per qubit over the labels ``0, 1, w, w^2``. An X-type check
reads ``z(alpha)`` of each neighbour, a Z-type check reads ``x(alpha)``. The
check update runs a forward/backward pass over the running parity of the
row; each step sums a neighbour's 4-entry message into the parity it
contributes. Messages are 4-vectors in label order.
"""

from __future__ import annotations

import numpy as np

from ..channel import LABEL_X, LABEL_Z, PauliPrior, relabel_prior
from ..css_code import CssCode, Syndromes
from . import _graph as g
from .binary import _check_inputs
from .config import DecoderConfig
from .decisions import argmax_first

_EVEN = np.array([1.0, 0.0])


def parity_check_labels(layout: g.TannerLayout, msgs: np.ndarray, s: np.ndarray,
                        reads: np.ndarray) -> np.ndarray:
    """Check-to-variable 4-vectors for checks constraining ``sum reads(alpha_b) = s``.

    ``reads`` maps label index to the bit the check sees (``LABEL_Z`` for
    X-type checks, ``LABEL_X`` for Z-type checks).
    """
    # branch weights: total message mass on labels contributing parity 0 / 1
    step = np.stack([msgs[..., reads == 0].sum(axis=-1), msgs[..., reads == 1].sum(axis=-1)], axis=-1)
    slots = layout.rows
    groups, width = slots.index.shape
    out = np.empty_like(msgs)
    if width == 0:
        return out
    pad = np.broadcast_to(_EVEN, step.shape[:-2] + (1, 2))
    ext = np.take(np.concatenate([step, pad], axis=-2), slots.index, axis=-2)  # (..., m, width, 2)
    fwd = np.empty(ext.shape[:-2] + (width + 1, 2))
    bwd = np.empty_like(fwd)
    fwd[..., 0, :] = _EVEN
    bwd[..., width, :] = _EVEN
    for k in range(width):
        fwd[..., k + 1, :] = g.xor_conv(fwd[..., k, :], ext[..., k, :])
        bwd[..., width - 1 - k, :] = g.xor_conv(bwd[..., width - k, :], ext[..., width - 1 - k, :])
    others = g.xor_conv(fwd[..., :width, :], bwd[..., 1:, :])  # parity of all other neighbours
    par = others[..., slots.mask, :]  # (..., E, 2) in edge order
    edges = slots.edges
    # the edge's own label must complete the syndrome: reads(alpha) = s + parity(others)
    need = s[..., layout.edge_row[edges]].astype(np.intp)[..., None] ^ reads.astype(np.intp)
    out[..., edges, :] = np.take_along_axis(par, need, axis=-1)
    return out


class FourStateState:
    """``mx``/``mx_hat`` on HX edges, ``mz``/``mz_hat`` on HZ edges (4-vectors)."""

    _batched = ("mx", "mz", "mx_hat", "mz_hat", "sz", "sx")

    def __init__(self, code: CssCode, prior: PauliPrior, syndromes: Syndromes,
                 config: DecoderConfig | None = None, *, initial_messages=None):
        _check_inputs(code, prior, syndromes)
        self.code = code
        self.prior4 = relabel_prior(prior).tables
        self.sz, self.sx = syndromes.sz, syndromes.sx
        self.config = config or DecoderConfig()
        self.lx, self.lz = g.layouts(code)
        self.slots = g.joint_column_slots(code)
        self.iteration = 0
        batch = self.sz.shape[:-1]
        self.mx_hat = np.full(batch + (self.lx.n_edges, 4), 0.25)
        self.mz_hat = np.full(batch + (self.lz.n_edges, 4), 0.25)
        if initial_messages is None:
            self._variable_update()
        else:
            mx, mz = initial_messages
            self.mx = g.normalize(np.array(mx, dtype=np.float64))
            self.mz = g.normalize(np.array(mz, dtype=np.float64))

    def take(self, idx) -> FourStateState:
        return g.take_batch(self, idx, self._batched)

    def _variable_update(self) -> None:
        ex = self.lx.n_edges
        incoming = np.concatenate([self.mx_hat, self.mz_hat], axis=-2)
        excl, _ = self.slots.scan(np.multiply, incoming, 1.0)
        cols = np.concatenate([self.lx.edge_col, self.lz.edge_col])
        msgs = g.normalize(excl * self.prior4[cols])
        msgs = g.floor_messages(msgs, self.config.epsilon)
        self.mx, self.mz = msgs[..., :ex, :], msgs[..., ex:, :]

    def iterate(self) -> FourStateState:
        cfg = self.config
        if cfg.check_rule != "exact":
            raise ValueError("the four-state decoder implements only the exact check rule")
        mx_hat = parity_check_labels(self.lx, self.mx, self.sz, LABEL_Z)
        mz_hat = parity_check_labels(self.lz, self.mz, self.sx, LABEL_X)
        mx_hat = g.normalize(mx_hat)
        mz_hat = g.normalize(mz_hat)
        mx_hat = g.damp_geometric(mx_hat, self.mx_hat, cfg.damping)
        mz_hat = g.damp_geometric(mz_hat, self.mz_hat, cfg.damping)
        self.mx_hat = g.floor_messages(mx_hat, cfg.epsilon)
        self.mz_hat = g.floor_messages(mz_hat, cfg.epsilon)
        self._variable_update()
        self.iteration += 1
        return self

    def beliefs(self) -> np.ndarray:
        """Per-qubit 4-vectors in label order."""
        incoming = np.concatenate([self.mx_hat, self.mz_hat], axis=-2)
        total = self.slots.total(np.multiply, incoming, 1.0)
        return g.normalize(self.prior4 * total, "belief")

    def decision(self) -> tuple[np.ndarray, np.ndarray]:
        labels = argmax_first(self.beliefs())
        return LABEL_X[labels], LABEL_Z[labels]


def init_four_state(code: CssCode, prior: PauliPrior, syndromes: Syndromes,
                    config: DecoderConfig | None = None) -> FourStateState:
    return FourStateState(code, prior, syndromes, config)


def four_state_iterate(state: FourStateState) -> FourStateState:
    return state.iterate()


def four_state_beliefs(state: FourStateState) -> np.ndarray:
    return state.beliefs()

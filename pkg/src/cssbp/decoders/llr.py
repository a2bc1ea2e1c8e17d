"""Joint BP in the log-likelihood-ratio domain.

Each edge carries one scalar ``L = log(r(0) / r(1))``. At qubit ``j`` the
incoming check LLRs are accumulated into ``A^X_j`` (about z_j) and ``A^Z_j``
(about x_j); the local table Q_j is applied by converting the opposite
accumulator back to a two-entry weight, summing through Q_j, and taking the
log-ratio again.
"""

from __future__ import annotations

import numpy as np

from ..channel import LABEL_X, LABEL_Z, PauliPrior
from ..css_code import CssCode, Syndromes
from . import _graph as g
from .binary import _check_inputs
from .config import DecoderConfig
from .decisions import argmax_first, joint_to_labels


def _weights_from_llr(a: np.ndarray) -> np.ndarray:
    """``w(u) ~ exp((1 - u) a)`` scaled so the larger entry is 1."""
    top = np.maximum(a, 0.0)
    return np.stack([np.exp(a - top), np.exp(-top)], axis=-1)


class LlrJointState:
    """``lx``/``lx_hat`` are variable/check LLRs on HX edges, ``lz``/``lz_hat`` on HZ edges."""

    _batched = ("lx", "lz", "lx_hat", "lz_hat", "a_x", "a_z", "sz", "sx")

    def __init__(self, code: CssCode, prior: PauliPrior, syndromes: Syndromes,
                 config: DecoderConfig | None = None):
        _check_inputs(code, prior, syndromes)
        self.code = code
        self.prior = prior
        self.sz, self.sx = syndromes.sz, syndromes.sx
        self.config = config or DecoderConfig()
        with np.errstate(divide="ignore"):
            self.log_q = np.log(prior.tables)
        self.gx, self.gz = g.layouts(code)
        self.iteration = 0
        batch = self.sz.shape[:-1]
        self.lx_hat = np.zeros(batch + (self.gx.n_edges,))
        self.lz_hat = np.zeros(batch + (self.gz.n_edges,))
        self._variable_update()

    def take(self, idx) -> LlrJointState:
        return g.take_batch(self, idx, self._batched)

    def _clip(self, llr: np.ndarray) -> np.ndarray:
        c = self.config.llr_clamp
        return llr if c is None else np.clip(llr, -c, c)

    def accumulators(self) -> tuple[np.ndarray, np.ndarray]:
        a_x = self.gx.cols.total(np.add, self.lx_hat[..., None], 0.0)[..., 0]
        a_z = self.gz.cols.total(np.add, self.lz_hat[..., None], 0.0)[..., 0]
        return a_x, a_z

    def _variable_update(self) -> None:
        q = self.prior.tables
        a_x, a_z = self.accumulators()
        self.a_x, self.a_z = a_x, a_z
        eta_x = np.einsum("jxz,...jx->...jz", q, _weights_from_llr(a_z))
        eta_z = np.einsum("jxz,...jz->...jx", q, _weights_from_llr(a_x))
        local_x = g.probs_to_llr(eta_x)
        local_z = g.probs_to_llr(eta_z)
        ex, ez = self.gx.edge_col, self.gz.edge_col
        self.lx = self._clip(a_x[..., ex] - self.lx_hat + local_x[..., ex])
        self.lz = self._clip(a_z[..., ez] - self.lz_hat + local_z[..., ez])

    def _check(self, layout: g.TannerLayout, llr: np.ndarray, s: np.ndarray) -> np.ndarray:
        cfg = self.config
        if cfg.check_rule == "exact":
            return g.boxplus_llr(layout, llr, s, cfg.llr_clamp)
        return g.minsum_llr(layout, llr, s, cfg.minsum_scale, cfg.llr_clamp)

    def iterate(self) -> LlrJointState:
        d = self.config.damping
        lx_hat = self._check(self.gx, self.lx, self.sz)
        lz_hat = self._check(self.gz, self.lz, self.sx)
        if d > 0.0:
            lx_hat = (1.0 - d) * lx_hat + d * self.lx_hat
            lz_hat = (1.0 - d) * lz_hat + d * self.lz_hat
        self.lx_hat, self.lz_hat = lx_hat, lz_hat
        self._variable_update()
        self.iteration += 1
        return self

    def log_beliefs(self) -> np.ndarray:
        """Unnormalized ``B[j, x, z] = log Q + (1 - z) A^X + (1 - x) A^Z``."""
        b = np.broadcast_to(self.log_q, self.a_x.shape + (2, 2)).copy()
        b[..., :, 0] += self.a_x[..., None]
        b[..., 0, :] += self.a_z[..., None]
        return b

    def beliefs(self) -> np.ndarray:
        b = self.log_beliefs()
        flat = b.reshape(b.shape[:-2] + (4,))
        w = np.exp(flat - flat.max(axis=-1, keepdims=True))
        return g.normalize(w, "belief").reshape(b.shape)

    def decision(self) -> tuple[np.ndarray, np.ndarray]:
        labels = argmax_first(joint_to_labels(self.beliefs()))
        return LABEL_X[labels], LABEL_Z[labels]


def llr_iterate(state: LlrJointState) -> LlrJointState:
    return state.iterate()


def llr_beliefs(state: LlrJointState) -> np.ndarray:
    return state.beliefs()

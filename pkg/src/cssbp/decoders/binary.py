"""Probability-domain binary decoders: joint BP and separate BP.

Joint BP runs on the coupled factor graph: X-type checks talk to the z-nodes,
Z-type checks to the x-nodes, and the local factor Q_j couples x_j and z_j.
Messages are stored normalized, one 2-vector per edge, indexed by the value
of the binary variable on that edge. Syndromes with leading batch axes give
message arrays with the same leading axes.
"""

from __future__ import annotations

import numpy as np

from ..channel import LABEL_X, LABEL_Z, PauliPrior, marginals
from ..css_code import CssCode, Syndromes
from . import _graph as g
from .config import DecoderConfig
from .decisions import argmax_first, joint_to_labels


def _check_inputs(code: CssCode, prior: PauliPrior, syndromes: Syndromes) -> None:
    if prior.n != code.n:
        raise ValueError(f"prior covers {prior.n} qubits, code has n={code.n}")
    syndromes.check(code)


def check_update(layout: g.TannerLayout, msgs: np.ndarray, s: np.ndarray, config: DecoderConfig) -> np.ndarray:
    """Syndrome-conditioned check-to-variable messages for one Tanner graph."""
    if config.check_rule == "exact":
        return g.parity_check_probs(layout, msgs, s)
    llr = g.minsum_llr(layout, g.probs_to_llr(msgs), s, config.minsum_scale, None)
    return g.llr_to_probs(llr)


class JointBpState:
    """One joint-BP decode in progress.

    ``nu[e]`` / ``nu_hat[e]`` live on HX edges (messages about z_j),
    ``mu[e]`` / ``mu_hat[e]`` on HZ edges (about x_j). ``iterate`` advances
    the state in place by one flooding iteration and returns it.
    """

    _batched = ("nu", "mu", "nu_hat", "mu_hat", "sz", "sx")

    def __init__(self, code: CssCode, prior: PauliPrior, syndromes: Syndromes,
                 config: DecoderConfig | None = None):
        _check_inputs(code, prior, syndromes)
        self.code = code
        self.prior = prior
        self.sz, self.sx = syndromes.sz, syndromes.sx
        self.config = config or DecoderConfig()
        self.lx, self.lz = g.layouts(code)
        self.iteration = 0
        batch = self.sz.shape[:-1]
        self.nu_hat = np.full(batch + (self.lx.n_edges, 2), 0.5)
        self.mu_hat = np.full(batch + (self.lz.n_edges, 2), 0.5)
        self._variable_update()

    @property
    def syndromes(self) -> Syndromes:
        return Syndromes(self.sz, self.sx)

    def take(self, idx) -> JointBpState:
        return g.take_batch(self, idx, self._batched)

    def _variable_update(self) -> None:
        q = self.prior.tables
        excl_x, rho_x = self.lx.cols.scan(np.multiply, self.nu_hat, 1.0)
        excl_z, rho_z = self.lz.cols.scan(np.multiply, self.mu_hat, 1.0)
        # route through Q_j: sum out the other component of the qubit
        eta_x = np.einsum("jxz,...jx->...jz", q, rho_z)
        eta_z = np.einsum("jxz,...jz->...jx", q, rho_x)
        eps = self.config.epsilon
        self.nu = g.floor_messages(g.normalize(excl_x * eta_x[..., self.lx.edge_col, :]), eps)
        self.mu = g.floor_messages(g.normalize(excl_z * eta_z[..., self.lz.edge_col, :]), eps)

    def _check_update(self) -> None:
        cfg = self.config
        nu_hat = check_update(self.lx, self.nu, self.sz, cfg)
        mu_hat = check_update(self.lz, self.mu, self.sx, cfg)
        nu_hat = g.damp_geometric(nu_hat, self.nu_hat, cfg.damping)
        mu_hat = g.damp_geometric(mu_hat, self.mu_hat, cfg.damping)
        self.nu_hat = g.floor_messages(nu_hat, cfg.epsilon)
        self.mu_hat = g.floor_messages(mu_hat, cfg.epsilon)

    def iterate(self) -> JointBpState:
        self._check_update()
        self._variable_update()
        self.iteration += 1
        return self

    def _check_products(self) -> tuple[np.ndarray, np.ndarray]:
        rho_x = self.lx.cols.total(np.multiply, self.nu_hat, 1.0)
        rho_z = self.lz.cols.total(np.multiply, self.mu_hat, 1.0)
        return rho_x, rho_z

    def beliefs(self) -> np.ndarray:
        """Per-qubit 2x2 tables ``b[..., j, x, z]``."""
        rho_x, rho_z = self._check_products()
        b = self.prior.tables * rho_z[..., :, :, None] * rho_x[..., :, None, :]
        return g.normalize(b.reshape(b.shape[:-2] + (4,)), "belief").reshape(b.shape)

    def decision(self) -> tuple[np.ndarray, np.ndarray]:
        labels = argmax_first(joint_to_labels(self.beliefs()))
        return LABEL_X[labels], LABEL_Z[labels]

    def componentwise_estimates(self) -> tuple[np.ndarray, np.ndarray]:
        """``(x_hat, z_hat)``: argmax of the incoming check-message products per binary node."""
        rho_x, rho_z = self._check_products()
        return argmax_first(rho_z).astype(np.uint8), argmax_first(rho_x).astype(np.uint8)


class BinaryBpState:
    """Standard syndrome BP on one Tanner graph with per-variable prior ``q``."""

    _batched = ("v", "c", "s")

    def __init__(self, layout: g.TannerLayout, q: np.ndarray, s: np.ndarray,
                 config: DecoderConfig | None = None):
        self.layout = layout
        self.q = np.asarray(q, dtype=np.float64)
        self.s = np.asarray(s, dtype=np.uint8)
        self.config = config or DecoderConfig()
        self.iteration = 0
        self.c = np.full(self.s.shape[:-1] + (layout.n_edges, 2), 0.5)
        self._variable_update()

    def take(self, idx) -> BinaryBpState:
        return g.take_batch(self, idx, self._batched)

    def _variable_update(self) -> None:
        excl, _ = self.layout.cols.scan(np.multiply, self.c, 1.0)
        v = g.normalize(excl * self.q[self.layout.edge_col])
        self.v = g.floor_messages(v, self.config.epsilon)

    def iterate(self) -> BinaryBpState:
        cfg = self.config
        c = check_update(self.layout, self.v, self.s, cfg)
        c = g.damp_geometric(c, self.c, cfg.damping)
        self.c = g.floor_messages(c, cfg.epsilon)
        self._variable_update()
        self.iteration += 1
        return self

    def beliefs(self) -> np.ndarray:
        total = self.layout.cols.total(np.multiply, self.c, 1.0)
        return g.normalize(self.q * total, "belief")


class SeparateBpState:
    """Two disconnected binary decoders fed by the marginal priors.

    ``x`` decodes the x-component on HZ with QX and sX; ``z`` decodes the
    z-component on HX with QZ and sZ.
    """

    def __init__(self, code: CssCode, prior: PauliPrior, syndromes: Syndromes,
                 config: DecoderConfig | None = None):
        _check_inputs(code, prior, syndromes)
        self.code = code
        lx, lz = g.layouts(code)
        qx, qz = marginals(prior)
        self.x = BinaryBpState(lz, qx, syndromes.sx, config)
        self.z = BinaryBpState(lx, qz, syndromes.sz, config)

    @property
    def iteration(self) -> int:
        return self.x.iteration

    @property
    def sz(self) -> np.ndarray:
        return self.z.s

    @property
    def sx(self) -> np.ndarray:
        return self.x.s

    def take(self, idx) -> SeparateBpState:
        new = g.take_batch(self, idx, ())
        new.x = self.x.take(idx)
        new.z = self.z.take(idx)
        return new

    def iterate(self) -> SeparateBpState:
        self.x.iterate()
        self.z.iterate()
        return self

    def beliefs(self) -> np.ndarray:
        """Product tables ``bX(x) * bZ(z)``; the two components never interact."""
        return self.x.beliefs()[..., :, :, None] * self.z.beliefs()[..., :, None, :]

    def decision(self) -> tuple[np.ndarray, np.ndarray]:
        return (argmax_first(self.x.beliefs()).astype(np.uint8),
                argmax_first(self.z.beliefs()).astype(np.uint8))


def init_joint(code: CssCode, prior: PauliPrior, syndromes: Syndromes,
               config: DecoderConfig | None = None) -> JointBpState:
    return JointBpState(code, prior, syndromes, config)


def joint_iterate(state: JointBpState) -> JointBpState:
    return state.iterate()


def joint_beliefs(state: JointBpState) -> np.ndarray:
    return state.beliefs()

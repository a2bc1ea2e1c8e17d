from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channel import PauliPrior
from ..css_code import CssCode, PauliError, ResidualClass, Syndromes, classify_residual, parity, syndrome
from .binary import JointBpState, SeparateBpState
from .config import DecoderConfig
from .decisions import argmax_first, marginal_estimates
from .four_state import FourStateState
from .llr import LlrJointState

DECODERS = ("joint", "joint-llr", "separate", "four-state")


@dataclass
class DecodeResult:
    """Outcome of one decode.

    ``beliefs`` has shape ``(n, 2, 2)`` indexed ``[j, x, z]`` for the binary
    decoders (a product table for ``separate``) and ``(n, 4)`` in label order
    for ``four-state``. ``componentwise`` and ``marginal`` are the
    message-product and belief-marginal componentwise estimates, filled for
    the joint decoders.
    """

    decoder: str
    beliefs: np.ndarray
    decision: PauliError
    iterations: int
    converged: bool
    residual: ResidualClass | None = None
    componentwise: PauliError | None = None
    marginal: PauliError | None = None


def make_state(code: CssCode, prior: PauliPrior, syndromes: Syndromes,
               config: DecoderConfig, decoder: str):
    if decoder == "joint":
        return JointBpState(code, prior, syndromes, config)
    if decoder == "joint-llr":
        return LlrJointState(code, prior, syndromes, config)
    if decoder == "separate":
        return SeparateBpState(code, prior, syndromes, config)
    if decoder == "four-state":
        return FourStateState(code, prior, syndromes, config)
    raise ValueError(f"unknown decoder {decoder!r}; expected one of {DECODERS}")


def _decide(state) -> tuple[np.ndarray, PauliError]:
    x, z = state.decision()
    return state.beliefs(), PauliError(x, z)


def decode(code: CssCode, prior: PauliPrior, syndromes: Syndromes,
           config: DecoderConfig | None = None, decoder: str = "joint",
           true_error: PauliError | None = None) -> DecodeResult:
    """Run ``decoder`` until its hard decision reproduces ``syndromes``.

    The stopping test runs after every iteration, so at least one iteration
    is done unless ``max_iterations`` is 0, in which case the result is the
    prior-only decision. With ``early_stop`` off, exactly ``max_iterations``
    iterations are run.
    """
    config = config or DecoderConfig()
    state = make_state(code, prior, syndromes, config, decoder)
    beliefs, decision = _decide(state)
    matched = syndrome(code, decision) == syndromes
    for _ in range(config.max_iterations):
        state.iterate()
        beliefs, decision = _decide(state)
        matched = syndrome(code, decision) == syndromes
        if matched and config.early_stop:
            break
    result = DecodeResult(decoder, beliefs, decision, state.iteration, matched)
    if decoder in ("joint", "joint-llr"):
        result.marginal = marginal_estimates(beliefs)
        if decoder == "joint":
            result.componentwise = PauliError(*state.componentwise_estimates())
    if true_error is not None:
        result.residual = classify_residual(code, true_error, decision)
    return result


def _parity_ok(rows, bits: np.ndarray, target: np.ndarray) -> bool:
    return all((int(bits[list(r)].sum()) & 1) == t for r, t in zip(rows, target))


def separate_decode(code: CssCode, prior: PauliPrior, syndromes: Syndromes,
                    config: DecoderConfig | None = None) -> tuple[DecodeResult, DecodeResult]:
    """Run the two component decoders independently; results for x and for z.

    Each result's ``beliefs`` is an ``(n, 2)`` array for its own component and
    its ``decision`` carries only that component (the other is zero). Each
    component stops on its own syndrome match.
    """
    config = config or DecoderConfig()
    state = SeparateBpState(code, prior, syndromes, config)
    zero = np.zeros(code.n, dtype=np.uint8)
    results = []
    for sub, rows, target in ((state.x, code.hz_rows, syndromes.sx), (state.z, code.hx_rows, syndromes.sz)):
        bits = argmax_first(sub.beliefs())
        ok = _parity_ok(rows, bits, target)
        for _ in range(config.max_iterations):
            sub.iterate()
            bits = argmax_first(sub.beliefs())
            ok = _parity_ok(rows, bits, target)
            if ok and config.early_stop:
                break
        results.append((sub, bits, ok))
    (sx_state, xb, xok), (sz_state, zb, zok) = results
    return (
        DecodeResult("separate", sx_state.beliefs(), PauliError(xb, zero), sx_state.iteration, xok),
        DecodeResult("separate", sz_state.beliefs(), PauliError(zero, zb), sz_state.iteration, zok),
    )


@dataclass
class BatchResult:
    """Per-trial outcome of :func:`decode_batch`; arrays indexed by trial."""

    x: np.ndarray  # (B, n)
    z: np.ndarray  # (B, n)
    iterations: np.ndarray  # (B,)
    converged: np.ndarray  # (B,) bool


def decode_batch(code: CssCode, prior: PauliPrior, sz: np.ndarray, sx: np.ndarray,
                 config: DecoderConfig | None = None, decoder: str = "joint") -> BatchResult:
    """Decode many syndrome pairs at once; same per-trial result as :func:`decode`.

    Trials that have matched their syndrome leave the batch when
    ``early_stop`` is on, so the work shrinks as the batch converges.
    """
    config = config or DecoderConfig()
    sz = np.atleast_2d(np.asarray(sz, dtype=np.uint8))
    sx = np.atleast_2d(np.asarray(sx, dtype=np.uint8))
    if sz.shape[0] != sx.shape[0]:
        raise ValueError("sz and sx must hold the same number of trials")
    b = sz.shape[0]
    out = BatchResult(np.zeros((b, code.n), np.uint8), np.zeros((b, code.n), np.uint8),
                      np.zeros(b, np.int64), np.zeros(b, bool))
    state = make_state(code, prior, Syndromes(sz, sx), config, decoder)
    active = np.arange(b)
    hx, hz = code.hx_dense, code.hz_dense
    while True:
        x, z = state.decision()
        ok = np.all(parity(hx, z) == state.sz, axis=-1) & np.all(parity(hz, x) == state.sx, axis=-1)
        out.x[active], out.z[active] = x, z
        out.converged[active] = ok
        out.iterations[active] = state.iteration
        if state.iteration >= config.max_iterations:
            break
        if config.early_stop and state.iteration > 0 and ok.any():
            keep = np.flatnonzero(~ok)
            if keep.size == 0:
                break
            state = state.take(keep)
            active = active[keep]
        state.iterate()
    return out


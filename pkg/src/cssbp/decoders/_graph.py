"""Edge layouts and vectorized message kernels shared by the decoders.

Edges of one Tanner graph are numbered row-major. Rows and columns are
gathered into padded slot arrays; the pad slot points at an extra edge that
holds the neutral element of whatever reduction is running. "Exclusive"
reductions (everything on the row or column except the edge itself) use
prefix/suffix scans, so zero entries never require division.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from ..css_code import CssCode


class DecoderFault(RuntimeError):
    """A message or belief vanished identically; the instance is inconsistent."""


def take_batch(state, idx, names: tuple[str, ...]):
    """Shallow copy of ``state`` keeping only batch entries ``idx`` of ``names``."""
    new = copy.copy(state)
    for name in names:
        setattr(new, name, getattr(state, name)[idx])
    return new


@dataclass(frozen=True)
class Slots:
    """Padded groups of edge indices (one group per check row or per column).

    Reductions take values shaped ``(..., n_edges, k)``: any leading batch
    axes, edges second to last, message entries last.
    """

    index: np.ndarray  # (groups, width), pad = n_edges
    mask: np.ndarray  # (groups, width)
    n_edges: int

    @classmethod
    def build(cls, groups: list[list[int]], n_edges: int) -> Slots:
        width = max((len(g) for g in groups), default=0)
        index = np.full((len(groups), width), n_edges, dtype=np.intp)
        for r, g in enumerate(groups):
            index[r, : len(g)] = g
        return cls(index, index < n_edges, n_edges)

    @cached_property
    def edges(self) -> np.ndarray:
        return self.index[self.mask]

    def _gather(self, values: np.ndarray, neutral: float) -> np.ndarray:
        pad = np.full(values.shape[:-2] + (1, values.shape[-1]), neutral, dtype=values.dtype)
        return np.take(np.concatenate([values, pad], axis=-2), self.index, axis=-2)

    def scan(self, ufunc: np.ufunc, values: np.ndarray, neutral: float) -> tuple[np.ndarray, np.ndarray]:
        """Exclusive per-edge reduction and per-group total."""
        g = self._gather(values, neutral)  # (..., groups, width, k)
        width = self.index.shape[1]
        if width == 0:
            total = np.full(g.shape[:-2] + (values.shape[-1],), neutral, dtype=values.dtype)
            return np.empty_like(values), total
        pre = np.empty_like(g)
        suf = np.empty_like(g)
        pre[..., 0, :] = neutral
        suf[..., -1, :] = neutral
        if width > 1:
            pre[..., 1:, :] = ufunc.accumulate(g[..., :-1, :], axis=-2)
            suf[..., :-1, :] = ufunc.accumulate(g[..., :0:-1, :], axis=-2)[..., ::-1, :]
        out = np.empty_like(values)
        out[..., self.edges, :] = ufunc(pre, suf)[..., self.mask, :]
        return out, ufunc(pre[..., -1, :], g[..., -1, :])

    def total(self, ufunc: np.ufunc, values: np.ndarray, neutral: float) -> np.ndarray:
        g = self._gather(values, neutral)
        if g.shape[-2] == 0:
            return np.full(g.shape[:-2] + (values.shape[-1],), neutral, dtype=values.dtype)
        return ufunc.reduce(g, axis=-2)


@dataclass(frozen=True)
class TannerLayout:
    """One check matrix as an edge list with row and column slot tables."""

    n: int
    m: int
    edge_row: np.ndarray
    edge_col: np.ndarray
    rows: Slots
    cols: Slots

    @property
    def n_edges(self) -> int:
        return self.edge_row.shape[0]

    @classmethod
    def from_rows(cls, rows, n: int) -> TannerLayout:
        edge_row, edge_col, row_groups = [], [], []
        col_groups: list[list[int]] = [[] for _ in range(n)]
        for i, row in enumerate(rows):
            group = []
            for j in row:
                e = len(edge_row)
                edge_row.append(i)
                edge_col.append(j)
                group.append(e)
                col_groups[j].append(e)
            row_groups.append(group)
        n_edges = len(edge_row)
        return cls(
            n,
            len(rows),
            np.asarray(edge_row, dtype=np.intp),
            np.asarray(edge_col, dtype=np.intp),
            Slots.build(row_groups, n_edges),
            Slots.build(col_groups, n_edges),
        )


@lru_cache(maxsize=64)
def layouts(code: CssCode) -> tuple[TannerLayout, TannerLayout]:
    """``(X-type layout over HX rows, Z-type layout over HZ rows)``."""
    return TannerLayout.from_rows(code.hx_rows, code.n), TannerLayout.from_rows(code.hz_rows, code.n)


@lru_cache(maxsize=64)
def joint_column_slots(code: CssCode) -> Slots:
    """Per-qubit slots over X edges followed by Z edges (Z edges offset by |E_X|)."""
    lx, lz = layouts(code)
    groups: list[list[int]] = [[] for _ in range(code.n)]
    for e, j in enumerate(lx.edge_col):
        groups[j].append(e)
    for e, j in enumerate(lz.edge_col):
        groups[j].append(lx.n_edges + e)
    return Slots.build(groups, lx.n_edges + lz.n_edges)


# --------------------------------------------------------------------------
# Message arithmetic
# --------------------------------------------------------------------------

def normalize(a: np.ndarray, what: str = "message") -> np.ndarray:
    """Scale the last axis to sum 1; an all-zero vector is a fault."""
    s = a.sum(axis=-1, keepdims=True)
    if np.any(s <= 0.0) or not np.all(np.isfinite(s)):
        raise DecoderFault(f"{what} vanished or overflowed during normalization")
    return a / s


def floor_messages(a: np.ndarray, eps: float) -> np.ndarray:
    if eps <= 0.0:
        return a
    return normalize(np.maximum(a, eps))


def damp_geometric(new: np.ndarray, old: np.ndarray, d: float) -> np.ndarray:
    if d <= 0.0:
        return new
    return normalize(new ** (1.0 - d) * old**d)


def syndrome_sign(layout: TannerLayout, s: np.ndarray) -> np.ndarray:
    """Per-edge ``(-1)^{s_i}`` for the edge's check."""
    return 1.0 - 2.0 * s[..., layout.edge_row].astype(np.float64)


def parity_check_probs(layout: TannerLayout, msgs: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Exact syndrome-conditioned parity update on normalized 2-vectors.

    With ``d_k = r_k(0) - r_k(1)``, the parity of the other edges is even with
    probability ``(1 + prod d_k) / 2``.
    """
    diff = msgs[..., 0:1] - msgs[..., 1:2]
    excl, _ = layout.rows.scan(np.multiply, diff, 1.0)
    d = syndrome_sign(layout, s) * excl[..., 0]
    return np.stack([(1.0 + d) * 0.5, (1.0 - d) * 0.5], axis=-1)


def boxplus_llr(layout: TannerLayout, llr: np.ndarray, s: np.ndarray, clamp: float | None) -> np.ndarray:
    """``(-1)^s 2 atanh(prod tanh(L/2))`` over the other edges of each check."""
    if clamp is not None:
        llr = np.clip(llr, -clamp, clamp)
    t = np.tanh(0.5 * llr)
    excl, _ = layout.rows.scan(np.multiply, t[..., None], 1.0)
    with np.errstate(divide="ignore"):
        out = syndrome_sign(layout, s) * 2.0 * np.arctanh(excl[..., 0])
    if clamp is not None:
        out = np.clip(out, -clamp, clamp)
    return out


def minsum_llr(layout: TannerLayout, llr: np.ndarray, s: np.ndarray, scale: float, clamp: float | None) -> np.ndarray:
    """Sign product times scaled minimum magnitude over the other edges."""
    if clamp is not None:
        llr = np.clip(llr, -clamp, clamp)
    sign = np.where(llr < 0.0, -1.0, 1.0)
    sgn, _ = layout.rows.scan(np.multiply, sign[..., None], 1.0)
    mag, _ = layout.rows.scan(np.minimum, np.abs(llr)[..., None], np.inf)
    out = syndrome_sign(layout, s) * sgn[..., 0] * scale * mag[..., 0]
    if clamp is not None:
        out = np.clip(out, -clamp, clamp)
    return out


def probs_to_llr(p: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(p[..., 0]) - np.log(p[..., 1])


def llr_to_probs(llr: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        p0 = 1.0 / (1.0 + np.exp(-llr))
        p1 = 1.0 / (1.0 + np.exp(llr))
    return np.stack([p0, p1], axis=-1)


def xor_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distribution of the XOR of two independent bits (last axis = 2)."""
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]
    out[..., 1] = a[..., 0] * b[..., 1] + a[..., 1] * b[..., 0]
    return out

"""Brute-force posterior weights and exact marginals for small codes.

The x- and z-constraints never mix, so exact marginals enumerate the x
assignments satisfying ``HZ x = sX`` and the z assignments satisfying
``HX z = sZ`` separately and then weight every surviving pair by
``prod_j Q_j(x_j, z_j)``. Every pair with a nonzero indicator is visited.
"""

from __future__ import annotations

import itertools

import numpy as np

from .channel import LABEL_X, LABEL_Z, FourStatePrior, PauliPrior
from .css_code import CssCode, PauliError, Syndromes

DEFAULT_LIMIT = 12


class OracleLimitError(ValueError):
    pass


class ZeroPosteriorError(ValueError):
    pass


def _satisfies(rows, bits, target) -> bool:
    return all((sum(int(bits[j]) for j in r) & 1) == int(t) for r, t in zip(rows, target))


def weight_p2(code: CssCode, prior: PauliPrior, error: PauliError, syndromes: Syndromes) -> float:
    """Unnormalized joint posterior weight of the pair ``(x, z)``."""
    if prior.n != code.n or error.n != code.n:
        raise ValueError("dimension mismatch between code, prior and error")
    syndromes.check(code)
    if not (_satisfies(code.hx_rows, error.z, syndromes.sz) and _satisfies(code.hz_rows, error.x, syndromes.sx)):
        return 0.0
    w = 1.0
    for j in range(code.n):
        w *= float(prior.tables[j, error.x[j], error.z[j]])
    return w


def weight_p4(code: CssCode, prior4: FourStatePrior, labels, syndromes: Syndromes) -> float:
    """Unnormalized Pauli-label posterior weight; ``labels`` are label indices 0..3."""
    labels = np.asarray(labels, dtype=np.intp)
    if prior4.n != code.n or labels.shape != (code.n,):
        raise ValueError("dimension mismatch between code, prior and labels")
    syndromes.check(code)
    zs = LABEL_Z[labels]
    xs = LABEL_X[labels]
    if not (_satisfies(code.hx_rows, zs, syndromes.sz) and _satisfies(code.hz_rows, xs, syndromes.sx)):
        return 0.0
    w = 1.0
    for j in range(code.n):
        w *= float(prior4.tables[j, labels[j]])
    return w


def _all_bits(n: int) -> np.ndarray:
    return ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def _solutions(rows, n: int, target: np.ndarray) -> np.ndarray:
    bits = _all_bits(n)
    ok = np.ones(bits.shape[0], dtype=bool)
    for r, t in zip(rows, target):
        ok &= (bits[:, list(r)].sum(axis=1) & 1) == t
    return bits[ok]


def exact_marginals(code: CssCode, prior: PauliPrior, syndromes: Syndromes,
                    limit: int = DEFAULT_LIMIT) -> np.ndarray:
    """Exact per-qubit posterior tables ``(n, 2, 2)`` indexed ``[j, x, z]``."""
    if code.n > limit:
        raise OracleLimitError(f"n={code.n} exceeds the enumeration limit {limit}")
    if prior.n != code.n:
        raise ValueError("dimension mismatch between code and prior")
    syndromes.check(code)
    xs = _solutions(code.hz_rows, code.n, syndromes.sx)
    zs = _solutions(code.hx_rows, code.n, syndromes.sz)
    q = prior.tables
    w = np.ones((xs.shape[0], zs.shape[0]))
    for j in range(code.n):
        w *= q[j][xs[:, j][:, None], zs[:, j][None, :]]
    total = w.sum()
    if total <= 0.0:
        raise ZeroPosteriorError("syndrome has zero posterior probability under this prior")
    out = np.empty((code.n, 2, 2))
    for j in range(code.n):
        for x in (0, 1):
            rows_sel = w[xs[:, j] == x]
            for z in (0, 1):
                out[j, x, z] = rows_sel[:, zs[:, j] == z].sum()
    return out / total


def enumerate_p2(code: CssCode, prior: PauliPrior, syndromes: Syndromes):
    """Yield ``((x, z), weight)`` over all 4**n pairs, qubit-wise in label order."""
    for labels in itertools.product(range(4), repeat=code.n):
        lab = np.asarray(labels, dtype=np.intp)
        e = PauliError(LABEL_X[lab], LABEL_Z[lab])
        yield e, weight_p2(code, prior, e, syndromes)

"""Local Pauli priors Q_j(x, z), their relabelings, and seeded error sampling.

Tables are stored as arrays of shape ``(n, 2, 2)`` indexed ``[j, x, z]``.
The four-state view uses label order ``0, 1, w, w^2`` which carries
``(x, z) = (0,0), (1,0), (0,1), (1,1)``; label index ``k`` therefore has
``x = k & 1`` and ``z = k >> 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .css_code import PauliError

__all__ = [
    "LABEL_X",
    "LABEL_Z",
    "FourStatePrior",
    "PauliPrior",
    "depolarizing_prior",
    "label_of",
    "marginals",
    "parse_prior_spec",
    "relabel_prior",
    "sample_error",
    "unrelabel_prior",
    "y_only_prior",
]

LABEL_X = np.array([0, 1, 0, 1], dtype=np.uint8)
LABEL_Z = np.array([0, 0, 1, 1], dtype=np.uint8)

_SUM_TOL = 1e-12


def label_of(x, z):
    """Index of the label phi(x, z) = x + w z in label order."""
    return np.asarray(x, dtype=np.intp) + 2 * np.asarray(z, dtype=np.intp)


def _check_tables(t: np.ndarray, width: int) -> None:
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValueError("prior entries must be finite and nonnegative")
    sums = t.reshape(t.shape[0], width).sum(axis=1)
    if np.any(np.abs(sums - 1.0) > _SUM_TOL):
        raise ValueError("every prior table must sum to 1")


@dataclass(frozen=True)
class PauliPrior:
    tables: np.ndarray

    def __post_init__(self) -> None:
        t = np.array(self.tables, dtype=np.float64)
        if t.ndim != 3 or t.shape[1:] != (2, 2):
            raise ValueError(f"prior tables must have shape (n, 2, 2), got {t.shape}")
        _check_tables(t, 4)
        t.setflags(write=False)
        object.__setattr__(self, "tables", t)

    @property
    def n(self) -> int:
        return self.tables.shape[0]

    @classmethod
    def from_label_order(cls, rows) -> PauliPrior:
        """Build from per-qubit 4-vectors in (x,z) order (0,0),(1,0),(0,1),(1,1)."""
        return unrelabel_prior(FourStatePrior(np.asarray(rows, dtype=np.float64)))

    @classmethod
    def product(cls, qx, qz) -> PauliPrior:
        qx = np.asarray(qx, dtype=np.float64)
        qz = np.asarray(qz, dtype=np.float64)
        return cls(qx[:, :, None] * qz[:, None, :])


@dataclass(frozen=True)
class FourStatePrior:
    tables: np.ndarray

    def __post_init__(self) -> None:
        t = np.array(self.tables, dtype=np.float64)
        if t.ndim != 2 or t.shape[1] != 4:
            raise ValueError(f"four-state tables must have shape (n, 4), got {t.shape}")
        _check_tables(t, 4)
        t.setflags(write=False)
        object.__setattr__(self, "tables", t)

    @property
    def n(self) -> int:
        return self.tables.shape[0]


def depolarizing_prior(n: int, p: float) -> PauliPrior:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    t = np.empty((n, 2, 2))
    t[:, 0, 0] = 1.0 - p
    t[:, 1, 0] = t[:, 0, 1] = t[:, 1, 1] = p / 3.0
    return PauliPrior(t)


def y_only_prior(n: int, p: float) -> PauliPrior:
    """Only Y errors: Q(0,0) = 1-p, Q(1,1) = p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    t = np.zeros((n, 2, 2))
    t[:, 0, 0] = 1.0 - p
    t[:, 1, 1] = p
    return PauliPrior(t)


def marginals(prior: PauliPrior) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(QX, QZ)``, each of shape ``(n, 2)``."""
    return prior.tables.sum(axis=2), prior.tables.sum(axis=1)


def relabel_prior(prior: PauliPrior) -> FourStatePrior:
    return FourStatePrior(prior.tables[:, LABEL_X, LABEL_Z])


def unrelabel_prior(prior: FourStatePrior) -> PauliPrior:
    t = np.empty((prior.n, 2, 2))
    t[:, LABEL_X, LABEL_Z] = prior.tables
    return PauliPrior(t)


def sample_error(prior: PauliPrior, seed: int) -> PauliError:
    """Draw one (x_j, z_j) per qubit from Q_j.

    Uses numpy's PCG64 generator seeded with ``seed``; one uniform per qubit,
    inverted through the cumulative table in label order.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(prior.n)
    cum = np.cumsum(prior.tables[:, LABEL_X, LABEL_Z], axis=1)
    labels = (u[:, None] >= cum[:, :3]).sum(axis=1)
    return PauliError(LABEL_X[labels], LABEL_Z[labels])


def parse_prior_spec(spec: str, n: int, p: float | None = None) -> PauliPrior:
    """Build a prior from a CLI spec string.

    Accepted forms: ``depolarizing``, ``depolarizing p=<float>``, ``y-only``,
    ``y-only p=<float>``, an inline JSON array of ``n`` 4-entry tables in
    (x,z) order (0,0),(1,0),(0,1),(1,1), or ``@<path>`` to a file holding
    such an array. An explicit ``p`` argument overrides the one in the spec.
    """
    s = spec.strip()
    if s.startswith("@"):
        with open(s[1:], encoding="utf-8") as fh:
            s = fh.read().strip()
    if s.startswith("["):
        try:
            rows = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ValueError(f"bad JSON prior: {exc}") from None
        arr = np.asarray(rows, dtype=np.float64)
        if arr.shape != (n, 4):
            raise ValueError(f"JSON prior must be {n} tables of 4 entries, got shape {arr.shape}")
        return PauliPrior.from_label_order(arr)

    parts = s.split()
    family = parts[0] if parts else ""
    spec_p = None
    for part in parts[1:]:
        key, _, val = part.partition("=")
        if key != "p":
            raise ValueError(f"unknown prior parameter {part!r}")
        try:
            spec_p = float(val)
        except ValueError:
            raise ValueError(f"bad probability {val!r}") from None
    rate = p if p is not None else spec_p
    if family not in ("depolarizing", "y-only"):
        raise ValueError(f"unknown prior family {family!r}")
    if rate is None:
        raise ValueError(f"prior {family!r} needs an error rate p")
    return depolarizing_prior(n, rate) if family == "depolarizing" else y_only_prior(n, rate)

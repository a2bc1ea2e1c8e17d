"""Seeded Monte Carlo trials over decoders and error rates.

Every trial draws its error from its own seed, derived from the base seed,
the error rate and the trial index. The decoder is deliberately left out of
the derivation so that all decoders at a given rate face the same errors.
Trials are decoded in batches; batches may run in worker processes (capped
by ``CSSBP_THREADS``) and are reassembled by trial index, so the report does
not depend on scheduling.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import PauliPrior, parse_prior_spec, sample_error
from .css_code import CssCode, PauliError, ResidualClass, classify_residual, format_css_support_table, load_code, parity
from .decoders import DECODERS, DecoderConfig, decode_batch

__all__ = [
    "CSV_HEADER",
    "PointOutcomes",
    "PointStats",
    "StatsReport",
    "TrialConfig",
    "run_point",
    "run_trials",
    "thread_cap",
    "trial_seed",
]

CSV_HEADER = ("decoder", "p", "trials", "converged", "exact", "stabilizer", "logical", "mismatch", "mean_iters")
BATCH = 1024
_MASK64 = (1 << 64) - 1
_CLASS_CODE = {c: i for i, c in enumerate(ResidualClass)}


def trial_seed(base_seed: int, rate: float, trial: int) -> int:
    """``base_seed XOR H(rate, trial)`` with a stable 64-bit hash."""
    digest = hashlib.blake2b(f"{float(rate)!r}|{int(trial)}".encode(), digest_size=8).digest()
    return (int(base_seed) ^ int.from_bytes(digest, "little")) & _MASK64


def thread_cap() -> int:
    raw = os.environ.get("CSSBP_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"CSSBP_THREADS must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise ValueError(f"CSSBP_THREADS must be a positive integer, got {raw!r}")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class TrialConfig:
    code: str = "paper24"
    prior: str = "depolarizing"
    rates: tuple[float, ...] = (0.1,)
    trials: int = 1000
    seed: int = 0
    decoders: tuple[str, ...] = ("joint",)
    decoder_config: DecoderConfig = field(default_factory=DecoderConfig)
    output_format: str = "csv"
    out: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        object.__setattr__(self, "decoders", tuple(self.decoders))
        if isinstance(self.trials, bool) or not isinstance(self.trials, int) or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not self.rates:
            raise ValueError("at least one error rate is required")
        for r in self.rates:
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"error rate {r} outside [0, 1]")
        if not self.decoders:
            raise ValueError("at least one decoder is required")
        for d in self.decoders:
            if d not in DECODERS:
                raise ValueError(f"unknown decoder {d!r}; expected one of {DECODERS}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.output_format!r}")

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "prior": self.prior,
            "rates": list(self.rates),
            "trials": self.trials,
            "seed": self.seed,
            "decoders": list(self.decoders),
            "decoder_config": self.decoder_config.to_dict(),
            "format": self.output_format,
            "out": self.out,
        }

    @classmethod
    def from_dict(cls, data: dict) -> TrialConfig:
        data = dict(data)
        known = {"code", "prior", "rates", "trials", "seed", "decoders", "decoder_config", "format", "out"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown trial config keys: {sorted(unknown)}")
        if "decoder_config" in data:
            data["decoder_config"] = DecoderConfig.from_dict(data["decoder_config"])
        if "format" in data:
            data["output_format"] = data.pop("format")
        return cls(**data)

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form, excluding where the output goes."""
        body = self.to_dict()
        body.pop("out")
        body.pop("format")
        return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


@dataclass
class PointOutcomes:
    """Per-trial results at one (decoder, rate); arrays indexed by trial."""

    classes: np.ndarray  # int codes into ResidualClass order
    iterations: np.ndarray
    converged: np.ndarray

    def residual(self, k: int) -> ResidualClass:
        return list(ResidualClass)[int(self.classes[k])]


@dataclass(frozen=True)
class PointStats:
    decoder: str
    p: float
    trials: int
    converged: int
    exact: int
    stabilizer: int
    logical: int
    mismatch: int
    mean_iters: float

    def row(self) -> list[str]:
        return [self.decoder, repr(self.p), str(self.trials), str(self.converged), str(self.exact),
                str(self.stabilizer), str(self.logical), str(self.mismatch), f"{self.mean_iters:.4f}"]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class StatsReport:
    points: list[PointStats]
    metadata: dict

    def point(self, decoder: str, p: float) -> PointStats:
        for pt in self.points:
            if pt.decoder == decoder and pt.p == float(p):
                return pt
        raise KeyError((decoder, p))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for pt in self.points:
            w.writerow(pt.row())
        return buf.getvalue()

    def to_json(self) -> str:
        body = {"metadata": self.metadata, "points": [pt.to_dict() for pt in self.points]}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()


def _sample_errors(prior: PauliPrior, rate: float, base_seed: int, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    errs = [sample_error(prior, trial_seed(base_seed, rate, k)) for k in range(start, stop)]
    return np.array([e.x for e in errs], dtype=np.uint8), np.array([e.z for e in errs], dtype=np.uint8)


def _run_batch(code: CssCode, prior: PauliPrior, rate: float, decoder: str, config: DecoderConfig,
               base_seed: int, start: int, stop: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ex, ez = _sample_errors(prior, rate, base_seed, start, stop)
    sz, sx = parity(code.hx_dense, ez), parity(code.hz_dense, ex)
    res = decode_batch(code, prior, sz, sx, config, decoder)
    rx, rz = ex ^ res.x, ez ^ res.z
    classes = np.full(stop - start, _CLASS_CODE[ResidualClass.EXACT], dtype=np.int8)
    nonzero = rx.any(axis=1) | rz.any(axis=1)
    bad = (parity(code.hx_dense, rz) != 0).any(axis=1) | (parity(code.hz_dense, rx) != 0).any(axis=1)
    classes[bad] = _CLASS_CODE[ResidualClass.SYNDROME_MISMATCH]
    # the remaining residuals have zero syndrome: stabilizer or logical
    for k in np.flatnonzero(nonzero & ~bad):
        cls = classify_residual(code, PauliError(ex[k], ez[k]), PauliError(res.x[k], res.z[k]))
        classes[k] = _CLASS_CODE[cls]
    return classes, res.iterations, res.converged


def _batches(trials: int) -> list[tuple[int, int]]:
    return [(a, min(a + BATCH, trials)) for a in range(0, trials, BATCH)]


def _collect(parts: list[tuple[np.ndarray, np.ndarray, np.ndarray]]) -> PointOutcomes:
    return PointOutcomes(*(np.concatenate(col) for col in zip(*parts)))


def run_point(code: CssCode, prior: PauliPrior, rate: float, decoder: str, trials: int,
              seed: int = 0, config: DecoderConfig | None = None) -> PointOutcomes:
    """All trials at one (decoder, rate), in process."""
    config = config or DecoderConfig()
    return _collect([_run_batch(code, prior, rate, decoder, config, seed, a, b) for a, b in _batches(trials)])


def _summarize(decoder: str, rate: float, out: PointOutcomes) -> PointStats:
    counts = np.bincount(out.classes, minlength=len(ResidualClass))
    c = {cls: int(counts[i]) for cls, i in _CLASS_CODE.items()}
    return PointStats(
        decoder=decoder,
        p=rate,
        trials=int(out.classes.size),
        converged=int(out.converged.sum()),
        exact=c[ResidualClass.EXACT],
        stabilizer=c[ResidualClass.STABILIZER],
        logical=c[ResidualClass.LOGICAL],
        mismatch=c[ResidualClass.SYNDROME_MISMATCH],
        mean_iters=float(out.iterations.mean()),
    )


def run_trials(config: TrialConfig, code: CssCode | None = None, workers: int | None = None) -> StatsReport:
    """Run every (decoder, rate) point of ``config``; deterministic for a fixed config.

    ``code`` skips loading ``config.code`` when already at hand. ``workers``
    defaults to ``CSSBP_THREADS`` (or the CPU count).
    """
    code = code if code is not None else load_code(config.code)
    priors = {r: parse_prior_spec(config.prior, code.n, r) for r in config.rates}
    jobs = [(d, r, a, b) for d in config.decoders for r in config.rates for a, b in _batches(config.trials)]
    workers = min(workers or thread_cap(), len(jobs))
    args = [(code, priors[r], r, d, config.decoder_config, config.seed, a, b) for d, r, a, b in jobs]
    if workers <= 1:
        results = [_run_batch(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_batch, *zip(*args)))
    grouped: dict[tuple[str, float], list] = {}
    for (d, r, _, _), res in zip(jobs, results):
        grouped.setdefault((d, r), []).append(res)
    points = [_summarize(d, r, _collect(grouped[(d, r)])) for d in config.decoders for r in config.rates]
    digest = hashlib.sha256(format_css_support_table(code).encode()).hexdigest()
    metadata = {
        "seed": config.seed,
        "config_hash": config.config_hash(),
        "code": {"name": code.name, "n": code.n, "mX": code.mx, "mZ": code.mz, "sha256": digest},
        "prior": config.prior,
        "decoder_config": config.decoder_config.to_dict(),
    }
    return StatsReport(points, metadata)

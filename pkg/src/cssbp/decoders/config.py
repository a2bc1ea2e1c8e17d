from __future__ import annotations

from dataclasses import asdict, dataclass, fields

CHECK_RULES = ("exact", "min-sum")


@dataclass(frozen=True)
class DecoderConfig:
    """Iteration budget and numerical knobs shared by all decoders.

    ``epsilon`` floors probability-domain messages before renormalizing;
    ``llr_clamp`` bounds LLR magnitudes in the LLR-domain decoder (``None``
    disables it). Damping is geometric on probability vectors and convex on
    LLRs, applied to check-to-variable messages.
    """

    max_iterations: int = 50
    epsilon: float = 0.0
    check_rule: str = "exact"
    minsum_scale: float = 1.0
    damping: float = 0.0
    early_stop: bool = True
    llr_clamp: float | None = 30.0

    def __post_init__(self) -> None:
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if not 0.0 <= self.epsilon <= 1e-3:
            raise ValueError("epsilon must lie in [0, 1e-3]")
        if self.check_rule not in CHECK_RULES:
            raise ValueError(f"check_rule must be one of {CHECK_RULES}")
        if not 0.0 < self.minsum_scale <= 1.0:
            raise ValueError("minsum_scale must lie in (0, 1]")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError("damping must lie in [0, 1)")
        if self.llr_clamp is not None and self.llr_clamp <= 0.0:
            raise ValueError("llr_clamp must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> DecoderConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown decoder config keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)

    def replace(self, **changes) -> DecoderConfig:
        return DecoderConfig(**{**asdict(self), **changes})

"""n-widths of diagonal operators and multiplier classes."""

from ._nwidths import (
    MultiplierSequence,
    WidthEstimate,
    certify_rank_one_gap,
    duality_check,
    extension_chain,
    fit,
    regime_classify,
    svd_oracle,
    sweep,
    widths,
)

__all__ = [
    "MultiplierSequence",
    "WidthEstimate",
    "certify_rank_one_gap",
    "duality_check",
    "extension_chain",
    "fit",
    "regime_classify",
    "svd_oracle",
    "sweep",
    "widths",
]

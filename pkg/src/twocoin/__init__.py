"""Exact Barker MCMC with intractable proposals via the two-coin Bernoulli factory."""

from .distributions import GaussianParams, RngStream
from .factory import (
    BoundViolation,
    FactoryTimeout,
    LoopStats,
    TwoCoinInputs,
    expected_loops,
    make_normalizer_coin,
    two_coin,
)
from .kernels import ChainTrace, TargetDensity, run_block_chain, run_chain, tune_scale
from .proposals import GaussianRandomWalk, RamProposal, TruncGauss1D, TruncGaussOrthant

__version__ = "0.1.0"

__all__ = [
    "BoundViolation",
    "ChainTrace",
    "FactoryTimeout",
    "GaussianParams",
    "GaussianRandomWalk",
    "LoopStats",
    "RamProposal",
    "RngStream",
    "TargetDensity",
    "TruncGauss1D",
    "TruncGaussOrthant",
    "TwoCoinInputs",
    "expected_loops",
    "make_normalizer_coin",
    "run_block_chain",
    "run_chain",
    "tune_scale",
    "two_coin",
]

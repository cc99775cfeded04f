"""One-dimensional targets: the Gamma toy target and a bimodal mixture."""

from __future__ import annotations

import math

from ..distributions import log_gamma_density
from ..kernels import TargetDensity


def gamma_target(alpha: float = 2.0, beta: float = 1.0) -> TargetDensity:
    """Unnormalized Gamma(alpha, beta) on (0, inf), rate parametrization."""
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")

    def log_unnorm(x):
        return log_gamma_density(x, alpha, beta)

    return TargetDensity(log_unnorm, lambda x: x > 0, 1)


def mixture_target(modes=(-5.0, 5.0), sd: float = 1.0, weights=(0.5, 0.5)) -> TargetDensity:
    """Normalized Gaussian mixture density on the real line (log scale)."""
    if len(modes) != len(weights):
        raise ValueError("modes and weights differ in length")
    logw = [math.log(w) - math.log(sd) - 0.5 * math.log(2 * math.pi) for w in weights]
    inv = 1.0 / sd

    def log_unnorm(x):
        terms = [lw - 0.5 * ((x - m) * inv) ** 2 for lw, m in zip(logw, modes)]
        top = max(terms)
        return top + math.log(sum(math.exp(t - top) for t in terms))

    return TargetDensity(log_unnorm, lambda x: True, 1)

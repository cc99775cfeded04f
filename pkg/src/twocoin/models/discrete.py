"""Enumerable three-state system used as a brute-force oracle.

The proposal is specified only through unnormalized weights q~(y|x); its
row sums r(x) play the role of the unknown normalizer. Sampling uses
rejection from a uniform envelope so it never touches r(x), and the
normalizer coin is the generic envelope coin with f = 1/k and
b_x = k max_y q~(y|x).
"""

from __future__ import annotations

import math

import numpy as np

from ..factory import NormalizerCoin
from ..kernels import TargetDensity
from ..proposals import Proposal

PI = (0.2, 0.3, 0.5)
QTILDE = (
    (1.0, 2.0, 3.0),
    (2.0, 1.0, 1.0),
    (1.0, 3.0, 2.0),
)
# A second, more lopsided kernel on the same states.
QTILDE_ALT = (
    (0.5, 4.0, 1.0),
    (1.0, 0.2, 3.0),
    (2.0, 0.25, 1.0),
)


def discrete_target(pi=PI) -> TargetDensity:
    logp = [math.log(p) if p > 0 else -math.inf for p in pi]
    k = len(logp)

    def log_unnorm(x):
        i = int(x)
        return logp[i] if 0 <= i < k else -math.inf

    return TargetDensity(log_unnorm, lambda x: 0 <= int(x) < k and pi[int(x)] > 0, 1)


class DiscreteProposal(Proposal):
    """Proposal on {0, ..., k-1} with unnormalized weights ``qtilde[x][y]``."""

    tractable = True

    def __init__(self, qtilde=QTILDE):
        q = np.asarray(qtilde, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or (q < 0).any():
            raise ValueError("qtilde must be a square nonnegative matrix")
        self.q = q
        self.k = q.shape[0]
        with np.errstate(divide="ignore"):
            self.logq = np.log(q).tolist()
        self.rowmax = q.max(axis=1).tolist()
        self._q = q.tolist()

    def sample(self, x, rng):
        row, top, k = self._q[int(x)], self.rowmax[int(x)], self.k
        uniform = rng.uniform
        while True:
            m = int(uniform() * k)
            if uniform() * top < row[m]:
                return m

    def log_qtilde(self, y, x):
        return self.logq[int(x)][int(y)]

    def log_bound(self, x):
        return math.log(self.k * self.rowmax[int(x)])

    def normalizer_coin(self, x, lp_x=None):
        row = self.logq[int(x)]
        k = self.k
        return NormalizerCoin(
            lambda m: row[m],
            k * self.rowmax[int(x)],
            lambda rng: int(rng.uniform() * k),
            lambda m: -math.log(k),
        )

    def log_normalizer(self, x):
        return math.log(sum(self._q[int(x)]))


def exact_barker(pi=PI, qtilde=QTILDE) -> np.ndarray:
    """Brute-force alpha_B(x, y) for every ordered pair (nan where undefined)."""
    pi = np.asarray(pi, dtype=float)
    q = np.asarray(qtilde, dtype=float)
    qn = q / q.sum(axis=1, keepdims=True)
    num = pi[None, :] * qn.T  # pi(y) q(x|y) at [x, y]
    den = pi[:, None] * qn  # pi(x) q(y|x) at [x, y]
    with np.errstate(invalid="ignore", divide="ignore"):
        return num / (num + den)


def exact_factory_terms(x: int, y: int, pi=PI, qtilde=QTILDE):
    """(c_x, c_y, p_x, p_y) of the chain's two-coin call for the pair (x, y)."""
    q = np.asarray(qtilde, dtype=float)
    k = q.shape[0]
    r = q.sum(axis=1)
    b = k * q.max(axis=1)
    cx = pi[x] * q[x, y] * b[y]
    cy = pi[y] * q[y, x] * b[x]
    return cx, cy, r[y] / b[y], r[x] / b[x]


def exact_transition_matrix(pi=PI, qtilde=QTILDE) -> np.ndarray:
    """Transition matrix of the Barker chain: P[x, y] = q(y|x) alpha_B(x, y)."""
    q = np.asarray(qtilde, dtype=float)
    qn = q / q.sum(axis=1, keepdims=True)
    a = np.nan_to_num(exact_barker(pi, qtilde))
    P = qn * a
    np.fill_diagonal(P, 0.0)
    np.fill_diagonal(P, 1.0 - P.sum(axis=1))
    return P

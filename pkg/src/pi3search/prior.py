"""Uniform prior over the unmarked fraction: exact and quadrature integration, databases."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .baselines import FailureModel
from .statevec import MarkedSet, _exact_fraction, as_rng


@dataclass(frozen=True)
class EpsilonPrior:
    """eps ~ Uniform(0, eps0); integrated quantities average over this range."""

    eps0: float

    def __post_init__(self):
        if not 0.0 < self.eps0 <= 1.0:
            raise ValueError(f"eps0 must lie in (0, 1], got {self.eps0}")


@dataclass(frozen=True)
class RealizableGrid:
    """The unmarked fractions 1 - m/n that a size-n database can realize, capped at eps0."""

    n: int
    epsilons: tuple

    @classmethod
    def for_database(cls, n: int, eps0: float = 1.0) -> "RealizableGrid":
        if n < 1:
            raise ValueError(f"database size must be >= 1, got {n}")
        eps = (_exact_fraction(n - m, n) for m in range(n, -1, -1))
        return cls(n, tuple(e for e in eps if e <= eps0))


def integrate_polynomial(model: FailureModel, prior: EpsilonPrior) -> float:
    """Exact prior average of the model: sum_k c_k eps0^k / (k+1). No quadrature error."""
    eps0 = prior.eps0
    return math.fsum(c * eps0 ** k / (k + 1) for k, c in enumerate(model.coeffs))


def integrate_simulated(failure_at: Callable[[float], float], prior: EpsilonPrior,
                        grid_points: int = 101) -> float:
    """Composite-Simpson prior average of a pointwise failure function.

    grid_points must be odd (an even interval count); the rule is exact for
    integrands of degree <= 3 up to rounding.
    """
    n = grid_points
    if n < 3 or n % 2 == 0:
        raise ValueError(f"grid_points must be odd and >= 3, got {n}")
    xs = np.linspace(0.0, prior.eps0, n)
    ys = np.array([failure_at(float(x)) for x in xs])
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    h = prior.eps0 / (n - 1)
    return float((h / 3.0) * (w @ ys) / prior.eps0)


def make_marked_set(n: int, eps_target: float, seed=None) -> tuple:
    """Uniform random marked set of size round-half-up((1 - eps_target) * n).

    Returns (set, exact unmarked fraction); downstream closed-form comparisons
    must use the exact fraction, never eps_target. Deterministic per seed.
    """
    if n < 1:
        raise ValueError(f"database size must be >= 1, got {n}")
    if not 0.0 <= eps_target <= 1.0:
        raise ValueError(f"eps_target must lie in [0, 1], got {eps_target}")
    k = int(math.floor((1.0 - eps_target) * n + 0.5))
    k = min(max(k, 0), n)
    rng = as_rng(seed)
    indices = rng.permutation(n)[:k]
    marked = MarkedSet(n, indices)
    return marked, marked.epsilon_eff


def sample_epsilon(prior: EpsilonPrior, seed=None) -> float:
    """One inverse-CDF draw of eps ~ U(0, eps0)."""
    return float(as_rng(seed).random() * prior.eps0)


def discretized_expected_failure(n: int, prior: EpsilonPrior,
                                 failure_at_eps: Callable[[float], float]) -> float:
    """Exact E[failure(eps_eff)] for eps ~ U(0, eps0) snapped to a size-n database.

    The snap k(eps) = round-half-up((1 - eps) n) partitions [0, eps0] into one
    interval per realizable fraction; the expectation is the length-weighted
    sum over those intervals, with no sampling error. This is the right
    reference value for end-to-end Monte Carlo runs, which see eps_eff rather
    than the continuous eps.
    """
    if n < 1:
        raise ValueError(f"database size must be >= 1, got {n}")
    eps0 = prior.eps0
    k_min = int(math.floor((1.0 - eps0) * n + 0.5))
    terms = []
    for k in range(max(k_min, 0), n + 1):
        lo = max(0.0, 1.0 - (k + 0.5) / n)
        hi = min(eps0, 1.0 - (k - 0.5) / n)
        if hi <= lo:
            continue
        terms.append((hi - lo) / eps0 * failure_at_eps(_exact_fraction(n - k, n)))
    return math.fsum(terms)

"""Closed-form failure models of the comparison algorithms, plus a classical Monte Carlo."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevec import MarkedSet, as_rng


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")


@dataclass(frozen=True)
class FailureModel:
    """Failure probability as a polynomial in the unmarked fraction eps."""

    name: str
    coeffs: tuple          # coeffs[k] multiplies eps**k
    query_count: int

    def failure(self, eps: float) -> float:
        _check_eps(eps)
        return float(np.polynomial.polynomial.polyval(eps, np.asarray(self.coeffs)))


def classical_model(q: int = 1) -> FailureModel:
    """Guess-and-check with q queried picks plus one final blind pick: failure eps^(q+1)."""
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")
    return FailureModel("classical", (0.0,) * (q + 1) + (1.0,), q)


def mosca_model() -> FailureModel:
    """Single-query counting-based scheme: failure (3/4) eps^2 + (1/4) eps^3."""
    return FailureModel("mosca", (0.0, 0.0, 0.75, 0.25), 1)


def younes_model(q: int = 1) -> FailureModel:
    """Failure polynomial of the partial-diffusion search at q queries.

    success = (1 - eps) (U_q(eps)^2 + U_{q-1}(eps)^2) with Chebyshev
    polynomials of the second kind, which is the trigonometric form below
    rewritten through sin((q+1)t)/sin(t) = U_q(cos t).
    """
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")
    poly = np.polynomial.Polynomial
    u_prev, u = poly([0.0]), poly([1.0])        # U_{-1}, U_0
    for _ in range(q):
        u_prev, u = u, poly([0.0, 2.0]) * u - u_prev
    success = poly([1.0, -1.0]) * (u * u + u_prev * u_prev)
    failure = poly([1.0]) - success
    return FailureModel("younes", tuple(float(c) for c in failure.coef), q)


def pi3_model(depth: int = 1) -> FailureModel:
    """Nested pi/3 composite at recursion depth m: failure eps^(3^m), (3^m-1)/2 queries."""
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    power = 3 ** depth
    return FailureModel("pi3", (0.0,) * power + (1.0,), (power - 1) // 2)


def classical_failure(eps: float, q: int = 1) -> float:
    """Probability that q queried picks and the final blind pick all miss: eps^(q+1)."""
    _check_eps(eps)
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")
    return eps ** (q + 1)


def classical_monte_carlo(n: int, targets: MarkedSet, q: int = 1,
                          trials: int = 100_000, seed=0) -> float:
    """Empirical failure rate of the classical pick strategy, simulated end to end.

    Each trial makes q queried uniform picks with replacement, then one final
    unqueried pick; the trial fails iff every pick is unmarked. Deterministic
    for a given seed.
    """
    if n < 1:
        raise ValueError(f"database must be nonempty, got size {n}")
    if targets.dim != n:
        raise ValueError(f"dimension mismatch: database size {n}, target dim {targets.dim}")
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = as_rng(seed)
    mask = np.zeros(n, dtype=bool)
    mask[targets.index_array] = True
    picks = rng.integers(0, n, size=(trials, q + 1))
    return float(np.mean(~mask[picks].any(axis=1)))


def mosca_failure(eps: float) -> float:
    """(3/4) eps^2 + (1/4) eps^3."""
    _check_eps(eps)
    return 0.75 * eps * eps + 0.25 * eps ** 3


def younes_success(eps: float, q: int = 1) -> float:
    """(1 - cos t)(sin^2((q+1)t) + sin^2(qt)) / sin^2 t at t = arccos(eps).

    eps = 1 is the t -> 0 limit of the expression, which is 0 for every q;
    it is returned directly so sweep endpoints stay finite.
    """
    _check_eps(eps)
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")
    if eps == 1.0:
        return 0.0
    t = np.arccos(eps)
    s2 = np.sin(t) ** 2
    return float((1.0 - eps) * (np.sin((q + 1) * t) ** 2 + np.sin(q * t) ** 2) / s2)


def younes_failure(eps: float, q: int = 1) -> float:
    return 1.0 - younes_success(eps, q)


def pi3_failure_closed_form(eps: float, depth: int = 1) -> float:
    """eps^(3^depth): pointwise failure of the depth-m nested composite."""
    _check_eps(eps)
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    return eps ** (3 ** depth)

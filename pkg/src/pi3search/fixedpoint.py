"""Fixed-point search composites built from pi/3 selective phase shifts.

The composite U R_source U^H R_target U applied to |source>, with both
selective phases at pi/3, maps a failure probability
eps = 1 - ||P_T U|source>||^2 to exactly eps^3, for any unitary U and any
target subspace. Nesting the construction m times drives the failure to
eps^(3^m) at (3^m - 1)/2 oracle queries, and every level moves toward the
target: failure never increases. Setting both phases to pi instead gives one
amplitude-amplification iterate, which overshoots when the marked fraction is
large (it fails outright at marked fraction 3/4).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import (
    SelectivePhase,
    UnitaryOp,
    apply_selective_phase,
    apply_walsh_hadamard,
    is_power_of_two,
    transition_probability,
)
from .statevec import MarkedSet, StateVector, basis_state, subspace_probability

PI_3 = np.pi / 3.0

# (3^m - 1)/2 exceeds a signed 64-bit query counter beyond this depth.
MAX_RECURSION_DEPTH = 39


@dataclass(frozen=True)
class SearchInstance:
    """A unitary, a source basis state, and the marked target subspace.

    epsilon_eff is always recomputed from (unitary, source, targets), never
    accepted from the caller.
    """

    unitary: UnitaryOp
    source: int
    targets: MarkedSet
    epsilon_eff: float = field(init=False, compare=False)

    def __post_init__(self):
        dim = self.unitary.dim
        if not 0 <= self.source < dim:
            raise ValueError(f"source index {self.source} out of range [0, {dim})")
        if self.targets.dim != dim:
            raise ValueError(
                f"dimension mismatch: unitary dim {dim}, target dim {self.targets.dim}")
        eps = 1.0 - transition_probability(self.unitary, self.source, self.targets)
        object.__setattr__(self, "epsilon_eff", min(max(float(eps), 0.0), 1.0))

    @property
    def dim(self) -> int:
        return self.unitary.dim


@dataclass(frozen=True)
class CompositeResult:
    """Final state, oracle query count, and failure probability of one composite run."""

    final_state: StateVector
    oracle_queries: int
    failure_probability: float

    @property
    def success_probability(self) -> float:
        return 1.0 - self.failure_probability


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def _finish(targets: MarkedSet, state: StateVector, queries: int) -> CompositeResult:
    fail = _clamp01(1.0 - subspace_probability(state, targets))
    return CompositeResult(state, queries, fail)


def _phase_composite(inst: SearchInstance, phase: float) -> CompositeResult:
    # rightmost factor of U R_s U^H R_t U acts first
    r_t = SelectivePhase(inst.targets, phase)
    r_s = SelectivePhase.single(inst.dim, inst.source, phase)
    v = basis_state(inst.dim, inst.source)
    v = inst.unitary.apply(v)
    v = r_t.apply(v)
    v = inst.unitary.adjoint().apply(v)
    v = r_s.apply(v)
    v = inst.unitary.apply(v)
    return _finish(inst.targets, v, 1)


def pi3_composite(inst: SearchInstance) -> CompositeResult:
    """One pi/3 composite: apply U, R_t(pi/3), U^H, R_s(pi/3), U to |source>.

    The resulting failure probability is epsilon_eff**3.
    """
    return _phase_composite(inst, PI_3)


def standard_amplification_iterate(inst: SearchInstance) -> CompositeResult:
    """The same composite with both phases at pi: one amplitude-amplification iterate.

    Success probability equals sin^2(3*theta) with sin^2(theta) = 1 - epsilon_eff,
    so this iterate can overshoot the target; the pi/3 composite cannot.
    """
    return _phase_composite(inst, np.pi)


def database_search(n: int, targets: MarkedSet) -> CompositeResult:
    """W R_0 W R_T W applied to |0...0> over a size-n database (n a power of 2).

    Equivalent to pi3_composite with U the Walsh-Hadamard transform and the
    all-zeros source; kept as a direct five-step application for speed.
    """
    if not is_power_of_two(n):
        raise ValueError(f"database size must be a power of 2, got {n}")
    if targets.dim != n:
        raise ValueError(f"dimension mismatch: database size {n}, target dim {targets.dim}")
    source = MarkedSet(n, (0,))
    v = basis_state(n, 0)
    v = apply_walsh_hadamard(v)
    v = apply_selective_phase(v, targets, PI_3)
    v = apply_walsh_hadamard(v)
    v = apply_selective_phase(v, source, PI_3)
    v = apply_walsh_hadamard(v)
    return _finish(targets, v, 1)


def recursive_composite(inst: SearchInstance, depth: int) -> CompositeResult:
    """Nest the pi/3 composite: U_{k+1} = U_k R_s U_k^H R_t U_k, `depth` levels deep.

    Depth m costs (3^m - 1)/2 oracle queries (adjoint queries included) and
    maps epsilon_eff to epsilon_eff**(3^m). Depth 0 is a bare application
    of U with zero queries.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    if depth > MAX_RECURSION_DEPTH:
        raise ValueError(
            f"depth {depth} overflows the 64-bit oracle query counter "
            f"(max {MAX_RECURSION_DEPTH})")
    r_t = SelectivePhase(inst.targets, PI_3)
    r_s = SelectivePhase.single(inst.dim, inst.source, PI_3)
    r_t_dag = r_t.adjoint()
    r_s_dag = r_s.adjoint()
    u = inst.unitary
    u_dag = inst.unitary.adjoint()

    def level(m: int, v: StateVector, dagger: bool) -> StateVector:
        if m == 0:
            return (u_dag if dagger else u).apply(v)
        if dagger:
            v = level(m - 1, v, True)
            v = r_s_dag.apply(v)
            v = level(m - 1, v, False)
            v = r_t_dag.apply(v)
            return level(m - 1, v, True)
        v = level(m - 1, v, False)
        v = r_t.apply(v)
        v = level(m - 1, v, True)
        v = r_s.apply(v)
        return level(m - 1, v, False)

    final = level(depth, basis_state(inst.dim, inst.source), False)
    return _finish(inst.targets, final, (3 ** depth - 1) // 2)


def predicted_final_state(inst: SearchInstance) -> StateVector:
    """Closed-form final state of the pi/3 composite.

    With |u> = U|source>, w = ||P_T u||^2 and p = e^{i pi/3}, the composite
    produces |u> (p + w (p - 1)^2) + (p - 1) P_T |u>; useful as an
    independent cross-check of the step-by-step application.
    """
    u_s = inst.unitary.apply(basis_state(inst.dim, inst.source))
    overlap = subspace_probability(u_s, inst.targets)
    p = np.exp(1j * PI_3)
    amps = u_s.amps * (p + overlap * (p - 1.0) ** 2)
    sel = inst.targets.index_array
    amps[sel] += (p - 1.0) * u_s.amps[sel]
    return StateVector(amps)

"""Unitary operators: Walsh-Hadamard butterfly, selective phase shifts, dense matrices, Haar sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevec import MarkedSet, StateVector, as_rng, basis_state, subspace_probability

UNITARITY_TOL = 1e-9


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def apply_walsh_hadamard(v: StateVector) -> StateVector:
    """n-qubit Hadamard transform of v via the in-place butterfly.

    O(dim log dim). Stages combine amplitudes unscaled; a single dim**-0.5
    factor is applied at the end, which keeps rounding to one multiply.
    """
    n = v.dim
    if not is_power_of_two(n):
        raise ValueError(f"Walsh-Hadamard requires a power-of-2 dimension, got {n}")
    a = v.amps.copy()
    if n == 1:
        return StateVector(a)
    b = np.empty_like(a)
    h = 1
    while h < n:
        src = a.reshape(-1, 2, h)
        dst = b.reshape(-1, 2, h)
        np.add(src[:, 0, :], src[:, 1, :], out=dst[:, 0, :])
        np.subtract(src[:, 0, :], src[:, 1, :], out=dst[:, 1, :])
        a, b = b, a
        h *= 2
    a *= 1.0 / np.sqrt(n)
    return StateVector(a)


def apply_selective_phase(v: StateVector, targets: MarkedSet, phase: float) -> StateVector:
    """Multiply the amplitudes inside `targets` by exp(i*phase); leave the rest unchanged."""
    if v.dim != targets.dim:
        raise ValueError(f"dimension mismatch: state dim {v.dim}, target dim {targets.dim}")
    out = v.amps.copy()
    if targets.count:
        out[targets.index_array] *= np.exp(1j * phase)
    return StateVector(out)


@dataclass(frozen=True)
class WalshHadamard:
    """H tensored over n_qubits; involutory, so it is its own adjoint."""

    n_qubits: int

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValueError(f"n_qubits must be >= 0, got {self.n_qubits}")

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def apply(self, v: StateVector) -> StateVector:
        if v.dim != self.dim:
            raise ValueError(f"dimension mismatch: operator dim {self.dim}, state dim {v.dim}")
        return apply_walsh_hadamard(v)

    def adjoint(self) -> "WalshHadamard":
        return self


@dataclass(frozen=True)
class SelectivePhase:
    """I - (1 - e^{i*phase}) P_T: phases the subspace spanned by `targets`.

    phase = 0 is the identity; phase = pi flips the sign of the targets.
    """

    targets: MarkedSet
    phase: float

    @classmethod
    def single(cls, dim: int, index: int, phase: float) -> "SelectivePhase":
        """Selective phase on one basis state."""
        return cls(MarkedSet(dim, (index,)), phase)

    @property
    def dim(self) -> int:
        return self.targets.dim

    def apply(self, v: StateVector) -> StateVector:
        return apply_selective_phase(v, self.targets, self.phase)

    def adjoint(self) -> "SelectivePhase":
        return SelectivePhase(self.targets, -self.phase)


class DenseUnitary:
    """Explicit matrix operator; unitarity is validated once at construction."""

    def __init__(self, matrix, *, check: bool = True):
        m = np.ascontiguousarray(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"matrix must be square and nonempty, got shape {m.shape}")
        if check:
            dev = unitarity_deviation(m)
            if dev > UNITARITY_TOL:
                raise ValueError(f"matrix is not unitary: max |U^H U - I| = {dev:.3e}")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, v: StateVector) -> StateVector:
        if v.dim != self.dim:
            raise ValueError(f"dimension mismatch: operator dim {self.dim}, state dim {v.dim}")
        return StateVector(self.matrix @ v.amps)

    def apply_adjoint(self, v: StateVector) -> StateVector:
        if v.dim != self.dim:
            raise ValueError(f"dimension mismatch: operator dim {self.dim}, state dim {v.dim}")
        return StateVector(self.matrix.conj().T @ v.amps)

    def adjoint(self) -> "DenseUnitary":
        # adjoint of a validated unitary is unitary; skip revalidation
        return DenseUnitary(self.matrix.conj().T, check=False)

    def __repr__(self):
        return f"DenseUnitary(dim={self.dim})"


@dataclass(frozen=True)
class Composition:
    """Operator product in matrix order: ops[-1] acts first, ops[0] acts last."""

    ops: tuple

    def __post_init__(self):
        ops = tuple(self.ops)
        if not ops:
            raise ValueError("composition needs at least one operator")
        if any(op.dim != ops[0].dim for op in ops):
            raise ValueError("all composed operators must share one dimension")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].dim

    def apply(self, v: StateVector) -> StateVector:
        for op in reversed(self.ops):
            v = op.apply(v)
        return v

    def adjoint(self) -> "Composition":
        return Composition(tuple(op.adjoint() for op in reversed(self.ops)))


UnitaryOp = WalshHadamard | SelectivePhase | DenseUnitary | Composition


def apply_dense(u: DenseUnitary, v: StateVector) -> StateVector:
    """Matrix-vector product U v."""
    return u.apply(v)


def apply_adjoint(u: DenseUnitary, v: StateVector) -> StateVector:
    """Matrix-vector product U^H v; inverts apply_dense."""
    return u.apply_adjoint(v)


def unitarity_deviation(matrix: np.ndarray) -> float:
    """max entry of |M^H M - I|."""
    gram = matrix.conj().T @ matrix
    return float(np.max(np.abs(gram - np.eye(matrix.shape[0]))))


def haar_random_unitary(dim: int, seed=None) -> DenseUnitary:
    """Haar-measure random unitary via complex Ginibre + QR with the phase fix.

    The QR factor alone is not Haar-distributed: its column phases follow the
    QR convention. Multiplying each column by the phase that makes the
    matching R diagonal entry real positive removes that dependence and makes
    the draw measure-correct. Deterministic for a given seed.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = as_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return DenseUnitary(q, check=False)


def transition_probability(op, source: int, targets: MarkedSet) -> float:
    """||P_T U |source>||^2: the mass the operator sends from |source> into the targets."""
    if targets.dim != op.dim:
        raise ValueError(f"dimension mismatch: operator dim {op.dim}, target dim {targets.dim}")
    return subspace_probability(op.apply(basis_state(op.dim, source)), targets)


def to_matrix(op) -> np.ndarray:
    """Materialize an operator as a dense matrix column by column (small dims only)."""
    dim = op.dim
    out = np.empty((dim, dim), dtype=np.complex128)
    for j in range(dim):
        out[:, j] = op.apply(basis_state(dim, j)).amps
    return out

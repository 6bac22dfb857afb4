"""Complex statevectors over a finite basis, marked index sets, and measurement sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

# Probability-level comparisons elsewhere run at 1e-9; norms are held an order tighter.
NORM_TOL = 1e-10
# sample_measurement refuses states whose norm has drifted beyond this.
SAMPLING_NORM_TOL = 1e-8

Seed = int | np.random.Generator | None


class NormalizationError(ValueError):
    """State norm has drifted too far from 1 for the requested operation."""


def as_rng(seed) -> np.random.Generator:
    """Pass through a Generator, or build one deterministically from a seed."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _exact_fraction(num: int, den: int) -> float:
    """num/den as a double whose product with den recovers num as exactly as possible.

    The correctly rounded quotient occasionally lands one ulp off the round
    trip (x*den != num); nudging one step repairs it whenever repair is
    possible. It always is for power-of-2 den; for a few fractions over other
    denominators (e.g. 58/100) no bit-exact double exists and the correctly
    rounded quotient is returned, which still recovers num within half an ulp.
    """
    x = num / den
    if x * den == num:
        return x
    for y in (np.nextafter(x, -np.inf), np.nextafter(x, np.inf)):
        if y * den == num:
            return float(y)
    return x


@dataclass
class StateVector:
    """Amplitudes of a pure state over basis states 0..dim-1."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError(f"amplitudes must form a nonempty 1-d array, got shape {amps.shape}")
        self.amps = amps

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> "StateVector":
        return StateVector(self.amps.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def require_unit(self, tol: float = SAMPLING_NORM_TOL) -> None:
        dev = abs(self.norm() - 1.0)
        if dev > tol:
            raise NormalizationError(
                f"state norm deviates from 1 by {dev:.3e} (tolerance {tol:.1e})")


@dataclass(frozen=True)
class MarkedSet:
    """Subset of basis indices counting as marked (F(x) = 1).

    Indices are stored sorted and deduplicated; the unmarked fraction
    epsilon_eff is exact by construction.
    """

    dim: int
    indices: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        raw = np.asarray(self.indices, dtype=np.int64)
        if raw.ndim != 1:
            raise ValueError("indices must be a flat collection of basis indices")
        arr = np.unique(raw).astype(np.intp)
        if arr.size and (arr[0] < 0 or arr[-1] >= self.dim):
            raise ValueError(
                f"indices must lie in [0, {self.dim}), got range [{arr[0]}, {arr[-1]}]")
        arr.setflags(write=False)
        object.__setattr__(self, "indices", tuple(arr.tolist()))
        object.__setattr__(self, "_index_array", arr)

    @classmethod
    def from_predicate(cls, dim: int, predicate: Callable[[int], bool]) -> "MarkedSet":
        """Materialize {x : predicate(x)} as an explicit index set."""
        return cls(dim, tuple(i for i in range(dim) if predicate(i)))

    @classmethod
    def full(cls, dim: int) -> "MarkedSet":
        return cls(dim, tuple(range(dim)))

    @property
    def index_array(self) -> np.ndarray:
        return self._index_array

    @property
    def count(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, index) -> bool:
        arr = self._index_array
        j = int(np.searchsorted(arr, index))
        return j < arr.size and int(arr[j]) == int(index)

    @property
    def fraction_marked(self) -> float:
        return _exact_fraction(self.count, self.dim)

    @property
    def epsilon_eff(self) -> float:
        """Unmarked fraction 1 - |T|/dim, with epsilon_eff * dim exact."""
        return _exact_fraction(self.dim - self.count, self.dim)

    def complement(self) -> "MarkedSet":
        mask = np.ones(self.dim, dtype=bool)
        mask[self._index_array] = False
        return MarkedSet(self.dim, tuple(np.flatnonzero(mask).tolist()))


def basis_state(dim: int, index: int) -> StateVector:
    """|index> in a dim-dimensional register."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range [0, {dim})")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def random_state(dim: int, seed=None) -> StateVector:
    """Haar-uniform random pure state (normalized complex Gaussian vector)."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = as_rng(seed)
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(z / np.linalg.norm(z))


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} != {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|: overlap magnitude, insensitive to global phase."""
    return abs(inner(a, b))


def subspace_probability(v: StateVector, targets: MarkedSet) -> float:
    """Probability mass of v inside the target subspace, sum_{i in T} |amps[i]|^2."""
    if v.dim != targets.dim:
        raise ValueError(f"dimension mismatch: state dim {v.dim}, target dim {targets.dim}")
    sel = v.amps[targets.index_array]
    return float(np.real(np.vdot(sel, sel)))


def sample_measurement(v: StateVector, seed=None) -> int:
    """Collapse v once, returning index i with probability |amps[i]|^2."""
    v.require_unit(SAMPLING_NORM_TOL)
    rng = as_rng(seed)
    cdf = np.cumsum(v.probabilities())
    u = rng.random() * cdf[-1]
    return int(min(np.searchsorted(cdf, u, side="right"), v.dim - 1))


def sample_measurements(v: StateVector, shots: int, seed=None) -> np.ndarray:
    """Vectorized sample_measurement: `shots` independent collapses of the same state."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    v.require_unit(SAMPLING_NORM_TOL)
    rng = as_rng(seed)
    cdf = np.cumsum(v.probabilities())
    u = rng.random(shots) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side="right"), v.dim - 1).astype(np.intp)

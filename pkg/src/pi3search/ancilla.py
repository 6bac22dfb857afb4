"""pi/3 phase kickback from a six-level ancilla in a phased superposition.

Preparing the ancilla as (1/sqrt 6) sum_b omega^b |b> with omega = e^{-i pi/3}
makes it an eigenvector of the cyclic increment |b> -> |b+1 mod 6|, with
eigenvalue omega^{-1} = e^{+i pi/3}. Incrementing the ancilla only when the
main-register value is marked therefore kicks the phase e^{i pi/3} onto the
marked amplitudes and leaves the registers unentangled, which is exactly the
selective pi/3 phase shift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import apply_selective_phase
from .statevec import MarkedSet, StateVector

ANCILLA_DIM = 6
# Ancilla level phasing; the increment kicks back its inverse, e^{+i pi/3}.
OMEGA = np.exp(-1j * np.pi / 3.0)


@dataclass
class CompositeRegister:
    """Main register tensor six-level ancilla, amplitudes indexed (x, b), b fastest."""

    main_dim: int
    amps: np.ndarray

    def __post_init__(self):
        if self.main_dim < 1:
            raise ValueError(f"main_dim must be >= 1, got {self.main_dim}")
        amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if amps.shape != (ANCILLA_DIM * self.main_dim,):
            raise ValueError(
                f"expected {ANCILLA_DIM * self.main_dim} amplitudes, got shape {amps.shape}")
        self.amps = amps

    @classmethod
    def product(cls, main: StateVector, anc: StateVector) -> "CompositeRegister":
        if anc.dim != ANCILLA_DIM:
            raise ValueError(f"ancilla must have dimension {ANCILLA_DIM}, got {anc.dim}")
        return cls(main.dim, np.outer(main.amps, anc.amps).reshape(-1))

    def as_matrix(self) -> np.ndarray:
        """View of the amplitudes as a (main_dim, 6) array."""
        return self.amps.reshape(self.main_dim, ANCILLA_DIM)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def schmidt_singular_values(self) -> np.ndarray:
        """Singular values across the (main | ancilla) cut; one nonzero <=> product state."""
        return np.linalg.svd(self.as_matrix(), compute_uv=False)


def prepare_phase_ancilla() -> StateVector:
    """(1/sqrt 6) sum_b omega^b |b> with omega = e^{-i pi/3}."""
    b = np.arange(ANCILLA_DIM)
    return StateVector(OMEGA ** b / np.sqrt(ANCILLA_DIM))


def modular_add_oracle(reg: CompositeRegister, marked: MarkedSet) -> CompositeRegister:
    """|x>|b> -> |x>|b + F(x) mod 6>: cyclic ancilla increment where x is marked.

    A permutation of basis states, hence exactly unitary.
    """
    if marked.dim != reg.main_dim:
        raise ValueError(
            f"dimension mismatch: register main dim {reg.main_dim}, marked dim {marked.dim}")
    mat = reg.as_matrix().copy()
    sel = marked.index_array
    if sel.size:
        mat[sel] = np.roll(mat[sel], 1, axis=1)
    return CompositeRegister(reg.main_dim, mat.reshape(-1))


def kickback_equivalence(v: StateVector, marked: MarkedSet) -> float:
    """Fidelity between the kicked-back register and (R(marked, pi/3) v) tensor ancilla.

    Equals 1 (within 1e-9) iff the ancilla construction realizes the selective
    pi/3 phase exactly and leaves no entanglement behind.
    """
    if v.dim != marked.dim:
        raise ValueError(f"dimension mismatch: state dim {v.dim}, marked dim {marked.dim}")
    anc = prepare_phase_ancilla()
    actual = modular_add_oracle(CompositeRegister.product(v, anc), marked)
    expected = CompositeRegister.product(
        apply_selective_phase(v, marked, np.pi / 3.0), anc)
    return float(abs(np.vdot(expected.amps, actual.amps)))

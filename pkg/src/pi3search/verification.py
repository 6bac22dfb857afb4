"""Invariant battery behind the `verify` subcommand.

Each check exercises one contract of the library and reports the worst
deviation it observed; the CLI turns the results into a report and an exit
code. All randomness is drawn from a single seeded generator, so a given
flag set always reproduces the same battery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ancilla, baselines, fixedpoint, operators, prior, statevec


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed, detail: str) -> CheckResult:
    return CheckResult(name, bool(passed), detail)


def _random_subset(rng, dim: int, size: int) -> statevec.MarkedSet:
    return statevec.MarkedSet(dim, rng.permutation(dim)[:size])


def rotation_instance(eps: float) -> fixedpoint.SearchInstance:
    """dim-2 instance with an exactly tunable unmarked fraction.

    A real rotation sends |0> to cos(a)|0> + sin(a)|1>; with target {1} and
    sin^2(a) = 1 - eps the instance realizes any eps in [0, 1].
    """
    alpha = float(np.arcsin(np.sqrt(1.0 - eps)))
    m = np.array([[np.cos(alpha), -np.sin(alpha)],
                  [np.sin(alpha), np.cos(alpha)]])
    return fixedpoint.SearchInstance(
        operators.DenseUnitary(m), 0, statevec.MarkedSet(2, (1,)))


# ---------------------------------------------------------------- statevec

def check_parseval_complement(rng) -> CheckResult:
    worst = 0.0
    for dim in (1, 2, 5, 8, 64, 257):
        v = statevec.random_state(dim, rng)
        t = _random_subset(rng, dim, int(rng.integers(0, dim + 1)))
        p_full = statevec.subspace_probability(v, statevec.MarkedSet.full(dim))
        p_t = statevec.subspace_probability(v, t)
        p_c = statevec.subspace_probability(v, t.complement())
        worst = max(worst, abs(p_full - 1.0), abs(p_t + p_c - 1.0))
    return _result("statevec.parseval_complement", worst < 1e-10,
                   f"max deviation {worst:.2e}")


def check_measurement_frequencies(rng) -> CheckResult:
    dim, shots = 8, 100_000
    v = statevec.random_state(dim, rng)
    counts = np.bincount(statevec.sample_measurements(v, shots, rng), minlength=dim)
    worst_z = 0.0
    for i, p in enumerate(v.probabilities()):
        if p < 1e-3:
            continue
        sigma = np.sqrt(p * (1.0 - p) / shots)
        worst_z = max(worst_z, abs(counts[i] / shots - p) / sigma)
    return _result("statevec.measurement_frequencies", worst_z < 4.0,
                   f"max |z| {worst_z:.2f} over {shots} shots")


# ---------------------------------------------------------------- operators

def _variant_ops(rng):
    for n_qubits in (1, 3, 6):
        dim = 1 << n_qubits
        t = _random_subset(rng, dim, int(rng.integers(1, dim + 1)))
        u = operators.haar_random_unitary(dim, rng)
        w = operators.WalshHadamard(n_qubits)
        phase = operators.SelectivePhase(t, float(rng.uniform(-np.pi, np.pi)))
        comp = operators.Composition((u, phase, w, u.adjoint()))
        yield from (w, phase, u, u.adjoint(), comp, comp.adjoint())


def check_norm_preservation(rng) -> CheckResult:
    worst = 0.0
    for op in _variant_ops(rng):
        for _ in range(100):
            v = statevec.random_state(op.dim, rng)
            worst = max(worst, abs(op.apply(v).norm() - 1.0))
    return _result("operators.norm_preservation", worst < 1e-10,
                   f"max |norm - 1| {worst:.2e}")


def check_walsh_involution(rng) -> CheckResult:
    worst = 0.0
    for p in range(1, 11):        # dims 2 .. 1024
        v = statevec.random_state(1 << p, rng)
        w2 = operators.apply_walsh_hadamard(operators.apply_walsh_hadamard(v))
        worst = max(worst, float(np.max(np.abs(w2.amps - v.amps))))
    return _result("operators.walsh_involution", worst < 1e-10,
                   f"max entry deviation {worst:.2e}")


def check_phase_composition(rng) -> CheckResult:
    worst = 0.0
    for _ in range(25):
        dim = int(rng.integers(2, 33))
        t = _random_subset(rng, dim, int(rng.integers(0, dim + 1)))
        p1, p2 = rng.uniform(-2 * np.pi, 2 * np.pi, size=2)
        v = statevec.random_state(dim, rng)
        two = operators.apply_selective_phase(
            operators.apply_selective_phase(v, t, p1), t, p2)
        one = operators.apply_selective_phase(v, t, p1 + p2)
        worst = max(worst, float(np.max(np.abs(two.amps - one.amps))))
    return _result("operators.phase_composition", worst < 1e-10,
                   f"max entry deviation {worst:.2e}")


def check_selective_phase_matrix(rng) -> CheckResult:
    worst = 0.0
    for dim in (4, 6, 8):
        t = _random_subset(rng, dim, int(rng.integers(1, dim + 1)))
        got = operators.to_matrix(operators.SelectivePhase(t, fixedpoint.PI_3))
        proj = np.zeros((dim, dim), dtype=np.complex128)
        proj[t.index_array, t.index_array] = 1.0
        want = np.eye(dim) - (1.0 - np.exp(1j * fixedpoint.PI_3)) * proj
        worst = max(worst, float(np.max(np.abs(got - want))))
    return _result("operators.selective_phase_matrix", worst < 1e-12,
                   f"max entry deviation {worst:.2e}")


def check_haar_unitarity(rng) -> CheckResult:
    worst = 0.0
    for dim in (2, 3, 8, 64):
        for _ in range(100):
            u = operators.haar_random_unitary(dim, rng)
            worst = max(worst, operators.unitarity_deviation(u.matrix))
    return _result("operators.haar_unitarity", worst < 1e-9,
                   f"max |U^H U - I| {worst:.2e} over 100 samples x dims (2,3,8,64)")


# ---------------------------------------------------------------- fixedpoint

def _haar_battery(rng, dims, trials):
    for dim in dims:
        for _ in range(trials):
            u = operators.haar_random_unitary(dim, rng)
            source = int(rng.integers(dim))
            t = _random_subset(rng, dim, int(rng.integers(1, dim + 1)))
            yield fixedpoint.SearchInstance(u, source, t)


def check_error_cubing(rng, dims, trials) -> CheckResult:
    worst = 0.0
    for inst in _haar_battery(rng, dims, trials):
        res = fixedpoint.pi3_composite(inst)
        worst = max(worst, abs(res.failure_probability - inst.epsilon_eff ** 3))
    return _result("fixedpoint.error_cubing", worst < 1e-9,
                   f"max |failure - eps^3| {worst:.2e} over {trials} draws x dims {tuple(dims)}")


def check_final_state_formula(rng, dims, trials) -> CheckResult:
    worst = 0.0
    for inst in _haar_battery(rng, dims, trials):
        got = fixedpoint.pi3_composite(inst).final_state
        want = fixedpoint.predicted_final_state(inst)
        worst = max(worst, float(np.max(np.abs(got.amps - want.amps))))
    return _result("fixedpoint.final_state_formula", worst < 1e-10,
                   f"max entry deviation {worst:.2e}")


def check_monotone_improvement() -> CheckResult:
    worst = -np.inf
    for eps in np.linspace(0.0, 1.0, 101):
        inst = rotation_instance(float(eps))
        res = fixedpoint.pi3_composite(inst)
        worst = max(worst, res.failure_probability - inst.epsilon_eff)
    return _result("fixedpoint.monotone_improvement", worst <= 1e-9,
                   f"max failure - eps on 101-point grid: {worst:.2e}")


def check_recursion_law() -> CheckResult:
    worst = 0.0
    for depth in range(4):
        for eps in (0.1, 0.25, 0.5, 0.9):
            inst = rotation_instance(eps)
            res = fixedpoint.recursive_composite(inst, depth)
            if res.oracle_queries != (3 ** depth - 1) // 2:
                return _result("fixedpoint.recursion_law", False,
                               f"query count off at depth {depth}")
            worst = max(worst, abs(res.failure_probability
                                   - inst.epsilon_eff ** (3 ** depth)))
    return _result("fixedpoint.recursion_law", worst < 1e-9,
                   f"max |failure - eps^(3^m)| {worst:.2e}, query counts exact")


def check_cancellation_identity() -> CheckResult:
    p = np.exp(1j * fixedpoint.PI_3)
    dev = abs(-p + p * p + 1.0)
    return _result("fixedpoint.cancellation_identity", dev < 1e-12,
                   f"|(-p + p^2 + 1)| = {dev:.2e} at p = e^(i pi/3)")


def check_pi_phase_contrast() -> CheckResult:
    worst = 0.0
    for eps in np.linspace(0.0, 1.0, 101):
        inst = rotation_instance(float(eps))
        res = fixedpoint.standard_amplification_iterate(inst)
        theta = np.arcsin(np.sqrt(1.0 - inst.epsilon_eff))
        worst = max(worst, abs(res.success_probability - np.sin(3.0 * theta) ** 2))
    return _result("fixedpoint.pi_phase_contrast", worst < 1e-9,
                   f"max |success - sin^2(3 theta)| {worst:.2e}")


def check_database_consistency(rng, n: int) -> CheckResult:
    worst = 0.0
    for frac in (0, n // 4, n // 2, 3 * n // 4, n):
        t = _random_subset(rng, n, frac)
        res = fixedpoint.database_search(n, t)
        worst = max(worst, abs(res.failure_probability - t.epsilon_eff ** 3))
    return _result("fixedpoint.database_consistency", worst < 1e-9,
                   f"max |failure - eps^3| {worst:.2e} at n = {n}")


# ---------------------------------------------------------------- ancilla

def check_ancilla_eigenvector() -> CheckResult:
    anc = ancilla.prepare_phase_ancilla()
    shifted = np.roll(anc.amps, 1)
    dev = float(np.max(np.abs(shifted - np.exp(1j * np.pi / 3.0) * anc.amps)))
    return _result("ancilla.increment_eigenvector", dev < 1e-12,
                   f"max |S a - e^(i pi/3) a| = {dev:.2e}")


def check_ancilla_permutation(rng) -> CheckResult:
    n = 4
    marked = _random_subset(rng, n, 2)
    dim = ancilla.ANCILLA_DIM * n
    cols = np.empty((dim, dim), dtype=np.complex128)
    for j in range(dim):
        amps = np.zeros(dim, dtype=np.complex128)
        amps[j] = 1.0
        reg = ancilla.CompositeRegister(n, amps)
        cols[:, j] = ancilla.modular_add_oracle(reg, marked).amps
    ok = (np.all(np.sum(np.abs(cols) > 1e-14, axis=0) == 1)
          and np.allclose(np.abs(cols).max(axis=0), 1.0, atol=1e-14))
    return _result("ancilla.oracle_is_permutation", ok,
                   f"every column a single unit entry at n = {n}")


def check_kickback_equivalence(rng, trials: int = 50) -> CheckResult:
    worst = 1.0
    for n in (4, 8, 16):
        for _ in range(trials):
            v = statevec.random_state(n, rng)
            marked = _random_subset(rng, n, int(rng.integers(0, n + 1)))
            worst = min(worst, ancilla.kickback_equivalence(v, marked))
    return _result("ancilla.kickback_equivalence", worst >= 1.0 - 1e-9,
                   f"min fidelity {worst:.12f} over {trials} pairs x n in (4,8,16)")


def check_ancilla_sixfold(rng) -> CheckResult:
    n = 8
    v = statevec.random_state(n, rng)
    marked = _random_subset(rng, n, 3)
    reg = ancilla.CompositeRegister.product(v, ancilla.prepare_phase_ancilla())
    out = reg
    for _ in range(ancilla.ANCILLA_DIM):
        out = ancilla.modular_add_oracle(out, marked)
    dev = float(np.max(np.abs(out.amps - reg.amps)))
    return _result("ancilla.sixfold_identity", dev < 1e-12,
                   f"max entry deviation {dev:.2e} after six shifts")


# ---------------------------------------------------------------- baselines

def check_younes_specialization() -> CheckResult:
    worst = 0.0
    for eps in np.linspace(0.0, 1.0, 101, endpoint=False):
        got = baselines.younes_success(float(eps), 1)
        want = (1.0 - eps) * (1.0 + 4.0 * eps * eps)
        worst = max(worst, abs(got - want))
    return _result("baselines.younes_specialization", worst < 1e-12,
                   f"max |success - (1-eps)(1+4 eps^2)| {worst:.2e}")


def check_failure_ordering() -> CheckResult:
    for eps in np.linspace(0.2 / 101, 0.2, 101):
        e = float(eps)
        chain = (baselines.pi3_failure_closed_form(e, 1),
                 baselines.mosca_failure(e),
                 baselines.classical_failure(e, 1),
                 baselines.younes_failure(e, 1))
        if not (chain[0] < chain[1] < chain[2] < chain[3]):
            return _result("baselines.failure_ordering", False,
                           f"ordering violated at eps = {e}")
    return _result("baselines.failure_ordering", True,
                   "pi3 < mosca < classical < younes on (0, 0.2]")


def check_zero_endpoints() -> CheckResult:
    vals = (baselines.classical_failure(0.0, 1), baselines.mosca_failure(0.0),
            baselines.younes_failure(0.0, 1), baselines.pi3_failure_closed_form(0.0, 1))
    worst = max(abs(v) for v in vals)
    return _result("baselines.zero_endpoints", worst < 1e-15,
                   f"max |p(0)| {worst:.2e}")


def check_models_vs_simulation(rng) -> CheckResult:
    worst = 0.0
    for k in range(17):
        t = _random_subset(rng, 16, k)
        sim = fixedpoint.database_search(16, t).failure_probability
        worst = max(worst, abs(sim - baselines.pi3_failure_closed_form(t.epsilon_eff, 1)))
    if worst >= 1e-9:
        return _result("baselines.closed_form_vs_simulation", False,
                       f"pi3 deviation {worst:.2e} at n = 16")
    trials = 400_000
    t, eps_eff = prior.make_marked_set(100, 0.2, rng)
    mc = baselines.classical_monte_carlo(100, t, 1, trials, rng)
    expected = baselines.classical_failure(eps_eff, 1)
    sigma = np.sqrt(expected * (1.0 - expected) / trials)
    z = abs(mc - expected) / sigma
    return _result("baselines.closed_form_vs_simulation", z < 4.0,
                   f"pi3 max dev {worst:.2e}; classical MC |z| = {z:.2f}")


# ---------------------------------------------------------------- prior

def check_exact_integrals() -> CheckResult:
    cases = (
        (baselines.classical_model(1), lambda e0: e0 ** 2 / 3.0),
        (baselines.mosca_model(), lambda e0: e0 ** 2 / 4.0 + e0 ** 3 / 16.0),
        (baselines.younes_model(1), lambda e0: e0 / 2.0 - 4.0 * e0 ** 2 / 3.0 + e0 ** 3),
        (baselines.pi3_model(1), lambda e0: e0 ** 3 / 4.0),
    )
    worst = 0.0
    for model, closed in cases:
        for eps0 in (0.05, 0.1, 0.2, 0.5, 1.0):
            got = prior.integrate_polynomial(model, prior.EpsilonPrior(eps0))
            worst = max(worst, abs(got - closed(eps0)))
    return _result("prior.exact_integrals", worst < 1e-14,
                   f"max deviation {worst:.2e} across four closed forms")


def check_epsilon_exactness(rng) -> CheckResult:
    # bit-exact product for power-of-2 sizes; for general n some fractions
    # (e.g. 58/100) have no bit-exact double at all, so require half-ulp
    # round-trip recovery of the unmarked count there
    for n in (16, 100, 1024):
        for eps_target in (0.0, 0.13, 0.25, 0.58, 1.0):
            marked, eps_eff = prior.make_marked_set(n, eps_target, rng)
            unmarked = n - marked.count
            prod = eps_eff * n
            exact = prod == float(unmarked)
            if n & (n - 1) == 0 and not exact:
                return _result("prior.epsilon_exactness", False,
                               f"eps_eff * n inexact at n = {n}, target {eps_target}")
            if round(prod) != unmarked or abs(prod - unmarked) > np.spacing(float(max(unmarked, 1))):
                return _result("prior.epsilon_exactness", False,
                               f"count not recovered at n = {n}, target {eps_target}")
    return _result("prior.epsilon_exactness", True,
                   "bit-exact at power-of-2 n; half-ulp recovery at n = 100")


def check_simpson_matches_exact(rng) -> CheckResult:
    worst = 0.0
    p = prior.EpsilonPrior(0.37)
    for _ in range(20):
        coeffs = tuple(float(c) for c in rng.uniform(0.0, 0.25, size=4))
        model = baselines.FailureModel("poly", coeffs, 0)
        exact = prior.integrate_polynomial(model, p)
        quad = prior.integrate_simulated(model.failure, p, 9)
        worst = max(worst, abs(quad - exact))
    return _result("prior.simpson_matches_exact", worst < 1e-12,
                   f"max |simpson - exact| {worst:.2e} on degree <= 3")


def check_marked_set_determinism() -> CheckResult:
    a, _ = prior.make_marked_set(128, 0.37, 1234)
    b, _ = prior.make_marked_set(128, 0.37, 1234)
    return _result("prior.marked_set_determinism", a == b,
                   "identical (n, eps_target, seed) give identical sets")


def run_battery(n: int = 1024, dims=(2, 4, 8, 64), trials: int = 100,
                seed: int = 0) -> list:
    """Run every invariant check; returns one CheckResult per check."""
    rng = np.random.default_rng(seed)
    dims = tuple(dims)
    return [
        check_parseval_complement(rng),
        check_measurement_frequencies(rng),
        check_norm_preservation(rng),
        check_walsh_involution(rng),
        check_phase_composition(rng),
        check_selective_phase_matrix(rng),
        check_haar_unitarity(rng),
        check_error_cubing(rng, dims, trials),
        check_final_state_formula(rng, dims, max(1, trials // 4)),
        check_monotone_improvement(),
        check_recursion_law(),
        check_cancellation_identity(),
        check_pi_phase_contrast(),
        check_database_consistency(rng, n),
        check_ancilla_eigenvector(),
        check_ancilla_permutation(rng),
        check_kickback_equivalence(rng),
        check_ancilla_sixfold(rng),
        check_younes_specialization(),
        check_failure_ordering(),
        check_zero_endpoints(),
        check_models_vs_simulation(rng),
        check_exact_integrals(),
        check_epsilon_exactness(rng),
        check_simpson_matches_exact(rng),
        check_marked_set_determinism(),
    ]

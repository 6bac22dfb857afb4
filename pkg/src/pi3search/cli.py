"""Command-line harness: verification battery, comparison sweeps, multi-query tables, Monte Carlo.

Exit codes: 0 on success, 1 on a verification failure, 2 on a usage error.
CSV output uses a header row, LF line endings, and floats printed with 17
significant digits so files round-trip bit-exactly.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import baselines, fixedpoint, verification
from .ancilla import kickback_equivalence, prepare_phase_ancilla
from .operators import WalshHadamard, is_power_of_two
from .prior import (
    EpsilonPrior,
    discretized_expected_failure,
    integrate_polynomial,
    integrate_simulated,
    make_marked_set,
)
from .statevec import MarkedSet, random_state, sample_measurement

ALGORITHMS = ("classical", "mosca", "younes", "pi3")
SWEEP_HEADER = "eps0,algorithm,queries,integrated_failure,method,n,seed"
MULTIQUERY_HEADER = ("depth,queries,eps0,pi3_integrated_failure,classical_integrated_failure,"
                     "pi3_simulated_failure,classical_monte_carlo_failure,n,trials,seed")
MONTECARLO_HEADER = ("algorithm,n,eps0,trials,seed,failures,empirical_failure,"
                     "ci_low,ci_high,predicted_failure")
SIMPSON_POINTS = 101


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class SweepRecord:
    """One row of the comparison sweep."""

    eps0: float
    algorithm: str
    queries: int
    integrated_failure: float
    method: str
    n: int
    seed: int | None

    def csv_row(self) -> str:
        seed = "" if self.seed is None else str(self.seed)
        return (f"{_fmt(self.eps0)},{self.algorithm},{self.queries},"
                f"{_fmt(self.integrated_failure)},{self.method},{self.n},{seed}")


def _write_lines(path: str, lines) -> None:
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def _report(path_used: str, *lines) -> None:
    # keep stdout clean for CSV when it is the CSV sink
    stream = sys.stderr if path_used == "-" else sys.stdout
    for line in lines:
        print(line, file=stream)


def wilson_interval(failures: int, trials: int, z: float = 1.959963984540054) -> tuple:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = failures / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * np.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _closed_form_model(algorithm: str):
    if algorithm == "classical":
        return baselines.classical_model(1)
    if algorithm == "mosca":
        return baselines.mosca_model()
    if algorithm == "younes":
        return baselines.younes_model(1)
    return baselines.pi3_model(1)


def _simulated_pi3_integral(n: int, pr: EpsilonPrior, depth: int, seed: int) -> float:
    """Simpson prior average of the statevector-simulated failure at depth m."""
    rng = np.random.default_rng([seed, depth])
    n_qubits = n.bit_length() - 1
    inst_u = WalshHadamard(n_qubits)

    def failure_at(eps: float) -> float:
        marked, _ = make_marked_set(n, eps, rng)
        if depth == 1:
            return fixedpoint.database_search(n, marked).failure_probability
        inst = fixedpoint.SearchInstance(inst_u, 0, marked)
        return fixedpoint.recursive_composite(inst, depth).failure_probability

    return integrate_simulated(failure_at, pr, SIMPSON_POINTS)


def _montecarlo_classical_integral(n: int, pr: EpsilonPrior, q: int,
                                   trials_per_point: int, seed: int) -> float:
    """Simpson prior average of per-point classical Monte Carlo failure rates."""
    rng = np.random.default_rng([seed, q, 1])

    def failure_at(eps: float) -> float:
        marked, _ = make_marked_set(n, eps, rng)
        return baselines.classical_monte_carlo(n, marked, q, trials_per_point, rng)

    return integrate_simulated(failure_at, pr, SIMPSON_POINTS)


# ---------------------------------------------------------------- commands

def cmd_verify(args, parser) -> int:
    if not is_power_of_two(args.n):
        parser.error(f"--n must be a power of 2, got {args.n}")
    try:
        dims = tuple(int(d) for d in args.dims.split(","))
    except ValueError:
        parser.error(f"--dims must be a comma-separated list of integers, got {args.dims!r}")
    if not dims or any(d < 1 for d in dims):
        parser.error(f"--dims entries must be >= 1, got {args.dims!r}")
    if args.trials < 1:
        parser.error(f"--trials must be >= 1, got {args.trials}")

    checks = verification.run_battery(n=args.n, dims=dims, trials=args.trials,
                                      seed=args.seed)
    for c in checks:
        print(f"[{'ok' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    failed = sum(not c.passed for c in checks)
    print(f"VERIFY pass={len(checks) - failed} fail={failed}")
    return 0 if failed == 0 else 1


def cmd_sweep(args, parser) -> int:
    if not 0.0 < args.eps0_max <= 1.0:
        parser.error(f"--eps0-max must lie in (0, 1], got {args.eps0_max}")
    if args.grid < 2:
        parser.error(f"--grid must be >= 2, got {args.grid}")
    algorithms = tuple(a.strip() for a in args.algorithms.split(","))
    for a in algorithms:
        if a not in ALGORITHMS:
            parser.error(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
    if args.n is not None and not is_power_of_two(args.n):
        parser.error(f"--n must be a power of 2, got {args.n}")

    records = []
    for i in range(1, args.grid + 1):
        eps0 = args.eps0_max * i / args.grid
        pr = EpsilonPrior(eps0)
        for algo in algorithms:
            model = _closed_form_model(algo)
            records.append(SweepRecord(eps0, algo, model.query_count,
                                       integrate_polynomial(model, pr),
                                       "closed_form", 0, None))
        if args.n is not None and "pi3" in algorithms:
            value = _simulated_pi3_integral(args.n, pr, 1, args.seed + i)
            records.append(SweepRecord(eps0, "pi3", 1, value, "simulated",
                                       args.n, args.seed))
    records.sort(key=lambda r: (r.eps0, r.algorithm, r.method))
    _write_lines(args.out, [SWEEP_HEADER] + [r.csv_row() for r in records])
    return 0


def cmd_multiquery(args, parser) -> int:
    if args.depth_max < 0:
        parser.error(f"--depth-max must be >= 0, got {args.depth_max}")
    if not 0.0 < args.eps0 <= 1.0:
        parser.error(f"--eps0 must lie in (0, 1], got {args.eps0}")
    if not is_power_of_two(args.n):
        parser.error(f"--n must be a power of 2, got {args.n}")
    if args.trials < 1:
        parser.error(f"--trials must be >= 1, got {args.trials}")

    pr = EpsilonPrior(args.eps0)
    lines = [MULTIQUERY_HEADER]
    for depth in range(args.depth_max + 1):
        q = (3 ** depth - 1) // 2
        pi3_int = integrate_polynomial(baselines.pi3_model(depth), pr)
        cls_int = integrate_polynomial(baselines.classical_model(q), pr)
        if depth <= 2:
            pi3_sim = _fmt(_simulated_pi3_integral(args.n, pr, depth, args.seed))
            cls_sim = _fmt(_montecarlo_classical_integral(args.n, pr, q,
                                                          args.trials, args.seed))
        else:
            pi3_sim = cls_sim = ""
        lines.append(f"{depth},{q},{_fmt(args.eps0)},{_fmt(pi3_int)},{_fmt(cls_int)},"
                     f"{pi3_sim},{cls_sim},{args.n},{args.trials},{args.seed}")
    _write_lines(args.out, lines)
    return 0


def cmd_ancilla(args, parser) -> int:
    if not is_power_of_two(args.n):
        parser.error(f"--n must be a power of 2, got {args.n}")
    if args.trials < 1:
        parser.error(f"--trials must be >= 1, got {args.trials}")

    rng = np.random.default_rng(args.seed)
    anc = prepare_phase_ancilla()
    eig_dev = float(np.max(np.abs(np.roll(anc.amps, 1)
                                  - np.exp(1j * np.pi / 3.0) * anc.amps)))
    n = args.n
    worst = 1.0
    cases = [MarkedSet(n), MarkedSet.full(n)]
    cases += [MarkedSet(n, rng.permutation(n)[:int(rng.integers(0, n + 1))])
              for _ in range(args.trials)]
    for marked in cases:
        fid = kickback_equivalence(random_state(n, rng), marked)
        worst = min(worst, fid)
    ok = worst >= 1.0 - 1e-9 and eig_dev < 1e-12
    print(f"ancilla eigenvector deviation: {eig_dev:.2e}")
    print(f"min kickback fidelity over {len(cases)} cases at n={n}: {worst:.12f}")
    print(f"ANCILLA {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_montecarlo(args, parser) -> int:
    if args.trials < 1:
        parser.error(f"--trials must be >= 1, got {args.trials}")
    if not 0.0 < args.eps0 <= 1.0:
        parser.error(f"--eps0 must lie in (0, 1], got {args.eps0}")
    if args.algorithm == "pi3" and not is_power_of_two(args.n):
        parser.error(f"--n must be a power of 2 for pi3, got {args.n}")
    if args.n < 1:
        parser.error(f"--n must be >= 1, got {args.n}")

    pr = EpsilonPrior(args.eps0)
    rng = np.random.default_rng(args.seed)
    failures = 0
    for _ in range(args.trials):
        eps = rng.random() * args.eps0
        marked, _ = make_marked_set(args.n, eps, rng)
        if args.algorithm == "pi3":
            res = fixedpoint.database_search(args.n, marked)
            outcome = sample_measurement(res.final_state, rng)
            failures += outcome not in marked
        else:
            picks = rng.integers(0, args.n, size=2)
            failures += not any(int(p) in marked for p in picks)

    exponent = 3 if args.algorithm == "pi3" else 2
    predicted = discretized_expected_failure(args.n, pr, lambda e: e ** exponent)
    p_hat = failures / args.trials
    lo, hi = wilson_interval(failures, args.trials)
    row = (f"{args.algorithm},{args.n},{_fmt(args.eps0)},{args.trials},{args.seed},"
           f"{failures},{_fmt(p_hat)},{_fmt(lo)},{_fmt(hi)},{_fmt(predicted)}")
    _write_lines(args.out, [MONTECARLO_HEADER, row])
    inside = "inside" if lo <= predicted <= hi else "OUTSIDE"
    _report(args.out,
            f"montecarlo {args.algorithm}: n={args.n} eps0={args.eps0} "
            f"trials={args.trials} seed={args.seed}",
            f"  empirical failure {p_hat:.6g} (95% CI [{lo:.6g}, {hi:.6g}])",
            f"  snapped-grid prediction {predicted:.6g} is {inside} the interval")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pi3search",
        description="Fixed-point quantum search with pi/3 phase shifts: "
                    "verification, comparison sweeps, and Monte Carlo runs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the full invariant battery")
    p.add_argument("--n", type=int, default=1024,
                   help="database size for simulation spot checks (power of 2, default 1024)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--dims", default="2,4,8,64",
                   help="comma-separated dimensions for the random-unitary battery")
    p.add_argument("--trials", type=int, default=100,
                   help="random unitaries per dimension (default 100)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="integrated-failure comparison CSV over eps0")
    p.add_argument("--eps0-max", type=float, default=0.2, dest="eps0_max",
                   help="top of the eps0 grid, in (0, 1] (default 0.2)")
    p.add_argument("--grid", type=int, default=41,
                   help="number of grid points in (0, eps0-max] (default 41)")
    p.add_argument("--n", type=int, default=None,
                   help="database size; adds simulated pi3 rows when given")
    p.add_argument("--algorithms", default=",".join(ALGORITHMS),
                   help="comma-separated subset of classical,mosca,younes,pi3")
    p.add_argument("--seed", type=int, default=0, help="seed for simulated rows (default 0)")
    p.add_argument("--out", default="-", help="output CSV path, - for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("multiquery", help="recursion-depth table: pi/3 vs classical")
    p.add_argument("--depth-max", type=int, default=3, dest="depth_max",
                   help="largest recursion depth m (default 3); queries are (3^m-1)/2")
    p.add_argument("--eps0", type=float, default=0.2, help="prior range (default 0.2)")
    p.add_argument("--n", type=int, default=1024,
                   help="database size for cross-check simulation (default 1024)")
    p.add_argument("--trials", type=int, default=20000,
                   help="classical Monte Carlo trials per grid point (default 20000)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--out", default="-", help="output CSV path, - for stdout")
    p.set_defaults(func=cmd_multiquery)

    p = sub.add_parser("ancilla", help="verify the six-level phase-kickback construction")
    p.add_argument("--n", type=int, default=8,
                   help="main register size (power of 2, default 8)")
    p.add_argument("--trials", type=int, default=50,
                   help="random (state, marked set) pairs (default 50)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.set_defaults(func=cmd_ancilla)

    p = sub.add_parser("montecarlo", help="end-to-end sampled runs against the prior")
    p.add_argument("--n", type=int, default=1024, help="database size (default 1024)")
    p.add_argument("--eps0", type=float, default=0.2, help="prior range (default 0.2)")
    p.add_argument("--trials", type=int, default=100_000,
                   help="number of end-to-end trials (default 100000)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--algorithm", choices=("pi3", "classical"), default="pi3",
                   help="which algorithm to run per trial (default pi3)")
    p.add_argument("--out", default="-", help="output CSV path, - for stdout")
    p.set_defaults(func=cmd_montecarlo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

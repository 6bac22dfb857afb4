#!/usr/bin/env python3
"""Regenerate the headline numbers: comparison sweep, multi-query table, Monte Carlo spot check.

Writes comparison.csv and multiquery.csv into --outdir (default ./results)
and prints the integrated failure probabilities at the eps0 = 0.2 endpoint.
Plot the sweep afterwards with scripts/plot_comparison.py.
"""

import argparse
import pathlib
import sys

from pi3search import (
    EpsilonPrior,
    classical_model,
    integrate_polynomial,
    mosca_model,
    pi3_model,
    younes_model,
)
from pi3search.cli import main as cli_main


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--montecarlo-trials", type=int, default=20000,
                    help="per-algorithm end-to-end trials (default 20000)")
    args = ap.parse_args(argv)

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    pr = EpsilonPrior(0.2)
    print("integrated failure probabilities at eps0 = 0.2:")
    for model in (pi3_model(1), mosca_model(), classical_model(1), younes_model(1)):
        print(f"  {model.name:10s} {integrate_polynomial(model, pr):.10g}")

    sweep_csv = outdir / "comparison.csv"
    rc = cli_main(["sweep", "--eps0-max", "0.2", "--grid", "41",
                   "--n", str(args.n), "--seed", str(args.seed),
                   "--out", str(sweep_csv)])
    if rc:
        return rc
    print(f"wrote {sweep_csv}")

    mq_csv = outdir / "multiquery.csv"
    rc = cli_main(["multiquery", "--depth-max", "3", "--eps0", "0.2",
                   "--n", str(args.n), "--seed", str(args.seed),
                   "--out", str(mq_csv)])
    if rc:
        return rc
    print(f"wrote {mq_csv}")

    for algo in ("pi3", "classical"):
        rc = cli_main(["montecarlo", "--algorithm", algo, "--n", str(args.n),
                       "--trials", str(args.montecarlo_trials),
                       "--seed", str(args.seed),
                       "--out", str(outdir / f"montecarlo_{algo}.csv")])
        if rc:
            return rc
    print(f"wrote {outdir}/montecarlo_pi3.csv and montecarlo_classical.csv")
    return 0


if __name__ == "__main__":
    sys.exit(run())

#!/usr/bin/env python3
"""Plot the integrated failure-probability comparison from a sweep CSV.

Usage: python scripts/plot_comparison.py results/comparison.csv [-o comparison.png]
"""

import argparse
import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

STYLES = {
    "pi3": dict(color="tab:blue", label="pi/3 fixed point (eps0^3 / 4)"),
    "mosca": dict(color="tab:green", label="single-query counting (eps0^2/4 + eps0^3/16)"),
    "classical": dict(color="tab:orange", label="classical two-pick (eps0^2 / 3)"),
    "younes": dict(color="tab:red", label="partial diffusion, q=1"),
}


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv_path")
    ap.add_argument("-o", "--output", default="comparison.png")
    ap.add_argument("--logy", action="store_true", help="log-scale failure axis")
    args = ap.parse_args(argv)

    curves = defaultdict(list)
    with open(args.csv_path, newline="") as fh:
        for row in csv.DictReader(fh):
            key = (row["algorithm"], row["method"])
            curves[key].append((float(row["eps0"]), float(row["integrated_failure"])))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (algo, method), pts in sorted(curves.items()):
        pts.sort()
        xs, ys = zip(*pts)
        style = dict(STYLES.get(algo, {}))
        if method == "simulated":
            style["label"] = f"{algo} simulated"
            ax.plot(xs, ys, "x", markersize=4, **style)
        else:
            ax.plot(xs, ys, "-", linewidth=1.5, **style)
    ax.set_xlabel("eps0 (upper limit of the unmarked-fraction prior)")
    ax.set_ylabel("integrated failure probability")
    if args.logy:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(run())

"""Render the standard figures from library output (needs matplotlib).

    python3 docs/examples/plot_figures.py --out figures/
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from collabest import (  # noqa: E402
    SourceDistribution,
    budget_analysis,
    build_named,
    penalized_sweep,
    recommend,
    run_synchronous,
    select_d_star,
    tau_exact_curve,
)


def trajectories(out):
    trace = run_synchronous(build_named("tridiag_a2", 5), SourceDistribution.uniform01(), 1000, 1, seed=0)
    fig, ax = plt.subplots()
    ax.semilogx(trace.t_grid, trace.node_mean)
    ax.axhline(0.5, color="k", lw=0.5)
    ax.set(xlabel="t", ylabel="estimate")
    fig.savefig(out / "trajectories.png", dpi=120)


def ratio_curves(out, n=20):
    t = np.unique(np.logspace(0, 4, 80).astype(int))
    fig, ax = plt.subplots()
    for kind in ("full", "tridiag_a1", "tridiag_a2", "identity"):
        ax.semilogx(t, tau_exact_curve(build_named(kind, n), t), label=kind)
    ax.set(xlabel="t", ylabel="tau_t", ylim=(0, 1.02))
    ax.legend()
    fig.savefig(out / "tau_curves.png", dpi=120)


def tradeoff(out, n=200, seed=0):
    betas = (0.5, 1, 2, 4)
    recs = [r for r in penalized_sweep(n, betas=betas, seed=seed) if r.status == "ok"]
    fig, ax = plt.subplots()
    for beta in betas:
        rows = [r for r in recs if r.beta == beta]
        ax.plot([r.d for r in rows], [r.penalized for r in rows], label=f"beta={beta}")
    ax.set(xlabel="d", ylabel="S + beta d", yscale="log")
    ax.legend(title=str(select_d_star(recs)), fontsize="small")
    fig.savefig(out / "tradeoff.png", dpi=120)


def budget(out, seed=0):
    recs = budget_analysis(10**8, range(100, 2001, 10), threshold=0.99, seed=seed)
    ok = [r for r in recs if r.feasible]
    best = recommend(recs)
    fig, ax = plt.subplots()
    ax.plot([r.n for r in ok], [r.cost_ratio for r in ok])
    ax.plot([best.n], [best.cost_ratio], "ro")
    ax.set(xlabel="n", ylabel="d*/n", title=f"minimum at n={best.n}, d*={best.d_star}")
    fig.savefig(out / "budget.png", dpi=120)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="figures")
    parser.add_argument("--skip-slow", action="store_true", help="omit the tradeoff and budget figures")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trajectories(out)
    ratio_curves(out)
    if not args.skip_slow:
        tradeoff(out)
        budget(out)


if __name__ == "__main__":
    main()

"""Figure rendering for the CLI report path. All figures go to files; no
interactive backend is ever required."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .metrics import METRIC_NAMES


def render_report(report, path, title=""):
    """Bar chart of metric means with std error bars."""
    names = list(METRIC_NAMES)
    means = [report.means[m] for m in names]
    stds = [report.stds[m] for m in names]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(names, means, yerr=stds, capsize=4, color="#4878cf")
    ax.set_ylabel("score")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_convergence(history, path, title=""):
    """Log-scale residual curves vs iteration."""
    history = np.asarray(history)
    its = np.arange(1, history.shape[0] + 1)
    labels = ("X residual", "Z residual", "V residual")
    fig, ax = plt.subplots(figsize=(6, 4))
    for j, lab in enumerate(labels[: history.shape[1]]):
        ax.semilogy(its, np.maximum(history[:, j], 1e-300), label=lab)
    ax.set_xlabel("iteration")
    ax.set_ylabel("max-abs residual")
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep(rows, path, metric="NMI", title=""):
    """Mean of one metric vs k, one line per lambda.

    rows: iterables of (lam, k, metric_name, mean, std).
    """
    by_lam = {}
    for lam, k, name, mean, _ in rows:
        if name != metric:
            continue
        by_lam.setdefault(lam, []).append((k, mean))
    fig, ax = plt.subplots(figsize=(6, 4))
    for lam in sorted(by_lam):
        pts = sorted(by_lam[lam])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                label=f"lambda={lam:g}")
    ax.set_xlabel("k")
    ax.set_ylabel(f"mean {metric}")
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

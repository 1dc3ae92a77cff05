"""Figure rendering for experiment reports.

Renders the diffusion trace, the per-step spectra, and the localization
curves to PNG files next to the CSV output.  Figures are deterministic:
fixed size and dpi, no timestamps or software metadata, so reruns are
byte-identical.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import MBCG_LABELS, DiffusionTrace, MbcgSummary

_SAVE_KWARGS = {"dpi": 110, "metadata": {"Software": None}}


def plot_trace(trace: DiffusionTrace, path) -> None:
    """Heatmap of node values across the recorded diffusion steps."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    im = ax.imshow(
        trace.snapshots.T,
        aspect="auto",
        interpolation="nearest",
        cmap="viridis",
    )
    ax.set_xticks(range(len(trace.steps)))
    ax.set_xticklabels([str(k) for k in trace.steps])
    ax.set_xlabel("diffusion step k")
    ax.set_ylabel("node")
    ax.set_title("signal values along the diffusion")
    fig.colorbar(im, ax=ax, label="value")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def plot_spectra(spectra: dict[str, np.ndarray], steps, path) -> None:
    """Per-basis panels of |coefficient| against frequency rank, one line per step."""
    labels = [lb for lb in MBCG_LABELS if lb in spectra]
    fig, axes = plt.subplots(
        1, len(labels), figsize=(4.0 * len(labels), 3.4), sharey=True
    )
    if len(labels) == 1:
        axes = [axes]
    for ax, label in zip(axes, labels):
        mags = np.abs(spectra[label])
        for row, k in zip(mags, steps):
            ax.plot(row, linewidth=0.8, label=f"k={k}")
        ax.set_title(label)
        ax.set_xlabel("frequency rank")
    axes[0].set_ylabel("|coefficient|")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def plot_localization(summary: MbcgSummary, path) -> None:
    """Seed-mean entropy and top-decile energy as functions of the step."""
    fig, (ax_h, ax_t) = plt.subplots(1, 2, figsize=(8.0, 3.4))
    xs = range(len(summary.ks))
    for label in MBCG_LABELS:
        ax_h.plot(xs, summary.mean_entropy[label], marker="o", label=label)
        ax_t.plot(xs, summary.mean_top_decile[label], marker="o", label=label)
    for ax in (ax_h, ax_t):
        ax.set_xticks(list(xs))
        ax.set_xticklabels([str(k) for k in summary.ks])
        ax.set_xlabel("diffusion step k")
    ax_h.set_ylabel("mean spectral entropy (nats)")
    ax_t.set_ylabel("mean top-decile energy")
    ax_h.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)

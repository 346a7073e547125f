"""Figure rendering for experiment tables and fuzz reports.

Kept separate from the verification logic: nothing here is asserted, the
plots are a reading aid saved next to the delimited output.  Uses the Agg
backend so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .errors import IoError  # noqa: E402


def _save(fig, path) -> None:
    try:
        fig.savefig(path, dpi=150, bbox_inches="tight")
    except OSError as exc:
        raise IoError(f"cannot write figure to {path}: {exc}") from exc
    finally:
        plt.close(fig)


def plot_scaling(rows, path) -> None:
    """Log-log minimum uncertainty vs resource count, measured and closed form."""
    ks = [r.n_sites for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.loglog(ks, [r.delta_product_closed for r in rows], "-", color="C0",
              label=r"product bound $1/\sqrt{NK}(\Lambda-\lambda)$")
    ax.loglog(ks, [r.delta_product for r in rows], "o", color="C0", mfc="none",
              label="product (measured)")
    ax.loglog(ks, [r.delta_entangled_closed for r in rows], "-", color="C1",
              label=r"entangled bound $1/\sqrt{N}K(\Lambda-\lambda)$")
    ax.loglog(ks, [r.delta_entangled for r in rows], "s", color="C1", mfc="none",
              label="entangled (measured)")
    ax.set_xlabel("subsystems $K$")
    ax.set_ylabel(r"$\delta x_{\min}$")
    ax.set_xticks(ks)
    ax.set_xticklabels([str(k) for k in ks])
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, path)


def plot_werner(rows, path) -> None:
    """QFI of the noise-admixed GHZ probe across the admixture grid."""
    qs = [r.q for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.plot(qs, [r.qfi for r in rows], "o-", color="C2")
    ax.set_xlabel("GHZ weight $q$")
    ax.set_ylabel("QFI")
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def plot_lemma_margins(results, path) -> None:
    """Histogram of convexity margins (rhs - lhs) over the fuzzed trials."""
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.hist([r.margin for r in results], bins=60, color="C0")
    ax.set_xlabel("margin")
    ax.set_ylabel("trials")
    ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def plot_theorem_margins(results, path) -> None:
    """QFI gap (best pure minus mixed) and chain margins over the trials."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 4.2))
    axes[0].hist([r.qfi_best_pure - r.qfi_mixed for r in results], bins=60, color="C1")
    axes[0].set_xlabel("max pure QFI - mixed QFI")
    axes[0].set_ylabel("trials")
    axes[0].set_yscale("log")
    axes[1].hist([r.chain_margin for r in results], bins=60, color="C2")
    axes[1].set_xlabel("convexity chain margin")
    axes[1].set_yscale("log")
    for ax in axes:
        ax.grid(True, alpha=0.3)
    _save(fig, path)

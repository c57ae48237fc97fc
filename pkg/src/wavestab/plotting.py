"""Render figure scans and stability scans to image files.

matplotlib is imported lazily with the non-interactive Agg backend, so the
numerical modules never depend on it.
"""

from __future__ import annotations

from pathlib import Path

from .figures import FigureScan
from .pencil import ScanResult


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_figure_scan(scan: FigureScan, path: str | Path) -> Path:
    """Plot ``value`` against ``kappa`` and mark failing claims in the title."""
    plt = _pyplot()
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(scan.kappas, scan.values, lw=1.5, color="C0")
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel(scan.label)
    failed = [c.claim for c in scan.claims if not c.holds]
    title = f"figure {scan.figure}"
    if failed:
        title += " (fails: " + ", ".join(failed) + ")"
    ax.set_title(title, fontsize=9)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_stability_scan(scan: ScanResult, path: str | Path) -> Path:
    """Plot ``max_growth`` against ``c`` with the closed-form ``c_T`` marked."""
    plt = _pyplot()
    path = Path(path)
    cs = [r[0] for r in scan.rows]
    growth = [max(r[1], 1e-16) for r in scan.rows]
    colors = ["C2" if r[2] else "C3" for r in scan.rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(cs, growth, color="0.5", lw=0.8)
    ax.scatter(cs, growth, c=colors, s=18, zorder=3)
    if scan.c_T_closed < 1.0:
        ax.axvline(scan.c_T_closed, color="C0", ls="--", lw=1.0, label=r"closed-form $c_T$")
        ax.legend(fontsize=8)
    ax.set_xlabel(r"$c$")
    ax.set_ylabel("max Re lambda")
    ax.set_title(f"{scan.model}, T = {scan.T:g}", fontsize=9)
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path

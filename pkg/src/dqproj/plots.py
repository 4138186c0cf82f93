"""Figure rendering for benchmark reports.

Kept separate from the statistics code so library users never pull in a
GUI backend; the CLI report path writes these figures next to its CSV
output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bench import CdfSeries

__all__ = ["save_cdf_figure"]


def save_cdf_figure(series: CdfSeries, label: str, path: str,
                    title: str | None = None) -> None:
    """Render one empirical CDF as a step plot and save it.

    Uses a log x-axis when every value is positive and the range spans
    more than two decades, which is the usual shape for feasibility
    errors near machine precision.
    """
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    v = series.sorted_values
    ax.step(v, series.cumulative_fraction, where="post", lw=1.4)
    vmin, vmax = float(v[0]), float(v[-1])
    if vmin > 0.0 and vmax / vmin > 1e2:
        ax.set_xscale("log")
    ax.set_xlabel(label)
    ax.set_ylabel("cumulative fraction")
    ax.set_ylim(0.0, 1.02)
    ax.grid(True, which="both", alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

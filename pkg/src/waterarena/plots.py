"""Static figures from exported plot data.

Consumes the plot_data.json structure emitted by the analysis module, so
anything plotted here reflects exactly the declared conventions (linear-
interpolation quartiles, min/max whiskers, early-ended days omitted).
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _min_bid_figure(label: str, group: dict, path: Path) -> None:
    days_data = group["min_bid"]["days"]
    days = sorted(int(d) for d in days_data)
    stats = []
    for day in days:
        d = days_data[str(day)]
        stats.append(
            {
                "med": d["median"],
                "q1": d["q1"],
                "q3": d["q3"],
                "whislo": d["lo"],
                "whishi": d["hi"],
                "fliers": [],
                "label": str(day),
            }
        )
    fig, ax = plt.subplots(figsize=(10, 4))
    if stats:
        ax.bxp(stats, positions=days, showfliers=False)
        medians = group["min_bid"]["median_series"]
        ax.plot(days, [medians[str(d)] for d in days], marker="o", linewidth=1)
    mean_of_medians = group["min_bid"]["mean_of_medians"]
    if mean_of_medians is not None:
        ax.axhline(mean_of_medians, linestyle="--", linewidth=1)
    ax.set_xlabel("day")
    ax.set_ylabel("min successful bid ($)")
    ax.set_title(f"{label}: minimum successful bid per day")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _distribution_figure(
    plot_groups: Dict[str, dict], key: str, ylabel: str, path: Path
) -> None:
    labels = list(plot_groups)
    series = []
    for label in labels:
        values = plot_groups[label][key]
        series.append([v for v in values if v is not None])
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.boxplot(series, tick_labels=labels, whis=(0, 100))
    ax.set_ylabel(ylabel)
    ax.set_title(ylabel + " per group")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_plots(plot_data: dict, out_dir: Path) -> Dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: Dict[str, Path] = {}
    groups = plot_data["groups"]
    for label, group in groups.items():
        safe = label.replace("/", "_").replace(" ", "_")
        path = out_dir / f"min_bid_{safe}.png"
        _min_bid_figure(label, group, path)
        paths[f"min_bid_{label}"] = path
    paths["n_survivor"] = out_dir / "n_survivor.png"
    _distribution_figure(groups, "n_survivor", "number of survivors", paths["n_survivor"])
    paths["rsr_e"] = out_dir / "rsr_e.png"
    _distribution_figure(groups, "rsr_e", "RSR at game end", paths["rsr_e"])
    return paths

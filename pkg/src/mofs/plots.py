"""Figure rendering for the reporting paths (written next to the CSVs)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_MARKERS = ("o", "^", "s", "D", "v", "P")


def render_front_scatter(title: str, per_algorithm: dict, path) -> None:
    """3-D scatter of (error rate, subset size, missing rate) per algorithm."""
    fig = plt.figure(figsize=(7.0, 5.5))
    ax = fig.add_subplot(111, projection="3d")
    for i, name in enumerate(sorted(per_algorithm)):
        pts = per_algorithm[name]
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2],
                   label=name, marker=_MARKERS[i % len(_MARKERS)],
                   s=28, alpha=0.75)
    ax.set_xlabel("classification error rate")
    ax.set_ylabel("selected features")
    ax.set_zlabel("missing rate (%)")
    ax.set_title(title)
    ax.view_init(elev=22, azim=45)
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_metric_boxplots(dataset_name: str, metric_values: dict, path) -> None:
    """2x2 grid of per-run metric distributions (IGD/HV x train/test).

    metric_values maps (metric, split) to an {algorithm: [values]} dict.
    """
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 7.0))
    for row, metric in enumerate(("IGD", "HV")):
        for col, split_name in enumerate(("train", "test")):
            ax = axes[row][col]
            per_algorithm = metric_values.get((metric, split_name), {})
            names = sorted(per_algorithm)
            if names:
                ax.boxplot([per_algorithm[n] for n in names])
                ax.set_xticks(range(1, len(names) + 1))
                ax.set_xticklabels(names)
            ax.set_title(f"{metric} on {split_name}")
            ax.grid(True, alpha=0.3)
    fig.suptitle(dataset_name)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

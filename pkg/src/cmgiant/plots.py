"""Render figure datasets to image files (headless matplotlib)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def plot_family_figure(
    header: list[str], rows: list[tuple], path: str, title: str = ""
) -> None:
    """Component size against the control probability, one line per family.

    Datasets with a nu column additionally get the critical parameter on a
    secondary axis when there is a single family.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    grouped: dict[str, list[tuple]] = {}
    if header and header[0] == "family":
        for row in rows:
            grouped.setdefault(str(row[0]), []).append(row[1:])
    else:
        grouped[""] = rows

    for name, data in grouped.items():
        xs = [r[0] for r in data]
        ys = [r[1] for r in data]
        ax.plot(xs, ys, label=name or "xi")
    ax.set_xlabel("p1")
    ax.set_ylabel("giant-component fraction")
    ax.grid(alpha=0.3)

    if len(grouped) == 1 and "nu" in header:
        data = next(iter(grouped.values()))
        nus = [r[2] for r in data]
        ax2 = ax.twinx()
        ax2.plot([r[0] for r in data], nus, color="tab:red", linestyle="--",
                 label="critical parameter")
        ax2.set_ylabel("critical parameter")
    if len(grouped) > 1:
        ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_maxgap_figure(header: list[str], rows: list[tuple], path: str) -> None:
    """Maximal bound gap against the class mean."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    ax.plot(xs, ys, marker="o", markersize=3)
    ax.set_xlabel("mu")
    ax.set_ylabel("max upper-lower bound gap")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

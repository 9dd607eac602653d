"""Figure builders: benefit-sweep curves, p-q heatmaps, learning curves.

Rendering is read-only over the input rows; the color scale of heatmaps
is pinned to [0, 1] so panels stay comparable across algorithms and
inputs. Axis convention for heatmaps: q rightward, p upward, which puts
the four pure opponent strategies at the corners (always-trust top
right, never-trust bottom left, trust-cooperators top left,
trust-defectors bottom right).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .data import (
    FigureDataError,
    ResultRow,
    load_results,
    policies_in_order,
    rectangular_grid,
    require_unit_interval,
    single_value,
)

KINDS = ("b-sweep", "pq-heatmap", "time-course")

CORNER_STRATEGIES = (
    # label, q, p
    ("AT", 1.0, 1.0),
    ("NT", 0.0, 0.0),
    ("TC", 0.0, 1.0),
    ("TD", 1.0, 0.0),
)


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv_paths: tuple[str, ...]
    out_path: str
    threshold: bool = True           # analytic overlay on the epsilon-greedy panel
    marker: tuple[float, float] | None = (0.81, 0.36)  # (p, q) cross on heatmaps
    benefit_marker: float | None = 2.0                 # dashed vertical on b-sweeps

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise FigureDataError(f"unknown figure kind {self.kind!r}")


def _edges(values: list[float], fallback_half_width: float = 0.025) -> np.ndarray:
    """Cell edges around sorted center values; single cells get a fixed pad."""
    centers = np.asarray(values, dtype=float)
    if len(centers) == 1:
        return np.array(
            [centers[0] - fallback_half_width, centers[0] + fallback_half_width]
        )
    mids = (centers[:-1] + centers[1:]) / 2
    first = centers[0] - (mids[0] - centers[0])
    last = centers[-1] + (centers[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def _threshold_curve(b: float, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """Dominance boundary p*(q): cooperation pays above it for epsilon-greedy."""
    q = np.linspace(0.0, 1.0, 201)
    p_star = (3.0 / (b + 3.0) - (epsilon / 2.0) * q) / (1.0 - epsilon / 2.0)
    mask = (p_star >= 0.0) & (p_star <= 1.0)
    return q[mask], p_star[mask]


def build_pq_heatmap(rows: list[ResultRow], spec: FigureSpec):
    require_unit_interval(rows)
    policies = policies_in_order(rows)
    fig, axes = plt.subplots(
        1, len(policies),
        figsize=(3.6 * len(policies) + 1.2, 3.8),
        sharey=True, squeeze=False, constrained_layout=True,
    )
    mesh = None
    for ax, policy in zip(axes[0], policies):
        panel_rows = [row for row in rows if row.policy == policy]
        p_values, q_values, matrix = rectangular_grid(panel_rows, f"policy {policy}")
        mesh = ax.pcolormesh(
            _edges(q_values), _edges(p_values), np.asarray(matrix),
            cmap="viridis", vmin=0.0, vmax=1.0,
        )
        ax.set_title(policy)
        ax.set_xlabel("q")
        for label, q_corner, p_corner in CORNER_STRATEGIES:
            ax.text(
                0.04 + 0.92 * q_corner, 0.04 + 0.92 * p_corner, label,
                transform=ax.transAxes, ha="center", va="center",
                color="white", fontsize=11, fontweight="bold",
                bbox=dict(facecolor="black", alpha=0.35, boxstyle="round,pad=0.15"),
            )
        if spec.marker is not None:
            marker_p, marker_q = spec.marker
            ax.plot(marker_q, marker_p, marker="x", color="red", markersize=10,
                    markeredgewidth=2.5)
        if spec.threshold and policy == "epsilon-greedy":
            b = single_value(panel_rows, "b", "threshold overlay")
            epsilon = single_value(panel_rows, "epsilon", "threshold overlay")
            q_line, p_line = _threshold_curve(b, epsilon)
            ax.plot(q_line, p_line, linestyle="--", color="white", linewidth=1.6)
    axes[0][0].set_ylabel("p")
    fig.colorbar(mesh, ax=axes[0], label="cooperation index", fraction=0.05)
    return fig


def build_b_sweep(rows: list[ResultRow], spec: FigureSpec):
    require_unit_interval(rows)
    fig, ax = plt.subplots(figsize=(5.4, 3.8), constrained_layout=True)
    for policy in policies_in_order(rows):
        series = sorted(
            (row for row in rows if row.policy == policy),
            key=lambda row: row.b if row.b is not None else -1.0,
        )
        if any(row.b is None for row in series):
            raise FigureDataError("b-sweep rows must carry the b column")
        b_values = [row.b for row in series]
        i_values = [row.I for row in series]
        errors = [row.stderr_I for row in series]
        if all(err is not None for err in errors):
            ax.errorbar(b_values, i_values, yerr=errors, marker="o",
                        markersize=3.5, capsize=2, label=policy)
        else:
            ax.plot(b_values, i_values, marker="o", markersize=3.5, label=policy)
    if spec.benefit_marker is not None:
        ax.axvline(spec.benefit_marker, linestyle="--", color="grey", linewidth=1.2)
    ax.set_xlabel("extra benefit of mutual cooperation b")
    ax.set_ylabel("cooperation index")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    return fig


def build_time_course(rows: list[ResultRow], spec: FigureSpec):
    require_unit_interval(rows)
    require_unit_interval(rows, "I_R")
    fig, ax = plt.subplots(figsize=(5.4, 3.8), constrained_layout=True)
    for policy in policies_in_order(rows):
        series = sorted(
            (row for row in rows if row.policy == policy),
            key=lambda row: row.window if row.window is not None else -1.0,
        )
        if any(row.window is None for row in series):
            raise FigureDataError("time-course rows must carry the window column")
        windows = [row.window for row in series]
        color = ax.plot(
            windows, [row.I for row in series], label=f"{policy} I"
        )[0].get_color()
        ax.plot(
            windows, [row.I_R for row in series],
            linestyle="--", color=color, label=f"{policy} I_R",
        )
    ax.set_xlabel("round window")
    ax.set_ylabel("windowed cooperation")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    return fig


_BUILDERS = {
    "pq-heatmap": build_pq_heatmap,
    "b-sweep": build_b_sweep,
    "time-course": build_time_course,
}


def render(spec: FigureSpec) -> Path:
    """Render the figure described by ``spec`` and write the image file."""
    rows = load_results(list(spec.csv_paths))
    fig = _BUILDERS[spec.kind](rows, spec)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out, dpi=150)
    finally:
        plt.close(fig)
    return out

"""Log-log degree-distribution figures written as standalone SVG.

Figures are built on a bare :class:`matplotlib.figure.Figure` (no pyplot
state) under a fixed rc context so the SVG bytes depend only on the data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure
from matplotlib.ticker import LogLocator
from scipy.special import zeta

from .stats import Comparison, DegreeHistogram, pk

MARKERS = ("o", "s", "^", "D", "v", "<", ">")
OVERLAY_STYLES = ("-", "--", "-.", ":")

SVG_RC = {
    "svg.hashsalt": "evocut",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.prop_cycle": mpl.cycler(color=["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]),
}
SVG_METADATA = {"Date": None, "Creator": "evocut"}


class PlotError(ValueError):
    pass


class EmptySeries(PlotError):
    pass


class NonpositiveValue(PlotError):
    pass


@dataclass(frozen=True)
class Series:
    label: str
    points: Sequence[tuple[float, float]]


@dataclass(frozen=True)
class FitOverlay:
    label: str
    points: Sequence[tuple[float, float]]
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PlotSpec:
    series: Sequence[Series]
    scale: str = "log_log"
    overlays: Sequence[FitOverlay] = ()
    title: str = ""
    xlabel: str = "degree k"
    ylabel: str = "p(k)"

    def validate(self) -> None:
        if self.scale not in ("log_log", "linear"):
            raise PlotError(f"unknown scale {self.scale!r}")
        if not self.series or all(len(s.points) == 0 for s in self.series):
            raise EmptySeries("nothing to plot")
        if self.scale == "log_log":
            for s in self.series:
                for x, y in s.points:
                    if x < 1 or y <= 0:
                        raise NonpositiveValue(f"series {s.label!r}: point ({x}, {y}) cannot go on log-log axes")


def _legend_label(overlay: FitOverlay) -> str:
    if not overlay.params:
        return overlay.label
    params = ", ".join(f"{k}={v:.3g}" for k, v in overlay.params.items())
    return f"{overlay.label} ({params})"


def build_figure(spec: PlotSpec) -> Figure:
    spec.validate()
    fig = Figure(figsize=(5.0, 4.0))
    ax = fig.add_subplot()
    for i, s in enumerate(spec.series):
        if not s.points:
            continue
        x, y = zip(*s.points)
        ax.plot(x, y, linestyle="none", marker=MARKERS[i % len(MARKERS)], markersize=4,
                label=s.label, gid=f"series-{i}")
    for i, o in enumerate(spec.overlays):
        pts = [(x, y) for x, y in o.points if spec.scale != "log_log" or (x > 0 and y > 0)]
        if not pts:
            continue
        x, y = zip(*pts)
        ax.plot(x, y, linestyle=OVERLAY_STYLES[i % len(OVERLAY_STYLES)], color="black",
                linewidth=1.0, label=_legend_label(o), gid=f"overlay-{i}")
    if spec.scale == "log_log":
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.xaxis.set_major_locator(LogLocator(base=10))
        ax.yaxis.set_major_locator(LogLocator(base=10))
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    return fig


def emit_plot(spec: PlotSpec, path: str | Path) -> Path:
    path = Path(path)
    with mpl.rc_context(SVG_RC):
        fig = build_figure(spec)
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
    return path


def degree_plot_spec(h: DegreeHistogram, normalization: str = "by_n", comparison: Comparison | None = None,
                     title: str = "") -> PlotSpec:
    """Scatter of ``p(k)`` for ``k >= 1`` with the fitted forms overlaid."""
    points = [(k, p) for k, p in pk(h, normalization) if k >= 1]
    scale = 1.0 if normalization == "by_n" else h.n / h.two_m
    overlays = []
    if comparison is not None and points:
        kmax = max(k for k, _ in points)
        if comparison.power is not None:
            pl = comparison.power
            ks = np.unique(np.geomspace(pl.k_min, kmax, 60).round().astype(int))
            frac = pl.n_tail / h.n
            ys = frac * scale * ks.astype(float) ** -pl.gamma / zeta(pl.gamma, pl.k_min)
            overlays.append(FitOverlay("power law", list(zip(ks.tolist(), ys.tolist())), {"gamma": pl.gamma}))
        if comparison.stretched is not None:
            se = comparison.stretched
            ks = np.unique(np.geomspace(1, kmax, 60).round().astype(int))
            surv = np.exp(se.log_survival(ks)) - np.exp(se.log_survival(ks + 1))
            overlays.append(FitOverlay("stretched exp.", list(zip(ks.tolist(), (scale * surv).tolist())),
                                       {"beta": se.beta, "kappa": se.kappa}))
    ylabel = "p(k) = N_k / n" if normalization == "by_n" else "p(k) = N_k / 2m"
    return PlotSpec([Series("degree distribution", points)], "log_log", overlays, title=title, ylabel=ylabel)


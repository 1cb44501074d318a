"""Figures for experiment reports (needs the optional matplotlib dependency)."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _positive(y):
    y = np.asarray(y, dtype=float)
    return np.where((y > 0) & np.isfinite(y), y, np.nan)


def plot_experiment(records, path) -> Path:
    """Error traces, bounds and ratios of one experiment, saved to ``path``."""
    records = [r for r in records if r.series is not None]
    if not records:
        raise ValueError("no series to plot")
    plt = _pyplot()
    s = records[0].series
    bound_recs = [r for r in records if r.series.a is not None]

    fig, (ax_err, ax_ratio) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    ax_err.loglog(s.n, _positive(s.e_left), lw=1.2, label="left error")
    ax_err.loglog(s.n, _positive(s.e_right), lw=1.2, label="right error")
    for r in bound_recs:
        ax_err.loglog(s.n, _positive(r.series.a), ls="--", lw=0.9,
                      label=f"bound left ({r.direction})")
        ax_err.loglog(s.n, _positive(r.series.b), ls=":", lw=0.9,
                      label=f"bound right ({r.direction})")
    ax_err.set_ylabel("distance to limit")
    ax_err.legend(fontsize=7, frameon=False)

    ratio = s.ratio
    ax_ratio.loglog(s.n, _positive(np.where(np.isinf(ratio), np.nan, ratio)),
                    lw=1.2, label="error ratio")
    for r in bound_recs:
        with np.errstate(divide="ignore", invalid="ignore"):
            ax_ratio.loglog(s.n, _positive(r.series.a / r.series.b), ls="--", lw=0.9,
                            label=f"bound ratio ({r.direction})")
    ax_ratio.set_xlabel("n")
    ax_ratio.set_ylabel("ratio")
    ax_ratio.legend(fontsize=7, frameon=False)

    verdicts = ", ".join(f"{r.comparator}{'/' + r.direction if r.direction else ''}: "
                         f"{r.relation}" for r in records)
    fig.suptitle(records[0].experiment, fontsize=11)
    fig.text(0.5, 0.005, verdicts, ha="center", va="bottom", fontsize=6, wrap=True)
    fig.tight_layout(rect=(0, 0.04, 1, 0.97))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_reports(records, directory) -> list[Path]:
    """One PNG per experiment id in ``directory``."""
    by_exp = {}
    for r in records:
        by_exp.setdefault(r.experiment, []).append(r)
    out = []
    for exp, recs in by_exp.items():
        safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in exp)
        out.append(plot_experiment(recs, Path(directory) / f"{safe}.png"))
    return out


"""Figure output: CSV datasets with matplotlib renderings alongside.

The CSV is the authoritative artifact; the PNG is a convenience rendering of
the same rows.  matplotlib is imported lazily with the Agg backend so
library users never pay for it.
"""

from __future__ import annotations

import os
from typing import List, Tuple

from .runtime import csv_lines
from .welfare import FigureKind, FigureRow

FIGURE_COLUMNS = [
    "kappa", "regime", "price", "profit", "consumer_welfare",
    "expected_duration", "hidden_regime", "hidden_p_lower", "hidden_profit",
]


def write_figure_csv(rows: List[FigureRow], path: str) -> None:
    data = [
        [
            r.kappa, r.regime, r.price, r.profit, r.consumer_welfare,
            r.expected_duration, r.hidden_regime, r.hidden_p_lower, r.hidden_profit,
        ]
        for r in rows
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(csv_lines(FIGURE_COLUMNS, data)) + "\n")


def render_figure_png(rows: List[FigureRow], kind: FigureKind, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    kappas = [r.kappa for r in rows]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if kind is FigureKind.STATICS:
        ax.plot(kappas, [r.consumer_welfare for r in rows], "r-", label="consumer welfare")
        ax.plot(kappas, [r.profit for r in rows], "b-", label="profit")
        ax.plot(kappas, [r.price for r in rows], "g:", label="price")
        ax.plot(kappas, [r.expected_duration for r in rows], color="purple",
                linestyle="--", label="expected duration")
    else:
        ax.plot(kappas, [r.profit for r in rows], "b-", label="profit (observable)")
        ax.plot(kappas, [r.price for r in rows], "g:", label="price (observable)")
        ax.plot(kappas, [r.hidden_profit for r in rows], color="orange",
                label="profit = price floor (hidden)")
    ax.set_xlabel("information friction")
    ax.set_title(f"{kind.value} versus information friction")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_figure(rows: List[FigureRow], kind: FigureKind, outdir: str) -> Tuple[str, str]:
    """Write <kind>.csv and <kind>.png into outdir; returns both paths."""
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, f"{kind.value}.csv")
    png_path = os.path.join(outdir, f"{kind.value}.png")
    write_figure_csv(rows, csv_path)
    render_figure_png(rows, kind, png_path)
    return csv_path, png_path

"""Figures for lab reports.  Each function writes one image file and returns its path."""

from __future__ import annotations

from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .lab import ENFORCIBLE_KNOWN, NOT_ENFORCIBLE, OPEN, CensusRecord, TrialReport, census_tally  # noqa: E402

_STATUS_COLORS = {ENFORCIBLE_KNOWN: "tab:green", NOT_ENFORCIBLE: "tab:red", OPEN: "tab:orange"}


def _save(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_trials(report: TrialReport, path: str) -> str:
    """Per-seed outcomes.  For spider trials also the halted local search size vs its bound."""
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    seeds = [row[0] for row in report.rows]
    if report.experiment_id == "T18" and report.rows:
        col = report.columns.index("local_halted_s")
        halted = [int(row[2][col]) if row[2][col] else 0 for row in report.rows]
        bound = float(report.rows[0][2][report.columns.index("stall_bound")])
        ax.plot(seeds, halted, "o", ms=3, label="halted s (local search, run to exhaustion)")
        ax.axhline(bound, color="tab:red", lw=1, label="d(d-l)/(d+4l)")
        ax.axhline(report.parameters["l"], color="k", lw=1, ls="--", label="l")
        ax.set_ylabel("s")
        ax.legend(fontsize=8, loc="best")
    else:
        ax.bar(seeds, [1 if row[1] else 0 for row in report.rows], width=1.0, color="tab:green")
        ax.set_ylim(0, 1.2)
        ax.set_ylabel("success")
    ax.set_xlabel("seed")
    ax.set_title(f"{report.experiment_id}: {report.successes}/{report.trials} successes")
    return _save(fig, path)


def plot_census(records: Iterable[CensusRecord], path: str) -> str:
    tally = census_tally(records)
    ns = sorted(tally)
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    bottom = [0] * len(ns)
    for status in (ENFORCIBLE_KNOWN, OPEN, NOT_ENFORCIBLE):
        heights = [tally[n][status] for n in ns]
        ax.bar(ns, heights, bottom=bottom, color=_STATUS_COLORS[status], label=status)
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xlabel("vertices")
    ax.set_ylabel("oriented trees")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_spider_scan(report: TrialReport, path: str) -> str:
    found = report.successes
    missed = len(report.failures)
    fig, ax = plt.subplots(figsize=(4.0, 3.2))
    ax.bar(["found", "no copy"], [found, missed], color=["tab:green", "tab:red"])
    p = report.parameters
    ax.set_title(f"S-({p['k']},{p['l']}) at min out-degree >= {p['delta_target']}")
    ax.set_ylabel("hosts")
    return _save(fig, path)

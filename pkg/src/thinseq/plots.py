"""Figure rendering for CLI reports.

Each function takes the already-computed report dictionary and writes one
PNG next to the report file.  Figures are visual summaries; the JSON
report stays the authoritative output.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_sequence",
    "plot_analyze",
    "plot_gram",
    "plot_carleson",
    "plot_interpolate",
    "plot_pick",
    "plot_split",
]


def _save(fig, path) -> None:
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def plot_sequence(Z, path) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    circle = np.exp(1j * np.linspace(0.0, 2.0 * math.pi, 400))
    ax1.plot(circle.real, circle.imag, lw=0.8, color="gray")
    zs = np.array([complex(p) for p in Z.points])
    ax1.plot(zs.real, zs.imag, "o", ms=4)
    ax1.set_aspect("equal")
    ax1.set_title("points")
    gaps = [p.gap for p in Z.points]
    ax2.semilogy(range(1, len(gaps) + 1), gaps, "o-")
    ax2.set_xlabel("n")
    ax2.set_ylabel("1 - |z_n|")
    ax2.set_title("boundary gaps")
    _save(fig, path)


def plot_analyze(report: dict, path) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    dj = report["deltaJ"]
    ax1.plot(range(1, len(dj) + 1), dj, "o-", label="delta_j")
    ax1.axhline(report["delta"], color="gray", lw=0.8, label="delta")
    ax1.set_xlabel("j")
    ax1.legend()
    ax1.set_title("separation constants")
    td = report["tailDelta"]
    ones = [max(1.0 - v, 1e-18) for v in td]
    ax2.semilogy(range(1, len(td) + 1), ones, "s-")
    ax2.set_xlabel("tail offset N")
    ax2.set_ylabel("1 - tail delta")
    ax2.set_title("tail separation")
    _save(fig, path)


def plot_gram(report: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    vals = report["eigenvalues"]
    ax.plot(range(1, len(vals) + 1), vals, "o")
    ax.axhline(1.0, color="gray", lw=0.8)
    ax.axhline(report["cN"], color="C1", lw=0.8, label="c_N")
    ax.axhline(report["CN"], color="C2", lw=0.8, label="C_N")
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    ax.set_title(f"tail Gram spectrum, N={report['N']}")
    ax.legend()
    _save(fig, path)


def plot_carleson(report: dict, path) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    sums = report["boxSums"]
    n0 = report["N"]
    ax1.bar(range(n0, n0 + len(sums)), sums)
    ax1.set_xlabel("n")
    ax1.set_ylabel("box sum")
    ax1.set_title(f"amplified box sums, A={report['A']}")
    ax2.bar([0, 1], [report["R"], math.sqrt(report["C"])])
    ax2.set_xticks([0, 1], ["R", "sqrt(C)"])
    ax2.axhline(1.0, color="gray", lw=0.8)
    ax2.set_title("embedding constants")
    _save(fig, path)


def plot_interpolate(report: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    if "residualTrace" in report:
        trace = report["residualTrace"]
        ks = range(len(trace))
        ax.semilogy(ks, [max(t, 1e-18) for t in trace], "o-", label="residual")
        eps = report["eps"]
        if 0.0 < eps < 1.0 and trace:
            env = [trace[0] * eps ** k for k in ks]
            ax.semilogy(ks, [max(e, 1e-18) for e in env], "--", label="eps^k envelope")
        ax.set_xlabel("round")
        ax.legend()
        ax.set_title("iterative solve")
    else:
        errs = [max(v, 1e-18) for v in report["nodeErrors"]]
        ax.semilogy(range(1, len(errs) + 1), errs, "o")
        ax.set_xlabel("tail node")
        ax.set_ylabel("|achieved - target|")
        ax.set_title(f"node residuals, method {report['method']}")
    _save(fig, path)


def plot_pick(report: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    svals = report.get("sValues") or []
    if svals:
        ax.plot(range(1, len(svals) + 1), svals, "o", label="s* per trial")
        ax.set_xlabel("trial")
    ax.axhline(report["sStar"], color="C1", lw=0.8, label="s* (targets)")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    ax.set_title("feasible scales")
    _save(fig, path)


def plot_split(report: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    fv = report["FAtNodes"]
    gv = report["GAtNodes"]
    js = range(1, len(fv) + 1)
    ax.plot(js, fv, "o-", label="|F(z_j)|")
    ax.plot(js, gv, "s-", label="|G(z_j)|")
    ax.axvline(report["cut"] - 0.5, color="gray", lw=0.8)
    ax.set_xlabel("j")
    ax.legend()
    ax.set_title(f"splitting pair, cut {report['cut']}")
    _save(fig, path)

"""Serialize experiment results: CSV tables, SVG figures and a flat summary."""

import csv
import io
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

CSV_COLUMNS = ("experiment_id", "series", "x", "x2", "y", "y_err")
CHECK_COLUMNS = ("experiment_id", "check", "passed", "value", "reference", "lower", "upper")

# stable SVG output: fixed ids, no timestamp
plt.rcParams["svg.hashsalt"] = "outlierlab"
_SVG_METADATA = {"Date": None, "Creator": None}

_COLORS = {"gaussian": "tab:red", "gaussian_limit": "tab:red"}


def fmt(value) -> str:
    """Render a cell: integers verbatim, floats with 9 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return f"{value:.9g}"


def _write_rows(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")


def series_rows(result):
    for s in result.series:
        for p in s.points:
            yield (result.experiment_id, s.label, fmt(p.x), fmt(p.x2), fmt(p.y), fmt(p.y_err))


def check_rows(result):
    for c in result.checks:
        yield (result.experiment_id, c.name, fmt(c.passed), fmt(c.value), fmt(c.reference),
               fmt(c.lower), fmt(c.upper))


def write_csv(result, out_dir) -> Path:
    out_dir = Path(out_dir)
    path = out_dir / f"{result.experiment_id}.csv"
    _write_rows(path, CSV_COLUMNS, series_rows(result))
    _write_rows(out_dir / f"{result.experiment_id}_checks.csv", CHECK_COLUMNS, check_rows(result))
    return path


def _plot_surface(ax, series):
    alphas = sorted({p.x for p in series.points})
    lams = sorted({p.x2 for p in series.points})
    grid = [[math.nan] * len(lams) for _ in alphas]
    for p in series.points:
        grid[alphas.index(p.x)][lams.index(p.x2)] = p.y
    mesh = ax.pcolormesh(lams, alphas, grid, shading="nearest", cmap="viridis")
    ax.figure.colorbar(mesh, ax=ax, label="limit outlier probability")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(r"$\alpha$")


def plot_result(result, path):
    """Render ``result`` to an SVG file; line charts with error bars, or a heatmap."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        surface = [s for s in result.series if s.points and s.points[0].x2 is not None
                   and s.label == "limit_probability"]
        if surface:
            _plot_surface(ax, surface[0])
            spots = [s for s in result.series if s.label == "spot_monte_carlo"]
            for s in spots:
                ax.plot([p.x2 for p in s.points], [p.x for p in s.points], "wx", label="MC spot check")
            if spots:
                ax.legend(loc="upper right")
        else:
            for s in result.series:
                pts = [p for p in s.points if p.x is not None]
                if not pts:
                    continue
                color = _COLORS.get(s.label, "tab:blue" if s.label.startswith("stable") else None)
                style = "--" if s.label.endswith("limit") else "-"
                marker = "o" if len(pts) < 4 else "."
                if s.label == "crossover":
                    ax.axvline(pts[0].x, color="grey", lw=0.8, ls=":", label="crossover")
                    continue
                ax.errorbar([p.x for p in pts], [p.y for p in pts], yerr=[p.y_err for p in pts],
                            fmt=marker, ls=style if len(pts) > 1 else "none", color=color,
                            label=s.label, capsize=2, ms=4)
            ax.set_xlabel("n" if result.experiment_id in ("fig1", "fig2") else "x")
            ax.set_ylabel(r"$\hat p_n$" if result.experiment_id in ("fig1", "fig2") else "value")
            ax.legend(fontsize=7)
        ax.set_title(result.experiment_id)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    finally:
        plt.close(fig)
    return Path(path)


def summary_entries(results):
    out = {}
    for r in results:
        for c in r.checks:
            out[f"{r.experiment_id}.{c.name}"] = "pass" if c.passed else "fail"
    out["all_passed"] = "true" if all(r.all_passed for r in results) else "false"
    return out


def write_summary(results, out_dir) -> Path:
    path = Path(out_dir) / "summary.json"
    path.write_text(json.dumps(summary_entries(results), indent=2) + "\n", encoding="utf-8")
    return path

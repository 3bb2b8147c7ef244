"""Render static panels from slrt CSV outputs.

Four figure kinds, one per panel family:

* ``histogram``    -- ln-x histograms with vertical average markers
                      (algebraic dotted, network solid, untextured dashed);
                      inputs are alternating ``hist_*.csv`` / ``markers_*.csv``
* ``q_vs_u``       -- sparsity versus deformation, log-log, slope-2 guide
* ``g_ratio_left`` -- scaled coefficients versus u: algebraic (diamonds),
                      network (stars), untextured (circles)
* ``g_ratio_right``-- network average versus the geometric average, with
                      the matched-ensemble points and the hopping estimate

Rendering is a pure function of the input CSVs: fixed canvas, fixed
fonts, no timestamps.  Invoked as ``render --kind K --in FILES --out PATH``.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("histogram", "q_vs_u", "g_ratio_left", "g_ratio_right")

_RC = {
    "figure.figsize": (6.4, 4.8),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.family": "DejaVu Sans",
    "font.size": 9,
}

_METADATA = {"Software": "slrt-figures"}


@dataclass(frozen=True)
class FigureJob:
    kind: str
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("no input files given")


def _read_csv(path: str, columns: list[str]) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    missing = [c for c in columns if c not in rows[0]]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}")
    out = {}
    for col in columns:
        out[col] = np.array([float(r[col]) for r in rows])
    return out


def _read_markers(path: str) -> dict[str, float]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    missing = [c for c in ("name", "value") if c not in rows[0]]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}")
    return {r["name"]: float(r["value"]) for r in rows}


_LN10 = np.log(10.0)


def _panel_histogram(ax, job: FigureJob) -> None:
    if len(job.inputs) % 2 != 0:
        raise ValueError("histogram kind expects alternating hist/markers files")
    palette = plt.cm.viridis(np.linspace(0.15, 0.8, max(1, len(job.inputs) // 2)))
    for k in range(0, len(job.inputs), 2):
        hist = _read_csv(job.inputs[k], ["bin_left", "bin_right", "count"])
        markers = _read_markers(job.inputs[k + 1])
        centers = 0.5 * (hist["bin_left"] + hist["bin_right"]) / _LN10
        color = palette[k // 2]
        ax.step(centers, hist["count"], where="mid", color=color, lw=1.2,
                label=Path(job.inputs[k]).stem)
        for name, style in (("alg", ":"), ("slrt", "-"), ("slrt_untextured", "--")):
            value = markers[name]
            if value > 0:
                ax.axvline(np.log10(value), linestyle=style, color=color, lw=1.0)
    ax.set_xlabel(r"$\log_{10}\,|V_{nm}|^2$")
    ax.set_ylabel("count")
    ax.legend(loc="upper left", fontsize=7)


def _panel_q_vs_u(ax, job: FigureJob) -> None:
    for path in job.inputs:
        data = _read_csv(path, ["u", "q"])
        ok = data["q"] > 0
        if not ok.any():
            raise ValueError(f"{path}: no positive sparsity values")
        ax.loglog(data["u"][ok], data["q"][ok], "o-", ms=4,
                  label=Path(path).parent.name or Path(path).stem)
        u = data["u"][ok]
        guide = data["q"][ok][-1] * (u / u[-1]) ** 2
        ax.loglog(u, guide, "k--", lw=0.8)
    ax.set_xlabel("u")
    ax.set_ylabel("q")
    ax.legend(loc="upper left", fontsize=7)


def _panel_g_ratio_left(ax, job: FigureJob) -> None:
    for path in job.inputs:
        data = _read_csv(path, ["u", "alg", "slrt", "slrt_untextured"])
        ax.loglog(data["u"], data["alg"], "d-", ms=5, label="algebraic (LRT)")
        ok = data["slrt"] > 0
        ax.loglog(data["u"][ok], data["slrt"][ok], "*-", ms=7, label="network (SLRT)")
        ok = data["slrt_untextured"] > 0
        ax.loglog(data["u"][ok], data["slrt_untextured"][ok], "o--", ms=5,
                  mfc="none", label="untextured")
    ax.set_xlabel("u")
    ax.set_ylabel(r"$\langle\langle x \rangle\rangle$")
    ax.legend(loc="center left", fontsize=7)


def _panel_g_ratio_right(ax, job: FigureJob) -> None:
    for path in job.inputs:
        data = _read_csv(
            path, ["geo", "slrt", "slrt_untextured", "slrt_rmt_twin", "alg", "vrh_ratio"]
        )
        ok = (data["geo"] > 0) & (data["slrt"] > 0)
        if not ok.any():
            raise ValueError(f"{path}: no usable rows (zero geometric averages)")
        geo = data["geo"][ok]
        ax.loglog(geo, data["slrt"][ok], "*", ms=8, label="network (physical)")
        ax.loglog(geo, data["slrt_untextured"][ok], "o", ms=5, mfc="none",
                  label="untextured")
        twin_ok = ok & np.isfinite(data["slrt_rmt_twin"]) & (data["slrt_rmt_twin"] > 0)
        if twin_ok.any():
            ax.loglog(data["geo"][twin_ok], data["slrt_rmt_twin"][twin_ok], "^", ms=5,
                      mfc="none", label="matched ensemble")
        vrh_ok = ok & np.isfinite(data["vrh_ratio"])
        if vrh_ok.any():
            ax.loglog(data["geo"][vrh_ok],
                      data["vrh_ratio"][vrh_ok] * data["alg"][vrh_ok],
                      "k-", lw=1.0, label="hopping estimate")
    ax.set_xlabel(r"$\langle\langle x \rangle\rangle_g$")
    ax.set_ylabel(r"$\langle\langle x \rangle\rangle$")
    ax.legend(loc="upper left", fontsize=7)


_PANELS = {
    "histogram": _panel_histogram,
    "q_vs_u": _panel_q_vs_u,
    "g_ratio_left": _panel_g_ratio_left,
    "g_ratio_right": _panel_g_ratio_right,
}


def render(job: FigureJob) -> Path:
    """Draw the requested panel; nothing is written if the inputs fail."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        try:
            _PANELS[job.kind](ax, job)
            fig.suptitle(job.kind.replace("_", " "))
            out = Path(job.output)
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out, metadata=_METADATA)
        finally:
            plt.close(fig)
    return Path(job.output)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a figure panel from slrt CSV files."
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        help="input CSV files (histogram kind: hist/markers pairs)")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        render(FigureJob(kind=args.kind, inputs=tuple(args.inputs), output=args.out))
    except (ValueError, OSError) as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 1
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

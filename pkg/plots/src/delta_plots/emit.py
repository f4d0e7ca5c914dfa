"""Render paired delta curves from two sweep summary CSVs.

Input files follow the sweep harness summary schema::

    ratio_a,ratio_b,wins_a,wins_b,ties,delta
    1,19,279,221,0,58
    ...
    TOTAL,,7095,2405,0,4690

One figure is produced with two side-by-side panels: the sequential-engine
sweep on the left, the threaded-engine sweep on the right.  The horizontal
axis is the number of algorithm-A traders per market side (1..19); the
vertical axis is delta = wins_A - wins_B, so points above the zero line mean
algorithm A outperformed.  Output is a vector file (SVG/PDF) unless a raster
format is requested.

This is a batch tool: it validates its inputs completely before writing
anything, and writes nothing on error.
"""

from __future__ import annotations

import argparse
import csv
import os
import re
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

EXPECTED_HEADER = ["ratio_a", "ratio_b", "wins_a", "wins_b", "ties", "delta"]
RATIOS = list(range(1, 20))
_NAME_RE = re.compile(r"(?P<a>[A-Za-z0-9]+)_vs_(?P<b>[A-Za-z0-9]+)_(?P<mode>\w+)_summary")


class MalformedSummary(ValueError):
    """The CSV does not conform to the sweep summary schema."""


@dataclass(frozen=True)
class DeltaSeries:
    """One sweep's delta curve: exactly 19 points, labels 1..19."""

    labels: tuple  # algo-A count per side, strictly increasing
    deltas: tuple
    mode: str
    algo_a: str
    algo_b: str

    def __post_init__(self):
        if len(self.labels) != 19 or list(self.labels) != RATIOS:
            raise MalformedSummary(f"expected ratio labels 1..19, got {self.labels}")
        if len(self.deltas) != 19:
            raise MalformedSummary("expected 19 delta values")


def pair_from_filename(path: str):
    """(algo_a, algo_b) encoded in a `<A>_vs_<B>_<mode>_summary.csv` name."""
    m = _NAME_RE.search(os.path.basename(path))
    if not m:
        return None
    return m.group("a").upper(), m.group("b").upper()


def load_summary(path: str, mode: str, pair=None) -> DeltaSeries:
    """Parse and fully validate one summary CSV into a DeltaSeries."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedSummary(f"{path}: empty file") from None
        if header != EXPECTED_HEADER:
            raise MalformedSummary(f"{path}: bad header {header!r}")
        rows = [r for r in reader if r and r[0] != "TOTAL"]

    by_ratio = {}
    for row in rows:
        if len(row) != len(EXPECTED_HEADER):
            raise MalformedSummary(f"{path}: wrong column count in {row!r}")
        try:
            a, b = int(row[0]), int(row[1])
            wins_a, wins_b, ties, delta = (int(x) for x in row[2:])
        except ValueError as exc:
            raise MalformedSummary(f"{path}: non-numeric row {row!r}") from exc
        if delta != wins_a - wins_b:
            raise MalformedSummary(
                f"{path}: delta {delta} != wins_a - wins_b at ratio {a}:{b}")
        if a in by_ratio:
            raise MalformedSummary(f"{path}: duplicate ratio {a}")
        by_ratio[a] = delta

    missing = [a for a in RATIOS if a not in by_ratio]
    if missing:
        raise MalformedSummary(f"{path}: missing ratio rows {missing}")
    extra = sorted(set(by_ratio) - set(RATIOS))
    if extra:
        raise MalformedSummary(f"{path}: unexpected ratio rows {extra}")

    algo_a, algo_b = pair or pair_from_filename(path) or ("A", "B")
    return DeltaSeries(
        labels=tuple(RATIOS),
        deltas=tuple(by_ratio[a] for a in RATIOS),
        mode=mode,
        algo_a=algo_a,
        algo_b=algo_b,
    )


def build_figure(seq: DeltaSeries, thr: DeltaSeries):
    """Two-panel figure: sequential on the left, threaded on the right."""
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, series in zip(axes, (seq, thr)):
        ax.axhline(0.0, color="grey", linewidth=0.8)
        ax.plot(series.labels, series.deltas, marker="o", markersize=3.5,
                label=f"{series.algo_a} vs {series.algo_b}")
        ax.set_title(f"{series.mode} engine")
        ax.set_xlabel(f"{series.algo_a} traders per side")
        ax.set_xticks(range(1, 20, 3))
    axes[0].set_ylabel(r"$\Delta$wins"
                       f"  (> 0: {seq.algo_a} outperforms)")
    fig.suptitle(f"{seq.algo_a} vs {seq.algo_b}: win-count difference by ratio")
    fig.tight_layout()
    return fig


def emit_delta_curves(summary_csv_seq, summary_csv_thr, out_path, dpi=150) -> str:
    """Validate both inputs, render, and write the figure file.

    Raises MalformedSummary / ValueError without writing on any problem.
    """
    seq = load_summary(summary_csv_seq, "sequential")
    thr = load_summary(summary_csv_thr, "threaded")
    if (seq.algo_a, seq.algo_b) != (thr.algo_a, thr.algo_b):
        raise ValueError(
            f"algo pair mismatch: {seq.algo_a} vs {seq.algo_b} / "
            f"{thr.algo_a} vs {thr.algo_b}")
    root, ext = os.path.splitext(str(out_path))
    if not ext:
        out_path = root + ".svg"
    fig = build_figure(seq, thr)
    try:
        fig.savefig(out_path, dpi=dpi)
    finally:
        plt.close(fig)
    return str(out_path)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="emit-deltas",
        description="Render paired delta curves from sweep summary CSVs.")
    parser.add_argument("--seq", required=True, help="sequential-mode summary CSV")
    parser.add_argument("--thr", required=True, help="threaded-mode summary CSV")
    parser.add_argument("--out", required=True,
                        help="output figure path (.svg/.pdf vector, .png raster)")
    parser.add_argument("--dpi", type=int, default=150, help="raster resolution")
    args = parser.parse_args(argv)
    try:
        path = emit_delta_curves(args.seq, args.thr, args.out, dpi=args.dpi)
    except (MalformedSummary, ValueError, OSError) as exc:
        print(f"emit-deltas: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

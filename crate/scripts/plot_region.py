#!/usr/bin/env python3
"""Render a region CSV (E,C,classification) written by `mergelab region`."""

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

COLORS = {"excluded": "#d9d9d9", "unknown": "#fdd49e", "achievable": "#3182bd"}


def read_region(path):
    points = {k: ([], []) for k in COLORS}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["E", "C", "classification"]:
            sys.exit(f"{path}: expected header E,C,classification")
        for row in reader:
            es, cs = points[row["classification"]]
            es.append(float(row["E"]))
            cs.append(float(row["C"]))
    return points


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="region CSV")
    ap.add_argument("-o", "--output", default="region.png", help="image file (png, pdf, svg)")
    ap.add_argument("--title", default=None)
    args = ap.parse_args()

    points = read_region(args.csv)
    fig, ax = plt.subplots(figsize=(5, 5))
    for label, (es, cs) in points.items():
        if es:
            ax.scatter(es, cs, s=6, marker="s", color=COLORS[label], label=label, linewidths=0)
    ax.axhline(0, color="black", lw=0.5)
    ax.axvline(0, color="black", lw=0.5)
    ax.set_xlabel("E (ebits per copy)")
    ax.set_ylabel("C (cobits per copy)")
    if args.title:
        ax.set_title(args.title)
    ax.legend(loc="upper right", markerscale=3)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()

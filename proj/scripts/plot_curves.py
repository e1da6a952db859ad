#!/usr/bin/env python3
"""Plot WER curves from qecc_lab record CSVs (toric-wer, fivequbit-wer, mismatch)."""

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def load(paths):
    frames = [pd.read_csv(p, comment="#") for p in paths]
    return pd.concat(frames, ignore_index=True)


def label(row):
    parts = [row["decoder"], row["channel"]]
    if isinstance(row["preset"], str) and row["preset"]:
        parts.append(row["preset"])
    elif row["channel"] == "tvadcta":
        parts.append(f"cv={row['cv']:g}")
    return " ".join(parts)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="+")
    ap.add_argument("-o", "--output", default="wer.png")
    ap.add_argument("--x", choices=["p", "p_prior"], default=None,
                    help="x axis; defaults to p_prior for mismatch records")
    ap.add_argument("--linear", action="store_true", help="linear y axis")
    args = ap.parse_args(argv)

    df = load(args.csv)
    if df.empty:
        sys.exit("no records")
    x = args.x or ("p_prior" if df["p_prior"].notna().any() else "p")
    df = df[df[x].notna()]
    df["series"] = df.apply(label, axis=1)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for name, g in df.groupby("series", sort=False):
        g = g.sort_values(x)
        ax.errorbar(g[x], g["wer"], yerr=g["ci_halfwidth"], marker="o", ms=3, capsize=2, label=name)
    if not args.linear:
        ax.set_yscale("log")
    if x == "p":
        ax.set_xscale("log")
    ax.set_xlabel("prior p" if x == "p_prior" else "p")
    ax.set_ylabel("WER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output} ({len(df)} points)")


if __name__ == "__main__":
    main()

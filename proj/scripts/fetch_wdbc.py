#!/usr/bin/env python3
"""Regenerate data/wdbc.csv (Wisconsin Diagnostic Breast Cancer).

Writes the canonical 569x30 dataset in the layout the simulator expects:
    id, diagnosis (M/B), 30 real-valued features

Prefers scikit-learn's bundled copy of the UCI data (no network needed);
falls back to downloading wdbc.data from the UCI repository. Note that the
sklearn copy does not carry the original UCI sample ids, so sequential ids
are written instead — the loader drops the id column either way.
"""

import argparse
import sys

UCI_URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/"
    "breast-cancer-wisconsin/wdbc.data"
)


def from_sklearn(out_path: str) -> None:
    from sklearn.datasets import load_breast_cancer

    d = load_breast_cancer()
    with open(out_path, "w") as out:
        for i, (row, target) in enumerate(zip(d.data, d.target)):
            diag = "M" if target == 0 else "B"  # sklearn: 0 = malignant
            feats = ",".join(repr(float(v)) for v in row)
            out.write(f"{i + 1},{diag},{feats}\n")


def from_uci(out_path: str) -> None:
    import urllib.request

    with urllib.request.urlopen(UCI_URL) as resp:
        text = resp.read().decode("ascii")
    with open(out_path, "w") as out:
        out.write(text if text.endswith("\n") else text + "\n")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/wdbc.csv")
    parser.add_argument(
        "--source", choices=["sklearn", "uci"], default="sklearn",
        help="sklearn = offline bundled copy; uci = download the original",
    )
    args = parser.parse_args()

    if args.source == "sklearn":
        from_sklearn(args.out)
    else:
        from_uci(args.out)

    rows = sum(1 for _ in open(args.out))
    if rows != 569:
        print(f"warning: expected 569 rows, wrote {rows}", file=sys.stderr)
        return 1
    print(f"wrote {rows} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Convert the bundled UCI datasets into the CSV layout read by opfimb.

The UCI archive itself is the canonical source. When it is not reachable, the
same tables ship inside a few PyPI packages, which is where the copies under
data/ were produced from:

  wdbc_diagnostic.csv      sklearn/datasets/data/breast_cancer.csv  (scikit-learn)
  wisconsin_original.csv   pydataset resources rdata/csv/MASS/biopsy.csv (pydataset 0.2.0)
  mammographic_keel.csv    keel_ds/data/balanced/raw/mammographic.dat (keel-ds 0.2.5)

Usage:
  prepare_datasets.py --sklearn-csv PATH --biopsy-csv PATH --keel-mammographic PATH --out data/
"""
import argparse
import csv
import os


def write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def wdbc(src, out):
    names = ["radius", "texture", "perimeter", "area", "smoothness", "compactness",
             "concavity", "concave_points", "symmetry", "fractal_dimension"]
    header = [f"{stat}_{n}" for stat in ("mean", "se", "worst") for n in names] + ["diagnosis"]
    rows = []
    with open(src) as fh:
        r = csv.reader(fh)
        next(r)
        for rec in r:
            # sklearn encodes 0 = malignant, 1 = benign
            rows.append(rec[:30] + ["M" if rec[30] == "0" else "B"])
    write(os.path.join(out, "wdbc_diagnostic.csv"), header, rows)


def biopsy(src, out):
    header = ["clump_thickness", "cell_size", "cell_shape", "adhesion", "epithelial_size",
              "bare_nuclei", "chromatin", "nucleoli", "mitoses", "class"]
    rows = []
    with open(src) as fh:
        r = csv.reader(fh)
        next(r)
        for rec in r:
            vals = ["" if v == "NA" else v for v in rec[2:11]]
            rows.append(vals + [rec[11]])
    write(os.path.join(out, "wisconsin_original.csv"), header, rows)


def mammographic(src, out):
    header = ["bi_rads", "age", "shape", "margin", "density", "severity"]
    rows = []
    with open(src) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("@"):
                continue
            rows.append([v.strip() for v in line.split(",")])
    write(os.path.join(out, "mammographic_keel.csv"), header, rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sklearn-csv", required=True)
    ap.add_argument("--biopsy-csv", required=True)
    ap.add_argument("--keel-mammographic", required=True)
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    wdbc(args.sklearn_csv, args.out)
    biopsy(args.biopsy_csv, args.out)
    mammographic(args.keel_mammographic, args.out)


if __name__ == "__main__":
    main()

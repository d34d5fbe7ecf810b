#!/usr/bin/env python3
# Copyright 2026 The elastica-learn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Rebuild data/ from the public dataset bundles shipped inside PyPI wheels.

Usage:
    pip download --no-deps keel-ds mlxtend -d wheels/
    python3 tools/prepare_data.py wheels/ data/

Binary sets are written in libsvm format with +1/-1 labels, multiclass and
regression sets as CSV with a header row and the target in the last column.
Nothing is rescaled here; scaling happens at load time.
"""
import csv
import glob
import gzip
import io
import os
import sklearn.datasets
import sys
import zipfile

BINARY = {
    # name: (keel file, positive label)
    "liver-disorders": ("bupa", "2"),
    "diabetes": ("pima", "tested_positive"),
    "breast-cancer": ("wisconsin", "4"),
    "heart": ("heart", "2"),
    "australian": ("australian", "1"),
    "sonar": ("sonar", "M"),
}
MULTICLASS = {
    "wine": "wine",
    "vehicle": "vehicle",
    "tae": "tae",
    "hayes-roth": "hayes-roth",
}


def keel_rows(zf, name):
    text = zf.read(f"keel_ds/data/balanced/raw/{name}.dat").decode()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([v.strip() for v in line.split(",")])
    return rows


def write_libsvm(path, rows, positive):
    with open(path, "w") as out:
        for r in rows:
            label = "+1" if r[-1] == positive else "-1"
            feats = " ".join(f"{j + 1}:{float(v):.10g}"
                             for j, v in enumerate(r[:-1]) if float(v) != 0.0)
            out.write(f"{label} {feats}".rstrip() + "\n")


def write_csv(path, rows, label_codes=None):
    d = len(rows[0]) - 1
    with open(path, "w", newline="") as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow([f"x{j + 1}" for j in range(d)] + ["y"])
        for r in rows:
            y = label_codes[r[-1]] if label_codes else f"{float(r[-1]):.10g}"
            w.writerow([f"{float(v):.10g}" for v in r[:-1]] + [y])


def main(wheels, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    keel = zipfile.ZipFile(glob.glob(os.path.join(wheels, "keel_ds-*.whl"))[0])
    mlx = zipfile.ZipFile(glob.glob(os.path.join(wheels, "mlxtend-*.whl"))[0])

    for name, (src, pos) in BINARY.items():
        write_libsvm(os.path.join(out_dir, f"{name}.libsvm"), keel_rows(keel, src), pos)

    for name, src in MULTICLASS.items():
        rows = keel_rows(keel, src)
        labels = sorted({r[-1] for r in rows})
        write_csv(os.path.join(out_dir, f"{name}.csv"), rows,
                  {l: str(i) for i, l in enumerate(labels)})

    iris = sklearn.datasets.load_iris()
    rows = [list(map(str, x)) + [str(t)] for x, t in zip(iris.data, iris.target)]
    write_csv(os.path.join(out_dir, "iris.csv"), rows)

    text = mlx.read("mlxtend/data/data/boston_housing.csv").decode()
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    write_csv(os.path.join(out_dir, "housing.csv"), rows)

    # autompg: cylinders..origin, name, mpg; rows with missing horsepower dropped
    text = gzip.decompress(mlx.read("mlxtend/data/data/autompg.csv.gz")).decode()
    rows = []
    for r in csv.reader(io.StringIO(text)):
        if not r or "?" in r or r[-1] == "":
            continue
        rows.append(r[:7] + [r[-1]])
    write_csv(os.path.join(out_dir, "autompg.csv"), rows)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])

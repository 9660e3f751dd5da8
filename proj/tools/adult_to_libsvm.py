#!/usr/bin/env python3
"""Encode UCI Adult (adult.data) as 123 binary features in LIBSVM format.

Same layout as the LIBSVM a9a set: each continuous column except the two
capital columns is cut into 5 quantile bins, capital-gain and capital-loss
become zero/non-zero, every categorical value gets its own indicator, and
missing values ('?') switch nothing on. Labels: '>50K' -> +1, else -1.

The bin edges of the published a9a file are not documented, so the output
matches its shape and sample count but not its exact bytes.

usage: adult_to_libsvm.py adult.data out.libsvm
"""

import sys

CATEGORIES = {
    "workclass": "Private Self-emp-not-inc Self-emp-inc Federal-gov Local-gov State-gov Without-pay Never-worked",
    "education": "Bachelors Some-college 11th HS-grad Prof-school Assoc-acdm Assoc-voc 9th 7th-8th 12th Masters "
                 "1st-4th 10th Doctorate 5th-6th Preschool",
    "marital-status": "Married-civ-spouse Divorced Never-married Separated Widowed Married-spouse-absent "
                      "Married-AF-spouse",
    "occupation": "Tech-support Craft-repair Other-service Sales Exec-managerial Prof-specialty Handlers-cleaners "
                  "Machine-op-inspct Adm-clerical Farming-fishing Transport-moving Priv-house-serv Protective-serv "
                  "Armed-Forces",
    "relationship": "Wife Own-child Husband Not-in-family Other-relative Unmarried",
    "race": "White Asian-Pac-Islander Amer-Indian-Eskimo Other Black",
    "sex": "Female Male",
    "native-country": "United-States Cambodia England Puerto-Rico Canada Germany Outlying-US(Guam-USVI-etc) India "
                      "Japan Greece South China Cuba Iran Honduras Philippines Italy Poland Jamaica Vietnam Mexico "
                      "Portugal Ireland France Dominican-Republic Laos Ecuador Taiwan Haiti Columbia Hungary "
                      "Guatemala Nicaragua Scotland Thailand Yugoslavia El-Salvador Trinadad&Tobago Peru Hong "
                      "Holand-Netherlands",
}

COLUMNS = [
    ("age", "quantile"), ("workclass", "category"), ("fnlwgt", "quantile"), ("education", "category"),
    ("education-num", "quantile"), ("marital-status", "category"), ("occupation", "category"),
    ("relationship", "category"), ("race", "category"), ("sex", "category"), ("capital-gain", "nonzero"),
    ("capital-loss", "nonzero"), ("hours-per-week", "quantile"), ("native-country", "category"),
]


def quantile_edges(values, bins=5):
    ordered = sorted(values)
    return [ordered[len(ordered) * b // bins] for b in range(1, bins)]


def bin_index(value, edges):
    return sum(value >= e for e in edges)


def main(src, dst):
    rows = []
    with open(src) as f:
        for line in f:
            parts = [p.strip() for p in line.strip().split(",")]
            if len(parts) == 15:
                rows.append(parts)

    edges = {}
    for col, (name, kind) in enumerate(COLUMNS):
        if kind == "quantile":
            edges[name] = quantile_edges([float(r[col]) for r in rows if r[col] != "?"])

    with open(dst, "w") as out:
        for r in rows:
            offset, active = 0, []
            for col, (name, kind) in enumerate(COLUMNS):
                value = r[col]
                if kind == "category":
                    levels = CATEGORIES[name].split()
                    if value in levels:
                        active.append(offset + levels.index(value))
                    offset += len(levels)
                elif kind == "quantile":
                    if value != "?":
                        active.append(offset + bin_index(float(value), edges[name]))
                    offset += 5
                else:
                    active.append(offset + (1 if float(value) != 0.0 else 0))
                    offset += 2
            label = "+1" if r[14].startswith(">50K") else "-1"
            out.write(label + " " + " ".join(f"{i + 1}:1" for i in active) + "\n")
    assert offset == 123, offset


if __name__ == "__main__":
    main(*sys.argv[1:3])

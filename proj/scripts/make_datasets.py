#!/usr/bin/env python3
"""Generate the bundled example datasets.

The three CSVs under data/ are synthetic stand-ins shaped like the UCI
Lenses, Concrete Slump Test, and Automobile datasets (same row counts,
column kinds, and missing-value conventions) so the toolkit can be
exercised offline. Regenerate with: python3 scripts/make_datasets.py
"""

import numpy as np
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data")


def write_csv(name, header, rows):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for r in rows:
            f.write(",".join(str(c) for c in r) + "\n")
    print("wrote", path, len(rows), "rows")


def concrete():
    # 103 samples, 7 numeric features, numeric label. Raw feature ranges are
    # intentionally wide so the normalization ablation has teeth.
    rng = np.random.default_rng(20240601)
    n = 103
    cement = rng.uniform(140, 380, n)
    slag = rng.uniform(0, 200, n)
    fly_ash = rng.uniform(0, 120, n)
    water = rng.uniform(160, 240, n)
    sp = rng.uniform(4, 19, n)
    coarse = rng.uniform(700, 1050, n)
    fine = rng.uniform(640, 900, n)
    y = (35.0
         + 0.055 * (cement - 260)
         + 0.028 * (slag - 100)
         + 0.020 * (fly_ash - 60)
         - 0.180 * (water - 200)
         + 0.350 * (sp - 11.5)
         - 0.012 * (coarse - 875)
         - 0.010 * (fine - 770)
         + rng.normal(0, 7.0, n))
    header = ["cement", "slag", "fly_ash", "water", "sp",
              "coarse_aggr", "fine_aggr", "compressive_strength"]
    rows = [[f"{v:.2f}" for v in row]
            for row in np.column_stack([cement, slag, fly_ash, water, sp,
                                        coarse, fine, y])]
    write_csv("concrete.csv", header, rows)


def lenses():
    # Full 3x2x2x2 factorial with the classic fitting rule; label is the
    # lens class coded 1=hard, 2=soft, 3=none.
    ages = ["young", "pre_presbyopic", "presbyopic"]
    rxs = ["myope", "hypermetrope"]
    astig = ["no", "yes"]
    tears = ["reduced", "normal"]
    rows = []
    for a in ages:
        for r in rxs:
            for s in astig:
                for t in tears:
                    if t == "reduced":
                        c = 3
                    elif s == "no":
                        c = 2
                    elif r == "myope":
                        c = 1
                    else:
                        c = 3
                    rows.append([a, r, s, t, c])
    write_csv("lenses.csv",
              ["age", "prescription", "astigmatic", "tear_rate", "lens_class"],
              rows)


def automobiles():
    # 201 samples, mixed categorical/numeric columns, "?" missing cells.
    rng = np.random.default_rng(77)
    n = 201
    doors = rng.choice(["two", "four"], n)
    body = rng.choice(["sedan", "hatchback", "wagon"], n, p=[0.5, 0.35, 0.15])
    curb = rng.uniform(1500, 4000, n)
    hp = rng.uniform(48, 230, n)
    mpg = rng.uniform(13, 49, n)
    price = (4000
             + 3.2 * (curb - 2500)
             + 52.0 * (hp - 100)
             - 180.0 * (mpg - 25)
             + np.where(body == "sedan", 600, np.where(body == "wagon", -400, 0))
             + np.where(doors == "four", 350, 0)
             + rng.normal(0, 900, n))
    rows = []
    miss_doors = set(rng.choice(n, 2, replace=False).tolist())
    miss_hp = set(rng.choice(n, 4, replace=False).tolist())
    for i in range(n):
        rows.append([
            "?" if i in miss_doors else doors[i],
            body[i],
            f"{curb[i]:.0f}",
            "?" if i in miss_hp else f"{hp[i]:.0f}",
            f"{mpg[i]:.1f}",
            f"{price[i]:.0f}",
        ])
    write_csv("automobiles.csv",
              ["num_doors", "body_style", "curb_weight", "horsepower",
               "city_mpg", "price"],
              rows)


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    concrete()
    lenses()
    automobiles()

#!/usr/bin/env python3
"""Regenerates the synthetic datasets shipped under data/.

Both files are deterministic given the seeds below; rerunning this script
reproduces them byte for byte.

  data/german_credit_synthetic.csv
      1000 rows, 24 unstandardized covariates of wildly different scales
      (amounts in the thousands next to 0/1 flags and small category codes)
      and a 0/1 response drawn from a logistic model, so a fitted model has
      25 parameters including the intercept.

  data/gp_synthetic.csv
      10 one-dimensional inputs on [0, 3] with responses drawn from a
      Gaussian process with squared-exponential covariance
      cov(x, x') = v1 * exp(-ell * (x - x')^2) + v2 * [x == x'],
      v1 = 1.0, v2 = 0.1, ell = 1.0.
"""

import os

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, os.pardir, "data")


def make_credit(path: str) -> None:
    rng = np.random.default_rng(20260301)
    n = 1000
    cols = {}
    cols["duration_months"] = rng.integers(4, 73, n)
    cols["credit_amount"] = np.round(np.exp(rng.normal(7.8, 0.9, n))).astype(int)
    cols["installment_rate"] = rng.integers(1, 5, n)
    cols["residence_since"] = rng.integers(1, 5, n)
    cols["age_years"] = rng.integers(19, 76, n)
    cols["existing_credits"] = rng.integers(1, 5, n)
    cols["num_dependents"] = rng.integers(1, 3, n)
    for i, levels in enumerate([4, 5, 10, 5, 5, 4, 3, 3, 4, 3, 4, 2, 2, 2]):
        cols[f"code_{i}"] = rng.integers(0, levels, n)
    for i in range(3):
        cols[f"flag_{i}"] = rng.integers(0, 2, n)

    names = list(cols.keys())
    assert len(names) == 24
    design = np.column_stack([cols[c] for c in names]).astype(float)

    standardized = (design - design.mean(axis=0)) / design.std(axis=0)
    coef = rng.normal(0.0, 0.6, 24)
    eta = standardized @ coef - 0.9  # shift toward a ~70/30 split
    y = (rng.uniform(size=n) < 1.0 / (1.0 + np.exp(-eta))).astype(int)

    with open(path, "w", newline="\n") as f:
        f.write(",".join(names + ["bad_credit"]) + "\n")
        for i in range(n):
            row = [str(int(v)) for v in design[i]]
            f.write(",".join(row + [str(y[i])]) + "\n")
    print(f"{path}: {n} rows, {design.shape[1]} covariates, "
          f"{y.mean():.3f} positive rate")


def make_gp(path: str) -> None:
    rng = np.random.default_rng(20260302)
    n = 10
    x = np.sort(rng.uniform(0.0, 3.0, n))
    v1, v2, ell = 1.0, 0.1, 1.0
    sq = (x[:, None] - x[None, :]) ** 2
    cov = v1 * np.exp(-ell * sq) + v2 * np.eye(n)
    y = np.linalg.cholesky(cov) @ rng.standard_normal(n)
    with open(path, "w", newline="\n") as f:
        f.write("x,y\n")
        for xi, yi in zip(x, y):
            f.write(f"{float(xi)!r},{float(yi)!r}\n")
    print(f"{path}: {n} observations")


if __name__ == "__main__":
    os.makedirs(DATA, exist_ok=True)
    make_credit(os.path.join(DATA, "german_credit_synthetic.csv"))
    make_gp(os.path.join(DATA, "gp_synthetic.csv"))

#!/usr/bin/env python3
"""Reproduce the L1 error table of the three Kantorovich operators on the
four-level step function (tanh kernel, exact cell averages) and fit the
empirical convergence rate of each column."""

import argparse
import sys

import numpy as np

from nnops import (
    Domain,
    OperatorSpec,
    cell_averages_exact,
    eval_grid,
    fit_rate,
    lp_error,
    make_kernel,
    step_test_function,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-list", default="10,30,90,150,500")
    ap.add_argument("--kernel", default="tanh")
    ap.add_argument("--p", type=float, default=1.0)
    ap.add_argument("--grid", type=int, default=100_000)
    args = ap.parse_args()

    domain = Domain(0.0, 1.0)
    kernel = make_kernel(args.kernel)
    f = step_test_function()
    n_values = [int(t) for t in args.n_list.split(",")]
    families = ("linear", "maxmin", "maxprod")

    errors = {fam: [] for fam in families}
    for n in n_values:
        data = cell_averages_exact(f, domain, n)
        for fam in families:
            spec = OperatorSpec(fam, "kantorovich", n, domain, kernel)
            err = lp_error(lambda xs, s=spec, d=data: eval_grid(s, d, xs),
                           f, args.p, domain, args.grid)
            errors[fam].append(err)

    print(f"{'n':>6} {'linear':>10} {'maxmin':>10} {'maxprod':>10}")
    for i, n in enumerate(n_values):
        print(f"{n:>6} " + " ".join(f"{errors[fam][i]:>10.4f}" for fam in families))
    if len(n_values) >= 3:
        print(f"{'rate':>6} " + " ".join(
            f"{fit_rate(np.array(n_values), errors[fam]):>10.3f}" for fam in families
        ))
    return 0


if __name__ == "__main__":
    sys.exit(main())

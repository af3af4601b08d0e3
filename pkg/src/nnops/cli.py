"""Command-line front end: kernel-info, approximate, error-table, rate, denoise.

Exit codes: 0 on success, 2 on flag/validation problems, 3 on numeric
failures (zero kernel denominator).  Default output is CSV on stdout;
``--json`` switches to a JSON envelope and ``--out`` writes to a file.
All results are deterministic given the flags (including ``--seed``).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .kernels import (
    Kernel,
    absolute_moment,
    eval_kernel,
    kernel_to_json,
    make_kernel,
    phi_floor,
)
from .metrics import (
    lp_error,
    make_error_report,
    rate_exponent_holder,
    report_to_json,
    sup_error,
)
from .operators import (
    Domain,
    OperatorSpec,
    ZeroDenominatorError,
    eval_grid,
    node_bounds,
    sample_node_values,
)
from .quadrature import QuadratureRule, cell_averages_exact, cell_averages_sampled
from .signals import (
    PiecewiseConstant,
    Signal,
    add_gaussian_noise,
    holder_test_function,
    load_signal_csv,
    sample_function,
    step_test_function,
)


def _parse_kernel(text: str, scale: float, alpha: float | None) -> Kernel:
    if text.startswith("power:"):
        gamma = float(text.split(":", 1)[1])
        return make_kernel("power", gamma=gamma, scale=scale, alpha=alpha)
    return make_kernel(text, scale=scale, alpha=alpha)


def _parse_quad(text: str) -> QuadratureRule:
    if text in ("exact", "pairmean"):
        return QuadratureRule(text)
    kind, _, r = text.partition(":")
    if kind not in ("riemann", "trapezoid"):
        raise ValueError(f"unknown quadrature rule {text!r}")
    return QuadratureRule(kind, int(r) if r else 16)


def _parse_domain(text: str) -> Domain:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError:
        raise ValueError(f"domain must be 'a,b', got {text!r}") from None
    return Domain(a, b)


def _parse_fn(text: str):
    """Named test function -> callable with values in [0, 1]."""
    if text == "step":
        return step_test_function()
    if text == "identity":
        return holder_test_function(1.0)
    if text.startswith("lipschitz:"):
        return holder_test_function(float(text.split(":", 1)[1]))
    raise ValueError(f"unknown function {text!r}; use step, identity or lipschitz:<beta>")


def _node_data(f, spec: OperatorSpec, rule: QuadratureRule | None):
    """Node data for a named function, picking an exact-grade default rule."""
    if spec.mode == "sampling":
        return sample_node_values(f, spec)
    if isinstance(f, PiecewiseConstant) and (rule is None or rule.kind == "exact"):
        return cell_averages_exact(f, spec.domain, spec.n)
    if rule is None or rule.kind == "exact":
        # aligned trapezoid sub-samples integrate smooth functions to near
        # machine accuracy (exactly, for affine pieces)
        rule = QuadratureRule("trapezoid", 64)
    if isinstance(f, Signal):
        return cell_averages_sampled(f, spec.n, rule)
    aligned = sample_function(f, spec.domain, spec.n * rule.refinement + 1)
    return cell_averages_sampled(aligned, spec.n, rule)


def _emit(text: str, out: str | None) -> int:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _add_shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kernel", default="tanh",
                   help="logistic|tanh|ramp|three|power:<gamma> (default tanh)")
    p.add_argument("--scale", type=float, default=1.0, help="kernel argument scale c")
    p.add_argument("--alpha", type=float, default=None,
                   help="tail decay exponent (default 1; power kernels pin it to gamma)")
    p.add_argument("--domain", default="0,1", help="interval as 'a,b' (default 0,1)")
    p.add_argument("--out", default=None, help="write output to this file")
    p.add_argument("--json", action="store_true", help="emit a JSON envelope")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nnops",
        description="Sampling and Kantorovich neural network operators "
                    "(linear, max-product, max-min) with sigmoidal kernels.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("kernel-info", help="kernel metadata, floor value and moment")
    _add_shared(p)
    p.add_argument("--resolution", type=int, default=100_000,
                   help="moment scan resolution")
    p.set_defaults(func=cmd_kernel_info)

    p = sub.add_parser("approximate", help="evaluate one operator on one function")
    _add_shared(p)
    p.add_argument("--family", default="maxmin", choices=("linear", "maxprod", "maxmin"))
    p.add_argument("--mode", default="kantorovich", choices=("sampling", "kantorovich"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fn", default="step", help="step|identity|lipschitz:<beta>")
    p.add_argument("--input", default=None, help="CSV signal instead of --fn")
    p.add_argument("--grid", type=int, default=2000, help="output grid points")
    p.add_argument("--quad", default=None,
                   help="exact|riemann:<r>|trapezoid:<r>|pairmean (default: exact-grade)")
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("error-table",
                       help="L^p errors of the three Kantorovich operators on the step function")
    _add_shared(p)
    p.add_argument("--n-list", default="10,30,90,150,500")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=100_000, help="norm quadrature cells")
    p.set_defaults(func=cmd_error_table)

    p = sub.add_parser("rate", help="empirical vs theoretical convergence exponent")
    _add_shared(p)
    p.add_argument("--family", default="maxmin", choices=("linear", "maxprod", "maxmin"))
    p.add_argument("--mode", default="kantorovich", choices=("sampling", "kantorovich"))
    p.add_argument("--fn", default="identity", help="step|identity|lipschitz:<beta>")
    p.add_argument("--n-list", default="25,50,100,200,400")
    p.add_argument("--p", default="inf", help="norm order, or 'inf' for the sup norm")
    p.add_argument("--grid", type=int, default=10_000)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("denoise",
                       help="compare Kantorovich and sampling operators on a noisy signal")
    _add_shared(p)
    p.add_argument("--n", type=int, default=2000, help="operator order")
    p.add_argument("--sigma", type=float, default=0.05, help="noise standard deviation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None,
                   help="built-in signal sample count (default n * refinement)")
    p.add_argument("--input", default=None, help="CSV signal instead of the built-in step")
    p.add_argument("--grid", type=int, default=2000, help="output grid points")
    p.add_argument("--quad", default="riemann:16")
    p.set_defaults(func=cmd_denoise)

    return parser


def cmd_kernel_info(args) -> int:
    kernel = _parse_kernel(args.kernel, args.scale, args.alpha)
    info = json.loads(kernel_to_json(kernel))
    info["phi_zero"] = eval_kernel(kernel, 0.0)
    info["phi_floor"] = phi_floor(kernel)
    info["moment_1_plus_alpha"] = absolute_moment(
        kernel, 1.0 + kernel.alpha, resolution=args.resolution
    )
    return _emit(json.dumps(info) + "\n", args.out)


def cmd_approximate(args) -> int:
    domain = _parse_domain(args.domain)
    kernel = _parse_kernel(args.kernel, args.scale, args.alpha)
    spec = OperatorSpec(args.family, args.mode, args.n, domain, kernel)
    rule = _parse_quad(args.quad) if args.quad else None
    if args.input:
        f = load_signal_csv(args.input, column="value", domain=domain)
    else:
        f = _parse_fn(args.fn)
    data = _node_data(f, spec, rule)
    xs = np.linspace(domain.a, domain.b, args.grid)
    fx = np.asarray(f(xs), dtype=float)
    kx = eval_grid(spec, data, xs)
    if args.json:
        payload = {
            "operator": spec.describe(),
            "x": xs.tolist(),
            "f": fx.tolist(),
            "Kf": kx.tolist(),
        }
        return _emit(json.dumps(payload) + "\n", args.out)
    lines = ["x,f,Kf"]
    lines += [f"{x:.17g},{a:.17g},{b:.17g}" for x, a, b in zip(xs, fx, kx)]
    return _emit("\n".join(lines) + "\n", args.out)


def cmd_error_table(args) -> int:
    domain = _parse_domain(args.domain)
    kernel = _parse_kernel(args.kernel, args.scale, args.alpha)
    n_values = [int(t) for t in args.n_list.split(",")]
    f = step_test_function()
    families = ("linear", "maxmin", "maxprod")
    table: dict[int, dict[str, float]] = {}
    for n in n_values:
        data = cell_averages_exact(f, domain, n)
        table[n] = {}
        for family in families:
            spec = OperatorSpec(family, "kantorovich", n, domain, kernel)
            table[n][family] = lp_error(
                lambda xs, s=spec, d=data: eval_grid(s, d, xs),
                f, args.p, domain, args.grid,
            )
    # aligned text view on stderr; stdout stays machine readable
    print(f"{'n':>6} {'linear':>10} {'maxmin':>10} {'maxprod':>10}", file=sys.stderr)
    for n in n_values:
        row = table[n]
        print(f"{n:>6} {row['linear']:>10.4f} {row['maxmin']:>10.4f} "
              f"{row['maxprod']:>10.4f}", file=sys.stderr)
    if args.json:
        payload = {
            "p": args.p,
            "kernel": args.kernel,
            "n_values": n_values,
            "errors": {fam: [table[n][fam] for n in n_values] for fam in families},
        }
        return _emit(json.dumps(payload) + "\n", args.out)
    lines = ["n,linear,maxmin,maxprod"]
    lines += [
        f"{n},{table[n]['linear']:.17g},{table[n]['maxmin']:.17g},"
        f"{table[n]['maxprod']:.17g}"
        for n in n_values
    ]
    return _emit("\n".join(lines) + "\n", args.out)


def cmd_rate(args, errors_override=None) -> int:
    """Fit the empirical convergence exponent over a sweep of n.

    ``errors_override`` is a test hook: a precomputed error list that skips
    the operator evaluation but exercises the fitting and reporting path.
    """
    domain = _parse_domain(args.domain)
    kernel = _parse_kernel(args.kernel, args.scale, args.alpha)
    n_values = [int(t) for t in args.n_list.split(",")]
    p = math.inf if args.p == "inf" else float(args.p)
    f = _parse_fn(args.fn)

    if errors_override is not None:
        errors = [float(e) for e in errors_override]
    else:
        errors = []
        for n in n_values:
            spec = OperatorSpec(args.family, args.mode, n, domain, kernel)
            data = _node_data(f, spec, None)
            op = lambda xs, s=spec, d=data: eval_grid(s, d, xs)
            if math.isinf(p):
                errors.append(sup_error(op, f, domain, args.grid))
            else:
                errors.append(lp_error(op, f, p, domain, args.grid))

    report = make_error_report(
        f"{args.family}/{args.mode} kernel={args.kernel}", p, n_values, errors
    )
    theoretical = None
    if args.fn == "identity":
        theoretical = -rate_exponent_holder(kernel.alpha, 1.0)
    elif args.fn.startswith("lipschitz:"):
        theoretical = -rate_exponent_holder(kernel.alpha, float(args.fn.split(":")[1]))
    payload = json.loads(report_to_json(report))
    payload["theoretical_exponent"] = theoretical
    return _emit(json.dumps(payload) + "\n", args.out)


def cmd_denoise(args) -> int:
    domain = _parse_domain(args.domain)
    kernel = _parse_kernel(args.kernel, args.scale, args.alpha)
    rule = _parse_quad(args.quad)

    clean = None
    if args.input:
        signal = load_signal_csv(args.input, column="value", domain=domain)
    else:
        clean = step_test_function()
        if rule.kind == "pairmean":
            k_lo, k_hi = node_bounds("kantorovich", args.n, domain)
            samples = 2 * (k_hi - k_lo + 1)
        else:
            samples = args.samples or args.n * rule.refinement
        signal = sample_function(clean, domain, samples)
    noisy = add_gaussian_noise(signal, args.sigma, args.seed)

    n = len(noisy) // 2 if rule.kind == "pairmean" and args.input else args.n
    kant_data = cell_averages_sampled(noisy, n, rule)
    specs = {
        "kant_maxmin": OperatorSpec("maxmin", "kantorovich", n, domain, kernel),
        "samp_maxmin": OperatorSpec("maxmin", "sampling", n, domain, kernel),
        "kant_maxprod": OperatorSpec("maxprod", "kantorovich", n, domain, kernel),
    }
    datas = {
        "kant_maxmin": kant_data,
        "samp_maxmin": sample_node_values(noisy, specs["samp_maxmin"]),
        "kant_maxprod": kant_data,
    }
    xs = np.linspace(domain.a, domain.b, args.grid)
    columns = {"x": xs, "noisy": noisy(xs)}
    for name, spec in specs.items():
        columns[name] = eval_grid(spec, datas[name], xs)

    distances = None
    if clean is not None:
        distances = {
            name: lp_error(
                lambda v, s=specs[name], d=datas[name]: eval_grid(s, d, v),
                clean, 1.0, domain, args.grid,
            )
            for name in specs
        }
        for name, dist in distances.items():
            print(f"L1 distance to clean reference, {name}: {dist:.6f}",
                  file=sys.stderr)

    if args.json:
        payload: dict = {"n": n}
        payload.update((k, np.asarray(v).tolist()) for k, v in columns.items())
        if distances is not None:
            payload["l1_distances"] = distances
        return _emit(json.dumps(payload) + "\n", args.out)
    names = list(columns)
    lines = [",".join(names)]
    for row in zip(*(columns[name] for name in names)):
        lines.append(",".join(f"{v:.17g}" for v in row))
    return _emit("\n".join(lines) + "\n", args.out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ZeroDenominatorError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

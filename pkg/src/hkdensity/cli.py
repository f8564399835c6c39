"""Command-line front end.

Exit status: 0 success, 1 invalid input, 2 a verified identity failed,
3 floating-point range error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import curve as curve_mod
from .errors import RangeError, ValidationError, VerificationError
from .fourier import ft_piecewise
from .graded_core import GradedPair, density_approximant, graded_colength_vector, hk_approx, pair_from_json
from .piecewise import (
    PiecewisePoly,
    convolve,
    format_decimal,
    format_rational,
    from_step,
    sample_points,
    to_csv,
    to_json,
)
from .tensor_conv import box_tensor, convolution_gap, phi_lattice_sweep, verify_cauchy

EXIT_OK, EXIT_INVALID, EXIT_VERIFY, EXIT_RANGE = 0, 1, 2, 3

BUILTINS = {
    "indicator": lambda: PiecewisePoly.indicator(0, 1),
    "tent": lambda: curve_mod.density_pair(curve_mod.tent_curve()),
    "conic": lambda: curve_mod.density_pair(curve_mod.conic_curve()),
}


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def _load_pair(path: str, p: int | None) -> GradedPair:
    return pair_from_json(_load_json(path), p)


def parse_samples(spec: str) -> list[complex]:
    """``real:lo:hi:count``, ``ray:re:im:count`` (from 0 to re + i im) or ``list:z1,z2,...``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "real":
            lo, hi, count = rest.split(":")
            return [complex(float(x)) for x in sample_points(Fraction(lo), Fraction(hi), int(count))]
        if kind == "ray":
            re, im, count = rest.split(":")
            end = complex(float(re), float(im))
            return [float(t) * end for t in sample_points(0, 1, int(count))]
        if kind == "list":
            return [complex(z.strip().replace("i", "j")) for z in rest.split(",") if z.strip()]
    except ValueError:
        pass
    raise ValidationError(f"bad sample spec {spec!r}; use real:lo:hi:count, ray:re:im:count or list:z1,z2")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_density(args) -> int:
    pair = _load_pair(args.pair, args.p)
    step = density_approximant(pair, args.n)
    if args.format == "json":
        hv = graded_colength_vector(pair, args.n)
        _emit(_dump({"q": step.q, "lengths": list(hv.lengths), "values": [format_rational(v) for v in step.values]}), args.out)
    else:
        _emit(to_csv(from_step(step), 0, step.support_end, args.grid + 1, args.digits), args.out)
    return EXIT_OK


def cmd_ehk(args) -> int:
    pair = _load_pair(args.pair, args.p)
    value = hk_approx(pair, args.n)
    q = pair.q(args.n)
    if args.format == "json":
        _emit(_dump({"n": args.n, "q": q, "hk_approx": format_rational(value)}), args.out)
    else:
        _emit(f"n,q,hk_approx\n{args.n},{q},{format_decimal(value, args.digits)}\n", args.out)
    return EXIT_OK


def cmd_tensor_verify(args) -> int:
    first = _load_pair(args.a, args.p)
    others = [_load_pair(path, args.p) for path in args.b]
    violations, cauchy_ok, phi_ok = [], True, True
    acc = first
    gap = None
    for step, other in enumerate(others):
        cr = verify_cauchy(acc, other, args.n)
        cauchy_ok &= cr.ok
        violations += [
            {"fold": step, "m": m, "tensor": lhs, "cauchy": rhs} for m, lhs, rhs in cr.violations
        ]
        for rep in phi_lattice_sweep(acc, other, args.n):
            if not rep.ok:
                phi_ok = False
                violations.append({
                    "fold": step, "x0": format_rational(rep.x0),
                    "cauchy_sum": format_rational(rep.cauchy_sum),
                    "tensor_value": format_rational(rep.tensor_value),
                    "phi_integral": format_rational(rep.phi_integral),
                })
        gap = convolution_gap(acc, other, args.n, args.grid)
        acc = box_tensor([acc, other]).combined
    report = {
        "q": first.q(args.n),
        "cauchy_ok": cauchy_ok,
        "violations": violations,
        "phi_ok": phi_ok,
        "gap_bound": format_rational(gap),
        "gap_bound_decimal": format_decimal(gap, args.digits),
    }
    _emit(_dump(report), args.out)
    if not (cauchy_ok and phi_ok):
        for v in violations:
            print(f"identity violated: {v}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_convolve(args) -> int:
    a, b = _load_pair(args.a, args.p), _load_pair(args.b, args.p)
    f = convolve(from_step(density_approximant(a, args.n)), from_step(density_approximant(b, args.n)))
    if args.format == "json":
        _emit(_dump(to_json(f)), args.out)
    else:
        lo, hi = f.support
        _emit(to_csv(f, lo, hi, args.grid + 1, args.digits), args.out)
    return EXIT_OK


def cmd_fourier(args) -> int:
    sources = [s for s in (args.pair, args.input, args.builtin) if s]
    if len(sources) != 1:
        raise ValidationError("give exactly one of --pair, --in, --builtin")
    samples = parse_samples(args.samples)
    if args.input:
        c = curve_mod.curve_from_json(_load_json(args.input))
        if args.method == "closed":
            cf = curve_mod.ft_closed_form(c)
            evaluate = lambda xi: curve_mod.ft_eval(cf, xi)  # noqa: E731
        else:
            f = curve_mod.density_pair(c)
            evaluate = lambda xi: ft_piecewise(f, xi)  # noqa: E731
    else:
        if args.pair:
            f = from_step(density_approximant(_load_pair(args.pair, args.p), args.n))
        else:
            f = BUILTINS[args.builtin]()
        evaluate = lambda xi: ft_piecewise(f, xi)  # noqa: E731
    rows = ["re_xi,im_xi,re_F,im_F,abs_F"]
    fmt = f"{{:.{args.digits}g}}"
    for xi in samples:
        F = evaluate(xi)
        # + 0.0 folds negative zero
        rows.append(",".join(fmt.format(v + 0.0) for v in (xi.real, xi.imag, F.real, F.imag, abs(F))))
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_curve(args) -> int:
    c = curve_mod.curve_from_json(_load_json(args.input))
    report = curve_mod.validate(c)
    if not report.ok:
        _emit(_dump({"validation": report.to_json()}), args.out)
        for v in report.violations:
            print(v, file=sys.stderr)
        return EXIT_INVALID
    if args.ehk:
        value = curve_mod.e_hk_curve(c, args.tol)
        if args.format == "json":
            _emit(_dump({"e_hk": format_rational(value), "validation": report.to_json()}), args.out)
        else:
            _emit(f"{format_rational(value)}\n" + _dump(report.to_json()), args.out)
        return EXIT_OK
    f = curve_mod.density_pair(c)
    cf = curve_mod.ft_closed_form(c)
    lo, hi = f.support
    if args.format == "json":
        doc = {
            "density": to_json(f),
            "closed_form": cf.to_json(),
            "e_hk": format_rational(curve_mod.e_hk_curve(c, args.tol)),
            "validation": report.to_json(),
        }
        _emit(_dump(doc), args.out)
    else:
        text = to_csv(f, lo, hi, args.grid + 1, args.digits) + "\n" + curve_mod.term_table(cf) + "\n" + _dump(report.to_json())
        _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hkdensity", description="Hilbert-Kunz density functions of monomial pairs and curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n=True):
        if n:
            p.add_argument("--n", type=int, required=True, help="Frobenius level, q = p^n")
        p.add_argument("--p", type=int, default=None, help="characteristic when the pair JSON omits it (default 2)")
        p.add_argument("--grid", type=int, default=256, help="sample intervals / sup-bound grid (default 256)")
        p.add_argument("--digits", type=int, default=12, help="significant digits in CSV output")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("density", help="step approximant f_n of a pair")
    p.add_argument("--pair", required=True)
    common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("ehk", help="l(R/I^[q]) / q^d as an exact rational")
    p.add_argument("--pair", required=True)
    common(p)
    p.set_defaults(func=cmd_ehk)

    p = sub.add_parser("tensor-verify", help="finite-level tensor/convolution identities")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True, action="append", help="repeat to fold more factors")
    common(p)
    p.set_defaults(func=cmd_tensor_verify)

    p = sub.add_parser("convolve", help="convolution of two step approximants")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    common(p)
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("fourier", help="holomorphic Fourier transform samples")
    p.add_argument("--pair")
    p.add_argument("--in", dest="input")
    p.add_argument("--builtin", choices=sorted(BUILTINS))
    p.add_argument("--samples", default="real:-20:20:101")
    p.add_argument("--method", choices=("closed", "piecewise"), default="closed", help="curve input only")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("curve", help="curve density, closed-form transform and validation")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--ehk", action="store_true", help="print only e_HK and the validation report")
    p.add_argument("--tol", type=float, default=1e-10)
    common(p, n=False)
    p.set_defaults(func=cmd_curve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "grid", 1) < 1 or args.digits < 1:
        print("error: --grid and --digits must be positive", file=sys.stderr)
        return EXIT_INVALID
    if args.command == "fourier" and args.pair and args.n is None:
        print("error: --pair needs --n", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        if exc.lhs is not None:
            print(f"  lhs = {exc.lhs}\n  rhs = {exc.rhs}", file=sys.stderr)
        return EXIT_VERIFY
    except RangeError as exc:
        print(f"range error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

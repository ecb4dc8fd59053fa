"""Command-line front end.

Exit codes: 0 all checks passed, 1 a quantitative check failed,
2 usage or domain error.
"""
import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from .algebra import Tolerance
from .params import CASES, HERMITIAN, UNITARY, ParamsError, from_q
from .topo import TopoBasisError, build_rep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
REFERENCE_MU = (1.0, -1.0, -3.0)


class UsageError(ValueError):
    pass


_PI_RE = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text: str) -> float:
    """'pi/2', '2pi/3', '-pi', '2*pi/3' or a plain decimal."""
    text = str(text).strip().lower()
    m = _PI_RE.match(text)
    if m:
        sign, coef, den = m.groups()
        val = (float(coef) if coef else 1.0) * np.pi / (float(den) if den else 1.0)
        return -val if sign == "-" else val
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


_EXP_RE = re.compile(r"^\s*(?:e\^\{?|exp\()\s*i\s*\*?\s*(.+?)\s*[)}]?\s*$")


def parse_complex(text: str) -> complex:
    """'1.2', '0.5+0.2j', 'e^{i*pi/8}' or 'exp(i*pi/8)'."""
    text = str(text).strip()
    m = _EXP_RE.match(text.lower())
    if m:
        return complex(np.exp(1j * parse_angle(m.group(1))))
    try:
        return complex(text.replace("i", "j")) if "i" in text and "j" not in text else complex(text)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def parse_half(text: str):
    from .wigner import WignerError, half_int

    try:
        return half_int(text)
    except WignerError as exc:
        raise UsageError(str(exc)) from None


def _tol(args) -> Tolerance:
    return Tolerance(args.abs_tol, args.rel_tol)


def _fmt_c(z, digits=6):
    z = complex(z)
    re_, im_ = (0.0 if abs(x) < 1e-14 else x for x in (z.real, z.imag))
    z = complex(re_ + 0.0, im_ + 0.0)
    if z.imag == 0:
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def _print_report(report, fmt, header=""):
    if fmt == "json":
        print(report.to_json())
        return
    if header:
        print(header)
    for e in report.entries:
        print(f"  {'PASS' if e.passed else 'FAIL'}  {e.id:<28s} {e.residual:.3e}")
    print(f"  overall: {'PASS' if report.overall_pass else 'FAIL'}")


def cmd_verify(args) -> int:
    tol = _tol(args)
    rng = np.random.default_rng(args.seed)
    if args.q == "random":
        if args.case == HERMITIAN:
            qs = list(rng.uniform(0.6, 1.8, args.count))
        else:
            qs = [np.exp(1j * np.pi / n) for n in rng.integers(5, 13, args.count)]
    else:
        qs = [parse_complex(args.q)] * args.count
    ok = True
    for q in qs:
        try:
            p = from_q(q, args.m, args.case)
            rep = build_rep(p, tol, gate=False)
        except (ParamsError, TopoBasisError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        report = rep.report
        if args.case == UNITARY:
            from .algebra import residual

            for name, x in (("A_unitary", rep.a), ("B_unitary", rep.b)):
                report.add(name, residual(x @ x.conj().T, np.eye(3)), tol)
        ok &= report.overall_pass
        _print_report(report, args.format, f"q={_fmt_c(q)} m={args.m} case={args.case} d={_fmt_c(p.d)}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_chain(args) -> int:
    from .chain import (ChainError, appendix_d_report, build_hamiltonian, heisenberg_check,
                        singlet_spectrum)

    phi, J = parse_angle(args.phi), args.J
    out = {}
    heis = heisenberg_check(4, phi)
    out["heisenberg"] = heis.to_dict()
    status = EXIT_OK if heis.overall_pass else EXIT_FAIL
    try:
        spec = singlet_spectrum(build_hamiltonian(4, J, phi), J, phi)
    except ChainError as exc:
        spec = None
        out["singlet_error"] = str(exc)
        status = EXIT_FAIL
    if spec is not None:
        out["spectrum"] = spec.to_dict()
        want = np.array([-6.0, -2.0, 0.0]) * J
        spectrum_ok = np.allclose(np.sort(spec.singlet_eigenvalues), want, atol=1e-9)
        out["spectrum_ok"] = bool(spectrum_ok)
        out["mu_reference"] = list(REFERENCE_MU)
        out["mu_matches_reference"] = bool(np.allclose(spec.mu_values, REFERENCE_MU, atol=1e-9))
        if not spectrum_ok:
            status = EXIT_FAIL
    if heis.overall_pass:
        out["appendix_d"] = appendix_d_report(J)
    if args.format == "json":
        print(json.dumps(out, indent=1))
        return status
    print(f"phi={phi:.6g} J={J:g}")
    _print_report(heis, "pretty", "Heisenberg identity T - M(phi) = S.S on all pairs:")
    if spec is None:
        print(f"singlet analysis unavailable: {out['singlet_error']}")
        return status
    print("singlet energies:", " ".join(f"{x:.9g}" for x in spec.singlet_eigenvalues),
          "(ok)" if out["spectrum_ok"] else "(expected -6J, -2J, 0)")
    print("mu (T13-M13 on g_k):", " ".join(f"{x:.9g}" for x in spec.mu_values),
          "| reference:", " ".join(f"{x:g}" for x in REFERENCE_MU),
          "| match" if out["mu_matches_reference"] else "| MISMATCH")
    print("sum over both next-nearest pairs:", " ".join(f"{x:.9g}" for x in spec.mu_sum_values))
    print("|S^2 g_k|:", " ".join(f"{x:.2e}" for x in spec.s2_norms))
    print("2(4 + E_k/J + 2 mu_k):", " ".join(f"{x:.2e}" for x in spec.eq66_values))
    if "appendix_d" in out:
        print(f"{'entry':<22s}{'computed':>14s}{'reference':>14s}{'abs_diff':>12s}")
        for r in out["appendix_d"]:
            c = r["computed"]
            c = c if isinstance(c, float) else complex(*c).real
            flag = "" if r["abs_diff"] < 1e-9 else "  <- mismatch"
            print(f"{r['entry']:<22s}{c:>14.9f}{r['paper']:>14.9f}{r['abs_diff']:>12.2e}{flag}")
    return status


def cmd_scan(args) -> int:
    from .entropy import ScanError, scan, write_csv

    j, m = parse_half(args.j), parse_half(args.m)
    if args.plot and not args.out:
        raise UsageError("--plot needs --out (the figure is written next to the CSV)")
    try:
        result = scan(j, m, points=args.points, h=args.h)
    except (ScanError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = result.report
    gaps = result.column("bound_gap")
    ok = bool(gaps.min() >= -1e-12)
    if m != 0:
        step = 2 * result.grid_step
        ok &= any(abs(t - np.pi / 2) <= step for t in rep.common_extrema)
        ok &= any(abs(t - np.pi) <= step for t in rep.common_extrema)
    if args.out:
        write_csv(result.records, args.out)
        if args.plot:
            from .plotting import plot_scan

            plot_scan(result, str(Path(args.out).with_suffix(".png")))
    if args.format == "csv":
        sys.stdout.write(write_csv(result.records))
        return EXIT_OK if ok else EXIT_FAIL
    if args.format == "json":
        print(rep.to_json())
        return EXIT_OK if ok else EXIT_FAIL
    print(f"j={j} m={m} points={len(result.records)}")
    if rep.m_zero:
        print("m=0: common-extremum guarantee does not apply")
    for name, items in (("entropy", rep.entropy_extrema), ("l1", rep.l1_extrema)):
        desc = ", ".join(f"{e['theta']:.6f} ({e['kind']}{', kink' if e.get('kink') else ''})" for e in items)
        print(f"{name} extrema: {desc}")
    for t in rep.common_extrema:
        c = rep.classifications[t]
        print(f"common: theta={t:.6f} = {t / np.pi:.6f} pi  S {c['entropy']}, f {c['l1']}")
    print(f"entropy-only: {len(rep.entropy_only)}  l1-only: {len(rep.l1_only)}")
    print(f"min bound gap 2log2(f) - S: {gaps.min():.3e}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ybe(args) -> int:
    from .wigner import WignerError, x_ybe_residual, ybe_cos_phi, ybe_phi, ybe_residual

    j = parse_half(args.j)
    try:
        if args.theta:
            thetas = [parse_angle(t) for t in args.theta]
            phi = parse_angle(args.phi) if args.phi is not None else ybe_phi(*thetas)
            if phi is None:
                print(f"error: cos(phi) = {ybe_cos_phi(*thetas):.6g} is outside [-1, 1]", file=sys.stderr)
                return EXIT_USAGE
            res = ybe_residual(j, *thetas, phi=phi)
        else:
            res, thetas, phi = x_ybe_residual(j, args.x, args.y,
                                              parse_angle(args.phi) if args.phi is not None else None)
    except WignerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ok = res < args.tol
    if args.format == "json":
        print(json.dumps({"j": str(j), "thetas": list(thetas), "phi": phi, "residual": res, "pass": ok}))
    else:
        print("thetas:", " ".join(f"{t:.9g}" for t in thetas))
        print(f"phi: {phi:.9g} ({phi / np.pi:.6g} pi)")
        print(f"residual: {res:.3e} {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_wigner(args) -> int:
    from .wigner import big_d

    j = parse_half(args.j)
    if j < 0.5:
        raise UsageError("j must be at least 1/2")
    theta, phi = parse_angle(args.theta), parse_angle(args.phi)
    mat = big_d(j, theta, phi)
    if args.format == "json":
        print(json.dumps({"j": str(j), "theta": theta, "phi": phi,
                          "D": [[[z.real, z.imag] for z in row] for row in mat]}))
    else:
        for row in mat:
            print("  ".join(f"{_fmt_c(z):>22s}" for z in row))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bwmlab", description=__doc__.splitlines()[0])
    parser.add_argument("--abs-tol", type=float, default=1e-10)
    parser.add_argument("--rel-tol", type=float, default=1e-9)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="relation suite on the 3x3 representation")
    p.add_argument("--case", choices=CASES, default=HERMITIAN)
    p.add_argument("--q", default="random", help="number, e^{i*pi/8}, or 'random'")
    p.add_argument("--m", type=int, default=-2)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("chain", help="four-site spin-1 chain and its topological basis")
    p.add_argument("--phi", default="pi")
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("scan", help="entropy and L1-norm scan of a d-function column")
    p.add_argument("--j", required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--plot", action="store_true", help="also write a PNG next to the CSV")
    p.add_argument("--format", choices=("pretty", "json", "csv"), default="pretty")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("ybe", help="D-function Yang-Baxter residual")
    p.add_argument("--j", default="1")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--theta", nargs=3, metavar="T")
    grp.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--phi", help="override phi instead of solving for it")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.set_defaults(func=cmd_ybe)

    p = sub.add_parser("wigner", help="print D^j(theta, phi)")
    p.add_argument("--j", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--phi", default="0")
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.set_defaults(func=cmd_wigner)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "ybe" and args.x is not None and args.y is None:
        parser.error("--x needs --y")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

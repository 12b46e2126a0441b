"""Command-line front end.

Exit codes: 0 success, 1 numerical-check failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import cscoeff, dynamics, reproduce, tableau, verify
from .problems import get_problem, PROBLEMS
from .quadrature import make_rule, UnsupportedSizeError

QUAD_FAMILIES = ("gauss", "radau_left", "radau_right", "lobatto")


class UsageError(Exception):
    pass


def _gamma_entry(text: str) -> tuple[int, int, float]:
    try:
        idx, value = text.split("=")
        i, j = (int(v) for v in idx.split(","))
        return i, j, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i,j=value, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_method_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("method")
    g.add_argument("--family", choices=("exa1", "exa2", "exa3", "general"), default="exa1")
    g.add_argument("--s", type=int, default=1)
    g.add_argument("--lambda", dest="lam", type=float, default=0.0)
    g.add_argument("--alpha", type=int, default=1)
    g.add_argument("--beta", type=int, default=1)
    g.add_argument("--gamma", type=_gamma_entry, action="append", default=[],
                   help="free coefficient i,j=value (repeatable)")
    g.add_argument("--quad", choices=QUAD_FAMILIES, default="gauss")
    g.add_argument("--r", type=int, default=2, help="number of quadrature points")
    g.add_argument("--pair", action="store_true",
                   help="emit (A, conjugate A); implied by exa2 and exa3")
    g.add_argument("--method-file", help="read the tableau (or pair) from JSON instead")


def build_method(args) -> tableau.ButcherTableau | tableau.PartitionedTableau:
    if getattr(args, "method_file", None):
        return tableau.from_json(_read(args.method_file))
    try:
        rule = make_rule(args.quad, args.r)
        if args.family == "exa1":
            coeff = cscoeff.build_symplectic_rk(args.s, args.lam)
        elif args.family == "general":
            free = {(i, j): v for i, j, v in args.gamma}
            coeff = cscoeff.build_general(args.alpha, args.beta, free)
        elif args.family == "exa2":
            return tableau.retrieve_prk(cscoeff.build_symplectic_prk_AB(args.s), rule)
        else:
            return tableau.retrieve_prk(cscoeff.build_symplectic_prk_sym(args.s), rule)
    except (ValueError, UnsupportedSizeError) as exc:
        raise UsageError(str(exc)) from None
    if args.pair:
        pair = cscoeff.CsPair(coeff, cscoeff.conjugate(coeff))
        if not pair.c_hat_is_tau():
            warnings.warn("conjugate coefficient does not have abscissa tau", cscoeff.AbscissaWarning)
        return tableau.retrieve_prk(pair, rule)
    return tableau.retrieve_rk(coeff, rule)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_generate(args) -> int:
    method = build_method(args)
    text = tableau.to_json(method) if args.format == "json" else tableau.to_text(method)
    _emit(text, args.output)
    return 0


def cmd_verify(args) -> int:
    method = tableau.from_json(_read(args.tableau))
    rep = verify.report(method, args.quad_order)
    _emit(rep.to_json(indent=2), args.output)
    return 1 if args.strict and not rep.symplectic else 0


def cmd_reproduce(args) -> int:
    specs = reproduce.default_specs()
    if args.corrupt:
        names = {spec.name for spec in specs}
        if args.corrupt not in names:
            raise UsageError(f"unknown table {args.corrupt!r}; choose from {sorted(names)}")
        specs = [reproduce.corrupted(s) if s.name == args.corrupt else s for s in specs]
    checks = reproduce.reproduce_tables(specs, args.tol)
    _emit(reproduce.format_report(checks), args.output)
    return 0 if all(c.passed for c in checks) else 1


def _initial_state(args, prob):
    if args.z0 is None:
        return prob.initial_state
    z0 = np.array(args.z0, dtype=float)
    if z0.shape != (prob.dim,):
        raise UsageError(f"--z0 needs {prob.dim} values for problem {prob.name}")
    return z0


def cmd_convergence(args) -> int:
    method = build_method(args)
    prob = get_problem(args.problem)
    h_list = sorted(args.h_list, reverse=True)
    try:
        errors = dynamics.convergence_errors(method, prob, _initial_state(args, prob), args.t_final,
                                             h_list, swap=args.swap)
    except dynamics.StepFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        text = dynamics.convergence_summary(h_list, errors)
    else:
        rows = ["h,error"] + [f"{float(h)!r},{float(e)!r}" for h, e in zip(h_list, errors)]
        text = "\n".join(rows)
        print(f"slope: {dynamics.fit_slope(h_list, errors):.6g}", file=sys.stderr)
    _emit(text, args.output)
    return 0


def cmd_integrate(args) -> int:
    method = build_method(args)
    prob = get_problem(args.problem)
    try:
        traj = dynamics.integrate(method, prob, 0.0, _initial_state(args, prob), args.h, args.n_steps,
                                  swap=args.swap)
    except dynamics.StepFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(traj.to_csv().rstrip("\n"), args.output)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csprk", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="flat key=value file overriding defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a tableau from a coefficient family")
    _add_method_args(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check simplifying assumptions and symplecticity")
    p.add_argument("tableau", help="tableau JSON file, or - for stdin")
    p.add_argument("--quad-order", type=int, default=None)
    p.add_argument("--strict", action="store_true", help="exit 1 when not symplectic")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", help="regenerate the reference tableaux")
    p.add_argument("--tol", type=float, default=reproduce.TOL)
    p.add_argument("--corrupt", help=argparse.SUPPRESS)
    p.add_argument("--output")
    p.set_defaults(func=cmd_reproduce)

    for name, func, helptext in (("convergence", cmd_convergence, "measure the empirical order"),
                                 ("integrate", cmd_integrate, "integrate a Hamiltonian problem")):
        p = sub.add_parser(name, help=helptext)
        _add_method_args(p)
        p.add_argument("--problem", choices=sorted(PROBLEMS), default="pendulum")
        p.add_argument("--z0", type=_float_list, default=None)
        p.add_argument("--swap", action="store_true",
                       help="advance p with the second tableau and q with the first")
        p.add_argument("--output")
        if name == "convergence":
            p.add_argument("--h-list", type=_float_list, default=[0.2, 0.1, 0.05, 0.025])
            p.add_argument("--t-final", type=float, default=4.0)
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        else:
            p.add_argument("--h", type=float, default=0.1)
            p.add_argument("--n-steps", type=int, default=100)
        p.set_defaults(func=func)
    return parser


def _read_config(path: str) -> dict[str, str]:
    values = {}
    for n, line in enumerate(_read(path).splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = _read_config(known.config)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in subparsers.choices.values():
        defaults = {}
        for action in sp._actions:
            if action.dest in values:
                raw = values[action.dest]
                if isinstance(action, argparse._StoreTrueAction):
                    defaults[action.dest] = raw.lower() in ("1", "true", "yes", "on")
                elif action.type is not None:
                    try:
                        defaults[action.dest] = action.type(raw)
                    except (ValueError, argparse.ArgumentTypeError) as exc:
                        raise UsageError(f"config key {action.dest}: {exc}") from None
                else:
                    defaults[action.dest] = raw
        sp.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = make_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _warn_to_stderr
            return args.func(args)
    except (UsageError, tableau.TableauParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2


def _warn_to_stderr(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())

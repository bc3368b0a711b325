"""Command-line interface.

Subcommands:

    validate        check a generator file's invariants
    decompose       write conjugation plans for a generator
    simulate        run a simulation request (product formula or exact)
    cost            evaluate the step-selection formulas and bounds
    example-lambda  build the three-level lambda-configuration example

All file I/O is JSON with [re, im] complex scalars (CSV rows for cost
sweeps).  Exit codes: 0 success, 1 domain invariant violation, 2 I/O or
parse error.
"""

import argparse
import json
import sys

import numpy as np

from . import serialize
from .decompose import DecomposeError, decompose_generator, spectral_split, verify_plan
from .lindblad import (DiagonalGenerator, LindbladError, QuantumState, apply_exact,
                       from_diagonal, trace_distance)
from .numerics import NumericsError, dagger, frobenius
from .sud import SudError, gell_mann_basis
from .trotter import (TrotterError, build_plan, nexp_bound_closed_form, nexp_bound_res,
                      nexp_report, prepare_components, run_plan, select_order,
                      segments_per_block)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2

DOMAIN_ERRORS = (LindbladError, DecomposeError, TrotterError, NumericsError, SudError)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc}", EXIT_IO)


def _write_json(path: str, doc):
    text = serialize.dumps(doc) + "\n"
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO)


def _parse_generator_file(path: str):
    doc = _load_json(path)
    try:
        return serialize.parse_generator(doc)
    except serialize.SerializeError as exc:
        raise CliError(str(exc), EXIT_IO)
    except DOMAIN_ERRORS as exc:
        raise CliError(str(exc), EXIT_INVALID)


def lambda_atom_generator(gamma1: float, gamma2: float, phi: float, eta: float, alpha: float):
    """Three-level atom in the lambda configuration.

    Basis states are ordered (|e>, |1>, |2>); the two dissipation channels
    are spontaneous emission from the excited level into a superposition
    of the ground levels, and incoherent exchange between the ground
    levels:

        L1 = cos(phi) |1><e| + e^(i eta) sin(phi) |2><e|      (rate gamma1)
        L2 = cos(alpha) |1><2| + sin(alpha) |2><1|            (rate gamma2)
    """
    if gamma1 < 0 or gamma2 < 0:
        raise LindbladError("rates must be non-negative")
    e, g1, g2 = 0, 1, 2
    L1 = np.zeros((3, 3), dtype=complex)
    L1[g1, e] = np.cos(phi)
    L1[g2, e] = np.exp(1j * eta) * np.sin(phi)
    L2 = np.zeros((3, 3), dtype=complex)
    L2[g1, g2] = np.cos(alpha)
    L2[g2, g1] = np.sin(alpha)
    diag = DiagonalGenerator(d=3, H=np.zeros((3, 3)), terms=((gamma1, L1), (gamma2, L2)))
    return from_diagonal(diag, gell_mann_basis(3))


def cmd_validate(args) -> int:
    doc = _load_json(args.generator)
    try:
        g = serialize.parse_generator(doc)
    except serialize.SerializeError as exc:
        raise CliError(str(exc), EXIT_IO)
    except DOMAIN_ERRORS as exc:
        print(f"invalid generator: {exc}")
        return EXIT_INVALID
    herm = frobenius(g.H - dagger(g.H))
    eigs = np.linalg.eigvalsh(0.5 * (g.A + dagger(g.A)))
    m = len(spectral_split(g))
    print(f"d = {g.d}")
    print(f"hermiticity residual of H = {herm:.3e}")
    print(f"min eigenvalue of A = {eigs.min():.3e}")
    print(f"m = {m}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _parse_generator_file(args.generator)
    H, plans = decompose_generator(g)
    terms = spectral_split(g)
    residuals = [verify_plan(p, t, g.basis) for p, t in zip(plans, terms)]
    doc = serialize.plans_to_json(H, plans, residuals)
    if args.out:
        _write_json(args.out, doc)
    else:
        print(serialize.dumps(doc))
    for i, r in enumerate(residuals):
        print(f"term {i}: lambda = {plans[i].lam:.6g}, residual = {r:.3e}", file=sys.stderr)
    if any(r > 1e-8 for r in residuals):
        print("decomposition residual exceeds 1e-8", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_simulate(args) -> int:
    doc = _load_json(args.request)
    try:
        g = serialize.parse_generator(doc["generator"])
        rho0 = serialize.parse_state(doc["rho0"])
        t = float(doc["t"] if args.t is None else args.t)
        eps = float(doc["epsilon"] if args.eps is None else args.eps)
        mode = str(doc.get("mode", "trotter") if args.mode is None else args.mode)
    except KeyError as exc:
        raise CliError(f"simulation request is missing {exc}", EXIT_IO)
    except serialize.SerializeError as exc:
        raise CliError(str(exc), EXIT_IO)
    except DOMAIN_ERRORS as exc:
        raise CliError(str(exc), EXIT_INVALID)
    if t < 0:
        raise CliError("t must be non-negative", EXIT_INVALID)
    if eps <= 0:
        raise CliError("epsilon must be positive", EXIT_INVALID)
    if rho0.d != g.d:
        raise CliError("state dimension does not match the generator", EXIT_INVALID)
    oracle = apply_exact(g, rho0, t)
    out = {"d": g.d, "t": t, "epsilon": eps, "mode": mode}
    if mode == "oracle":
        out["rho"] = serialize.matrix_to_json(oracle.rho)
    elif mode == "trotter":
        Hm, plans = decompose_generator(g)
        components = prepare_components(Hm, plans, g.basis)
        if components:
            plan = build_plan(components, eps, t)
            state = run_plan(plan, components, rho0)
            out["cost"] = nexp_report(plan).to_dict()
        else:
            state = rho0
            out["cost"] = None
        out["rho"] = serialize.matrix_to_json(state.rho)
        out["trace_distance_to_oracle"] = trace_distance(state.rho, oracle.rho)
    else:
        raise CliError(f"unknown mode {mode!r}", EXIT_INVALID)
    if args.out:
        _write_json(args.out, out)
    else:
        print(serialize.dumps(out))
    if "trace_distance_to_oracle" in out:
        print(f"trace distance to oracle = {out['trace_distance_to_oracle']:.3e}",
              file=sys.stderr)
    return EXIT_OK


def cmd_cost(args) -> int:
    if args.m < 1 or args.t <= 0 or args.L1 <= 0 or args.L2 <= 0 or args.L2 > args.L1:
        raise CliError("need m >= 1, t > 0 and L1 >= L2 > 0", EXIT_INVALID)
    eps_values = [args.eps]
    if args.sweep:
        try:
            eps_values = [float(x) for x in args.sweep.split(",") if x]
        except ValueError as exc:
            raise CliError(f"bad sweep list: {exc}", EXIT_IO)
    rows = []
    for eps in eps_values:
        if eps <= 0:
            raise CliError("epsilon must be positive", EXIT_INVALID)
        if args.m == 1:
            rows.append({"epsilon": eps, "k": 1, "r": 0.0, "n_reps": 1,
                         "N_exp": 1, "N_exp_bound_res": None,
                         "N_exp_bound_closed_form": None})
            continue
        k, r = select_order(eps, args.t, args.m, args.L1, args.L2)
        n_reps = max(1, int(np.ceil(r * args.L1)))
        rows.append({
            "epsilon": eps,
            "k": k,
            "r": r,
            "n_reps": n_reps,
            "N_exp": segments_per_block(args.m, k) * n_reps,
            "N_exp_bound_res": nexp_bound_res(args.m, k, args.t, eps, args.L1, args.L2),
            "N_exp_bound_closed_form": nexp_bound_closed_form(args.m, args.t, eps, args.L1, args.L2),
        })
    if args.sweep:
        cols = ["epsilon", "k", "r", "n_reps", "N_exp", "N_exp_bound_res",
                "N_exp_bound_closed_form"]
        print(",".join(cols))
        for row in rows:
            print(",".join("" if row[c] is None else serialize.dumps(row[c]) for c in cols))
    else:
        print(serialize.dumps(rows[0]))
    return EXIT_OK


def cmd_example_lambda(args) -> int:
    g = lambda_atom_generator(args.gamma1, args.gamma2, args.phi, args.eta, args.alpha)
    terms = spectral_split(g)
    H, plans = decompose_generator(g)
    residuals = [verify_plan(p, t, g.basis) for p, t in zip(plans, terms)]
    rho0 = QuantumState(d=3, rho=np.eye(3, dtype=complex) / 3)
    bundle = {
        "generator": serialize.generator_to_json(g),
        "spectral": [{"lambda": t.lam, "a": serialize.vector_to_json(t.a)} for t in terms],
        "plans": serialize.plans_to_json(H, plans, residuals),
    }
    oracle = apply_exact(g, rho0, args.t)
    components = prepare_components(H, plans, g.basis)
    if components:
        plan = build_plan(components, args.eps, args.t)
        state = run_plan(plan, components, rho0)
        cost = nexp_report(plan).to_dict()
    else:
        state, cost = rho0, None
    bundle["simulation"] = {
        "t": args.t,
        "epsilon": args.eps,
        "rho0": serialize.matrix_to_json(rho0.rho),
        "rho": serialize.matrix_to_json(state.rho),
        "trace_distance_to_oracle": trace_distance(state.rho, oracle.rho),
        "cost": cost,
    }
    if args.out:
        _write_json(args.out, bundle)
    else:
        print(serialize.dumps(bundle))
    for i, p in enumerate(plans):
        print(f"term {i}: lambda = {p.lam:.6g}, theta = {p.params.theta:.12g}, "
              f"residual = {residuals[i]:.3e}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lindbladsim",
                                     description="decompose and simulate Markovian generators")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a generator file")
    p.add_argument("generator")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="write conjugation plans")
    p.add_argument("generator")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("simulate", help="run a simulation request")
    p.add_argument("request")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--mode", choices=("trotter", "oracle"), default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cost", help="evaluate step-count formulas")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--L1", type=float, required=True)
    p.add_argument("--L2", type=float, required=True)
    p.add_argument("--sweep", default=None, help="comma-separated epsilon list (CSV output)")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("example-lambda", help="three-level lambda-atom example bundle")
    p.add_argument("--gamma1", type=float, default=1.0)
    p.add_argument("--gamma2", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=np.pi / 3)
    p.add_argument("--eta", type=float, default=np.pi / 3)
    p.add_argument("--alpha", type=float, default=np.pi / 3)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_example_lambda)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

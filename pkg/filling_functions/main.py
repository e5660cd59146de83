#!/usr/bin/env python3
"""
Command-line entry point for the filling-function tools.

Every subcommand takes --complex, which is either a built-in fixture name
(tetra_solid, tetra_hollow, grid_WxH, torus_N, cycle_N, path_N, discrete_N,
coned_f2_R, coned_z2_R) or a path to a file in the complex text format.

Output (stdout, deterministic):
    build      the complex in text format
    validate   ok <name> <cell counts>
    fill       finite <n> <witness> | infeasible <obstruction> | budget-exceeded <cap>
    decompose  one ρ-connected part per line, label:coeff form
    connected  yes | no
    dn         one chain per line, sorted by (norm, cells)
    fv         CSV k,value   (value is an integer, inf or budget(<cap>))
    bound      CSV n,b_n,bound,fv
    fineness   CSV edge,count

Exit codes: 0 success, 1 bad input, 2 a filling search ran out of budget.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

import settings
from chain_core import Chain, ChainComplex, ModuleMap, augmentation_map
from complex_io import load_action, load_complex, parse_chain, serialize_complex
from coned_off import fineness_report
from connectivity import decompose, enumerate_Dn, enumerate_Dn_upto, is_rho_connected
from equivariance import bn_via_orbits, dn_orbit_layers, dn_orbit_representatives
from errors import FillingError
from filling import BudgetExceeded, FillingSolver
from fv import FvBudget, FvFinite, complex_upper_bound, fv_table

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


def _cycle_map(complex_: ChainComplex, d: int) -> ModuleMap:
    return augmentation_map(complex_.basis(0)) if d == 0 else complex_.boundary(d)


def _cycle_arg(complex_: ChainComplex, args) -> Chain:
    if args.cycle is None:
        raise ValueError("--cycle is required for this subcommand")
    return parse_chain(complex_.basis(args.degree), args.cycle)


def cmd_build(complex_: ChainComplex, args, out) -> int:
    out.write(serialize_complex(complex_))
    return EXIT_OK


def cmd_validate(complex_: ChainComplex, args, out) -> int:
    # loading already ran the ∂∘∂ check
    out.write(f"ok {complex_.name} {' '.join(str(size) for size in complex_.sizes)}\n")
    return EXIT_OK


def cmd_fill(complex_: ChainComplex, args, out) -> int:
    z = _cycle_arg(complex_, args)
    result = FillingSolver(complex_.boundary(args.degree + 1)).solve(z, args.budget)
    out.write(result.format() + "\n")
    return EXIT_BUDGET if isinstance(result, BudgetExceeded) else EXIT_OK


def cmd_decompose(complex_: ChainComplex, args, out) -> int:
    z = _cycle_arg(complex_, args)
    for part in decompose(_cycle_map(complex_, args.degree), z):
        out.write(part.format() + "\n")
    return EXIT_OK


def cmd_connected(complex_: ChainComplex, args, out) -> int:
    x = _cycle_arg(complex_, args)
    out.write("yes\n" if is_rho_connected(_cycle_map(complex_, args.degree), x) else "no\n")
    return EXIT_OK


def cmd_dn(complex_: ChainComplex, args, out) -> int:
    rho = _cycle_map(complex_, args.degree)
    if args.action:
        action = load_action(args.action, complex_, args.degree)
        if args.cumulative:
            chains = {x for layer in dn_orbit_layers(rho, action, args.n) for x in layer}
        else:
            chains = dn_orbit_representatives(rho, action, args.n)
    else:
        chains = enumerate_Dn_upto(rho, args.n) if args.cumulative else enumerate_Dn(rho, args.n)
    for x in sorted(chains, key=Chain.sort_key):
        out.write(x.format() + "\n")
    return EXIT_OK


def cmd_fv(complex_: ChainComplex, args, out) -> int:
    table = fv_table(complex_, args.degree, args.kmax, args.budget)
    if args.format == "records":
        for k, row in enumerate(table.rows):
            record = {"k": k, "value": row.cell()}
            if isinstance(row, FvFinite):
                record["value"] = row.value
            cycle = getattr(row, "cycle", None)
            record["cycle"] = cycle.format() if cycle is not None else None
            if isinstance(row, FvFinite):
                record["filling"] = row.filling.format() if row.filling is not None else None
            out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write("k,value\n")
        for k, row in enumerate(table.rows):
            out.write(f"{k},{row.cell()}\n")
    return EXIT_BUDGET if any(isinstance(row, FvBudget) for row in table.rows) else EXIT_OK


def cmd_bound(complex_: ChainComplex, args, out) -> int:
    table = fv_table(complex_, args.degree, args.n, args.budget)
    action = load_action(args.action, complex_, args.degree) if args.action else None
    out.write("n,b_n,bound,fv\n")
    for n in range(1, args.n + 1):
        if action is not None:
            bound = bn_via_orbits(_cycle_map(complex_, args.degree), action, n, complex_.boundary(args.degree + 1))
        else:
            bound = complex_upper_bound(complex_, args.degree, n)
        b_n = "inf" if bound.is_infinite else str(bound.b_n)
        total = "inf" if bound.is_infinite else str(bound.bound)
        out.write(f"{n},{b_n},{total},{table.rows[n].cell()}\n")
    return EXIT_BUDGET if any(isinstance(row, FvBudget) for row in table.rows) else EXIT_OK


def cmd_fineness(complex_: ChainComplex, args, out) -> int:
    edges = args.edges.split(",") if args.edges else None
    report = fineness_report(complex_, args.n, edges)
    out.write("edge,count\n")
    for label, count in report.items():
        out.write(f"{label},{count}\n")
    return EXIT_OK


COMMANDS = {
    "build": (cmd_build, "print a complex in the text format"),
    "validate": (cmd_validate, "check ∂∘∂ = 0 and report cell counts"),
    "fill": (cmd_fill, "exact filling norm of --cycle in --degree"),
    "decompose": (cmd_decompose, "split a cycle into ρ-connected cycles"),
    "connected": (cmd_connected, "is --cycle ρ-connected for ρ = ∂_d"),
    "dn": (cmd_dn, "list the ρ-connected chains of norm --n"),
    "fv": (cmd_fv, "filling function table FV(k), k = 0..kmax"),
    "bound": (cmd_bound, "compare FV(n) with n·B_n"),
    "fineness": (cmd_fineness, "count circuits of length <= --n through each edge"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="filling_functions",
        description="Homological filling functions of finite integer chain complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        cmd = sub.add_parser(name, help=help_text, description=help_text)
        cmd.add_argument("--complex", required=True, help="fixture name or complex file")
        cmd.add_argument("--output", help="write output to this file instead of stdout")
        if name in ("fill", "decompose", "connected", "dn", "fv", "bound"):
            cmd.add_argument("--degree", type=int, default=1, help="cycle degree d (default 1)")
        if name in ("fill", "decompose", "connected"):
            cmd.add_argument("--cycle", help="chain as label:coeff,label:coeff")
        if name in ("fill", "fv", "bound"):
            cmd.add_argument("--budget", type=int, default=settings.DEFAULT_BUDGET,
                             help="give up on fillings whose norm exceeds this")
        if name in ("dn", "bound", "fineness"):
            cmd.add_argument("--n", type=int, required=True)
        if name in ("dn", "bound"):
            cmd.add_argument("--action", help="action file, or 'symmetry' for the fixture's built-in symmetry")
        if name == "dn":
            cmd.add_argument("--cumulative", action="store_true", help="list norms 1..n instead of exactly n")
        if name == "fv":
            cmd.add_argument("--kmax", type=int, required=True)
            cmd.add_argument("--format", choices=("csv", "records"), default="csv",
                             help="csv rows k,value or JSON records with witnesses")
        if name == "fineness":
            cmd.add_argument("--edges", help="comma separated edge labels (default: all edges)")
    return parser


def run(args) -> int:
    complex_ = load_complex(args.complex)
    handler, _ = COMMANDS[args.command]
    if args.output:
        with open(args.output, "w") as out:
            code = handler(complex_, args, out)
        logger.info("results saved to %s", args.output)
        return code
    return handler(complex_, args, sys.stdout)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command-line entry point

    Args:
        argv: Arguments without the program name; sys.argv[1:] when None

    Returns:
        int: 0 on success, 1 for bad input or settings, 2 when a filling search ran out of budget
    """
    try:
        logging.basicConfig(level=settings.LOG_LEVEL, stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")
        parser = build_parser()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_INPUT
    try:
        return run(args)
    except (ValueError, FillingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RuntimeError as exc:
        logger.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

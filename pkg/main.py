#!/usr/bin/env python3
"""
thetapair command-line driver
Every computation and verification is a subcommand; reports go to stdout as
JSON (sorted keys) or plain text, progress goes to stderr.
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from acceptance_audit import run_acceptance
from algebra import chain_element, relations_check
from exactnum import format_rational
from indexing import (ThetaMatrix, a_eps, a_eps_variant, build_stabilization, co, enumerate_theta, monomial_chain,
                      ro, VARIANTS)
from limits import (ZERO_SYMBOL, coherence_report, limit_generator, spectral_transfer_report, transfer_2n,
                    transfer_n)
from modules import (double_centralizer_check, dump_module, faithfulness_report, grassmannian_module, load_module,
                     nflag_module, parse_module_spec, singular_vectors, t_element_report, tensor_module,
                     twist_by_theta)
from partitions import as_eps, as_partition, enumerate_eps_partitions, eps_collapse, nilcone_description, orbit_dimension
from reporting import AcceptanceAnalyzer
from utils import log_progress, parse_int_list, parse_matrix, set_quiet


class CheckFailed(Exception):
    """A verification subcommand ran to completion and found a failure"""


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _render_text(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {item}")
        return "\n".join(lines)
    if isinstance(value, list):
        return "\n".join(f"{pad}- {json.dumps(item, sort_keys=True)}" for item in value)
    return f"{pad}{value}"


def _eps(text):
    try:
        return as_eps(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _partition(text):
    try:
        return as_partition(parse_int_list(text), sort=True)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _theta_matrix(text):
    try:
        return ThetaMatrix.from_rows(parse_matrix(text))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _module_from(args):
    if args.file:
        with open(args.file) as f:
            data = json.load(f)
        # accept a full report written with --out as well as a bare module
        return load_module(data.get("outputs", data))
    if not args.module_spec:
        raise ValueError("Give a module spec such as nflag:n=3,v=4,eps=-1 or --file PATH")
    return parse_module_spec(args.module_spec)


def cmd_orbit_dim(args):
    return {"dimension": orbit_dimension(args.mu, args.eps)}


def cmd_collapse(args):
    return {"collapse": list(eps_collapse(args.mu, args.eps))}


def cmd_nilcone(args):
    return nilcone_description(args.n, args.v, args.eps).to_dict()


def cmd_enumerate_partitions(args):
    partitions = enumerate_eps_partitions(args.v, args.eps)
    return {"count": len(partitions), "partitions": [list(mu) for mu in partitions]}


def cmd_theta_enumerate(args):
    matrices = enumerate_theta(args.n, args.v, args.cap)
    return {"count": len(matrices), "matrices": [[list(row) for row in a.rows] for a in matrices]}


def cmd_monomial_chain(args):
    a = args.matrix
    chain = monomial_chain(a)
    return {
        "ro": list(ro(a)),
        "co": list(co(a)),
        "chain": [[list(row) for row in g.rows] for g in chain],
        "element": chain_element(a).to_json(),
    }


def cmd_stab_matrices(args):
    eps = args.eps
    if args.variant == "block-2n" and eps is None:
        raise ValueError("block-2n needs --eps")
    data = build_stabilization(args.variant, args.n, eps)
    report = data.to_json()
    report["isometry"] = data.isometry_residual().is_zero()
    if args.v is not None:
        report["a_eps"] = a_eps(args.n, args.v, data.eps)
        report["a_eps_variant"] = a_eps_variant(args.n, args.v, data.eps)
    return report


def cmd_verify_relations(args):
    module = _module_from(args)
    report = relations_check(args.n, module)
    if not report["passed"]:
        raise CheckFailed(report)
    return report


def cmd_grassmannian(args):
    return dump_module(grassmannian_module(args.v, args.eps))


def cmd_nflag(args):
    return dump_module(nflag_module(args.n, args.v, args.eps))


def cmd_tensor(args):
    return dump_module(tensor_module(args.n, args.d))


def cmd_double_centralizer(args):
    image_dim, commutant_dim, equal = double_centralizer_check(args.n, args.d)
    report = {"image_dim": image_dim, "commutant_dim": commutant_dim, "equal": equal}
    if not equal:
        raise CheckFailed(report)
    return report


def cmd_t_minpoly(args):
    report = t_element_report(args.v, args.eps)
    if args.v >= 4:
        report["spectral_transfer"] = spectral_transfer_report(args.v, args.eps)
        report["passed"] = report["passed"] and report["spectral_transfer"]["passed"]
    if not report["passed"]:
        raise CheckFailed(report)
    return report


def cmd_faithfulness(args):
    family = [tuple(row) for row in parse_matrix(args.family)]
    if any(len(member) != 3 for member in family):
        raise ValueError("Family members are a,b,c triples separated by ';'")
    weight = parse_int_list(args.weight) if args.weight else None
    report = faithfulness_report(family, args.max_level, weight=weight, residue=args.residue, eps=args.eps)
    if not report["independent"]:
        raise CheckFailed(report)
    return report


def cmd_singular_vectors(args):
    module = _module_from(args)
    if args.theta_twist:
        module = twist_by_theta(module)
    return singular_vectors(module).to_json()


def cmd_transfer(args):
    a = args.matrix
    if args.step == "2n":
        image = transfer_2n(a)
    else:
        image = transfer_n(a, "odd-orthogonal" if a.n % 2 else "symplectic-even")
    return {"image": None if image is ZERO_SYMBOL else [list(row) for row in image.rows]}


def cmd_limit_coherence(args):
    residue = args.residue if args.residue is not None else 2 * args.n
    weight = parse_int_list(args.weight) if args.weight else None
    family = limit_generator(args.kind, args.i, args.n, residue, args.eps, weight=weight)
    report = coherence_report(family, args.levels)
    if not report["passed"]:
        raise CheckFailed(report)
    return report


def cmd_acceptance(args):
    criteria = parse_int_list(args.criteria) if args.criteria else None
    results = run_acceptance(criteria, processes=args.processes)
    analyzer = AcceptanceAnalyzer(results)
    analyzer.print_summary(sys.stderr if not args.quiet else None)
    if args.csv:
        analyzer.save_csv(args.csv, timing=args.timing)
        log_progress(f"Acceptance table written to {args.csv}")
    if not args.timing:
        for result in results:
            result.pop("seconds", None)
    report = {"criteria": results, "passed": all(result["passed"] for result in results)}
    if not report["passed"]:
        raise CheckFailed(report)
    return report


def build_parser():
    parser = argparse.ArgumentParser(prog="thetapair",
                                     description="Exact computations for the fixed-point subalgebra of sl_n")
    parser.add_argument('--format', choices=['json', 'text'], default='json', help='Report format')
    parser.add_argument('--out', default=None, help='Write the report to this path instead of stdout')
    parser.add_argument('--file', default=None, help='Module JSON file for module-spec commands')
    parser.add_argument('--quiet', action='store_true', help='Suppress progress on stderr')
    parser.add_argument('--timing', action='store_true', help='Include timings in the report')
    parser.add_argument('--processes', type=int, default=None,
                        help='Number of processes for the acceptance suite')
    parser.add_argument('--csv', default=None, help='Write the acceptance table to this CSV path')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('orbit-dim', help='Dimension of a nilpotent orbit')
    p.add_argument('mu', type=_partition)
    p.add_argument('eps', type=_eps)
    p.set_defaults(handler=cmd_orbit_dim)

    p = sub.add_parser('collapse', help='Epsilon-collapse of a partition')
    p.add_argument('mu', type=_partition)
    p.add_argument('eps', type=_eps)
    p.set_defaults(handler=cmd_collapse)

    p = sub.add_parser('nilcone', help='Components of the n-nilcone')
    p.add_argument('n', type=int)
    p.add_argument('v', type=int)
    p.add_argument('eps', type=_eps)
    p.set_defaults(handler=cmd_nilcone)

    p = sub.add_parser('enumerate-partitions', help='All epsilon-partitions of v')
    p.add_argument('v', type=int)
    p.add_argument('eps', type=_eps)
    p.set_defaults(handler=cmd_enumerate_partitions)

    p = sub.add_parser('theta-enumerate', help='All theta-matrices of level v')
    p.add_argument('n', type=int)
    p.add_argument('v', type=int)
    p.add_argument('cap', type=int, nargs='?', default=None)
    p.set_defaults(handler=cmd_theta_enumerate)

    p = sub.add_parser('monomial-chain', help='Monomial chain and chain element of a theta-matrix')
    p.add_argument('matrix', type=_theta_matrix)
    p.set_defaults(handler=cmd_monomial_chain)

    p = sub.add_parser('stab-matrices', help='Stabilization matrices of a variant')
    p.add_argument('variant', choices=VARIANTS)
    p.add_argument('n', type=int)
    p.add_argument('--eps', type=_eps, default=None)
    p.add_argument('--v', type=int, default=None)
    p.set_defaults(handler=cmd_stab_matrices)

    p = sub.add_parser('verify-relations', help='Evaluate every defining relator on a module')
    p.add_argument('n', type=int)
    p.add_argument('module_spec', nargs='?', default=None)
    p.set_defaults(handler=cmd_verify_relations)

    p = sub.add_parser('grassmannian', help='Rank-one Grassmannian module')
    p.add_argument('v', type=int)
    p.add_argument('eps', type=_eps)
    p.set_defaults(handler=cmd_grassmannian)

    p = sub.add_parser('nflag', help='Natural n-flag module')
    p.add_argument('n', type=int)
    p.add_argument('v', type=int)
    p.add_argument('eps', type=_eps)
    p.set_defaults(handler=cmd_nflag)

    p = sub.add_parser('tensor', help='Tensor space module')
    p.add_argument('n', type=int)
    p.add_argument('d', type=int)
    p.set_defaults(handler=cmd_tensor)

    p = sub.add_parser('double-centralizer', help='Image vs commutant dimension on tensor space')
    p.add_argument('n', type=int)
    p.add_argument('d', type=int)
    p.set_defaults(handler=cmd_double_centralizer)

    p = sub.add_parser('t-minpoly', help='Minimal polynomial and transfer behavior of t')
    p.add_argument('v', type=int)
    p.add_argument('eps', type=_eps)
    p.set_defaults(handler=cmd_t_minpoly)

    p = sub.add_parser('faithfulness', help='Certify independence of monomials f^a e^b f^c')
    p.add_argument('family', help='Triples "a,b,c;a,b,c;..."')
    p.add_argument('--max-level', type=int, default=None)
    p.add_argument('--weight', default=None, help='Restrict to one weight class, e.g. "0,2,0"')
    p.add_argument('--residue', type=int, default=0, help='Weight size modulo 6 selecting the levels')
    p.add_argument('--eps', type=_eps, default=1)
    p.set_defaults(handler=cmd_faithfulness)

    p = sub.add_parser('singular-vectors', help='Singular vectors and their Cartan eigenvalues')
    p.add_argument('module_spec', nargs='?', default=None)
    p.add_argument('--theta-twist', action='store_true')
    p.set_defaults(handler=cmd_singular_vectors)

    p = sub.add_parser('transfer', help='Transfer a theta-matrix label one or two steps down')
    p.add_argument('matrix', type=_theta_matrix)
    p.add_argument('step', choices=['2n', 'n'])
    p.set_defaults(handler=cmd_transfer)

    p = sub.add_parser('limit-coherence', help='Coherence of a limit generator family across levels')
    p.add_argument('kind', choices=['e', 'f', 'h', 'idem'])
    p.add_argument('i', type=int)
    p.add_argument('n', type=int)
    p.add_argument('eps', type=_eps)
    p.add_argument('levels', type=int)
    p.add_argument('--residue', type=int, default=None)
    p.add_argument('--weight', default=None, help='Weight for the idempotent family')
    p.set_defaults(handler=cmd_limit_coherence)

    p = sub.add_parser('acceptance', help='Run the acceptance suite')
    p.add_argument('--criteria', default=None, help='Comma-separated criterion numbers')
    p.set_defaults(handler=cmd_acceptance)
    return parser


def _emit(report, args):
    payload = _jsonable(report)
    if args.format == 'json':
        text = json.dumps(payload, sort_keys=True, indent=2)
    else:
        text = _render_text(payload)
    if args.out:
        with open(args.out, 'w') as f:
            f.write(text + "\n")
        log_progress(f"Report written to {args.out}")
    else:
        print(text)


def run(argv=None):
    """Parse argv, run the subcommand and return the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    set_quiet(args.quiet)

    inputs = {key: value for key, value in vars(args).items()
              if key not in ('handler', 'command', 'format', 'out', 'quiet', 'timing', 'processes', 'csv')}
    report = {"command": args.command, "inputs": inputs}
    start_time = time.time()
    try:
        report["outputs"] = args.handler(args)
        report["passed"] = True
        code = 0
    except CheckFailed as failure:
        report["outputs"] = failure.args[0]
        report["passed"] = False
        code = 1
    except KeyboardInterrupt:
        print("\nInterrupted by user.", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    if args.timing:
        report["seconds"] = round(time.time() - start_time, 3)
    report["inputs"] = _jsonable({key: _input_value(value) for key, value in inputs.items()})
    _emit(report, args)
    return code


def _input_value(value):
    if isinstance(value, ThetaMatrix):
        return [list(row) for row in value.rows]
    return value


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end: ``homopoly <subcommand> ...``.

Exit status: 0 when every check passed, 1 when some check failed,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, chain, families, harness
from .circuits import CircuitError, build_loop_case_circuit
from .graphs import GraphError, find_homomorphism, load_graph
from .polynomials import PolynomialError, parse_var

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _global_options(parser: argparse.ArgumentParser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--max-n", type=int, default=default(None),
                        help="enumeration cap for family/hom; largest instance size for verify (default 3)")
    parser.add_argument("--seed", type=int, default=default(0), help="seed for every random stream")
    parser.add_argument("--format", choices=("text", "json"), default=default("text"))
    parser.add_argument("--out", default=default(None), help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homopoly", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"homopoly {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", parents=[common], help="emit a polynomial family instance")
    p.add_argument("--kind", required=True, choices=families.FAMILY_KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", help="target graph H as JSON (kind hom)")
    p.add_argument("--q", type=int, default=2, help="exponent parameter of the cut enumerator")
    const = p.add_mutually_exclusive_group()
    const.add_argument("--constant", dest="constant", action="store_true", default=None,
                       help="count the edgeless graph")
    const.add_argument("--no-constant", dest="constant", action="store_false")
    p.add_argument("--include-trivial", action="store_true", help="cut enumerator over all V, including {} and [n]")

    p = sub.add_parser("hom", parents=[common], help="homomorphism query G -> H")
    p.add_argument("--g", required=True, help="source graph JSON")
    p.add_argument("--h", required=True, help="target graph JSON")

    p = sub.add_parser("circuit", parents=[common], help="loop-case circuit prod (1 + x_e)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--action", choices=("build", "eval", "expand"), default="build")
    p.add_argument("--point", help='JSON object mapping variables to values, e.g. {"x{1,2}": 3}')

    p = sub.add_parser("reduce", parents=[common], help="run one reduction-chain step")
    p.add_argument("--step", required=True, choices=chain.STEP_NAMES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", help="graph H as JSON (neighbor_step)")
    p.add_argument("--trace", action="store_true", help="include the neighbourhood iteration trace of H")
    p.add_argument("--conventions", choices=("calibrated", "literal"), default="calibrated")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    scope = p.add_mutually_exclusive_group()
    scope.add_argument("--all", action="store_true")
    scope.add_argument("--scope", choices=harness.SCOPES)

    sub.add_parser("calibrate", parents=[common], help="boundary-convention calibration pass")
    return parser


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _graph(path: str):
    _read_json(path)
    return load_graph(path)


def _emit(args, text: str):
    if args.out:
        harness.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_family(args) -> int:
    graph = _graph(args.graph) if args.graph else None
    inst = families.build_family(args.kind, args.n, graph=graph, q=args.q, include_constant=args.constant,
                                 include_trivial=args.include_trivial, max_n=args.max_n)
    _emit(args, _dump(inst.to_json()) if args.format == "json" else f"{inst.polynomial}\n")
    return EXIT_OK


def cmd_hom(args) -> int:
    G, H = _graph(args.g), _graph(args.h)
    phi = find_homomorphism(G, H)
    if args.format == "json":
        text = _dump({"homomorphic": phi is not None, "map": None if phi is None else {str(k): v for k, v in phi.items()}})
    elif phi is None:
        text = "no homomorphism\n"
    else:
        text = "homomorphism: " + ", ".join(f"{u}->{v}" for u, v in sorted(phi.items())) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_circuit(args) -> int:
    c = build_loop_case_circuit(args.n)
    size, depth = c.metrics()
    if args.action == "build":
        out = c.to_json() | {"size": size, "depth": depth}
        text = _dump(out) if args.format == "json" else f"size {size}  depth {depth}  gates {len(c.gates)}\n"
    elif args.action == "expand":
        p = c.expand()
        text = _dump({"polynomial": p.to_json(), "size": size, "depth": depth}) if args.format == "json" else f"{p}\n"
    else:
        if not args.point:
            raise InputError("--action eval needs --point")
        try:
            raw = json.loads(args.point)
            point = {parse_var(k): Fraction(str(v)) for k, v in raw.items()}
        except (ValueError, AttributeError) as exc:
            raise InputError(f"bad --point: {exc}") from exc
        value = c.evaluate(point)
        text = _dump({"value": str(value)}) if args.format == "json" else f"{value}\n"
    _emit(args, text)
    return EXIT_OK


def _conventions(kind: str) -> chain.Conventions:
    if kind == "literal":
        return chain.Conventions()
    return chain.Conventions.from_json(harness.calibrate()["chosen"])


def cmd_reduce(args) -> int:
    graph = _graph(args.graph) if args.graph else None
    if args.step == "neighbor_step" and graph is None:
        raise InputError("neighbor_step needs --graph")
    step = chain.run_step(args.step, args.n, _conventions(args.conventions), graph, args.max_n, args.seed)
    data = step.to_json()
    if args.trace and graph is not None:
        data["trace"] = chain.iterate_neighbor(graph).to_json()
    if args.format == "json":
        text = _dump(data)
    else:
        lines = [f"{step.name} n={step.n}: {step.verdict}", f"  source   {step.source}", f"  target   {step.target}",
                 f"  oracle calls {step.transcript.call_count} (base {step.transcript.base_calls})"]
        if step.factor is not None:
            lines.append(f"  factor   {step.factor}")
        if step.witness:
            lines.append(f"  witness  {step.witness}")
        if "trace" in data:
            lines.append(f"  trace max degrees {data['trace']['max_degrees']} ({data['trace']['termination']})")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK if step.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    scope = "all" if args.all or not args.scope else args.scope
    max_n = 3 if args.max_n is None else args.max_n
    report = harness.run_suite(scope, max_n, args.seed)
    _emit(args, report.dumps() if args.format == "json" else report.to_text())
    return EXIT_OK if report.all_pass else EXIT_FAIL


def cmd_calibrate(args) -> int:
    result = harness.calibrate()
    if args.format == "json":
        text = _dump(result)
    else:
        lines = [f"tried {result['combinations_tried']} combinations at sizes {result['sizes']}",
                 f"satisfying all identities: {len(result['satisfying'])}"]
        lines += [f"  {c}" for c in result["satisfying"]]
        lines.append(f"chosen: {result['chosen']} (passes {', '.join(result['chosen_passes']) or 'none'})")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK if result["unique"] else EXIT_FAIL


COMMANDS = {"family": cmd_family, "hom": cmd_hom, "circuit": cmd_circuit, "reduce": cmd_reduce,
            "verify": cmd_verify, "calibrate": cmd_calibrate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (InputError, GraphError, PolynomialError, CircuitError, ValueError, KeyError) as exc:
        print(f"homopoly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

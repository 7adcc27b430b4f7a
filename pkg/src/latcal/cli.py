"""Command-line entry point: ``latcal {check,build,valuate,demo}``.

Exit codes: 0 success, 1 structural finding (not a lattice), 2 parse error,
3 size limit, 4 unmet precondition, 5 rule failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .bivaluation import ALL_CHECKS, BiValuation, run_checks
from .builders import (
    DEFAULT_MAX_ELEMENTS,
    downset_lattice,
    lattice_product,
    partition_poset,
    powerset_lattice,
    question_lattice,
)
from .document import (
    dumps_result,
    lattice_section,
    read_poset,
    result_document,
    serialize_poset,
    to_dot,
    valuation_section,
)
from .errors import (
    InvalidSeedError,
    LatticeError,
    MissingSeedError,
    NotALatticeError,
    NotDistributiveError,
    ParseError,
    SizeLimitError,
    UndefinedContextError,
    UnknownDemoError,
)
from .number_theory import divisibility_bayes, divisibility_degree, divisor_lattice, log_valuation
from .poset import Lattice, LatticeDiagnostic, certify_lattice, diagnose, join_irreducibles
from .valuation import extend_from_irreducibles, from_values

EXIT_OK, EXIT_STRUCTURE, EXIT_PARSE, EXIT_SIZE, EXIT_PRECONDITION, EXIT_RULE = range(6)
DEMOS = ("bridge", "divisor", "partition")

BRIDGE_DOCUMENT = """\
# bridge components: the span sits on both sides
elements: L R S
L < S
R < S
"""


class CliError(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _emit(args, doc: dict) -> None:
    if args.format == "text":
        text = _render_text(doc)
    else:
        text = dumps_result(doc)
    if args.output:
        Path(args.output).write_text(dumps_result(doc), encoding="utf-8")
    sys.stdout.write(text)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, list):
        return "(" + ", ".join(_fmt(e) for e in x) + ")"
    return str(x)


def _render_text(doc: dict) -> str:
    head = " ".join(f"{k}={v}" for k, v in sorted(doc["input"].items()))
    out = [f"latcal {doc['command']} {head}".rstrip()]
    lat = doc.get("lattice")
    if lat:
        out.append(
            f"  elements: {lat['elementCount']}  covers: {lat['coverCount']}  class: {lat['classification']}"
        )
        out.append(f"  lattice: {lat['isLattice']}  distributive: {lat['isDistributive']}")
        if lat["isLattice"]:
            out.append(f"  bottom: {lat['bottom']}  top: {lat['top']}")
        if lat["failureWitness"]:
            out.append(f"  witness: {lat['failureWitness']['message']}")
        if lat["distributivityWitness"]:
            out.append(f"  distributivity fails at: {_fmt(lat['distributivityWitness'])}")
        for note in lat.get("notices", []):
            out.append(f"  note: {note}")
    for key, value in doc.get("results", {}).items():
        out.append(f"  {key}: {_fmt(value)}")
    if doc.get("reports"):
        out.append(f"  {'rule':<16}{'tuples':>10}  {'maxResidual':>12}  status  witness")
        for r in doc["reports"]:
            status = "PASS" if r["passed"] else "FAIL"
            wit = _fmt(r["witness"]) if r["witness"] else "-"
            out.append(f"  {r['rule']:<16}{r['tuplesChecked']:>10}  {r['maxResidual']:>12.6g}  {status:<6}  {wit}")
    return "\n".join(out) + "\n"


def _write_dot(args, p) -> None:
    if getattr(args, "dot", None):
        Path(args.dot).write_text(to_dot(p), encoding="utf-8")


def _load_poset(path):
    try:
        return read_poset(path)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from exc


def _int_arg(text, what):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise CliError(EXIT_PARSE, f"{what} must be an integer, got {text!r}") from None


# -- check ------------------------------------------------------------------
def cmd_check(args) -> int:
    p = _load_poset(args.input)
    diag = diagnose(p)
    _write_dot(args, p)
    _emit(args, result_document("check", {"path": str(args.input)}, lattice=lattice_section(p, diag)))
    return EXIT_OK if diag.is_lattice else EXIT_STRUCTURE


# -- build ------------------------------------------------------------------
def _states(args):
    if args.components:
        base = _load_poset(args.components)
        states = downset_lattice(base, include_empty=False, max_elements=args.max_elements)
        return list(states.elements), {"components": str(args.components)}
    n = args.states if args.states is not None else (_int_arg(args.args[0], "state count") if args.args else None)
    if n is None:
        raise CliError(EXIT_PARSE, "give a state count (positional or --states) or --components FILE")
    if n < 1:
        raise CliError(EXIT_PARSE, "state count must be positive")
    return [f"s{i}" for i in range(1, n + 1)], {"states": n}


def cmd_build(args) -> int:
    kind = args.kind
    inp = {"kind": kind}
    results = {}
    if kind == "downsets":
        if len(args.args) != 1:
            raise CliError(EXIT_PARSE, "build downsets needs one poset document")
        base = _load_poset(args.args[0])
        built = downset_lattice(base, include_empty=args.include_empty, max_elements=args.max_elements)
        inp.update(path=args.args[0], includeEmpty=args.include_empty)
    elif kind == "powerset":
        states, extra = _states(args)
        built = powerset_lattice(states, max_elements=args.max_elements)
        inp.update(extra)
        results["states"] = states
    elif kind == "questions":
        states, extra = _states(args)
        statements = powerset_lattice(states, max_elements=args.max_elements)
        built = question_lattice(statements, max_elements=args.max_elements)
        inp.update(extra)
        results["stateCount"] = len(states)
        results["statementCount"] = len(statements)
    elif kind == "partition":
        if len(args.args) != 1:
            raise CliError(EXIT_PARSE, "build partition needs n")
        n = _int_arg(args.args[0], "n")
        if n < 1:
            raise CliError(EXIT_PARSE, "n must be positive")
        built = partition_poset(n)
        if len(built) > args.max_elements:
            raise SizeLimitError("partition count", len(built), args.max_elements)
        inp["n"] = n
    elif kind == "product":
        if len(args.args) != 2:
            raise CliError(EXIT_PARSE, "build product needs two poset documents")
        factors = []
        for path in args.args:
            lat = certify_lattice(_load_poset(path))
            if isinstance(lat, LatticeDiagnostic):
                raise CliError(EXIT_PRECONDITION, f"{path}: {lat.failure_witness.describe()}")
            factors.append(lat)
        built = lattice_product(*factors, max_elements=args.max_elements)
        inp["paths"] = list(args.args)
    elif kind == "divisor":
        if len(args.args) != 1:
            raise CliError(EXIT_PARSE, "build divisor needs a modulus")
        n = _int_arg(args.args[0], "modulus")
        if n < 2:
            raise CliError(EXIT_PARSE, "modulus must be at least 2")
        built = divisor_lattice(n, max_elements=args.max_elements)
        inp["modulus"] = n
        results["joinIrreducibles"] = list(join_irreducibles(built))
        if args.seed_out:
            seed = {j: math.log(int(j)) for j in join_irreducibles(built)}
            Path(args.seed_out).write_text(dumps_result(seed), encoding="utf-8")
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(EXIT_PARSE, f"unknown kind {kind}")
    diag = diagnose(built)
    results["elementCount"] = len(built)
    _write_dot(args, built)
    if args.poset_out:
        Path(args.poset_out).write_text(serialize_poset(built), encoding="utf-8")
    _emit(args, result_document("build", inp, lattice=lattice_section(built, diag), results=results))
    return EXIT_OK


# -- valuate ----------------------------------------------------------------
def _load_seed(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise CliError(EXIT_PARSE, f"{path}: seed must be a flat JSON object")
    seed = {}
    for k, v in raw.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise CliError(EXIT_PARSE, f"{path}: value for {k!r} is not a number")
        seed[k] = float(v)
    return seed


def cmd_valuate(args) -> int:
    p = _load_poset(args.input)
    lat = certify_lattice(p)
    if isinstance(lat, LatticeDiagnostic):
        raise CliError(EXIT_PRECONDITION, f"{args.input} is not a lattice: {lat.failure_witness.describe()}")
    seed = _load_seed(args.seed)
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    unknown = [c for c in checks if c not in ALL_CHECKS]
    if unknown:
        raise CliError(EXIT_PARSE, f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(ALL_CHECKS)}")
    v = from_values(lat, seed) if args.hand else extend_from_irreducibles(lat, seed)
    reports = run_checks(v, checks, args.tolerance)
    conditional = None
    if args.context:
        ctx = lat.top if args.context == "top" else args.context
        b = BiValuation(v)
        values = {}
        for x in lat.elements:
            try:
                values[x] = b(x, ctx)
            except UndefinedContextError:
                values[x] = None
        conditional = {"context": ctx, "values": values}
    doc = result_document(
        "valuate",
        {"path": str(args.input), "seed": str(args.seed), "hand": args.hand, "checks": checks},
        lattice=lattice_section(lat, diagnose(lat)),
        valuation=valuation_section(v, conditional),
        reports=reports,
    )
    _emit(args, doc)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_RULE


# -- demo -------------------------------------------------------------------
def demo_bridge(tolerance=None) -> dict:
    from .document import poset_from_text

    bridge = poset_from_text(BRIDGE_DOCUMENT)
    states = downset_lattice(bridge, include_empty=False)
    with_empty = downset_lattice(bridge, include_empty=True)
    statements = powerset_lattice(states.elements)
    questions = question_lattice(statements)
    return result_document(
        "demo",
        {"name": "bridge"},
        lattice=lattice_section(statements, diagnose(statements)),
        results={
            "components": list(bridge.elements),
            "states": list(states.elements),
            "stateCount": len(states),
            "downsetsIncludingEmpty": len(with_empty),
            "statementCount": len(statements),
            "questionCount": len(questions),
            "questionLatticeDistributive": diagnose(questions).is_distributive,
        },
    )


def demo_divisor(tolerance=None) -> dict:
    d = divisor_lattice(360)
    v = log_valuation(d)
    reports = run_checks(v, ["sum", "monotone", "chain", "context-product", "contextual-sum", "bayes"], tolerance)
    return result_document(
        "demo",
        {"name": "divisor", "modulus": 360},
        lattice=lattice_section(d, diagnose(d)),
        valuation=valuation_section(v),
        reports=reports,
        results={
            "joinIrreducibles": list(d.join_irreducibles()),
            "v(6)": v["6"],
            "v(12)": v["12"],
            "log 12": math.log(12),
            "log 4 + log 6 - log 2": math.log(4) + math.log(6) - math.log(2),
            "d(2|4)": divisibility_degree(d, 2, 4),
            "d(4|6)": divisibility_degree(d, 4, 6),
            "bayes d(2|4)": divisibility_bayes(d, 2, 4),
            "d(360|1)": divisibility_degree(d, 360, 1),
        },
    )


def demo_partition(tolerance=None) -> dict:
    p = partition_poset(3)
    diag = diagnose(p)
    lat = certify_lattice(p)
    return result_document(
        "demo",
        {"name": "partition", "n": 3},
        lattice=lattice_section(p, diag),
        results={
            "partitions": list(p.elements),
            "partitionCount": len(p),
            "joinIrreducibles": list(join_irreducibles(lat)) if isinstance(lat, Lattice) else [],
        },
    )


def cmd_demo(args) -> int:
    runners = {"bridge": demo_bridge, "divisor": demo_divisor, "partition": demo_partition}
    if args.name not in runners:
        raise UnknownDemoError(f"unknown demo {args.name!r}; choose from {', '.join(DEMOS)}")
    doc = runners[args.name](args.tolerance)
    _emit(args, doc)
    return EXIT_OK if all(r["passed"] for r in doc["reports"]) else EXIT_RULE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json", help="stdout format")
    common.add_argument("-o", "--output", help="also write the JSON result to this file")
    common.add_argument("--tolerance", type=float, default=None, help="rule-check tolerance (env LATCAL_TOLERANCE)")

    parser = argparse.ArgumentParser(prog="latcal", description="Finite lattices and the valuation calculus.")
    parser.add_argument("--version", action="version", version=f"latcal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="certify a poset document as a (distributive) lattice")
    p.add_argument("input")
    p.add_argument("--dot", help="write a Hasse diagram")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("build", parents=[common], help="construct a derived lattice")
    p.add_argument("kind", choices=("downsets", "powerset", "questions", "partition", "product", "divisor"))
    p.add_argument("args", nargs="*")
    p.add_argument("--states", type=int, help="number of anonymous states (powerset, questions)")
    p.add_argument("--components", help="poset document whose nonempty downsets are the states")
    p.add_argument("--include-empty", action="store_true", help="keep the empty downset (downsets)")
    p.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
    p.add_argument("--dot", help="write a Hasse diagram")
    p.add_argument("--poset-out", help="write the built structure as a poset document")
    p.add_argument("--seed-out", help="divisor: write the log seed as JSON")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("valuate", parents=[common], help="extend a seed and run rule checks")
    p.add_argument("input")
    p.add_argument("seed")
    p.add_argument("--check", default="sum", help=f"comma list from: {','.join(ALL_CHECKS)}")
    p.add_argument("--hand", action="store_true", help="seed assigns every element; skip extension")
    p.add_argument("--context", help="report w(x | CONTEXT) for every x ('top' allowed)")
    p.set_defaults(func=cmd_valuate)

    p = sub.add_parser("demo", parents=[common], help="worked examples")
    p.add_argument("name")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"latcal: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"latcal: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizeLimitError as exc:
        print(f"latcal: size limit: {exc} (raise --max-elements to allow more)", file=sys.stderr)
        return EXIT_SIZE
    except (NotDistributiveError, MissingSeedError, InvalidSeedError, NotALatticeError, UndefinedContextError) as exc:
        print(f"latcal: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except UnknownDemoError as exc:
        print(f"latcal: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except LatticeError as exc:
        print(f"latcal: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

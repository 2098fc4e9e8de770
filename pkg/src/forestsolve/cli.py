"""Command-line interface: solve, certify, block variants, self-checks.

Exit codes are part of the contract: 0 success (or certified), 1 no
certificate found, 2 input error, 3 internal invariant failure (an oracle
disagreement).  All randomized commands take an explicit seed and produce
byte-identical output for identical inputs.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import random
import sys
from typing import Sequence

from . import blocksys, crn, forests, linsys, multigraph, pgraph
from .symring import ParseError, rat_equal

log = logging.getLogger("forestsolve")

EXIT_OK = 0
EXIT_NO_WITNESS = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _configure_logging() -> None:
    level_name = os.environ.get("FORESTSOLVE_LOG", "warning").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _read_input(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(payload: dict, args) -> None:
    _write_output(json.dumps(payload, sort_keys=True, indent=2), args.output)


def _load_system(args) -> tuple[linsys.LinearSystem, dict]:
    data = json.loads(_read_input(args.input))
    system = linsys.system_from_json(data)
    if getattr(args, "permute_rows", None):
        order = [int(tok) for tok in args.permute_rows.split(",")]
        system = linsys.permute_rows(system, order)
    return system, data


def _witness_payload(witness: pgraph.PGraphWitness) -> dict:
    graph = witness.graph
    return {
        "edges": [
            {"id": e.eid, "src": e.source, "tgt": e.target, "label": str(e.label)}
            for e in sorted(graph.edges, key=lambda e: e.eid)
        ],
        "mu": {str(k): sorted(v) for k, v in sorted(witness.mu.items())},
        "group_sums": {
            str(k): str(v) for k, v in sorted(witness.group_sums.items())
        },
    }


def _solution_payload(solution: linsys.Solution) -> list[str]:
    return [str(c) for c in solution]


# ---------------------------------------------------------------------------
# commands


def _cmd_solve(args) -> int:
    system, _ = _load_system(args)
    solution = linsys.solve_by_trees(system)
    payload = {"solution": _solution_payload(solution)}
    if args.oracle:
        oracle = linsys.cramer_oracle(system)
        agree = all(
            rat_equal(a, b) for a, b in zip(solution, oracle)
        ) and linsys.residual_check(system, solution)
        payload["oracle_agrees"] = agree
        if not agree:
            _emit_json(payload, args)
            return EXIT_INTERNAL
    if args.format == "dot":
        lap = linsys.bordered_laplacian(system)
        _write_output(multigraph.to_dot(multigraph.canonical_graph(lap)), args.output)
    elif args.format == "text":
        lines = [
            f"{name} = {comp}"
            for name, comp in zip(system.variables, solution)
        ]
        _write_output("\n".join(lines), args.output)
    else:
        _emit_json(payload, args)
    return EXIT_OK


def _cmd_certify(args) -> int:
    system, _ = _load_system(args)
    outcome = pgraph.certify_nonneg(system)
    if outcome is None:
        payload = {"certified": False, "witness": None, "solution": None}
        _emit_json(payload, args)
        log.info("no certificate graph at monomial granularity")
        return EXIT_NO_WITNESS
    solution, witness = outcome
    if args.format == "dot":
        _write_output(multigraph.to_dot(witness.graph), args.output)
        return EXIT_OK
    payload = {
        "certified": True,
        "witness": _witness_payload(witness),
        "solution": _solution_payload(solution),
    }
    _emit_json(payload, args)
    return EXIT_OK


def _load_block_system(args) -> tuple[linsys.LinearSystem, blocksys.BlockStructure]:
    data = json.loads(_read_input(args.input))
    system = linsys.system_from_json(data)
    spec = data.get("blocks")
    if spec is None:
        blocks = crn.propose_blocks(system)
    else:
        sizes = tuple(int(s) for s in spec["sizes"])
        m0 = int(spec["m0"])
        if "j" in spec and spec["j"]:
            j = tuple(int(v) for v in spec["j"])
        else:
            j = blocksys.choose_j(system, sizes, m0)
        blocks = blocksys.BlockStructure(sizes, m0, j)
    return system, blocks


def _cmd_block_solve(args) -> int:
    system, blocks = _load_block_system(args)
    problems = blocksys.validate_block_form(system, blocks)
    if problems:
        print("\n".join(problems), file=sys.stderr)
        return EXIT_INPUT
    witness = blocksys.build_acompatible(system, blocks)
    if witness is None:
        print("no compatible graph from the heuristic", file=sys.stderr)
        return EXIT_NO_WITNESS
    solution = blocksys.solve_block(system, blocks, witness)
    payload = {"solution": _solution_payload(solution)}
    if args.oracle:
        oracle = linsys.cramer_oracle(system)
        agree = all(rat_equal(a, b) for a, b in zip(solution, oracle))
        payload["oracle_agrees"] = agree
        if not agree:
            _emit_json(payload, args)
            return EXIT_INTERNAL
    if args.format == "dot":
        _write_output(multigraph.to_dot(witness.graph), args.output)
    elif args.format == "text":
        lines = [
            f"{name} = {comp}" for name, comp in zip(system.variables, solution)
        ]
        _write_output("\n".join(lines), args.output)
    else:
        _emit_json(payload, args)
    return EXIT_OK


def _cmd_block_certify(args) -> int:
    system, blocks = _load_block_system(args)
    problems = blocksys.validate_block_form(system, blocks)
    if problems:
        print("\n".join(problems), file=sys.stderr)
        return EXIT_INPUT
    try:
        outcome = blocksys.certify_block_nonneg(system, blocks, budget=args.budget)
    except blocksys.BlockHypothesisError as exc:
        payload = {
            "certified": False,
            "witness": None,
            "solution": None,
            "hypothesis_violations": exc.problems,
        }
        _emit_json(payload, args)
        return EXIT_NO_WITNESS
    if outcome is None:
        _emit_json({"certified": False, "witness": None, "solution": None}, args)
        return EXIT_NO_WITNESS
    solution, witness = outcome
    zero_set = blocksys.zero_components(witness, blocks)
    if args.format == "dot":
        _write_output(multigraph.to_dot(witness.graph), args.output)
        return EXIT_OK
    payload = {
        "certified": True,
        "witness": _witness_payload(witness),
        "solution": _solution_payload(solution),
        "zero_components": sorted(zero_set),
    }
    _emit_json(payload, args)
    return EXIT_OK


def _cmd_mtt_check(args) -> int:
    rng = random.Random(args.seed)
    checked = 0
    mismatches: list[dict] = []
    for _ in range(args.random):
        graph = multigraph.random_multidigraph(
            rng, max_nodes=args.nodes, max_edges=args.edges
        )
        nodes = list(graph.nodes)
        for size in range(0, min(3, len(nodes)) + 1):
            for f_set in itertools.combinations(nodes, size):
                for b_set in itertools.combinations(nodes, size):
                    checked += 1
                    if not forests.all_minors_check(graph, f_set, b_set):
                        mismatches.append(
                            {
                                "graph": multigraph.graph_to_json(graph),
                                "F": list(f_set),
                                "B": list(b_set),
                            }
                        )
    payload = {
        "graphs": args.random,
        "checked": checked,
        "mismatches": mismatches,
        "seed": args.seed,
    }
    _emit_json(payload, args)
    return EXIT_OK if not mismatches else EXIT_INTERNAL


def _cmd_crn_param(args) -> int:
    net = crn.parse_network(_read_input(args.input))
    conservation = []
    for tok in args.conserve or []:
        law, total, row = tok.split(":")
        conservation.append(
            crn.ConservationUse(int(row), int(law), total)
        )
    task = crn.SteadyStateTask(
        solve_for=tuple((args.solve_for or "").split(",")) if args.solve_for else (),
        parameters=tuple(args.parameters.split(",")) if args.parameters else (),
        conservation=tuple(conservation),
        drop=tuple(int(tok) for tok in (args.drop or [])),
    )
    report = crn.parameterize(net, task, budget=args.budget)
    if args.format == "dot" and report.witness is not None:
        _write_output(multigraph.to_dot(report.witness.graph), args.output)
        return EXIT_OK if report.certified else EXIT_NO_WITNESS
    payload = {
        "certified": report.certified,
        "diagnostics": list(report.diagnostics),
        "solution": (
            {name: str(expr) for name, expr in sorted(report.solution.items())}
            if report.solution is not None
            else None
        ),
        "witness": (
            _witness_payload(report.witness) if report.witness is not None else None
        ),
        "zero_components": sorted(report.zero_set),
    }
    _emit_json(payload, args)
    return EXIT_OK if report.certified else EXIT_NO_WITNESS


def _cmd_graph_dot(args) -> int:
    data = json.loads(_read_input(args.input))
    if "edges" in data and "nodes" in data:
        graph = multigraph.graph_from_json(data)
    else:
        system = linsys.system_from_json(data)
        graph = multigraph.canonical_graph(linsys.bordered_laplacian(system))
    _write_output(multigraph.to_dot(graph), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", "-i", default=None, help="input file (default stdin)")
    parser.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    parser.add_argument(
        "--format", choices=("json", "text", "dot"), default="json"
    )
    parser.add_argument("--oracle", action="store_true", help="cross-check the result")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget", type=int, default=64, help="search budget")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forestsolve",
        description="Spanning-forest solving and nonnegativity certification "
        "for symbolic linear systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a system by rooted tree sums")
    _add_common(p)
    p.add_argument("--permute-rows", default=None, help="row order, e.g. 2,1,3")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("certify", help="certify a nonnegative solution")
    _add_common(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("block-solve", help="solve a block-structured system")
    _add_common(p)
    p.set_defaults(func=_cmd_block_solve)

    p = sub.add_parser("block-certify", help="certify a block-structured system")
    _add_common(p)
    p.set_defaults(func=_cmd_block_certify)

    p = sub.add_parser("mtt-check", help="randomized minor/forest-sum self-check")
    _add_common(p)
    p.add_argument("--random", type=int, default=200, help="number of graphs")
    p.add_argument("--nodes", type=int, default=5, help="max nodes per graph")
    p.add_argument("--edges", type=int, default=10, help="max edges per graph")
    p.set_defaults(func=_cmd_mtt_check)

    p = sub.add_parser("crn-param", help="steady-state parameterization")
    _add_common(p)
    p.add_argument("--solve-for", dest="solve_for", default=None)
    p.add_argument("--parameters", default=None)
    p.add_argument(
        "--conserve",
        action="append",
        metavar="LAW:TOTAL:ROW",
        help="use conservation law LAW as total TOTAL replacing row ROW",
    )
    p.add_argument("--drop", action="append", metavar="ROW")
    p.set_defaults(func=_cmd_crn_param)

    p = sub.add_parser("graph-dot", help="DOT rendering of a graph or system")
    _add_common(p)
    p.set_defaults(func=_cmd_graph_dot)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        json.JSONDecodeError,
        ParseError,
        crn.NetworkParseError,
        crn.NonlinearSystemError,
        FileNotFoundError,
        KeyError,
        ValueError,
    ) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

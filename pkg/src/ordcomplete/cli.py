"""Command-line front end.

    ordcomplete poset check --input poset.json
    ordcomplete complete --input poset.json [--format dot]
    ordcomplete solve --input problem.json [--oracle]
    ordcomplete global --input problem.json
    ordcomplete demo pde --input grid.json [--oracle]
    ordcomplete gen fixtures --seed 7 --count 20

Exit codes: 0 ok, 2 bad input, 3 size cap exceeded, 4 internal
inconsistency (including an oracle disagreement).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .completion import enumerate_cuts, lattice_to_dot, lattice_to_json
from .config import default_caps
from .errors import InputError, InternalInconsistency, OrderError, SizeCapExceeded
from .fixtures import problem_documents
from .pde_demo import classify_solution, grid_problem_from_json, problem_summary
from .poset import poset_from_json, to_dot
from .pullback import factored_from_json, problem_from_json
from .solver import build_context, global_solvability, oracle_solve, solve

EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input: str | None
    output: str | None
    format: str
    oracle: bool
    cap_elements: int
    cap_cuts: int
    seed: int
    count: int

    def __post_init__(self):
        if self.cap_elements <= 0 or self.cap_cuts <= 0:
            raise InputError("caps must be positive")
        if self.format not in ("json", "dot"):
            raise InputError(f"unknown format {self.format!r}")


def _read_json(cfg: RunConfig):
    if cfg.input is None or cfg.input == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(cfg.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {cfg.input}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def cmd_poset_check(cfg: RunConfig):
    p = poset_from_json(_read_json(cfg), cap=cfg.cap_elements)
    if cfg.format == "dot":
        return to_dot(p)
    return {
        "ok": True,
        "size": p.size,
        "closure_pairs": len(p.relation_pairs()),
        "covers": [list(c) for c in p.cover_pairs()],
        "minimum": p.minimum(),
        "maximum": p.maximum(),
    }


def cmd_complete(cfg: RunConfig):
    p = poset_from_json(_read_json(cfg), cap=cfg.cap_elements)
    L = enumerate_cuts(p, cap_elements=cfg.cap_elements, cap_cuts=cfg.cap_cuts)
    return lattice_to_dot(L) if cfg.format == "dot" else lattice_to_json(L)


def _solve_doc(cfg: RunConfig, P):
    C = build_context(P, cap_elements=cfg.cap_elements, cap_cuts=cfg.cap_cuts)
    outcome = solve(C)
    doc = outcome.to_json()
    if cfg.oracle:
        found = oracle_solve(C)
        agrees = found == outcome.solution
        doc["oracle"] = {"agrees": agrees}
        if not agrees:
            raise InternalInconsistency(f"solver and brute-force oracle disagree: {doc}")
    return C, outcome, doc


def cmd_solve(cfg: RunConfig):
    raw = _read_json(cfg)
    P = problem_from_json(raw, cap=cfg.cap_elements)
    if isinstance(raw, dict) and "Z" in raw:
        P = factored_from_json(raw, P).as_problem()
    _, _, doc = _solve_doc(cfg, P)
    return doc


def cmd_global(cfg: RunConfig):
    P = problem_from_json(_read_json(cfg), cap=cfg.cap_elements)
    C = build_context(P, cap_elements=cfg.cap_elements, cap_cuts=cfg.cap_cuts)
    return global_solvability(C).to_json()


def cmd_demo_pde(cfg: RunConfig):
    raw = _read_json(cfg)
    if not isinstance(raw, dict):
        raise InputError("grid problem document must be a JSON object")
    gp = grid_problem_from_json(raw, cap=cfg.cap_elements)
    _, outcome, doc = _solve_doc(cfg, gp.problem)
    return {
        "problem": problem_summary(gp),
        "outcome": doc,
        "classification": classify_solution(outcome, gp).to_json(),
    }


def cmd_gen_fixtures(cfg: RunConfig):
    return problem_documents(cfg.seed, cfg.count)


COMMANDS = {
    "poset check": cmd_poset_check,
    "complete": cmd_complete,
    "solve": cmd_solve,
    "global": cmd_global,
    "demo pde": cmd_demo_pde,
    "gen fixtures": cmd_gen_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    caps = default_caps()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="input JSON file (default: stdin)")
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--oracle", action="store_true", help="cross-check the solver against brute force")
    common.add_argument("--cap-elements", type=int, default=caps.elements)
    common.add_argument("--cap-cuts", type=int, default=caps.cuts)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="ordcomplete", description="Order-completion solver for T(A) = F.")
    sub = parser.add_subparsers(dest="command", required=True)

    poset = sub.add_parser("poset", help="poset utilities")
    poset_sub = poset.add_subparsers(dest="action", required=True)
    poset_sub.add_parser("check", parents=[common], help="validate a poset document")

    sub.add_parser("complete", parents=[common], help="enumerate the MacNeille completion")
    sub.add_parser("solve", parents=[common], help="solve T^#(A) = F")
    sub.add_parser("global", parents=[common], help="check surjectivity of T^#")

    demo = sub.add_parser("demo", help="demonstrations")
    demo_sub = demo.add_subparsers(dest="action", required=True)
    demo_sub.add_parser("pde", parents=[common], help="solve a discretized PDE by order completion")

    gen = sub.add_parser("gen", help="generators")
    gen_sub = gen.add_subparsers(dest="action", required=True)
    fx = gen_sub.add_parser("fixtures", parents=[common], help="emit random problem documents")
    fx.add_argument("--count", type=int, default=10)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    name = args.command if getattr(args, "action", None) is None else f"{args.command} {args.action}"
    try:
        cfg = RunConfig(
            subcommand=name,
            input=args.input,
            output=args.output,
            format=args.format,
            oracle=args.oracle,
            cap_elements=args.cap_elements,
            cap_cuts=args.cap_cuts,
            seed=args.seed,
            count=getattr(args, "count", 10),
        )
        result = COMMANDS[name](cfg)
    except SizeCapExceeded as exc:
        return _fail(EXIT_CAP, exc)
    except InternalInconsistency as exc:
        return _fail(EXIT_INTERNAL, exc)
    except (InputError, OrderError) as exc:
        return _fail(EXIT_INPUT, exc)
    except (TypeError, ValueError, AttributeError) as exc:
        # Structurally odd JSON (unhashable labels, wrong nesting) surfaces here.
        return _fail(EXIT_INPUT, exc)
    text = result if isinstance(result, str) else dumps(result)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _fail(code: int, exc: Exception) -> int:
    sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc)}))
    return code


if __name__ == "__main__":
    sys.exit(main())
